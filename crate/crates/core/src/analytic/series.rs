//! Truncated Taylor arithmetic. A [`Series`] holds normalized coefficients
//! `c_k = f^(k)(x)/k!` for `k = 0..=order`.

use crate::error::{Error, Result};

/// Denominators below this magnitude are treated as poles.
pub const POLE_EPS: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct Series(pub Vec<f64>);

impl Series {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = c;
        Series(v)
    }

    /// The identity function expanded at `x`.
    pub fn variable(x: f64, order: usize) -> Self {
        let mut v = vec![0.0; order + 1];
        v[0] = x;
        if order >= 1 {
            v[1] = 1.0;
        }
        Series(v)
    }

    pub fn order(&self) -> usize {
        self.0.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.0[0]
    }

    /// `f^(k)` at the expansion point.
    pub fn derivative(&self, k: usize) -> f64 {
        self.0.get(k).copied().unwrap_or(0.0) * factorial(k)
    }

    /// Derivatives `f, f', …, f^(order)`.
    pub fn derivatives(&self) -> Vec<f64> {
        (0..self.0.len()).map(|k| self.derivative(k)).collect()
    }

    pub fn from_derivatives(d: &[f64]) -> Self {
        Series(d.iter().enumerate().map(|(k, v)| v / factorial(k)).collect())
    }

    /// Series of `f'`, one order lower.
    pub fn differentiate(&self) -> Series {
        if self.0.len() == 1 {
            return Series(vec![0.0]);
        }
        Series(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative with constant term `c0`, one order higher.
    pub fn integrate(&self, c0: f64) -> Series {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(c0);
        v.extend(self.0.iter().enumerate().map(|(k, c)| c / (k + 1) as f64));
        Series(v)
    }

    pub fn truncate(mut self, order: usize) -> Series {
        self.0.truncate(order + 1);
        self
    }

    pub fn add(&self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &Series) -> Series {
        Series(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> Series {
        Series(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: f64) -> Series {
        Series(self.0.iter().map(|a| a * s).collect())
    }

    pub fn add_const(&self, c: f64) -> Series {
        let mut v = self.0.clone();
        v[0] += c;
        Series(v)
    }

    pub fn mul(&self, o: &Series) -> Series {
        let n = self.0.len().min(o.0.len());
        Series(
            (0..n)
                .map(|k| (0..=k).map(|j| self.0[j] * o.0[k - j]).sum())
                .collect(),
        )
    }

    pub fn div(&self, o: &Series, at: f64) -> Result<Series> {
        let b0 = o.0[0];
        if b0.abs() < POLE_EPS || !b0.is_finite() {
            return Err(Error::Pole { location: at });
        }
        let n = self.0.len().min(o.0.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            let s: f64 = (1..=k).map(|j| o.0[j] * c[k - j]).sum();
            c.push((self.0[k] - s) / b0);
        }
        Ok(Series(c))
    }

    pub fn exp(&self) -> Series {
        let a = &self.0;
        let mut b = vec![a[0].exp()];
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * b[k - j]).sum();
            b.push(s / k as f64);
        }
        Series(b)
    }

    /// `(sin, cos)` of the series.
    pub fn sin_cos(&self) -> (Series, Series) {
        let a = &self.0;
        let mut s = vec![a[0].sin()];
        let mut c = vec![a[0].cos()];
        for k in 1..a.len() {
            let ss: f64 = (1..=k).map(|j| j as f64 * a[j] * c[k - j]).sum();
            let cc: f64 = (1..=k).map(|j| j as f64 * a[j] * s[k - j]).sum();
            s.push(ss / k as f64);
            c.push(-cc / k as f64);
        }
        (Series(s), Series(c))
    }

    /// `(sinh, cosh)` of the series.
    pub fn sinh_cosh(&self) -> (Series, Series) {
        let a = &self.0;
        let mut s = vec![a[0].sinh()];
        let mut c = vec![a[0].cosh()];
        for k in 1..a.len() {
            let ss: f64 = (1..=k).map(|j| j as f64 * a[j] * c[k - j]).sum();
            let cc: f64 = (1..=k).map(|j| j as f64 * a[j] * s[k - j]).sum();
            s.push(ss / k as f64);
            c.push(cc / k as f64);
        }
        (Series(s), Series(c))
    }

    pub fn powi(&self, e: i64, at: f64) -> Result<Series> {
        let mut base = self.clone();
        let mut acc = Series::constant(1.0, self.order());
        let mut n = e.unsigned_abs();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        if e < 0 {
            Series::constant(1.0, self.order()).div(&acc, at)
        } else {
            Ok(acc)
        }
    }

    /// Real power with positive base.
    pub fn powf(&self, r: f64, at: f64) -> Result<Series> {
        let a = &self.0;
        if !(a[0] > 0.0) {
            return Err(Error::Domain(format!(
                "fractional power of non-positive base {} at x = {at}",
                a[0]
            )));
        }
        let mut b = vec![a[0].powf(r)];
        for k in 1..a.len() {
            let s: f64 = (1..=k)
                .map(|j| (r * j as f64 - (k - j) as f64) * a[j] * b[k - j])
                .sum();
            b.push(s / (k as f64 * a[0]));
        }
        Ok(Series(b))
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_derivatives_at_one() {
        let s = Series::variable(1.0, 4).neg().exp();
        let e = (-1.0f64).exp();
        for (k, d) in s.derivatives().into_iter().enumerate() {
            let want = if k % 2 == 0 { e } else { -e };
            assert!((d - want).abs() < 1e-14);
        }
    }

    #[test]
    fn powf_matches_closed_form() {
        // (1 + x)^(1/2) around x = 0 : 1, 1/2, -1/4, 3/8
        let s = Series::variable(0.0, 3).add_const(1.0).powf(0.5, 0.0).unwrap();
        let d = s.derivatives();
        for (a, b) in d.iter().zip([1.0, 0.5, -0.25, 0.375]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn division_by_vanishing_series_is_a_pole() {
        let z = Series::variable(0.0, 2);
        assert!(Series::constant(1.0, 2).div(&z, 0.0).is_err());
    }

    #[test]
    fn integrate_inverts_differentiate() {
        let s = Series(vec![0.3, -1.0, 2.0, 0.5]);
        let back = s.differentiate().integrate(0.3);
        assert_eq!(back, s);
    }
}
