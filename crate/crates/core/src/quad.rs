//! Adaptive Simpson quadrature.

use crate::error::{Error, Result};

const MAX_DEPTH: u32 = 60;

/// `∫_a^b f` to absolute tolerance `tol`. Works for `b < a` (sign flips).
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    step(&f, a, b, fa, fm, fb, whole, tol, MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn step<F>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 {
        return Err(Error::Domain(format!(
            "quadrature did not converge on [{a}, {b}]"
        )));
    }
    if delta.abs() <= 15.0 * tol || (b - a).abs() < 1e-14 * a.abs().max(1.0) {
        return Ok(left + right + delta / 15.0);
    }
    Ok(step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}

/// Composite Simpson over equally spaced samples (odd count preferred; a
/// trailing interval falls back to the trapezoid rule).
pub fn simpson_samples(y: &[f64], h: f64) -> f64 {
    let n = y.len();
    if n < 2 {
        return 0.0;
    }
    let pairs = (n - 1) / 2;
    let mut s = 0.0;
    for i in 0..pairs {
        s += y[2 * i] + 4.0 * y[2 * i + 1] + y[2 * i + 2];
    }
    s *= h / 3.0;
    if (n - 1) % 2 == 1 {
        s += 0.5 * h * (y[n - 2] + y[n - 1]);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_and_reverse_orientation() {
        let v = integrate(|x| Ok(x * x), 0.0, 3.0, 1e-12).unwrap();
        assert!((v - 9.0).abs() < 1e-12);
        let r = integrate(|x| Ok(x * x), 3.0, 0.0, 1e-12).unwrap();
        assert!((r + 9.0).abs() < 1e-12);
    }

    #[test]
    fn peaked_integrand() {
        let v = integrate(|x| Ok(1.0 / (1e-2 + x * x)), -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * 10.0 * (10.0f64).atan();
        assert!((v - exact).abs() < 1e-8);
    }

    #[test]
    fn simpson_on_samples() {
        let h = 0.01;
        let y: Vec<f64> = (0..=100).map(|i| ((i as f64) * h).exp()).collect();
        assert!((simpson_samples(&y, h) - (1f64.exp() - 1.0)).abs() < 1e-9);
    }
}
