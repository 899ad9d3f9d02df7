//! Polynomials in `(x, t)` and quotients `N / B^k` sharing a single base
//! polynomial `B`. This is all the KdV residual needs: every derivative of
//! `N/B^k` stays of the form `N'/B^(k+1)`, so sums of derivatives can be put
//! over a common power of `B` without any bivariate gcd.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;

use super::poly::{rat, Poly, Rational};
use super::ratfunc::RationalFunction;

/// Polynomial in `x` whose coefficients are polynomials in `t`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    /// `coeffs[i]` multiplies `x^i`.
    coeffs: Vec<Poly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.last().is_some_and(Poly::is_zero) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    pub fn zero() -> Self {
        BiPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        BiPoly::new(vec![Poly::one()])
    }

    /// Embeds a polynomial in `x` with constant-in-`t` coefficients.
    pub fn from_x_poly(p: &Poly) -> Self {
        BiPoly::new(p.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    /// Builds from integer terms `(coefficient, x power, t power)`.
    pub fn from_terms(terms: &[(i64, usize, usize)]) -> Self {
        let mut out = BiPoly::zero();
        for &(c, i, j) in terms {
            out = &out + &BiPoly::term(rat(c), i, j);
        }
        out
    }

    pub fn term(c: Rational, x_pow: usize, t_pow: usize) -> Self {
        let mut coeffs = vec![Poly::zero(); x_pow + 1];
        coeffs[x_pow] = Poly::monomial(c, t_pow);
        BiPoly::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn x_coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    fn coeff(&self, i: usize) -> Poly {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn dx(&self) -> BiPoly {
        BiPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.scale(&rat(i as i64)))
                .collect(),
        )
    }

    pub fn dt(&self) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(Poly::derive).collect())
    }

    pub fn pow(&self, e: u32) -> BiPoly {
        (0..e).fold(BiPoly::one(), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &Rational) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(|p| p.scale(c)).collect())
    }

    /// `p(λx, νt)`.
    pub fn scale_vars(&self, lambda: &Rational, nu: &Rational) -> BiPoly {
        let mut f = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c.scale_arg(nu).scale(&f));
            f *= lambda;
        }
        BiPoly::new(out)
    }

    /// Fixes `t`, leaving a polynomial in `x`.
    pub fn at_t(&self, t: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c.eval(t)).collect())
    }

    pub fn eval_f64(&self, x: f64, t: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.eval_f64(t))
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        BiPoly::new((0..n).map(|i| &self.coeff(i) + &rhs.coeff(i)).collect())
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self + &(-rhs)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        BiPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let mut out = vec![Poly::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        BiPoly::new(out)
    }
}

/// `num / base^power`, rational in `x` and polynomial-in-`t` in both parts.
#[derive(Clone, Debug)]
pub struct BiRational {
    pub num: BiPoly,
    pub base: BiPoly,
    pub power: u32,
}

impl BiRational {
    pub fn new(num: BiPoly, base: BiPoly, power: u32) -> Self {
        assert!(!base.is_zero(), "BiRational base must be nonzero");
        BiRational { num, base, power }
    }

    pub fn from_rational(f: &RationalFunction) -> Self {
        BiRational::new(BiPoly::from_x_poly(f.num()), BiPoly::from_x_poly(f.den()), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn with_power(&self, power: u32) -> BiPoly {
        debug_assert!(power >= self.power);
        &self.num * &self.base.pow(power - self.power)
    }

    fn check_base(&self, other: &BiRational) {
        assert_eq!(self.base, other.base, "BiRational operands must share a base");
    }

    pub fn add(&self, other: &BiRational) -> BiRational {
        self.check_base(other);
        let p = self.power.max(other.power);
        BiRational::new(&self.with_power(p) + &other.with_power(p), self.base.clone(), p)
    }

    pub fn sub(&self, other: &BiRational) -> BiRational {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &BiRational) -> BiRational {
        self.check_base(other);
        BiRational::new(&self.num * &other.num, self.base.clone(), self.power + other.power)
    }

    pub fn scale(&self, c: &Rational) -> BiRational {
        BiRational::new(self.num.scale(c), self.base.clone(), self.power)
    }

    /// `∂/∂x` keeping the same base: `(N_x B − k N B_x) / B^(k+1)`.
    pub fn dx(&self) -> BiRational {
        let k = rat(self.power as i64);
        let n = &(&self.num.dx() * &self.base) - &(&self.num * &self.base.dx()).scale(&k);
        BiRational::new(n, self.base.clone(), self.power + 1)
    }

    pub fn dt(&self) -> BiRational {
        let k = rat(self.power as i64);
        let n = &(&self.num.dt() * &self.base) - &(&self.num * &self.base.dt()).scale(&k);
        BiRational::new(n, self.base.clone(), self.power + 1)
    }

    /// `f(λx, νt)`.
    pub fn scale_vars(&self, lambda: &Rational, nu: &Rational) -> BiRational {
        BiRational::new(
            self.num.scale_vars(lambda, nu),
            self.base.scale_vars(lambda, nu),
            self.power,
        )
    }

    /// Exact equality as functions (cross-multiplication).
    pub fn equals(&self, other: &BiRational) -> bool {
        &self.num * &other.base.pow(other.power) == &other.num * &self.base.pow(self.power)
    }

    /// Fixes `t`, giving a canonical univariate rational function, or `None`
    /// when the base vanishes identically at that `t`.
    pub fn at_t(&self, t: &Rational) -> Option<RationalFunction> {
        let den = self.base.at_t(t).pow(self.power);
        RationalFunction::new(self.num.at_t(t), den).ok()
    }

    pub fn eval_f64(&self, x: f64, t: f64) -> f64 {
        self.num.eval_f64(x, t) / self.base.eval_f64(x, t).powi(self.power as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn derivative_of_shared_base_form() {
        // f = x / (x + t): f_x = t/(x+t)^2, f_t = -x/(x+t)^2
        let base = BiPoly::from_terms(&[(1, 1, 0), (1, 0, 1)]);
        let f = BiRational::new(BiPoly::from_terms(&[(1, 1, 0)]), base.clone(), 1);
        let fx = BiRational::new(BiPoly::from_terms(&[(1, 0, 1)]), base.clone(), 2);
        let ft = BiRational::new(BiPoly::from_terms(&[(-1, 1, 0)]), base, 2);
        assert!(f.dx().equals(&fx));
        assert!(f.dt().equals(&ft));
    }

    #[test]
    fn at_t_is_canonical() {
        let base = BiPoly::from_terms(&[(1, 1, 0), (1, 0, 1)]);
        let f = BiRational::new(BiPoly::from_terms(&[(2, 1, 0), (2, 0, 1)]), base, 2);
        let g = f.at_t(&rat(3)).unwrap();
        assert_eq!(g, RationalFunction::new(Poly::from_ints(&[2]), Poly::from_ints(&[3, 1])).unwrap());
        assert!(f.eval_f64(1.0, 3.0) - 0.5 < 1e-15);
    }

    #[test]
    fn zero_polynomial_has_no_coefficients() {
        let z = &BiPoly::from_terms(&[(1, 2, 1)]) - &BiPoly::from_terms(&[(1, 2, 1)]);
        assert!(z.is_zero());
        assert!(Poly::zero().is_zero() && Rational::zero().is_zero());
    }
}
