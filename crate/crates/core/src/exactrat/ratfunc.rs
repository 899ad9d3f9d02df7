use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::{rational_to_f64, Poly, Rational};
use crate::error::{Error, Result};

/// Exact ratio of two polynomials in canonical form: coprime numerator and
/// denominator, monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Applies a binary operation, returning the canonical result.
pub fn rf_arith(a: &RationalFunction, b: &RationalFunction, op: ArithOp) -> Result<RationalFunction> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RationalFunction { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.exact_div(&g), den.exact_div(&g))
        };
        let inv = den.lead().recip();
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn from_poly(p: Poly) -> Self {
        RationalFunction { num: p, den: Poly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn x() -> Self {
        Self::from_poly(Poly::x())
    }

    /// `c·x^k` for any integer `k`.
    pub fn power(c: Rational, k: i32) -> Self {
        if k >= 0 {
            Self::from_poly(Poly::monomial(c, k as usize))
        } else {
            Self::normalized(Poly::constant(c), Poly::monomial(Rational::one(), (-k) as usize))
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn checked_div(&self, rhs: &RationalFunction) -> Result<RationalFunction> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(&self.num * &rhs.den, &self.den * &rhs.num))
    }

    pub fn recip(&self) -> Result<RationalFunction> {
        Self::one().checked_div(self)
    }

    pub fn scale(&self, c: &Rational) -> RationalFunction {
        if c.is_zero() {
            return Self::zero();
        }
        RationalFunction { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn pow(&self, e: i32) -> Result<RationalFunction> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let e = e.unsigned_abs();
        Ok(RationalFunction {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Exact quotient-rule derivative.
    pub fn derive(&self) -> RationalFunction {
        let n1 = &(&self.num.derive() * &self.den) - &(&self.num * &self.den.derive());
        Self::normalized(n1, &self.den * &self.den)
    }

    /// `f(λx)`.
    pub fn scale_arg(&self, lambda: &Rational) -> RationalFunction {
        Self::normalized(self.num.scale_arg(lambda), self.den.scale_arg(lambda))
    }

    /// Exact value at a rational point.
    pub fn eval(&self, x: &Rational) -> Result<Rational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole { location: rational_to_f64(x) });
        }
        Ok(self.num.eval(x) / d)
    }

    /// Floating value. Reports a pole when the denominator vanishes to
    /// round-off relative to its coefficient scale.
    pub fn eval_f64(&self, x: f64) -> Result<f64> {
        self.compile().eval(x)
    }

    pub fn compile(&self) -> CompiledRational {
        CompiledRational {
            num: self.num.to_f64(),
            den: self.den.to_f64(),
        }
    }

    /// Coefficients `a_j` of the Laurent expansion `Σ a_j (x−x0)^j` around a
    /// rational point, for `j` in `lowest..lowest+count`, where `lowest` is
    /// minus the pole order at `x0` (or the zero order, when positive).
    pub fn laurent_at(&self, x0: &Rational, count: usize) -> (i64, Vec<Rational>) {
        if self.is_zero() {
            return (0, vec![Rational::zero(); count]);
        }
        let n = self.num.shift(x0);
        let d = self.den.shift(x0);
        let vn = n.valuation();
        let vd = d.valuation();
        let n = n.shift_down(vn);
        let d = d.shift_down(vd);
        let lowest = vn as i64 - vd as i64;
        (lowest, series_div(&n, &d, count))
    }

    /// Coefficient of `(x−x0)^power` in the Laurent expansion around `x0`.
    pub fn laurent_coeff(&self, x0: &Rational, power: i64) -> Rational {
        let (lowest, _) = self.laurent_at(x0, 0);
        if power < lowest {
            return Rational::zero();
        }
        let (_, c) = self.laurent_at(x0, (power - lowest + 1) as usize);
        c.last().cloned().unwrap_or_else(Rational::zero)
    }
}

/// Power-series quotient `n/d` truncated to `count` terms; `d(0) != 0`.
fn series_div(n: &Poly, d: &Poly, count: usize) -> Vec<Rational> {
    let d0 = d.coeff(0);
    let mut out: Vec<Rational> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = n.coeff(k);
        for j in 1..=k {
            let dj = d.coeff(j);
            if !dj.is_zero() {
                acc -= dj * &out[k - j];
            }
        }
        out.push(acc / &d0);
    }
    out
}

/// Floating-point copy of a rational function for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledRational {
    num: Vec<f64>,
    den: Vec<f64>,
}

impl CompiledRational {
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (d, scale) = horner_with_scale(&self.den, x);
        if d == 0.0 || d.abs() <= 1e-14 * scale {
            return Err(Error::Pole { location: x });
        }
        let (n, _) = horner_with_scale(&self.num, x);
        Ok(n / d)
    }

    /// Unchecked evaluation for hot loops away from poles.
    #[inline]
    pub fn eval_unchecked(&self, x: f64) -> f64 {
        horner(&self.num, x) / horner(&self.den, x)
    }

    pub fn num(&self) -> &[f64] {
        &self.num
    }

    pub fn den(&self) -> &[f64] {
        &self.den
    }
}

#[inline]
fn horner(c: &[f64], x: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, a| acc * x + a)
}

/// Horner value together with `Σ|a_i||x|^i`, the natural round-off scale.
fn horner_with_scale(c: &[f64], x: f64) -> (f64, f64) {
    let ax = x.abs();
    c.iter()
        .rev()
        .fold((0.0, 0.0), |(v, s), a| (v * x + a, s * ax + a.abs()))
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl Add for &RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::normalized(&self.num + &rhs.num, self.den.clone());
        }
        RationalFunction::normalized(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl Mul for &RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &RationalFunction) -> RationalFunction {
        RationalFunction::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RationalFunction {
            type Output = RationalFunction;
            fn $m(self, rhs: RationalFunction) -> RationalFunction {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> Self {
        RationalFunction::from_poly(p)
    }
}

// JSON: a pair of coefficient arrays (numerator, denominator), ascending
// degree, every coefficient written as a "p/q" string.

pub fn rational_to_string(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = p.trim().parse().map_err(|_| bad())?;
            let q: num_bigint::BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn poly_to_strings(p: &Poly) -> Vec<String> {
    p.coeffs().iter().map(rational_to_string).collect()
}

fn poly_from_strings(v: &[String]) -> Result<Poly> {
    Ok(Poly::new(v.iter().map(|s| parse_rational(s)).collect::<Result<_>>()?))
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        (poly_to_strings(&self.num), poly_to_strings(&self.den)).serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let (n, den): (Vec<String>, Vec<String>) = Deserialize::deserialize(d)?;
        let num = poly_from_strings(&n).map_err(serde::de::Error::custom)?;
        let den = poly_from_strings(&den).map_err(serde::de::Error::custom)?;
        RationalFunction::new(num, den).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly::{rat, ratio};
    use super::*;

    fn inv_x() -> RationalFunction {
        RationalFunction::power(rat(1), -1)
    }

    #[test]
    fn like_terms_add() {
        let s = &inv_x() + &inv_x();
        assert_eq!(s, RationalFunction::power(rat(2), -1));
    }

    #[test]
    fn inverse_pair_multiplies_to_one() {
        assert_eq!(&RationalFunction::x() * &inv_x(), RationalFunction::one());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = rf_arith(&RationalFunction::x(), &RationalFunction::zero(), ArithOp::Div);
        assert_eq!(r, Err(Error::DivisionByZero));
        assert!(RationalFunction::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn power_rule_derivative() {
        let f = RationalFunction::power(rat(2), -2);
        assert_eq!(f.derive(), RationalFunction::power(rat(-4), -3));
        assert!(RationalFunction::constant(ratio(7, 3)).derive().is_zero());
    }

    #[test]
    fn denominator_is_monic_and_reduced() {
        // (2x^2 - 2) / (4x + 4) -> (x - 1)/2 ... as (1/2 x - 1/2) / 1
        let f = RationalFunction::new(Poly::from_ints(&[-2, 0, 2]), Poly::from_ints(&[4, 4])).unwrap();
        assert_eq!(f.den(), &Poly::one());
        assert_eq!(f.num(), &Poly::new(vec![ratio(-1, 2), ratio(1, 2)]));
    }

    #[test]
    fn pole_evaluation_reports_location() {
        let f = RationalFunction::new(Poly::one(), Poly::from_ints(&[1, 1])).unwrap();
        assert!(matches!(f.eval(&rat(-1)), Err(Error::Pole { .. })));
        match f.eval_f64(-1.0) {
            Err(Error::Pole { location }) => assert_eq!(location, -1.0),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn laurent_of_simple_pole() {
        // 1/(x(x-1)) around 0: -1/x - 1 - x - ...
        let f = RationalFunction::new(Poly::one(), Poly::from_ints(&[0, -1, 1])).unwrap();
        let (lowest, c) = f.laurent_at(&rat(0), 3);
        assert_eq!(lowest, -1);
        assert_eq!(c, vec![rat(-1), rat(-1), rat(-1)]);
        assert_eq!(f.laurent_coeff(&rat(1), -1), rat(1));
    }

    #[test]
    fn json_pair_round_trip() {
        let f = RationalFunction::new(Poly::new(vec![ratio(1, 2), rat(-3)]), Poly::from_ints(&[1, 0, 1])).unwrap();
        let js = serde_json::to_string(&f).unwrap();
        assert_eq!(js, r#"[["1/2","-3/1"],["1/1","0/1","1/1"]]"#);
        let back: RationalFunction = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
        let plain: RationalFunction = serde_json::from_str(r#"[["2"],["0","1"]]"#).unwrap();
        assert_eq!(plain, RationalFunction::power(rat(2), -1));
    }
}
