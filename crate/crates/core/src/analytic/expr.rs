use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::series::Series;
use crate::error::{Error, Result};
use crate::exactrat::{rat, ratio, rational_to_f64, Rational, RationalFunction};

/// Expression tree in one variable `x` over a fixed operator set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expr {
    X,
    Const(#[serde(with = "rational_str")] Rational),
    Real(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Power with rational exponent. Non-integer exponents need a positive base.
    Pow(Box<Expr>, #[serde(with = "rational_str")] Rational),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Tan(Box<Expr>),
    Sinh(Box<Expr>),
    Cosh(Box<Expr>),
    Tanh(Box<Expr>),
    Exp(Box<Expr>),
}

mod rational_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::exactrat::{parse_rational, rational_to_string, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

impl Expr {
    pub fn x() -> Expr {
        Expr::X
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(rat(n))
    }

    pub fn frac(p: i64, q: i64) -> Expr {
        Expr::Const(ratio(p, q))
    }

    pub fn real(v: f64) -> Expr {
        Expr::Real(v)
    }

    pub fn sin(self) -> Expr {
        Expr::Sin(Box::new(self))
    }
    pub fn cos(self) -> Expr {
        Expr::Cos(Box::new(self))
    }
    pub fn tan(self) -> Expr {
        Expr::Tan(Box::new(self))
    }
    pub fn sinh(self) -> Expr {
        Expr::Sinh(Box::new(self))
    }
    pub fn cosh(self) -> Expr {
        Expr::Cosh(Box::new(self))
    }
    pub fn tanh(self) -> Expr {
        Expr::Tanh(Box::new(self))
    }
    pub fn exp(self) -> Expr {
        Expr::Exp(Box::new(self))
    }

    pub fn powi(self, n: i64) -> Expr {
        Expr::Pow(Box::new(self), rat(n))
    }

    pub fn powr(self, p: i64, q: i64) -> Expr {
        Expr::Pow(Box::new(self), ratio(p, q))
    }

    /// Taylor coefficients of the expression at `x` up to `order`.
    pub fn series(&self, x: f64, order: usize) -> Result<Series> {
        let s = match self {
            Expr::X => Series::variable(x, order),
            Expr::Const(c) => Series::constant(rational_to_f64(c), order),
            Expr::Real(v) => Series::constant(*v, order),
            Expr::Add(a, b) => a.series(x, order)?.add(&b.series(x, order)?),
            Expr::Sub(a, b) => a.series(x, order)?.sub(&b.series(x, order)?),
            Expr::Mul(a, b) => a.series(x, order)?.mul(&b.series(x, order)?),
            Expr::Div(a, b) => a.series(x, order)?.div(&b.series(x, order)?, x)?,
            Expr::Neg(a) => a.series(x, order)?.neg(),
            Expr::Pow(a, r) => {
                let base = a.series(x, order)?;
                if r.is_integer() {
                    let e = r.to_integer().to_i64().ok_or_else(|| {
                        Error::Domain("integer exponent out of range".into())
                    })?;
                    base.powi(e, x)?
                } else {
                    base.powf(rational_to_f64(r), x)?
                }
            }
            Expr::Sin(a) => a.series(x, order)?.sin_cos().0,
            Expr::Cos(a) => a.series(x, order)?.sin_cos().1,
            Expr::Tan(a) => {
                let (s, c) = a.series(x, order)?.sin_cos();
                s.div(&c, x)?
            }
            Expr::Sinh(a) => a.series(x, order)?.sinh_cosh().0,
            Expr::Cosh(a) => a.series(x, order)?.sinh_cosh().1,
            Expr::Tanh(a) => {
                let (s, c) = a.series(x, order)?.sinh_cosh();
                s.div(&c, x)?
            }
            Expr::Exp(a) => a.series(x, order)?.exp(),
        };
        if s.0.iter().all(|v| v.is_finite()) {
            Ok(s)
        } else {
            Err(Error::Domain(format!("non-finite value at x = {x}")))
        }
    }

    /// `self(inner(x))`.
    pub fn substitute(&self, inner: &Expr) -> Expr {
        let s = |a: &Expr| Box::new(a.substitute(inner));
        match self {
            Expr::X => inner.clone(),
            Expr::Const(_) | Expr::Real(_) => self.clone(),
            Expr::Add(a, b) => Expr::Add(s(a), s(b)),
            Expr::Sub(a, b) => Expr::Sub(s(a), s(b)),
            Expr::Mul(a, b) => Expr::Mul(s(a), s(b)),
            Expr::Div(a, b) => Expr::Div(s(a), s(b)),
            Expr::Neg(a) => Expr::Neg(s(a)),
            Expr::Pow(a, r) => Expr::Pow(s(a), r.clone()),
            Expr::Sin(a) => Expr::Sin(s(a)),
            Expr::Cos(a) => Expr::Cos(s(a)),
            Expr::Tan(a) => Expr::Tan(s(a)),
            Expr::Sinh(a) => Expr::Sinh(s(a)),
            Expr::Cosh(a) => Expr::Cosh(s(a)),
            Expr::Tanh(a) => Expr::Tanh(s(a)),
            Expr::Exp(a) => Expr::Exp(s(a)),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.series(x, 0)?.value())
    }

    /// Exact rational form when the tree only uses rational operations.
    pub fn to_rational(&self) -> Option<RationalFunction> {
        Some(match self {
            Expr::X => RationalFunction::x(),
            Expr::Const(c) => RationalFunction::constant(c.clone()),
            Expr::Add(a, b) => &a.to_rational()? + &b.to_rational()?,
            Expr::Sub(a, b) => &a.to_rational()? - &b.to_rational()?,
            Expr::Mul(a, b) => &a.to_rational()? * &b.to_rational()?,
            Expr::Div(a, b) => a.to_rational()?.checked_div(&b.to_rational()?).ok()?,
            Expr::Neg(a) => -a.to_rational()?,
            Expr::Pow(a, r) if r.is_integer() => a.to_rational()?.pow(r.to_integer().to_i32()?).ok()?,
            _ => return None,
        })
    }

    /// Expression tree for an exact rational function (numerator over denominator).
    pub fn from_rational(f: &RationalFunction) -> Expr {
        fn poly_expr(p: &crate::exactrat::Poly) -> Expr {
            let mut acc: Option<Expr> = None;
            for (i, c) in p.coeffs().iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let term = match i {
                    0 => Expr::Const(c.clone()),
                    _ => Expr::Const(c.clone()) * Expr::X.powi(i as i64),
                };
                acc = Some(match acc {
                    None => term,
                    Some(a) => a + term,
                });
            }
            acc.unwrap_or(Expr::int(0))
        }
        let num = poly_expr(f.num());
        if f.den().is_constant() && f.den().lead().is_one() {
            num
        } else {
            num / poly_expr(f.den())
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::X => write!(f, "x"),
            Expr::Const(c) if c.is_integer() => write!(f, "{}", c.numer()),
            Expr::Const(c) => write!(f, "({}/{})", c.numer(), c.denom()),
            Expr::Real(v) => write!(f, "{v}"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "{a}*{b}"),
            Expr::Div(a, b) => write!(f, "{a}/{b}"),
            Expr::Neg(a) => write!(f, "-{a}"),
            Expr::Pow(a, r) if r.is_integer() => write!(f, "{a}^{}", r.numer()),
            Expr::Pow(a, r) => write!(f, "{a}^({}/{})", r.numer(), r.denom()),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Tan(a) => write!(f, "tan({a})"),
            Expr::Sinh(a) => write!(f, "sinh({a})"),
            Expr::Cosh(a) => write!(f, "cosh({a})"),
            Expr::Tanh(a) => write!(f, "tanh({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $var:ident) => {
        impl $tr for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr {
                Expr::$var(Box::new(self), Box::new(rhs))
            }
        }
    };
}
binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Box::new(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_subtree_converts() {
        let e = Expr::int(2) / Expr::x().powi(2);
        assert_eq!(e.to_rational(), Some(RationalFunction::power(rat(2), -2)));
        assert!(Expr::x().sin().to_rational().is_none());
    }

    #[test]
    fn round_trip_through_rational() {
        let f = RationalFunction::new(
            crate::exactrat::Poly::from_ints(&[0, 6, 0, 0, -12]),
            crate::exactrat::Poly::from_ints(&[1, 0, 0, 1]).pow(2),
        )
        .unwrap();
        assert_eq!(Expr::from_rational(&f).to_rational(), Some(f));
    }

    #[test]
    fn json_keeps_exact_constants() {
        let e = Expr::frac(7, 4) - Expr::int(2) * Expr::x().cos();
        let js = serde_json::to_string(&e).unwrap();
        assert!(js.contains("\"7/4\""));
        let back: Expr = serde_json::from_str(&js).unwrap();
        assert_eq!(back, e);
    }

    #[test]
    fn fractional_power_of_negative_base_is_domain_error() {
        let e = Expr::x().powr(1, 2);
        assert!(matches!(e.eval(-1.0), Err(Error::Domain(_))));
    }
}
