//! Exact univariate rational functions over arbitrary-precision rationals,
//! plus the small bivariate layer used by the KdV checks.

mod bivariate;
mod poles;
mod poly;
mod ratfunc;

pub use bivariate::{BiPoly, BiRational};
pub use poles::{real_roots, rf_real_poles, simplest_between, Pole, POLE_TOLERANCE};
pub use poly::{rat, ratio, rational_to_f64, Poly, Rational};
pub use ratfunc::{rf_arith, ArithOp, CompiledRational, RationalFunction};
pub use ratfunc::{parse_rational, rational_to_string};

/// Exact derivative; free-function alias for [`RationalFunction::derive`].
pub fn rf_derive(a: &RationalFunction) -> RationalFunction {
    a.derive()
}

/// Exact value at a rational point.
pub fn rf_eval(a: &RationalFunction, x: &Rational) -> crate::Result<Rational> {
    a.eval(x)
}

/// Exact rational value of a finite float.
pub fn rational_from_f64(x: f64) -> Rational {
    Rational::from_float(x).expect("finite float")
}
