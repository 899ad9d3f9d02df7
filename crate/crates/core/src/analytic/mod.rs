//! Closed-form expressions evaluated together with their derivatives.
//!
//! Derivatives are propagated by truncated Taylor arithmetic, so they are
//! exact up to floating round-off (no finite differencing). [`Jet3`] is the
//! public third-order view; longer series are available through
//! [`Expr::series`] for operators that consume derivatives.

mod expr;
mod series;

pub use expr::Expr;
pub use series::{factorial, Series, POLE_EPS};

use serde::Serialize;

use crate::error::Result;

/// Value and first three derivatives of a function at a point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Jet3 {
    pub x: f64,
    pub f: f64,
    pub f1: f64,
    pub f2: f64,
    pub f3: f64,
}

impl Jet3 {
    pub fn from_series(x: f64, s: &Series) -> Jet3 {
        Jet3 {
            x,
            f: s.derivative(0),
            f1: s.derivative(1),
            f2: s.derivative(2),
            f3: s.derivative(3),
        }
    }

    pub fn slots(&self) -> [f64; 4] {
        [self.f, self.f1, self.f2, self.f3]
    }
}

pub fn jet_eval(e: &Expr, x: f64) -> Result<Jet3> {
    Ok(Jet3::from_series(x, &e.series(x, 3)?))
}

/// Largest relative deviation of the jet's `f1..f3` from central differences.
///
/// Each slot is compared with the central difference of the slot below it
/// (`f1` against `f`, `f2` against `f1`, `f3` against `f2`), which keeps the
/// round-off at `O(ε/h)` for every order. Deviations are relative to
/// `max(1, |slot|)`. The points `x ± 3h` must be in the domain.
pub fn jet_check_fd(e: &Expr, x: f64, h: f64) -> Result<f64> {
    jet_eval(e, x - 3.0 * h)?;
    jet_eval(e, x + 3.0 * h)?;
    let c = jet_eval(e, x)?.slots();
    let lo = jet_eval(e, x - h)?.slots();
    let hi = jet_eval(e, x + h)?.slots();
    let mut worst: f64 = 0.0;
    for k in 1..4 {
        let fd = (hi[k - 1] - lo[k - 1]) / (2.0 * h);
        let dev = (fd - c[k]).abs() / c[k].abs().max(1.0);
        worst = worst.max(dev);
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use std::f64::consts::FRAC_PI_2;

    use super::*;
    use crate::error::Error;
    use crate::exactrat::{rational_from_f64, RationalFunction};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn cosh_maclaurin() {
        let j = jet_eval(&Expr::x().cosh(), 0.0).unwrap();
        assert_eq!(j.slots(), [1.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn minus_tanh_slope() {
        let j = jet_eval(&-Expr::x().tanh(), 0.0).unwrap();
        assert_eq!(j.f, 0.0);
        assert!(close(j.f1, -1.0, 1e-15));
    }

    #[test]
    fn sin_three_halves_at_quarter_turn() {
        let e = Expr::x().sin().powr(3, 2);
        let j = jet_eval(&e, FRAC_PI_2).unwrap();
        // Independent oracle: five-point differences of the plain evaluator.
        let f = |x: f64| x.sin().powf(1.5);
        let h = 1e-3;
        let d1 = (f(FRAC_PI_2 - 2.0 * h) - 8.0 * f(FRAC_PI_2 - h) + 8.0 * f(FRAC_PI_2 + h)
            - f(FRAC_PI_2 + 2.0 * h))
            / (12.0 * h);
        let d2 = (f(FRAC_PI_2 + h) - 2.0 * f(FRAC_PI_2) + f(FRAC_PI_2 - h)) / (h * h);
        let d3 = (f(FRAC_PI_2 + 2.0 * h) - 2.0 * f(FRAC_PI_2 + h) + 2.0 * f(FRAC_PI_2 - h)
            - f(FRAC_PI_2 - 2.0 * h))
            / (2.0 * h * h * h);
        assert!(close(j.f, 1.0, 1e-15));
        assert!(close(j.f1, d1, 1e-6) && j.f1.abs() < 1e-15);
        assert!(close(j.f2, d2, 1e-6) && close(j.f2, -1.5, 1e-14));
        assert!((j.f3 - d3).abs() < 1e-4 && j.f3.abs() < 1e-14);
    }

    #[test]
    fn fd_check_smooth_points() {
        assert!(jet_check_fd(&(-Expr::x()).exp(), 1.0, 1e-4).unwrap() < 1e-6);
        let e = Expr::int(2) / Expr::x().powi(2);
        assert!(jet_check_fd(&e, 0.5, 1e-5).unwrap() < 1e-6);
        let grid = [-2.0, -0.7, 0.3, 1.1, 2.5];
        let trig = Expr::frac(7, 4) - Expr::int(2) * Expr::x().cos();
        for x in grid {
            assert!(jet_check_fd(&(-Expr::x().tanh()), x, 1e-4).unwrap() < 1e-6);
            assert!(jet_check_fd(&(Expr::x().sinh() * Expr::x().cos()), x, 1e-4).unwrap() < 1e-6);
            if x > 0.0 {
                let t = trig.clone() / Expr::x().sin().powi(2);
                assert!(jet_check_fd(&t, x, 1e-4).unwrap() < 1e-6);
            }
        }
    }

    #[test]
    fn tan_pole_is_rejected() {
        assert!(matches!(jet_eval(&Expr::x().tan(), FRAC_PI_2), Err(Error::Pole { .. })));
        assert!(jet_check_fd(&Expr::x().tan(), FRAC_PI_2, 1e-3).is_err());
    }

    #[test]
    fn jets_agree_with_exact_derivatives_on_rational_trees() {
        let e = (Expr::int(6) * Expr::x() * (Expr::x().powi(3) - Expr::int(2)))
            / (Expr::x().powi(3) + Expr::int(1)).powi(2);
        let f: RationalFunction = e.to_rational().unwrap();
        let d1 = f.derive();
        let d2 = d1.derive();
        let d3 = d2.derive();
        for x in [0.25, 0.5, 2.0, 3.75] {
            let q = rational_from_f64(x);
            let j = jet_eval(&e, x).unwrap();
            let exact = [&f, &d1, &d2, &d3].map(|g| crate::exactrat::rational_to_f64(&g.eval(&q).unwrap()));
            for (a, b) in j.slots().iter().zip(exact) {
                assert!(close(*a, b, 1e-12), "{a} vs {b}");
            }
        }
    }
}
