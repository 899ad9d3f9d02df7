//! Numeric functions of `x` that can report Taylor data at a point: potentials,
//! superpotentials and wavefunctions all share this carrier. Operators that
//! consume derivatives (intertwiners, partner potentials) request one more
//! order from their inner function, so chains of any length stay exact up to
//! round-off.

use std::sync::Arc;

use serde::Serialize;

use crate::analytic::{Expr, Jet3, Series};
use crate::error::{Error, Result};
use crate::exactrat::{CompiledRational, RationalFunction};
use crate::quad;

#[derive(Clone, Debug)]
pub enum Func {
    Rational(Arc<RationalCell>),
    Expr(Expr),
    /// `−φ'/φ`.
    NegLogDeriv(Box<Func>),
    /// `(D + W')ψ`.
    Intertwined { wprime: Box<Func>, inner: Box<Func> },
    /// `(−D + W')ψ`.
    CoIntertwined { wprime: Box<Func>, inner: Box<Func> },
    /// `W'² + W'' + E₀`.
    Partner { wprime: Box<Func>, e0: f64 },
    /// `ψ₁(x)·∫_{x0}^{x} ψ₁⁻²`.
    SecondSolution { inner: Box<Func>, x0: f64 },
    Sum(Box<Func>, Box<Func>),
    Product(Box<Func>, Box<Func>),
    Scaled(f64, Box<Func>),
}

/// Exact rational function with its floating copy cached.
#[derive(Debug)]
pub struct RationalCell {
    pub exact: RationalFunction,
    pub fast: CompiledRational,
}

/// Serializable description used by chain dumps.
#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum FuncRepr {
    Rational(RationalFunction),
    Expr(Expr),
    Derived(String),
}

impl Func {
    pub fn rational(f: RationalFunction) -> Func {
        let fast = f.compile();
        Func::Rational(Arc::new(RationalCell { exact: f, fast }))
    }

    pub fn expr(e: Expr) -> Func {
        match e.to_rational() {
            Some(r) => Func::rational(r),
            None => Func::Expr(e),
        }
    }

    pub fn as_rational(&self) -> Option<&RationalFunction> {
        match self {
            Func::Rational(c) => Some(&c.exact),
            _ => None,
        }
    }

    pub fn repr(&self) -> FuncRepr {
        match self {
            Func::Rational(c) => FuncRepr::Rational(c.exact.clone()),
            Func::Expr(e) => FuncRepr::Expr(e.clone()),
            other => FuncRepr::Derived(other.describe()),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Func::Rational(c) => c.exact.to_string(),
            Func::Expr(e) => e.to_string(),
            Func::NegLogDeriv(f) => format!("-({})'/({})", f.describe(), f.describe()),
            Func::Intertwined { wprime, inner } => {
                format!("(D + {})[{}]", wprime.describe(), inner.describe())
            }
            Func::CoIntertwined { wprime, inner } => {
                format!("(-D + {})[{}]", wprime.describe(), inner.describe())
            }
            Func::Partner { wprime, e0 } => {
                format!("W'^2 + W'' + {e0} with W' = {}", wprime.describe())
            }
            Func::SecondSolution { inner, x0 } => {
                format!("({0}) * int_{x0}^x ({0})^-2", inner.describe())
            }
            Func::Sum(a, b) => format!("({} + {})", a.describe(), b.describe()),
            Func::Product(a, b) => format!("({})*({})", a.describe(), b.describe()),
            Func::Scaled(s, f) => format!("{s}*({})", f.describe()),
        }
    }

    pub fn series(&self, x: f64, order: usize) -> Result<Series> {
        match self {
            Func::Rational(c) => rational_series(&c.fast, x, order),
            Func::Expr(e) => e.series(x, order),
            Func::NegLogDeriv(phi) => {
                let s = phi.series(x, order + 1)?;
                Ok(s.differentiate().div(&s.truncate(order), x)?.neg())
            }
            Func::Intertwined { wprime, inner } => {
                let psi = inner.series(x, order + 1)?;
                let w = wprime.series(x, order)?;
                Ok(psi.differentiate().add(&w.mul(&psi.truncate(order))))
            }
            Func::CoIntertwined { wprime, inner } => {
                let psi = inner.series(x, order + 1)?;
                let w = wprime.series(x, order)?;
                Ok(w.mul(&psi.clone().truncate(order)).sub(&psi.differentiate()))
            }
            Func::Partner { wprime, e0 } => {
                let w = wprime.series(x, order + 1)?;
                let wd = w.differentiate();
                let w = w.truncate(order);
                Ok(w.mul(&w).add(&wd).add_const(*e0))
            }
            Func::SecondSolution { inner, x0 } => {
                let psi = inner.series(x, order)?;
                let integral = inverse_square_integral(inner, *x0, x)?;
                let inv2 = if order == 0 {
                    Series::constant(0.0, 0)
                } else {
                    let p = psi.clone().truncate(order - 1);
                    Series::constant(1.0, order - 1).div(&p.mul(&p), x)?
                };
                let i_series = if order == 0 {
                    Series::constant(integral, 0)
                } else {
                    inv2.integrate(integral)
                };
                Ok(psi.mul(&i_series))
            }
            Func::Sum(a, b) => Ok(a.series(x, order)?.add(&b.series(x, order)?)),
            Func::Product(a, b) => Ok(a.series(x, order)?.mul(&b.series(x, order)?)),
            Func::Scaled(s, f) => Ok(f.series(x, order)?.scale(*s)),
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self {
            Func::Rational(c) => c.fast.eval(x),
            _ => Ok(self.series(x, 0)?.value()),
        }
    }

    pub fn jet(&self, x: f64) -> Result<Jet3> {
        Ok(Jet3::from_series(x, &self.series(x, 3)?))
    }

    pub fn scaled(self, s: f64) -> Func {
        Func::Scaled(s, Box::new(self))
    }
}

/// Taylor coefficients of a polynomial at `x`, via repeated deflation.
pub(crate) fn poly_series(c: &[f64], x: f64, order: usize) -> Vec<f64> {
    let mut work = c.to_vec();
    let mut out = Vec::with_capacity(order + 1);
    for _ in 0..=order {
        if work.is_empty() {
            out.push(0.0);
            continue;
        }
        let n = work.len();
        let mut acc = 0.0;
        let mut q = vec![0.0; n.saturating_sub(1)];
        for i in (0..n).rev() {
            acc = acc * x + work[i];
            if i > 0 {
                q[i - 1] = acc;
            }
        }
        out.push(acc);
        work = q;
    }
    out
}

fn rational_series(f: &CompiledRational, x: f64, order: usize) -> Result<Series> {
    f.eval(x)?;
    let n = Series(poly_series(f.num(), x, order));
    let d = Series(poly_series(f.den(), x, order));
    n.div(&d, x)
}

/// Number of probe points used to detect zeros of a wavefunction on a path.
const ZERO_PROBES: usize = 400;

/// `∫_{x0}^{x} ψ⁻²` with absolute tolerance 1e−10, rejecting paths on which
/// `ψ` vanishes.
pub fn inverse_square_integral(psi: &Func, x0: f64, x: f64) -> Result<f64> {
    if x == x0 {
        return Ok(0.0);
    }
    check_no_zero(psi, x0, x)?;
    quad::integrate(
        |s| {
            let v = psi.eval(s)?;
            Ok(1.0 / (v * v))
        },
        x0,
        x,
        1e-10,
    )
}

fn check_no_zero(psi: &Func, a: f64, b: f64) -> Result<()> {
    let mut prev_x = a;
    let mut prev = psi.eval(a).map_err(|_| Error::ZeroOnPath { location: a })?;
    if prev == 0.0 {
        return Err(Error::ZeroOnPath { location: a });
    }
    for i in 1..=ZERO_PROBES {
        let s = a + (b - a) * i as f64 / ZERO_PROBES as f64;
        let v = match psi.eval(s) {
            Ok(v) => v,
            Err(_) => return Err(Error::ZeroOnPath { location: s }),
        };
        if v == 0.0 || v.signum() != prev.signum() {
            let (mut lo, mut hi) = (prev_x, s);
            for _ in 0..60 {
                let m = 0.5 * (lo + hi);
                match psi.eval(m) {
                    Ok(vm) if vm.signum() == prev.signum() && vm != 0.0 => lo = m,
                    _ => hi = m,
                }
            }
            return Err(Error::ZeroOnPath { location: 0.5 * (lo + hi) });
        }
        prev = v;
        prev_x = s;
    }
    Ok(())
}

/// Schrödinger residual `−ψ'' + (V − E)ψ` at `x`.
pub fn schrodinger_residual(v: &Func, psi: &Func, energy: f64, x: f64) -> Result<f64> {
    let p = psi.series(x, 2)?;
    let vv = v.eval(x)?;
    Ok(-p.derivative(2) + (vv - energy) * p.value())
}

/// Same residual scaled by the size of its largest term (for relative checks).
pub fn relative_schrodinger_residual(v: &Func, psi: &Func, energy: f64, x: f64) -> Result<f64> {
    let p = psi.series(x, 2)?;
    let vv = v.eval(x)?;
    let a = p.derivative(2);
    let b = vv * p.value();
    let c = energy * p.value();
    let scale = a.abs().max(b.abs()).max(c.abs()).max(p.value().abs()).max(1e-300);
    Ok((-a + b - c).abs() / scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactrat::{rat, Poly};

    #[test]
    fn rational_series_matches_exact_derivatives() {
        let f = RationalFunction::new(Poly::from_ints(&[1, -2, 3]), Poly::from_ints(&[2, 0, 1])).unwrap();
        let g = Func::rational(f.clone());
        let s = g.series(0.7, 3).unwrap();
        let mut d = f.clone();
        let q = crate::exactrat::rational_from_f64(0.7);
        for k in 0..=3 {
            let want = crate::exactrat::rational_to_f64(&d.eval(&q).unwrap());
            assert!((s.derivative(k) - want).abs() < 1e-12 * want.abs().max(1.0));
            d = d.derive();
        }
    }

    #[test]
    fn neg_log_derivative_of_cosh_is_minus_tanh() {
        let w = Func::NegLogDeriv(Box::new(Func::expr(Expr::x().cosh())));
        for x in [-1.3, 0.0, 0.4, 2.0] {
            let j = w.jet(x).unwrap();
            let t = -Expr::x().tanh();
            let want = crate::analytic::jet_eval(&t, x).unwrap();
            for (a, b) in j.slots().iter().zip(want.slots()) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn second_solution_of_one_is_x() {
        let one = Func::rational(RationalFunction::constant(rat(1)));
        let s = Func::SecondSolution { inner: Box::new(one), x0: 0.0 };
        assert!((s.eval(2.5).unwrap() - 2.5).abs() < 1e-12);
    }

    #[test]
    fn zero_on_path_is_located() {
        let psi = Func::expr(Expr::x() - Expr::frac(1, 3));
        match inverse_square_integral(&psi, 0.0, 1.0) {
            Err(Error::ZeroOnPath { location }) => assert!((location - 1.0 / 3.0).abs() < 1e-9),
            other => panic!("expected ZeroOnPath, got {other:?}"),
        }
    }
}
