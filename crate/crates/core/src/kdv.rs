//! KdV checks in the convention `u_t = 6 u u_x − u_xxx`.

use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;

use crate::analytic::Expr;
use crate::error::{Error, Result};
use crate::exactrat::{rat, rational_to_f64, BiPoly, BiRational, Rational, RationalFunction};

/// A KdV candidate: exact in `(x, t)` or a travelling wave `f(x − vt − x₀)`.
#[derive(Clone, Debug)]
pub enum KdvCandidate {
    Rational(BiRational),
    TravellingWave { profile: Expr, speed: f64, shift: f64 },
}

/// `6x(x³ − 24t)/(x³ + 12t)²`.
pub fn rational_b3() -> BiRational {
    BiRational::new(
        BiPoly::from_terms(&[(6, 4, 0), (-144, 1, 1)]),
        BiPoly::from_terms(&[(1, 3, 0), (12, 0, 1)]),
        2,
    )
}

/// `2/x²`.
pub fn inverse_square() -> BiRational {
    BiRational::new(BiPoly::from_terms(&[(2, 0, 0)]), BiPoly::from_terms(&[(1, 1, 0)]), 2)
}

/// `−(v/2)·cosh⁻²(a(x − vt − x₀))` with the given width parameter `a`.
fn sech_wave(v: f64, a: f64, shift: f64) -> KdvCandidate {
    let profile = Expr::real(-0.5 * v) * (Expr::real(a) * Expr::x()).cosh().powi(-2);
    KdvCandidate::TravellingWave { profile, speed: v, shift }
}

/// The soliton with width `√v`, as usually quoted alongside amplitude `v/2`.
pub fn soliton_as_quoted(v: f64, shift: f64) -> KdvCandidate {
    sech_wave(v, v.sqrt(), shift)
}

/// The soliton of speed `v`: amplitude `v/2` fixes the width at `√v/2`.
pub fn soliton(v: f64, shift: f64) -> KdvCandidate {
    sech_wave(v, 0.5 * v.sqrt(), shift)
}

/// `u_t − 6 u u_x + u_xxx`, exactly.
pub fn kdv_residual_exact(u: &BiRational) -> BiRational {
    let ux = u.dx();
    let uxxx = ux.dx().dx();
    u.dt().sub(&u.mul(&ux).scale(&rat(6))).add(&uxxx)
}

/// Largest `|u_t − 6 u u_x + u_xxx|` over `points`.
pub fn kdv_residual_numeric(u: &KdvCandidate, points: &[(f64, f64)]) -> Result<f64> {
    let mut worst = 0.0f64;
    match u {
        KdvCandidate::Rational(r) => {
            let res = kdv_residual_exact(r);
            for &(x, t) in points {
                if r.base.eval_f64(x, t) == 0.0 {
                    return Err(Error::Domain(format!("singular point ({x}, {t})")));
                }
                worst = worst.max(res.eval_f64(x, t).abs());
            }
        }
        KdvCandidate::TravellingWave { profile, speed, shift } => {
            for &(x, t) in points {
                let s = profile.series(x - speed * t - shift, 3)?;
                let (f, f1, f3) = (s.derivative(0), s.derivative(1), s.derivative(3));
                worst = worst.max((-speed * f1 - 6.0 * f * f1 + f3).abs());
            }
        }
    }
    Ok(worst)
}

/// `λ²·u(λx, λ³t)`; maps solutions to solutions, scaling the residual by
/// `λ⁵` and pulling it back the same way.
pub fn kdv_scale(u: &KdvCandidate, lambda: &Rational) -> Result<KdvCandidate> {
    if lambda == &rat(0) {
        return Err(Error::InvalidParameter("scale factor must be nonzero".into()));
    }
    let l2 = lambda * lambda;
    Ok(match u {
        KdvCandidate::Rational(r) => KdvCandidate::Rational(scale_rational(r, lambda)),
        KdvCandidate::TravellingWave { profile, speed, shift } => {
            let l = rational_to_f64(lambda);
            let profile = Expr::Const(l2.clone()) * profile.substitute(&(Expr::real(l) * Expr::x()));
            KdvCandidate::TravellingWave { profile, speed: speed * l * l, shift: shift / l }
        }
    })
}

fn scale_rational(r: &BiRational, lambda: &Rational) -> BiRational {
    r.scale_vars(lambda, &(lambda * lambda * lambda)).scale(&(lambda * lambda))
}

/// The rational solution at `t = μ/12`.
pub fn b3_at_mu(mu: &Rational) -> Result<RationalFunction> {
    rational_b3()
        .at_t(&(mu / rat(12)))
        .ok_or_else(|| Error::Domain("degenerate time slice".into()))
}

/// `count` deterministic sample points in `[x0, x1] × [t0, t1]`.
pub fn sample_points(count: usize, x: (f64, f64), t: (f64, f64), seed: u64) -> Vec<(f64, f64)> {
    let mut rng = StdRng::seed_from_u64(seed);
    (0..count).map(|_| (rng.gen_range(x.0..=x.1), rng.gen_range(t.0..=t.1))).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct KdvVerdict {
    pub candidate: String,
    pub exact: Option<bool>,
    pub max_numeric_residual: f64,
}

pub const CANDIDATES: [&str; 4] = ["eqB3", "inverse-square", "soliton", "soliton-as-quoted"];

pub fn candidate_by_name(name: &str, v: f64) -> Result<KdvCandidate> {
    Ok(match name {
        "eqB3" => KdvCandidate::Rational(rational_b3()),
        "inverse-square" => KdvCandidate::Rational(inverse_square()),
        "soliton" => soliton(v, 0.0),
        "soliton-as-quoted" => soliton_as_quoted(v, 0.0),
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown candidate {other}; expected one of {}",
                CANDIDATES.join(", ")
            )))
        }
    })
}

/// Exact verdict for rational candidates plus a numeric residual on 100
/// points of `[1, 5] × [0, 2]` (away from the poles of the rational ones).
pub fn kdv_check(name: &str, v: f64) -> Result<KdvVerdict> {
    let c = candidate_by_name(name, v)?;
    let (xr, tr) = match c {
        KdvCandidate::Rational(_) => ((1.0, 5.0), (0.0, 2.0)),
        _ => ((-5.0, 5.0), (0.0, 2.0)),
    };
    let pts = sample_points(100, xr, tr, 7);
    let exact = match &c {
        KdvCandidate::Rational(r) => Some(kdv_residual_exact(r).is_zero()),
        _ => None,
    };
    Ok(KdvVerdict { candidate: name.to_string(), exact, max_numeric_residual: kdv_residual_numeric(&c, &pts)? })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::eq10;

    #[test]
    fn rational_solutions_are_exact() {
        assert!(kdv_residual_exact(&rational_b3()).is_zero());
        assert!(kdv_residual_exact(&inverse_square()).is_zero());
        let not = BiRational::new(BiPoly::from_terms(&[(1, 0, 0)]), BiPoly::from_terms(&[(1, 1, 0)]), 1);
        assert!(!kdv_residual_exact(&not).is_zero());
    }

    #[test]
    fn scaling() {
        let two = kdv_scale(&KdvCandidate::Rational(inverse_square()), &rat(3)).unwrap();
        let KdvCandidate::Rational(r) = two else { unreachable!() };
        assert!(r.equals(&inverse_square()));
        let KdvCandidate::Rational(b) = kdv_scale(&KdvCandidate::Rational(rational_b3()), &rat(2)).unwrap() else {
            unreachable!()
        };
        assert!(kdv_residual_exact(&b).is_zero());
    }

    #[test]
    fn time_slice_is_the_first_rational_partner() {
        for mu in [rat(1), rat(5) / rat(3)] {
            assert_eq!(b3_at_mu(&mu).unwrap(), eq10(&mu));
        }
    }

    #[test]
    fn solitons() {
        let pts = sample_points(100, (-5.0, 5.0), (0.0, 2.0), 1);
        for v in [1.0, 4.0] {
            assert!(kdv_residual_numeric(&soliton(v, 0.3), &pts).unwrap() < 1e-10);
            assert!(kdv_residual_numeric(&soliton_as_quoted(v, 0.0), &pts).unwrap() > 1e-2);
        }
        let scaled = kdv_scale(&soliton(1.0, 0.0), &rat(2)).unwrap();
        assert!(kdv_residual_numeric(&scaled, &pts).unwrap() < 1e-9);
        let zero = KdvCandidate::TravellingWave { profile: Expr::int(0), speed: 1.0, shift: 0.0 };
        assert_eq!(kdv_residual_numeric(&zero, &pts).unwrap(), 0.0);
    }
}
