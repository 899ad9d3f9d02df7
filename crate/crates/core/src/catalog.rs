//! Registry of the closed-form potential families, with their domain pieces
//! and tail strengths.

use std::f64::consts::PI;

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::json;

use crate::analytic::Expr;
use crate::darboux::{chain_build_on, SeedSolution};
use crate::error::{Error, Result};
use crate::exactrat::{rat, ratio, rational_from_f64, rational_to_f64, real_roots, Rational, RationalFunction};
use crate::func::Func;
use crate::potential::{DomainPiece, Edge, Family, PieceCharacter, PotentialSpec};

/// The golden ratio `(1+√5)/2`.
pub const PHI: f64 = 1.618_033_988_749_895;

fn mono(c: Rational, k: i32) -> RationalFunction {
    RationalFunction::power(c, k)
}

/// `((n+1)(n+2)x^{4n+2} − 6μn(n+1)x^{2n+1} + μ²n(n−1)) / (x²(μ + x^{2n+1})²)`.
pub fn zero_energy_partner(n: u32, mu: &Rational) -> RationalFunction {
    let n = n as i64;
    let m = (2 * n + 1) as i32;
    let num = &(&mono(rat((n + 1) * (n + 2)), 2 * m) - &mono(mu * rat(6 * n * (n + 1)), m))
        + &RationalFunction::constant(mu * mu * rat(n * (n - 1)));
    let base = &RationalFunction::constant(mu.clone()) + &mono(rat(1), m);
    let den = &mono(rat(1), 2) * &base.pow(2).expect("nonzero base");
    num.checked_div(&den).expect("nonzero denominator")
}

/// `6x(x³ − 2μ)/(x³ + μ)²`.
pub fn eq10(mu: &Rational) -> RationalFunction {
    let num = &mono(rat(6), 4) - &mono(mu * rat(12), 1);
    let den = (&mono(rat(1), 3) + &RationalFunction::constant(mu.clone())).pow(2).unwrap();
    num.checked_div(&den).unwrap()
}

/// `(2/x²)(6x¹⁰ − 18μx⁵ + μ²)/(x⁵ + μ)²`.
pub fn eq22(mu: &Rational) -> RationalFunction {
    let num = &(&mono(rat(12), 10) - &mono(mu * rat(36), 5)) + &RationalFunction::constant(mu * mu * rat(2));
    let base = &mono(rat(1), 5) + &RationalFunction::constant(mu.clone());
    let den = &mono(rat(1), 2) * &base.pow(2).unwrap();
    num.checked_div(&den).unwrap()
}

/// Seeds `x, x², …, xⁿ` followed by `μ/xⁿ + x^{n+1}`, all at `E = 0`.
pub fn zero_energy_seeds(n: u32, mu: &Rational) -> Vec<SeedSolution> {
    let mut seeds: Vec<_> = (1..=n as i32)
        .map(|k| SeedSolution::rational(mono(rat(1), k), rat(0)))
        .collect();
    let phi = &mono(mu.clone(), -(n as i32)) + &mono(rat(1), n as i32 + 1);
    seeds.push(SeedSolution::rational(phi, rat(0)));
    seeds
}

/// `c = μ^{1/(2n+1)}`, the position of the pole at `x = −c`.
pub fn pole_c(n: u32, mu: f64) -> f64 {
    mu.powf(1.0 / (2 * n + 1) as f64)
}

fn expr_family(family: Family, e: Expr, pieces: Vec<DomainPiece>) -> PotentialSpec {
    PotentialSpec { family, evaluator: Func::expr(e), pieces }
}

fn piece(lo: f64, s_lo: f64, hi: f64, s_hi: f64, character: PieceCharacter) -> DomainPiece {
    DomainPiece { lo: Edge::new(lo, s_lo), hi: Edge::new(hi, s_hi), character }
}

fn check_mu(mu: &Rational) -> Result<()> {
    if !mu.is_positive() {
        return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
    }
    Ok(())
}

pub fn catalog_get(family: &Family) -> Result<PotentialSpec> {
    let inf = f64::INFINITY;
    use PieceCharacter::*;
    Ok(match family {
        Family::Free | Family::Centrifugal { n: 0 } => {
            PotentialSpec::from_rational(family.clone(), RationalFunction::zero())
        }
        Family::Centrifugal { n } => {
            let s = (n * (n + 1)) as f64;
            PotentialSpec {
                family: family.clone(),
                evaluator: Func::rational(mono(rat((n * (n + 1)) as i64), -2)),
                pieces: vec![
                    piece(-inf, s, 0.0, s, PurelyRepulsive),
                    piece(0.0, s, inf, s, PurelyRepulsive),
                ],
            }
        }
        Family::SecSquared { n } => {
            let s = (n * (n + 1)) as i64;
            let e = Expr::int(s) / Expr::x().cos().powi(2);
            let p = piece(-PI / 2.0, s as f64, PI / 2.0, s as f64, Confining);
            expr_family(family.clone(), e, vec![p])
        }
        Family::SechSquared { n } => {
            let s = (n * (n + 1)) as i64;
            let e = -Expr::int(s) / Expr::x().cosh().powi(2);
            expr_family(family.clone(), e, vec![DomainPiece::whole_line()])
        }
        Family::CschSquared { n } => {
            let s = (n * (n + 1)) as i64;
            let e = Expr::int(s) / Expr::x().sinh().powi(2);
            let pieces = if s == 0 {
                vec![DomainPiece::whole_line()]
            } else {
                vec![
                    piece(-inf, 0.0, 0.0, s as f64, PurelyRepulsive),
                    piece(0.0, s as f64, inf, 0.0, PurelyRepulsive),
                ]
            };
            expr_family(family.clone(), e, pieces)
        }
        Family::CscSquared => {
            let e = Expr::int(2) / Expr::x().sin().powi(2);
            expr_family(family.clone(), e, vec![piece(0.0, 2.0, PI, 2.0, Confining)])
        }
        Family::TrigA { a, b } => {
            let e = (Expr::Const(a.clone()) + Expr::Const(b.clone()) * Expr::x().cos()) / Expr::x().sin().powi(2);
            let lo = rational_to_f64(&(a + b));
            let hi = rational_to_f64(&(a - b));
            expr_family(family.clone(), e, vec![piece(0.0, lo, PI, hi, Confining)])
        }
        Family::ZeroEnergyPartner { n, mu } => {
            if *n == 0 {
                return Err(Error::InvalidParameter("n must be at least 1".into()));
            }
            check_mu(mu)?;
            let v = zero_energy_partner(*n, mu);
            let c = pole_c(*n, rational_to_f64(mu));
            let far = ((n + 1) * (n + 2)) as f64;
            let near0 = (n * (n - 1)) as f64;
            let pieces = if *n == 1 {
                vec![
                    piece(-inf, far, -c, 2.0, PurelyRepulsive),
                    piece(-c, 2.0, inf, far, ScatteringWithBoundState),
                ]
            } else {
                vec![
                    piece(-inf, far, -c, 2.0, PurelyRepulsive),
                    piece(-c, 2.0, 0.0, near0, Confining),
                    piece(0.0, near0, inf, far, ScatteringWithBoundState),
                ]
            };
            PotentialSpec { family: family.clone(), evaluator: Func::rational(v), pieces }
        }
        Family::Custom(name) => {
            return Err(Error::InvalidParameter(format!("custom family '{name}' is not in the catalog")))
        }
    })
}

/// Both positive-`x` critical points of `6x(x³−2μ)/(x³+μ)²`, labeled by
/// curvature.
#[derive(Clone, Debug, Serialize)]
pub struct GoldenExtrema {
    pub mu: f64,
    pub phi: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub v_min: f64,
    pub v_max: f64,
    /// `x³/μ` at each extremum.
    pub cube_min: f64,
    pub cube_max: f64,
    /// Largest deviation of the cubes from `{2+3Φ, 2−3/Φ}`.
    pub cube_error: f64,
    /// `μ^{−2/3}·2Φ(2+3Φ)^{1/3}/(1+Φ)²` and its image under `Φ → −1/Φ`.
    pub formula_at_plus: f64,
    pub formula_at_minus: f64,
    /// Largest deviation of the two values from those formulas.
    pub value_error: f64,
    /// True when the point with cube `2+3Φ` is the maximum.
    pub plus_branch_is_max: bool,
}

fn golden_value(phi: f64) -> f64 {
    let c = 2.0 + 3.0 * phi;
    2.0 * phi * c.cbrt() / (1.0 + phi).powi(2)
}

pub fn golden_extrema(mu: f64) -> Result<GoldenExtrema> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
    }
    let q = rational_from_f64(mu);
    let v = eq10(&q);
    let d1 = v.derive();
    let d2 = d1.derive();
    let crit: Vec<_> = real_roots(d1.num()).into_iter().filter(|p| p.location > 0.0).collect();
    if crit.len() != 2 {
        return Err(Error::Domain(format!("expected two positive critical points, found {}", crit.len())));
    }
    let curvature = |x: f64| rational_to_f64(&d2.eval(&rational_from_f64(x)).unwrap());
    let (mut xmin, mut xmax) = (crit[0].location, crit[1].location);
    if curvature(xmin) < 0.0 {
        std::mem::swap(&mut xmin, &mut xmax);
    }
    let f = v.compile();
    let (v_min, v_max) = (f.eval(xmin)?, f.eval(xmax)?);
    let cube_min = xmin.powi(3) / mu;
    let cube_max = xmax.powi(3) / mu;
    let plus = 2.0 + 3.0 * PHI;
    let minus = 2.0 - 3.0 / PHI;
    let plus_branch_is_max = (cube_max - plus).abs() < (cube_min - plus).abs();
    let (cube_plus, cube_minus) = if plus_branch_is_max { (cube_max, cube_min) } else { (cube_min, cube_max) };
    let (v_plus, v_minus) = if plus_branch_is_max { (v_max, v_min) } else { (v_min, v_max) };
    let scale = mu.powf(-2.0 / 3.0);
    let formula_at_plus = scale * golden_value(PHI);
    let formula_at_minus = scale * golden_value(-1.0 / PHI);
    Ok(GoldenExtrema {
        mu,
        phi: PHI,
        x_min: xmin,
        x_max: xmax,
        v_min,
        v_max,
        cube_min,
        cube_max,
        cube_error: (cube_plus - plus).abs().max((cube_minus - minus).abs()),
        formula_at_plus,
        formula_at_minus,
        value_error: (v_plus - formula_at_plus).abs().max((v_minus - formula_at_minus).abs()),
        plus_branch_is_max,
    })
}

/// Result of the constructive trigonometric partner.
#[derive(Clone, Debug)]
pub struct TrigPartner {
    pub potential: PotentialSpec,
    /// Largest `|V₁ − ((7/4) − 2cos x)/sin²x|` on the check grid.
    pub max_deviation: f64,
    /// Largest `|W' − (csc x − ½cot x)|` on the grid, `W' = −φ'/φ`.
    pub wprime_deviation: f64,
    /// Largest `|W' − (csc x − cot(x/2))|` on the grid.
    pub printed_wprime_deviation: f64,
    pub seed_energy: f64,
}

/// Grid on `(0.1, π − 0.1)` used for the trigonometric checks.
pub fn trig_grid(count: usize) -> Vec<f64> {
    let (a, b) = (0.1, PI - 0.1);
    (0..count).map(|i| a + (b - a) * i as f64 / (count - 1) as f64).collect()
}

/// `(3/4)/sin²x` with seed `√(sin x)·cot(x/2)` at `E₀ = 1/4`.
pub fn trig_partner_build() -> Result<TrigPartner> {
    let v0 = catalog_get(&Family::TrigA { a: ratio(3, 4), b: rat(0) })?;
    let half = Expr::x() * Expr::frac(1, 2);
    let seed_expr = Expr::x().sin().powr(1, 2) * half.clone().cos() / half.sin();
    let seed = SeedSolution::expr(seed_expr, 0.25);
    let grid = trig_grid(50);
    let (chain, mut v1) = chain_build_on(&v0, std::slice::from_ref(&seed), &grid)?;
    let target = catalog_get(&Family::TrigA { a: ratio(7, 4), b: rat(-2) })?;
    v1.family = target.family.clone();
    v1.pieces = target.pieces.clone();
    let w = &chain.steps[0].wprime;
    let (mut dev, mut wdev, mut pdev) = (0.0f64, 0.0f64, 0.0f64);
    for &x in &grid {
        dev = dev.max((v1.eval(x)? - target.eval(x)?).abs());
        let wx = w.eval(x)?;
        let csc = 1.0 / x.sin();
        wdev = wdev.max((wx - (csc - 0.5 / x.tan())).abs());
        pdev = pdev.max((wx - (csc - 1.0 / (0.5 * x).tan())).abs());
    }
    if dev > 1e-10 {
        return Err(Error::Domain(format!("trigonometric partner deviates by {dev:e}")));
    }
    Ok(TrigPartner {
        potential: v1,
        max_deviation: dev,
        wprime_deviation: wdev,
        printed_wprime_deviation: pdev,
        seed_energy: seed.energy,
    })
}

/// Families with parameter schemas, for listings.
pub fn family_listing() -> serde_json::Value {
    json!([
        {"id": "free", "formula": "0", "params": {}},
        {"id": "37", "formula": "n(n+1)/x^2", "params": {"n": "integer >= 0"}},
        {"id": "38", "formula": "n(n+1) sec^2 x", "params": {"n": "integer >= 0"}},
        {"id": "39", "formula": "-n(n+1) cosh^-2 x", "params": {"n": "integer >= 0"}},
        {"id": "40", "formula": "n(n+1) sinh^-2 x", "params": {"n": "integer >= 0"}},
        {"id": "csc2", "formula": "2 csc^2 x", "params": {}},
        {"id": "10", "formula": "6x(x^3-2mu)/(x^3+mu)^2", "params": {"mu": "rational > 0"}},
        {"id": "22", "formula": "(2/x^2)(6x^10-18mu x^5+mu^2)/(x^5+mu)^2", "params": {"mu": "rational > 0"}},
        {"id": "32", "formula": "((n+1)(n+2)x^(4n+2)-6mu n(n+1)x^(2n+1)+mu^2 n(n-1))/(x^2(mu+x^(2n+1))^2)",
         "params": {"n": "integer >= 1", "mu": "rational > 0"}},
        {"id": "41", "formula": "(a + b cos x)/sin^2 x", "params": {"a": "rational", "b": "rational"}},
        {"id": "42", "formula": "(3/4)/sin^2 x", "params": {}},
        {"id": "44", "formula": "(7/4 - 2 cos x)/sin^2 x", "params": {}},
    ])
}

/// Resolves a family id and optional parameters, as used by the CLI.
pub fn family_from_id(id: &str, n: Option<u32>, mu: Option<Rational>) -> Result<Family> {
    let need_n = || n.ok_or_else(|| Error::InvalidParameter(format!("family {id} needs n")));
    let mu_or_one = || mu.clone().unwrap_or_else(|| rat(1));
    Ok(match id {
        "free" | "0" => Family::Free,
        "5" | "37" => Family::Centrifugal { n: need_n()? },
        "38" => Family::SecSquared { n: need_n()? },
        "39" => Family::SechSquared { n: need_n()? },
        "40" => Family::CschSquared { n: need_n()? },
        "csc2" => Family::CscSquared,
        "10" => Family::ZeroEnergyPartner { n: 1, mu: mu_or_one() },
        "22" => Family::ZeroEnergyPartner { n: 2, mu: mu_or_one() },
        "32" => Family::ZeroEnergyPartner { n: need_n()?, mu: mu_or_one() },
        "42" => Family::TrigA { a: ratio(3, 4), b: Rational::zero() },
        "44" => Family::TrigA { a: ratio(7, 4), b: rat(-2) },
        other => return Err(Error::InvalidParameter(format!("unknown family '{other}'"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::darboux::chain_build;

    #[test]
    fn family32_low_members_match_named_forms() {
        for mu in [rat(1), ratio(5, 2), rat(8)] {
            assert_eq!(zero_energy_partner(1, &mu), eq10(&mu));
            assert_eq!(zero_energy_partner(2, &mu), eq22(&mu));
        }
    }

    #[test]
    fn family32_equals_chain_output() {
        let free = catalog_get(&Family::Free).unwrap();
        for n in 1..=4 {
            let mu = ratio(3, 2);
            let (_, v) = chain_build(&free, &zero_energy_seeds(n, &mu)).unwrap();
            let diff = v.exact().unwrap() - &zero_energy_partner(n, &mu);
            assert!(diff.is_zero(), "n = {n}");
        }
    }

    #[test]
    fn tails_match_evaluator() {
        for n in 1..=4u32 {
            let mu = ratio(7, 3);
            let spec = catalog_get(&Family::ZeroEnergyPartner { n, mu: mu.clone() }).unwrap();
            let v = spec.exact().unwrap().compile();
            let c = pole_c(n, 7.0 / 3.0);
            let far = v.eval(1e6).unwrap() * 1e12;
            assert!((far - ((n + 1) * (n + 2)) as f64).abs() < 1e-6);
            let h = 1e-6;
            let near = v.eval(-c + h).unwrap() * h * h;
            assert!((near - 2.0).abs() < 1e-4);
            if n >= 2 {
                let z = v.eval(-1e-7).unwrap() * 1e-14;
                assert!((z - (n * (n - 1)) as f64).abs() < 1e-4);
            }
            let generic = PotentialSpec::from_rational(Family::Free, spec.exact().unwrap().clone());
            assert_eq!(generic.pieces.len(), spec.pieces.len());
            for (g, s) in generic.pieces.iter().zip(&spec.pieces) {
                assert!((g.hi.at - s.hi.at).abs() < 1e-12 || g.hi.at == s.hi.at);
                assert!((g.hi.strength.unwrap() - s.hi.strength.unwrap()).abs() < 1e-6);
                assert_eq!(g.character, s.character);
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(catalog_get(&Family::ZeroEnergyPartner { n: 2, mu: rat(-1) }).is_err());
        assert!(catalog_get(&Family::ZeroEnergyPartner { n: 0, mu: rat(1) }).is_err());
        let free = catalog_get(&Family::Centrifugal { n: 0 }).unwrap();
        assert!(free.exact().unwrap().is_zero());
    }

    #[test]
    fn golden_ratio_extrema() {
        let g = golden_extrema(1.0).unwrap();
        assert!(g.cube_error < 1e-8 && g.value_error < 1e-8);
        assert!(g.plus_branch_is_max);
        assert!((g.v_max - 0.8972).abs() < 1e-3 && (g.v_min + 4.46).abs() < 1e-2);
        let g8 = golden_extrema(8.0).unwrap();
        assert!((g8.x_max - 2.0 * g.x_max).abs() < 1e-10);
        assert!((g8.v_min - g.v_min / 4.0).abs() < 1e-10);
    }

    #[test]
    fn trig_partner() {
        let t = trig_partner_build().unwrap();
        assert!(t.max_deviation < 1e-10);
        assert!(t.wprime_deviation < 1e-12);
        assert!(t.printed_wprime_deviation > 0.1);
        assert!((t.potential.eval(PI / 2.0).unwrap() - 1.75).abs() < 1e-12);
        assert_eq!(t.seed_energy, 0.25);
    }
}
