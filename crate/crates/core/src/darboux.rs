//! Darboux factorization: superpotentials, partner potentials, intertwiners,
//! second solutions and multi-step chains.
//!
//! Conventions: `φ = exp(−W)`, so `W' = −φ'/φ`, `A = D + W'`, `A† = −D + W'`
//! and the partner of `V₀ = W'² − W'' + E₀` is `V₁ = W'² + W'' + E₀`.

use num_complex::Complex64;
use serde::Serialize;

use crate::analytic::Expr;
use crate::error::{Error, Result};
use crate::exactrat::{rat, rational_from_f64, rational_to_f64, Poly, Rational, RationalFunction};
use crate::func::{relative_schrodinger_residual, Func, FuncRepr};
use crate::potential::{DomainPiece, Family, PotentialSpec};

/// Relative residual accepted for seeds checked on a grid.
pub const SEED_TOLERANCE: f64 = 1e-8;

/// A (possibly unphysical) solution `φ` of `−φ'' + V₀φ = E₀φ`.
#[derive(Clone, Debug)]
pub struct SeedSolution {
    pub phi: Func,
    pub energy: f64,
    pub exact_energy: Option<Rational>,
}

impl SeedSolution {
    pub fn rational(phi: RationalFunction, energy: Rational) -> SeedSolution {
        SeedSolution {
            phi: Func::rational(phi),
            energy: rational_to_f64(&energy),
            exact_energy: Some(energy),
        }
    }

    /// Expression seed. Rational trees are converted, and then the energy is
    /// taken as the exact value of the float.
    pub fn expr(phi: Expr, energy: f64) -> SeedSolution {
        let phi = Func::expr(phi);
        let exact_energy = phi.as_rational().map(|_| rational_from_f64(energy));
        SeedSolution { phi, energy, exact_energy }
    }
}

#[derive(Clone, Debug)]
pub struct DarbouxStep {
    pub wprime: Func,
    pub energy: f64,
    pub exact_energy: Option<Rational>,
    /// Seed the step was built from.
    pub seed: Func,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondSolutionMethod {
    ClosedFormMonomial,
    NumericQuadrature,
}

/// `W' = −φ'/φ`.
pub fn superpotential(seed: &SeedSolution) -> Result<Func> {
    if let Some(phi) = seed.phi.as_rational() {
        if phi.is_zero() {
            return Err(Error::InvalidParameter("seed is identically zero".into()));
        }
        return Ok(Func::rational(-(phi.derive().checked_div(phi)?)));
    }
    let mut seen = false;
    let mut nonzero = false;
    for i in 0..32 {
        let x = -3.1 + 0.2 * i as f64;
        if let Ok(v) = seed.phi.eval(x) {
            seen = true;
            nonzero |= v != 0.0;
        }
    }
    if seen && !nonzero {
        return Err(Error::InvalidParameter("seed is identically zero".into()));
    }
    Ok(Func::NegLogDeriv(Box::new(seed.phi.clone())))
}

pub fn darboux_step(seed: &SeedSolution) -> Result<DarbouxStep> {
    Ok(DarbouxStep {
        wprime: superpotential(seed)?,
        energy: seed.energy,
        exact_energy: seed.exact_energy.clone(),
        seed: seed.phi.clone(),
    })
}

/// `V₁ = W'² + W'' + E₀`, exact when `W'` and `E₀` are rational.
pub fn partner_potential(step: &DarbouxStep) -> PotentialSpec {
    partner_potential_on(step, vec![DomainPiece::whole_line()])
}

/// As [`partner_potential`], with the piece decomposition supplied for
/// non-rational steps. Rational steps derive their pieces from the poles.
pub fn partner_potential_on(step: &DarbouxStep, pieces: Vec<DomainPiece>) -> PotentialSpec {
    let family = Family::Custom("darboux partner".into());
    if let (Some(w), Some(e0)) = (step.wprime.as_rational(), &step.exact_energy) {
        let v = &(&(w * w) + &w.derive()) + &RationalFunction::constant(e0.clone());
        return PotentialSpec::from_rational(family, v);
    }
    PotentialSpec {
        family,
        evaluator: Func::Partner { wprime: Box::new(step.wprime.clone()), e0: step.energy },
        pieces,
    }
}

/// `Aψ = ψ' + W'ψ`.
pub fn intertwine(step: &DarbouxStep, psi: &Func) -> Func {
    if let (Some(w), Some(p)) = (step.wprime.as_rational(), psi.as_rational()) {
        return Func::rational(&p.derive() + &(w * p));
    }
    Func::Intertwined { wprime: Box::new(step.wprime.clone()), inner: Box::new(psi.clone()) }
}

/// `A†ψ = −ψ' + W'ψ`.
pub fn co_intertwine(step: &DarbouxStep, psi: &Func) -> Func {
    if let (Some(w), Some(p)) = (step.wprime.as_rational(), psi.as_rational()) {
        return Func::rational(&(w * p) - &p.derive());
    }
    Func::CoIntertwined { wprime: Box::new(step.wprime.clone()), inner: Box::new(psi.clone()) }
}

/// `ψ₂ = ψ₁ ∫_{x0}^{x} ψ₁⁻²`.
///
/// For a monomial `ψ₁ = a xᵖ` the closed form `x^{1−p}/(a(1−2p))` is returned
/// (its Wronskian with `ψ₁` is exactly 1, and `x0` is irrelevant).
pub fn second_solution(psi1: &Func, x0: f64, method: SecondSolutionMethod) -> Result<Func> {
    match method {
        SecondSolutionMethod::ClosedFormMonomial => {
            let (a, p) = psi1
                .as_rational()
                .and_then(monomial_parts)
                .ok_or_else(|| Error::Unsupported("closed form needs a monomial a*x^p".into()))?;
            let c = a * rat(1 - 2 * p);
            let inv = rat(1) / c;
            Ok(Func::rational(RationalFunction::power(inv, (1 - p) as i32)))
        }
        SecondSolutionMethod::NumericQuadrature => {
            psi1.eval(x0).and_then(|v| {
                if v == 0.0 {
                    Err(Error::ZeroOnPath { location: x0 })
                } else {
                    Ok(())
                }
            })?;
            Ok(Func::SecondSolution { inner: Box::new(psi1.clone()), x0 })
        }
    }
}

/// `(a, p)` with `f = a xᵖ`, if `f` is a monomial.
fn monomial_parts(f: &RationalFunction) -> Option<(Rational, i64)> {
    let single = |p: &Poly| p.coeffs().iter().filter(|c| !num_traits::Zero::is_zero(*c)).count() == 1;
    if f.is_zero() || !single(f.num()) || !single(f.den()) {
        return None;
    }
    let p = f.num().degree()? as i64 - f.den().degree()? as i64;
    Some((f.num().lead() / f.den().lead(), p))
}

/// `W(f, g) = f g' − f' g` at `x`.
pub fn wronskian(f: &Func, g: &Func, x: f64) -> Result<f64> {
    let a = f.series(x, 1)?;
    let b = g.series(x, 1)?;
    Ok(a.value() * b.derivative(1) - a.derivative(1) * b.value())
}

/// Steps applied in order to a source potential.
#[derive(Clone, Debug)]
pub struct DarbouxChain {
    pub source: PotentialSpec,
    pub steps: Vec<DarbouxStep>,
}

#[derive(Serialize)]
struct StepDump {
    wprime: FuncRepr,
    energy: f64,
    exact_energy: Option<String>,
}

#[derive(Serialize)]
struct ChainDump {
    source: FuncRepr,
    steps: Vec<StepDump>,
}

impl DarbouxChain {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// `A_n ⋯ A₁ ψ`.
    pub fn intertwine_all(&self, psi: &Func) -> Func {
        self.steps.iter().fold(psi.clone(), |acc, s| intertwine(s, &acc))
    }

    /// Intertwiners of the first `k` steps applied to `psi`.
    pub fn intertwine_prefix(&self, k: usize, psi: &Func) -> Func {
        self.steps[..k].iter().fold(psi.clone(), |acc, s| intertwine(s, &acc))
    }

    pub fn to_json(&self) -> String {
        let dump = ChainDump {
            source: self.source.evaluator.repr(),
            steps: self
                .steps
                .iter()
                .map(|s| StepDump {
                    wprime: s.wprime.repr(),
                    energy: s.energy,
                    exact_energy: s.exact_energy.as_ref().map(|e| e.to_string()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&dump).expect("chain dump serializes")
    }
}

/// Default validation grid: 50 points in `(−4, 4)`, offset to avoid the
/// integers and simple rationals where catalog poles sit.
pub fn default_grid() -> Vec<f64> {
    (0..50).map(|i| -3.93 + 0.1607 * i as f64).collect()
}

/// Checks that `seed` solves `v`. Exact when both are rational, otherwise by
/// the largest relative residual over `grid`.
pub fn validate_seed(v: &Func, seed: &SeedSolution, grid: &[f64], step: usize) -> Result<()> {
    let numeric = || -> f64 {
        grid.iter()
            .filter_map(|&x| relative_schrodinger_residual(v, &seed.phi, seed.energy, x).ok())
            .fold(0.0, f64::max)
    };
    if let (Some(vr), Some(phi), Some(e)) = (v.as_rational(), seed.phi.as_rational(), &seed.exact_energy) {
        let shifted = vr - &RationalFunction::constant(e.clone());
        let res = &(&shifted * phi) - &phi.derive().derive();
        if res.is_zero() {
            return Ok(());
        }
        return Err(Error::SeedValidation { step, residual: numeric().max(f64::MIN_POSITIVE) });
    }
    let evaluated = grid
        .iter()
        .filter(|&&x| relative_schrodinger_residual(v, &seed.phi, seed.energy, x).is_ok())
        .count();
    if evaluated < grid.len().min(10) {
        return Err(Error::Domain(format!(
            "seed of step {step} evaluable at only {evaluated} grid points"
        )));
    }
    let worst = numeric();
    if worst > SEED_TOLERANCE {
        return Err(Error::SeedValidation { step, residual: worst });
    }
    Ok(())
}

pub fn chain_build(v0: &PotentialSpec, seeds: &[SeedSolution]) -> Result<(DarbouxChain, PotentialSpec)> {
    chain_build_on(v0, seeds, &default_grid())
}

/// Builds the chain, validating each seed against the running potential on
/// `grid` (points where evaluation fails are skipped).
pub fn chain_build_on(
    v0: &PotentialSpec,
    seeds: &[SeedSolution],
    grid: &[f64],
) -> Result<(DarbouxChain, PotentialSpec)> {
    let mut current = v0.clone();
    let mut steps = Vec::with_capacity(seeds.len());
    for (i, seed) in seeds.iter().enumerate() {
        validate_seed(&current.evaluator, seed, grid, i + 1)?;
        let step = darboux_step(seed)?;
        current = partner_potential_on(&step, current.pieces.clone());
        steps.push(step);
    }
    if !seeds.is_empty() {
        current.family = Family::Custom(format!("{}-step Darboux chain", seeds.len()));
    }
    Ok((DarbouxChain { source: v0.clone(), steps }, current))
}

/// Factor `(W'(∞) + ik)/(W'(∞) − ik)` acquired by the S-matrix through one
/// step; an infinite `W'(∞)` gives 1.
pub fn smatrix_step_factor(k: f64, w_inf: f64) -> Complex64 {
    if w_inf.is_infinite() {
        return Complex64::new(1.0, 0.0);
    }
    Complex64::new(w_inf, k) / Complex64::new(w_inf, -k)
}

pub fn chain_smatrix_compose<F>(s_prev: F, w_inf: f64) -> impl Fn(f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    move |k| s_prev(k) * smatrix_step_factor(k, w_inf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactrat::ratio;

    fn free() -> PotentialSpec {
        PotentialSpec::from_rational(Family::Free, RationalFunction::zero())
    }

    fn xpow(k: i32) -> RationalFunction {
        RationalFunction::power(rat(1), k)
    }

    #[test]
    fn superpotential_examples() {
        let w = superpotential(&SeedSolution::rational(RationalFunction::x(), rat(0))).unwrap();
        assert_eq!(w.as_rational().unwrap(), &RationalFunction::power(rat(-1), -1));
        let w = superpotential(&SeedSolution::expr(Expr::x().cosh(), -1.0)).unwrap();
        for x in [-2.0, 0.3, 1.7] {
            assert!((w.eval(x).unwrap() + f64::tanh(x)).abs() < 1e-15);
        }
        let w = superpotential(&SeedSolution::rational(RationalFunction::constant(rat(3)), rat(0))).unwrap();
        assert!(w.as_rational().unwrap().is_zero());
        assert!(superpotential(&SeedSolution::rational(RationalFunction::zero(), rat(0))).is_err());
    }

    #[test]
    fn partner_examples() {
        let s = darboux_step(&SeedSolution::rational(RationalFunction::x(), rat(0))).unwrap();
        assert_eq!(partner_potential(&s).exact().unwrap(), &RationalFunction::power(rat(2), -2));
        let s = darboux_step(&SeedSolution::expr(Expr::x().cosh(), -1.0)).unwrap();
        let v = partner_potential(&s);
        for x in [-1.5, 0.0, 0.8, 3.0] {
            let want = -2.0 / f64::cosh(x).powi(2);
            assert!((v.eval(x).unwrap() - want).abs() < 1e-14);
        }
        let s = darboux_step(&SeedSolution::rational(RationalFunction::one(), rat(0))).unwrap();
        assert!(partner_potential(&s).exact().unwrap().is_zero());
    }

    #[test]
    fn eq10_chain_and_intertwined_exponential() {
        let mu = rat(2);
        let phi = &RationalFunction::power(mu.clone(), -1) + &xpow(2);
        let seeds = [
            SeedSolution::rational(RationalFunction::x(), rat(0)),
            SeedSolution::rational(phi, rat(0)),
        ];
        let (chain, v) = chain_build(&free(), &seeds).unwrap();
        let x3 = xpow(3);
        let num = &(&x3 - &RationalFunction::constant(rat(4))) * &RationalFunction::power(rat(6), 1);
        let den = (&x3 + &RationalFunction::constant(rat(2))).pow(2).unwrap();
        assert_eq!(v.exact().unwrap(), &num.checked_div(&den).unwrap());

        let kappa = 0.7;
        let psi = Func::expr((-Expr::real(kappa) * Expr::x()).exp());
        let out = chain.intertwine_all(&psi);
        for x in [0.4, 1.3, 2.9] {
            let want = (kappa * kappa + 3.0 * x * (1.0 + kappa * x) / (2.0 + x * x * x)) * (-kappa * x).exp();
            assert!((out.eval(x).unwrap() - want).abs() < 1e-13);
        }
    }

    #[test]
    fn centrifugal_from_monomials() {
        let seeds: Vec<_> = (1..=3).map(|k| SeedSolution::rational(xpow(k), rat(0))).collect();
        let (chain, v) = chain_build(&free(), &seeds).unwrap();
        assert_eq!(v.exact().unwrap(), &RationalFunction::power(rat(12), -2));
        assert_eq!(chain.len(), 3);
        let (empty, v) = chain_build(&free(), &[]).unwrap();
        assert!(empty.is_empty() && v.exact().unwrap().is_zero());
    }

    #[test]
    fn sech_intertwiner_on_plane_wave() {
        let s = darboux_step(&SeedSolution::expr(Expr::x().cosh(), -1.0)).unwrap();
        let k = 1.3;
        let re = intertwine(&s, &Func::expr((Expr::real(k) * Expr::x()).cos()));
        let im = intertwine(&s, &Func::expr((Expr::real(k) * Expr::x()).sin()));
        for x in [-2.0, 0.5, 1.5] {
            let (c, sn, t) = ((k * x).cos(), (k * x).sin(), x.tanh());
            // (ik − tanh x)(cos kx + i sin kx)
            assert!((re.eval(x).unwrap() - (-k * sn - t * c)).abs() < 1e-14);
            assert!((im.eval(x).unwrap() - (k * c - t * sn)).abs() < 1e-14);
        }
    }

    #[test]
    fn bad_seed_names_step() {
        let seeds = [
            SeedSolution::rational(RationalFunction::x(), rat(0)),
            SeedSolution::rational(xpow(3), rat(0)),
        ];
        match chain_build(&free(), &seeds) {
            Err(Error::SeedValidation { step, residual }) => assert!(step == 2 && residual > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn second_solutions() {
        let inv = Func::rational(xpow(-1));
        let s = second_solution(&inv, 1.0, SecondSolutionMethod::ClosedFormMonomial).unwrap();
        assert_eq!(s.as_rational().unwrap(), &RationalFunction::power(ratio(1, 3), 2));
        let one = Func::rational(RationalFunction::one());
        let s = second_solution(&one, 0.0, SecondSolutionMethod::ClosedFormMonomial).unwrap();
        assert_eq!(s.as_rational().unwrap(), &RationalFunction::x());
        let q = second_solution(&inv, 1.0, SecondSolutionMethod::NumericQuadrature).unwrap();
        for x in [0.5, 2.0, 3.0] {
            assert!((wronskian(&inv, &q, x).unwrap() - 1.0).abs() < 1e-9);
            assert!((q.eval(x).unwrap() - (x * x - 1.0 / x) / 3.0).abs() < 1e-9);
        }
        let cosh = Func::expr(Expr::x().cosh());
        let q = second_solution(&cosh, 0.0, SecondSolutionMethod::NumericQuadrature).unwrap();
        assert!((q.eval(1.2).unwrap() - 1.2f64.sinh()).abs() < 1e-9);
        assert!(second_solution(&cosh, 0.0, SecondSolutionMethod::ClosedFormMonomial).is_err());
    }

    #[test]
    fn smatrix_composition() {
        let s = chain_smatrix_compose(|_| Complex64::new(1.0, 0.0), 0.0);
        assert!((s(0.8) + 1.0).norm() < 1e-15);
        let s = chain_smatrix_compose(|_| Complex64::new(-1.0, 0.0), 0.0);
        assert!((s(2.0) - 1.0).norm() < 1e-15);
        let s = chain_smatrix_compose(|k: f64| Complex64::from_polar(1.0, k), f64::INFINITY);
        assert!((s(0.3) - Complex64::from_polar(1.0, 0.3)).norm() < 1e-15);
        let s = chain_smatrix_compose(|k: f64| Complex64::from_polar(1.0, k), 1.7);
        assert!((s(0.9).norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn chain_json_lists_steps() {
        let seeds = [SeedSolution::rational(RationalFunction::x(), rat(0))];
        let (chain, _) = chain_build(&free(), &seeds).unwrap();
        let v: serde_json::Value = serde_json::from_str(&chain.to_json()).unwrap();
        assert_eq!(v["steps"].as_array().unwrap().len(), 1);
        assert_eq!(v["steps"][0]["wprime"]["kind"], "rational");
    }
}
