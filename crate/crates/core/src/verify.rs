//! End-to-end verification report. Each criterion runs a group of checks;
//! `Literal` checks decide the verdict, `Supplementary` checks document the
//! corrected reading where a quoted closed form is inconsistent.

use std::f64::consts::PI;
use std::time::Instant;

use num_complex::Complex64;
use rand::{rngs::StdRng, Rng, SeedableRng};
use serde::Serialize;

use crate::analytic::Expr;
use crate::catalog::{catalog_get, eq10, eq22, golden_extrema, trig_grid, trig_partner_build, zero_energy_partner, zero_energy_seeds};
use crate::darboux::{chain_build, second_solution, wronskian, SecondSolutionMethod};
use crate::error::{Error, Result};
use crate::exactrat::{rat, ratio, Poly, Rational, RationalFunction};
use crate::func::{schrodinger_residual, Func};
use crate::kdv::{b3_at_mu, inverse_square, kdv_residual_exact, kdv_residual_numeric, rational_b3, sample_points, soliton, soliton_as_quoted};
use crate::potential::Family;
use crate::quad::integrate;
use crate::scattering::{
    analytic_smatrix, constructed_smatrix, geometric_grid, levinson_from_samples, numeric_phase_shift, phase_samples,
    sech_transmission, sech_transmission_analytic, default_radius, ScatteringPiece,
};
use crate::schrodinger::{numerov_integrate, piece_eigen, Grid, GridOptions, Start};
use crate::spectral::{asymptotic_label, spectral_equation_build, spectral_roots, SpectralEquation};

/// Tolerance profile; `Strict` halves every numeric tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Default,
    Strict,
}

impl Profile {
    fn tol(self, t: f64) -> f64 {
        match self {
            Profile::Default => t,
            Profile::Strict => 0.5 * t,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Literal,
    Supplementary,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub claim: String,
    pub computed: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub role: Role,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOutcome {
    pub criterion: u8,
    pub title: &'static str,
    pub checks: Vec<Check>,
    pub seconds: f64,
    pub time_limit: Option<f64>,
    pub pass: bool,
}

impl CriterionOutcome {
    /// One summary line, e.g. for test logs.
    pub fn line(&self) -> String {
        let failed: Vec<&str> = self
            .checks
            .iter()
            .filter(|c| c.role == Role::Literal && !c.pass)
            .map(|c| c.name.as_str())
            .collect();
        let mut s = format!(
            "criterion {:>2} [{}] {} ({:.2} s)",
            self.criterion,
            if self.pass { "PASS" } else { "FAIL" },
            self.title,
            self.seconds
        );
        if !failed.is_empty() {
            s.push_str(&format!(" failing: {}", failed.join(", ")));
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub profile: Profile,
    pub criteria: Vec<CriterionOutcome>,
    pub pass: bool,
}

impl Report {
    /// `name: pass|fail` for every check.
    pub fn summary_lines(&self) -> Vec<String> {
        self.criteria
            .iter()
            .flat_map(|c| c.checks.iter())
            .map(|c| format!("{}: {}", c.name, if c.pass { "pass" } else { "fail" }))
            .collect()
    }
}

struct Ctx {
    profile: Profile,
    checks: Vec<Check>,
}

impl Ctx {
    #[allow(clippy::too_many_arguments)]
    fn push(&mut self, name: &str, claim: &str, computed: f64, reference: f64, tolerance: f64, pass: bool, role: Role) {
        self.checks.push(Check {
            name: name.into(),
            claim: claim.into(),
            computed,
            reference,
            tolerance,
            pass,
            role,
            note: None,
        });
    }

    /// `computed ≤ tol` (reference 0).
    fn below(&mut self, name: &str, claim: &str, computed: f64, tol: f64, role: Role) {
        let t = self.profile.tol(tol);
        self.push(name, claim, computed, 0.0, t, computed <= t, role);
    }

    /// `|computed − reference| ≤ tol`.
    fn close(&mut self, name: &str, claim: &str, computed: f64, reference: f64, tol: f64, role: Role) {
        let t = self.profile.tol(tol);
        self.push(name, claim, computed, reference, t, (computed - reference).abs() <= t, role);
    }

    fn exact(&mut self, name: &str, claim: &str, holds: bool, role: Role) {
        let v = if holds { 1.0 } else { 0.0 };
        self.push(name, claim, v, 1.0, 0.0, holds, role);
    }

    fn note(&mut self, text: impl Into<String>) {
        if let Some(c) = self.checks.last_mut() {
            c.note = Some(text.into());
        }
    }
}

pub const CRITERIA: [(u8, &str, Option<f64>); 11] = [
    (1, "exact regeneration of the rational chain", Some(1.0)),
    (2, "single bound state of the first rational partner", Some(5.0)),
    (3, "S-matrix of the first rational partner", Some(30.0)),
    (4, "constant phase shift and zero-energy state", None),
    (5, "confining spectra", Some(60.0)),
    (6, "repulsive-side span and S-matrices", None),
    (7, "golden-ratio extrema", None),
    (8, "reflectionless transmission", None),
    (9, "KdV solutions", None),
    (10, "trigonometric family", None),
    (11, "randomized property checks", Some(120.0)),
];

pub fn run_criterion(criterion: u8, profile: Profile) -> Result<CriterionOutcome> {
    let &(_, title, time_limit) = CRITERIA
        .iter()
        .find(|c| c.0 == criterion)
        .ok_or_else(|| Error::InvalidParameter(format!("no criterion {criterion}")))?;
    let mut ctx = Ctx { profile, checks: Vec::new() };
    let start = Instant::now();
    let outcome = match criterion {
        1 => regeneration(&mut ctx),
        2 => bound_state(&mut ctx),
        3 => first_smatrix(&mut ctx),
        4 => constant_phase(&mut ctx),
        5 => confining(&mut ctx),
        6 => repulsive(&mut ctx),
        7 => golden(&mut ctx),
        8 => reflectionless(&mut ctx),
        9 => kdv(&mut ctx),
        10 => trig(&mut ctx),
        _ => properties(&mut ctx),
    };
    let seconds = start.elapsed().as_secs_f64();
    if let Err(e) = outcome {
        ctx.exact("internal_error", "criterion ran to completion", false, Role::Literal);
        ctx.note(e.to_string());
    }
    let in_time = time_limit.is_none_or(|t| seconds <= t);
    let pass = in_time && ctx.checks.iter().filter(|c| c.role == Role::Literal).all(|c| c.pass);
    Ok(CriterionOutcome { criterion, title, checks: ctx.checks, seconds, time_limit, pass })
}

pub fn verify_all(profile: Profile) -> Report {
    let criteria: Vec<_> = CRITERIA
        .iter()
        .map(|c| run_criterion(c.0, profile).expect("listed criterion"))
        .collect();
    let pass = criteria.iter().all(|c| c.pass);
    Report { profile, criteria, pass }
}

fn regeneration(ctx: &mut Ctx) -> Result<()> {
    let mu = rat(1);
    let free = catalog_get(&Family::Free)?;
    for n in 1..=4u32 {
        let seeds = zero_energy_seeds(n, &mu);
        let (_, v) = chain_build(&free, &seeds)?;
        let got = v.exact().cloned().ok_or_else(|| Error::Domain("chain lost exactness".into()))?;
        let ok = (&got - &zero_energy_partner(n, &mu)).is_zero();
        ctx.exact(&format!("chain_n{n}_rational_partner"), "chain from V=0 equals the closed form exactly", ok, Role::Literal);
        if n == 1 {
            let (_, v1) = chain_build(&free, &seeds[..1])?;
            let two = RationalFunction::power(rat(2), -2);
            let ok = v1.exact().is_some_and(|f| (f - &two).is_zero());
            ctx.exact("chain_first_step_inverse_square", "one step from V=0 gives 2/x^2", ok, Role::Literal);
            ctx.exact("chain_n1_first_partner", "two steps give 6x(x^3-2mu)/(x^3+mu)^2", (&got - &eq10(&mu)).is_zero(), Role::Literal);
        }
        if n == 2 {
            ctx.exact("chain_n2_second_partner", "four steps give the second rational partner", (&got - &eq22(&mu)).is_zero(), Role::Literal);
        }
    }
    Ok(())
}

/// `(x/c+1)²/(x²−cx+c²)·e^{−x/c}` at `c = 1`.
fn first_partner_ground(x: f64) -> f64 {
    (x + 1.0).powi(2) / (x * x - x + 1.0) * (-x).exp()
}

fn bound_state(ctx: &mut Ctx) -> Result<()> {
    let spec = catalog_get(&Family::ZeroEnergyPartner { n: 1, mu: rat(1) })?;
    let states = piece_eigen(&spec, 1, (-20.0, -1e-3), 5, GridOptions::default())?;
    ctx.close("first_partner_level_count", "exactly one level below zero", states.len() as f64, 1.0, 0.0, Role::Literal);
    let st = states.first().ok_or_else(|| Error::Domain("no bound state found".into()))?;
    ctx.close("first_partner_ground_energy", "E = -1/c^2 = -1", st.energy, -1.0, 1e-6, Role::Literal);
    let norm = integrate(|x| Ok(first_partner_ground(x).powi(2)), -1.0, 60.0, 1e-13)?.sqrt();
    let sign = st.value_at(1.0).unwrap_or(1.0).signum();
    let mut worst = 0.0f64;
    for i in 0..=890 {
        let x = -0.9 + 0.01 * i as f64;
        let num = st.value_at(x).ok_or_else(|| Error::Domain(format!("{x} outside the grid")))?;
        worst = worst.max((sign * num - first_partner_ground(x) / norm).abs());
    }
    ctx.below("first_partner_ground_wavefunction", "normalized state matches the closed form on [-0.9, 8]", worst, 1e-6, Role::Literal);
    Ok(())
}

fn first_smatrix(ctx: &mut Ctx) -> Result<()> {
    let mu = rat(1);
    let (right, ir) = ScatteringPiece::FirstPartnerRight.realize(&mu)?;
    let (left, il) = ScatteringPiece::FirstPartnerLeft.realize(&mu)?;
    let ks = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];
    let (mut dev, mut prod) = (0.0f64, 0.0f64);
    for k in ks {
        let sr = numeric_phase_shift(&right, ir, k, default_radius(k), 1e-3)?.s;
        let sl = numeric_phase_shift(&left, il, k, default_radius(k), 1e-3)?.s;
        let want = analytic_smatrix(ScatteringPiece::FirstPartnerRight, k, 1.0)?;
        dev = dev.max((sr - want).norm());
        prod = prod.max((sr * sl - 1.0).norm());
    }
    ctx.below("first_partner_smatrix", "|S - (1-ik)/(1+ik)| on six momenta", dev, 1e-4, Role::Literal);
    ctx.below("first_partner_left_right_product", "S_left * S_right = 1", prod, 1e-4, Role::Literal);
    Ok(())
}

fn constant_phase(ctx: &mut Ctx) -> Result<()> {
    let mu = rat(1);
    let ks = geometric_grid(0.5, 8.0, 16);
    for n in [2u32, 3] {
        let piece = ScatteringPiece::Right(n);
        let (spec, idx) = piece.realize(&mu)?;
        let want = analytic_smatrix(piece, 1.0, 1.0)?;
        let dev = phase_samples(&spec, idx, &ks, 1e-3)?
            .iter()
            .map(|s| (s.s - want).norm())
            .fold(0.0, f64::max);
        ctx.below(&format!("right_piece_n{n}_constant_smatrix"), "S = (-1)^(n+1) on [0.5, 8]", dev, 1e-3, Role::Literal);
        let v = zero_energy_partner(n, &mu);
        let psi = RationalFunction::power(rat(1), n as i32)
            .checked_div(&(&RationalFunction::constant(mu.clone()) + &RationalFunction::power(rat(1), 2 * n as i32 + 1)))?;
        let residual = &(&v * &psi) - &psi.derive().derive();
        ctx.exact(&format!("zero_energy_state_n{n}_residual"), "x^n/(mu+x^(2n+1)) solves E = 0 exactly", residual.is_zero(), Role::Literal);
    }
    Ok(())
}

fn numerov_levels(n: u32, count: usize) -> Result<Vec<f64>> {
    let spec = catalog_get(&Family::ZeroEnergyPartner { n, mu: rat(1) })?;
    let grid = Grid::new(&spec, &spec.pieces[1], GridOptions::default())?;
    crate::schrodinger::eigenvalues(&grid, (0.0, 2000.0), count)
}

fn worst_relative(levels: &[f64], eq: &SpectralEquation) -> f64 {
    let roots = spectral_roots(eq, levels.len());
    levels
        .iter()
        .zip(&roots)
        .map(|(e, r)| (e - r.energy).abs() / r.energy)
        .fold(0.0, f64::max)
}

/// True when `|κ_m − target(m)|` decreases for `m ≥ 10`.
fn tail_decreasing(eq: &SpectralEquation, target: impl Fn(usize) -> f64) -> (bool, f64) {
    let roots = spectral_roots(eq, 25);
    let gaps: Vec<f64> = roots[9..].iter().map(|r| (r.kappa - target(r.m)).abs()).collect();
    (gaps.windows(2).all(|w| w[1] < w[0]), *gaps.last().expect("nonempty"))
}

fn confining(ctx: &mut Ctx) -> Result<()> {
    for n in [2u32, 3] {
        let eq = spectral_equation_build(n, 1.0)?;
        let levels = numerov_levels(n, 10)?;
        if levels.len() < 10 {
            return Err(Error::Domain(format!("only {} levels found for n = {n}", levels.len())));
        }
        ctx.below(&format!("confining_n{n}_quoted_equation"), "first 10 roots of the quoted equation match Numerov", worst_relative(&levels, &eq), 1e-6, Role::Literal);
        if eq.printed_matches == Some(false) {
            ctx.note("the quoted equation is not the one the chain produces; see the constructed check");
        }
        let built = eq.with_constructed();
        ctx.below(&format!("confining_n{n}_constructed_equation"), "first 10 roots of the chain-built equation match Numerov", worst_relative(&levels, &built), 1e-6, Role::Supplementary);
        let (dec, last) = tail_decreasing(&eq, |m| m as f64 * PI);
        ctx.exact(&format!("confining_n{n}_roots_approach_m_pi"), "|kappa_m - m*pi| decreasing for m >= 10", dec, Role::Literal);
        ctx.note(format!("|kappa_25 - 25 pi| = {last:.4}"));
        let (dec, last) = tail_decreasing(&built, |m| asymptotic_label(n, m) * PI);
        ctx.exact(&format!("confining_n{n}_roots_approach_shifted"), "|kappa_m - (m + n/2)*pi| decreasing for m >= 10", dec, Role::Supplementary);
        ctx.note(format!("|kappa_25 - (25 + n/2) pi| = {last:.2e}"));
    }
    Ok(())
}

fn repulsive(ctx: &mut Ctx) -> Result<()> {
    let ks = geometric_grid(0.05, 20.0, 60);
    for n in [2u32, 3] {
        let piece = ScatteringPiece::Left(n);
        let (spec, idx) = piece.realize(&rat(1))?;
        let samples = phase_samples(&spec, idx, &ks, 1e-3)?;
        let span = levinson_from_samples(&spec, idx, &samples, piece.bound_states())?;
        let want = -(n as f64) * PI / 2.0;
        ctx.close(&format!("left_piece_n{n}_span"), "delta(0.05) - delta(20) = -n*pi/2", span.raw_span, want, 0.05, Role::Literal);
        ctx.note("finite-k endpoints carry the O(1/k) tail of the phase");
        ctx.close(&format!("left_piece_n{n}_span_extrapolated"), "extrapolated delta(0) - delta(inf) = -n*pi/2", span.span, want, 0.05, Role::Supplementary);
        let (mut quoted, mut built) = (0.0f64, 0.0f64);
        for s in &samples {
            quoted = quoted.max((s.s - analytic_smatrix(piece, s.k, 1.0)?).norm());
            built = built.max((s.s - constructed_smatrix(piece, s.k, 1.0)?).norm());
        }
        ctx.below(&format!("left_piece_n{n}_quoted_smatrix"), "|S_num - S_closed| on the k-grid", quoted, 1e-3, Role::Literal);
        ctx.below(&format!("left_piece_n{n}_constructed_smatrix"), "|S_num - S_chain| on the k-grid", built, 1e-3, Role::Supplementary);
    }
    Ok(())
}

fn golden(ctx: &mut Ctx) -> Result<()> {
    let g = golden_extrema(1.0)?;
    ctx.below("golden_cubes", "critical-point cubes are 2+3*Phi and 2-3/Phi", g.cube_error, 1e-8, Role::Literal);
    ctx.below("golden_values", "extremal values match the golden-ratio formula", g.value_error, 1e-8, Role::Literal);
    ctx.exact("golden_labels", "2+3*Phi is the maximum by curvature", g.plus_branch_is_max, Role::Supplementary);
    ctx.note(format!("maximum V = {:.6} at x = {:.6}; minimum V = {:.6} at x = {:.6}", g.v_max, g.x_max, g.v_min, g.x_min));
    Ok(())
}

fn reflectionless(ctx: &mut Ctx) -> Result<()> {
    let (mut r, mut phase) = (0.0f64, 0.0f64);
    for k in [0.5, 1.0, 2.0] {
        let s = sech_transmission(1, k, 20.0, 1e-3)?;
        r = r.max(s.r.norm());
        let want = Complex64::new(-1.0, k) / Complex64::new(1.0, k);
        phase = phase.max((s.t / want).arg().abs());
    }
    ctx.below("sech_n1_reflection", "|r(k)| off -2 cosh^-2 x", r, 1e-6, Role::Literal);
    ctx.below("sech_n1_transmission_phase", "arg t matches (ik-1)/(ik+1)", phase, 1e-4, Role::Literal);
    let s = sech_transmission(2, 1.0, 20.0, 1e-3)?;
    ctx.below("sech_n2_product", "t for -6 cosh^-2 x is the two-factor product", (s.t - sech_transmission_analytic(2, 1.0)).norm(), 1e-4, Role::Literal);
    Ok(())
}

fn kdv(ctx: &mut Ctx) -> Result<()> {
    ctx.exact("kdv_rational_time_dependent", "6x(x^3-24t)/(x^3+12t)^2 has zero residual", kdv_residual_exact(&rational_b3()).is_zero(), Role::Literal);
    ctx.exact("kdv_inverse_square", "2/x^2 has zero residual", kdv_residual_exact(&inverse_square()).is_zero(), Role::Literal);
    let pts = sample_points(100, (-5.0, 5.0), (0.0, 2.0), 11);
    let quoted = kdv_residual_numeric(&soliton_as_quoted(1.0, 0.0), &pts)?;
    ctx.below("kdv_soliton_quoted", "-(v/2) cosh^-2(sqrt(v)(x-vt)) residual on 100 points", quoted, 1e-10, Role::Literal);
    ctx.note("amplitude v/2 requires width sqrt(v)/2");
    let fixed = kdv_residual_numeric(&soliton(1.0, 0.0), &pts)?.max(kdv_residual_numeric(&soliton(4.0, 0.5), &pts)?);
    ctx.below("kdv_soliton", "-(v/2) cosh^-2(sqrt(v)/2 (x-vt)) residual on 100 points", fixed, 1e-10, Role::Supplementary);
    let mut same = true;
    for mu in [rat(1), ratio(5, 3), rat(12)] {
        same &= b3_at_mu(&mu)? == eq10(&mu);
    }
    ctx.exact("kdv_time_slice", "rational solution at t = mu/12 equals the first partner", same, Role::Literal);
    Ok(())
}

fn trig(ctx: &mut Ctx) -> Result<()> {
    let v42 = catalog_get(&Family::TrigA { a: ratio(3, 4), b: rat(0) })?;
    let v44 = catalog_get(&Family::TrigA { a: ratio(7, 4), b: rat(-2) })?;
    let s32 = Func::expr(Expr::x().sin().powr(3, 2));
    let grid = trig_grid(200);
    let mut res = 0.0f64;
    for &x in &grid {
        res = res.max(schrodinger_residual(&v42.evaluator, &s32, 2.25, x)?.abs());
    }
    ctx.below("trig_sin_three_halves", "sin^(3/2) x solves (3/4)/sin^2 x at E = 9/4", res, 1e-10, Role::Literal);
    let partner = trig_partner_build()?;
    ctx.below("trig_partner", "one step reproduces (7/4 - 2 cos x)/sin^2 x", partner.max_deviation, 1e-10, Role::Literal);
    let states = piece_eigen(&v44, 0, (0.0, 20.0), 1, GridOptions::default())?;
    let st = states.first().ok_or_else(|| Error::Domain("no level below 20".into()))?;
    ctx.close("trig_partner_ground_energy", "shooting ground level of the partner", st.energy, 2.25, 1e-6, Role::Supplementary);
    // Image of sin^(3/2) under the intertwiner: sqrt(sin x)(1 + cos x).
    let image = Expr::x().sin().powr(1, 2) * (Expr::int(1) + Expr::x().cos());
    let image = Func::expr(image);
    let sign = st.value_at(PI / 2.0).unwrap_or(1.0).signum();
    let norm = integrate(|x| Ok(x.sin().max(0.0) * (1.0 + x.cos()).powi(2)), 0.0, PI, 1e-12)?.sqrt();
    let s_norm = integrate(|x| Ok(x.sin().powi(3)), 0.0, PI, 1e-12)?.sqrt();
    let (mut d_image, mut d_sin) = (0.0f64, 0.0f64);
    for &x in &grid {
        let Some(v) = st.value_at(x) else { continue };
        d_image = d_image.max((sign * v - image.eval(x)? / norm).abs());
        d_sin = d_sin.max((sign * v - x.sin().powf(1.5) / s_norm).abs());
    }
    ctx.below("trig_partner_ground_state", "ground state is sqrt(sin x)(1 + cos x)", d_image, 1e-5, Role::Supplementary);
    ctx.note(format!("max deviation from normalized sin^(3/2) x: {d_sin:.3}"));
    Ok(())
}

fn random_rf(rng: &mut StdRng) -> RationalFunction {
    let poly = |rng: &mut StdRng, deg: usize| {
        Poly::new((0..=deg).map(|_| Rational::new(rng.gen_range(-5..=5).into(), rng.gen_range(1..=4).into())).collect())
    };
    loop {
        let (dn, dd) = (rng.gen_range(0..=3), rng.gen_range(0..=2));
        let n = poly(rng, dn);
        let d = poly(rng, dd);
        if let Ok(f) = RationalFunction::new(n, d) {
            return f;
        }
    }
}

fn properties(ctx: &mut Ctx) -> Result<()> {
    let mut rng = StdRng::seed_from_u64(2024);
    let mut failures = 0usize;
    for _ in 0..500 {
        let (a, b, c) = (random_rf(&mut rng), random_rf(&mut rng), random_rf(&mut rng));
        let ok = &(&a + &b) + &c == &a + &(&b + &c)
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && (&a * &b).derive() == &(&a.derive() * &b) + &(&a * &b.derive())
            && (b.is_zero() || a.checked_div(&b).map(|q| &q * &b == a).unwrap_or(false));
        failures += usize::from(!ok);
    }
    ctx.close("ring_and_derivative_laws", "associativity, distributivity, Leibniz, division on 500 instances", failures as f64, 0.0, 0.0, Role::Literal);

    let free = catalog_get(&Family::Free)?;
    let err = |h: f64| -> Result<f64> {
        let grid = Grid::interval(&free, 0.0, 20.0, h)?;
        let s = numerov_integrate(&grid, 4.0, Start::PlaneWave { phase: 0.0 });
        let last = s.x.len() - 1;
        let scale = s.log_scale.exp();
        Ok((s.psi[last] * scale - (2.0 * s.x[last]).sin()).abs())
    };
    let (e1, e2) = (err(0.02)?, err(0.01)?);
    let order = (e1 / e2).log2();
    ctx.close("numerov_order", "observed convergence order of Numerov", order, 4.0, 0.3, Role::Literal);

    let mu = rat(1);
    let mut unitarity = 0.0f64;
    for piece in [ScatteringPiece::FirstPartnerRight, ScatteringPiece::Left(2)] {
        let (spec, idx) = piece.realize(&mu)?;
        for _ in 0..5 {
            let k = rng.gen_range(0.2..6.0);
            unitarity = unitarity.max((numeric_phase_shift(&spec, idx, k, default_radius(k), 1e-3)?.s.norm() - 1.0).abs());
            unitarity = unitarity.max((analytic_smatrix(piece, k, 1.0)?.norm() - 1.0).abs());
        }
    }
    for _ in 0..5 {
        let s = sech_transmission(rng.gen_range(1..=3), rng.gen_range(0.2..4.0), 20.0, 1e-3)?;
        unitarity = unitarity.max((s.t.norm_sqr() + s.r.norm_sqr() - 1.0).abs());
    }
    ctx.below("s_unitarity", "|S| = 1 and |t|^2 + |r|^2 = 1", unitarity, 1e-8, Role::Literal);

    let mut w = 0.0f64;
    for _ in 0..200 {
        let p = rng.gen_range(-3..=4);
        let a = Rational::new(rng.gen_range(1..=9).into(), rng.gen_range(1..=5).into());
        let psi = Func::rational(RationalFunction::power(a, p));
        let chi = second_solution(&psi, 1.0, SecondSolutionMethod::ClosedFormMonomial)?;
        let x = rng.gen_range(0.5..3.0);
        w = w.max((wronskian(&psi, &chi, x)? - 1.0).abs());
    }
    ctx.below("second_solution_wronskian", "W(psi, chi) = 1 for monomial seeds", w, 1e-10, Role::Literal);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fast_criteria_pass() {
        for c in [1u8, 7] {
            let out = run_criterion(c, Profile::Default).unwrap();
            assert!(out.pass, "{}", out.line());
        }
        let kdv = run_criterion(9, Profile::Default).unwrap();
        let failing: Vec<_> = kdv.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        assert_eq!(failing, ["kdv_soliton_quoted"]);
    }

    #[test]
    fn unknown_criterion() {
        assert!(run_criterion(12, Profile::Default).is_err());
        assert_eq!(Profile::Strict.tol(1e-6), 5e-7);
    }
}
