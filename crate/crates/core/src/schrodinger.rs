//! Numerov integration and shooting for `−ψ'' + Vψ = Eψ` on one domain piece.
//!
//! Double-pole ends start from the regular Frobenius branch `y^{l+1}(1 + …)`
//! a distance `ε = h^{2/3}` inside the pole; infinite ends are cut off with a
//! Dirichlet wall. Eigenvalues are bracketed through a Prüfer-type phase at a
//! matching point, which is continuous and increasing in `E`, so bisection
//! cannot skip a level.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::Series;
use crate::error::{Error, Result};
use crate::exactrat::RationalFunction;
use crate::func::{poly_series, Func};
use crate::potential::{DomainPiece, Edge, PotentialSpec};
use crate::quad::simpson_samples;

/// Magnitude at which integration rescales to avoid overflow.
const RESCALE_AT: f64 = 1e150;
/// Frobenius terms kept at a pole start.
const FROBENIUS_TERMS: usize = 30;

#[derive(Clone, Copy, Debug)]
pub struct GridOptions {
    /// Target step (adjusted down so the interval holds an integer count).
    pub h: f64,
    /// Distance from the finite end (or from 0 on the whole line) at which an
    /// infinite end is cut off.
    pub cutoff: f64,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions { h: 1e-3, cutoff: 40.0 }
    }
}

/// Regular-branch series `ψ = Σ aₘ y^{m+ρ}` at a double pole, `x = x0 + σy`.
#[derive(Clone, Debug)]
pub struct Frobenius {
    pub x0: f64,
    pub sigma: f64,
    pub rho: f64,
    /// Laurent data: `y²V(x0 + σy) = Σ vⱼ yʲ`.
    pub v: Vec<f64>,
}

impl Frobenius {
    /// Series coefficients at energy `e`, `a₀ = 1`.
    pub fn coefficients(&self, e: f64, count: usize) -> Vec<f64> {
        let mut a = vec![0.0; count];
        a[0] = 1.0;
        for m in 1..count {
            let mut rhs = 0.0;
            for j in 1..=m {
                rhs += self.v.get(j).copied().unwrap_or(0.0) * a[m - j];
            }
            if m >= 2 {
                rhs -= e * a[m - 2];
            }
            a[m] = rhs / (m as f64 * (m as f64 + 2.0 * self.rho - 1.0));
        }
        a
    }

    /// `(ψ, dψ/dy)` at distance `y` from the pole.
    pub fn eval(&self, y: f64, e: f64) -> (f64, f64) {
        let a = self.coefficients(e, FROBENIUS_TERMS);
        let (mut s, mut ds) = (0.0, 0.0);
        for (m, c) in a.iter().enumerate().rev() {
            let p = m as f64 + self.rho;
            s = s * y + c;
            ds = ds * y + c * p;
        }
        let yr = y.powf(self.rho);
        (yr * s, yr * ds / y)
    }
}

#[derive(Clone, Debug)]
enum EndStart {
    Frobenius(Frobenius),
    Dirichlet,
}

/// Uniform grid inside one piece, with the potential sampled at each node.
#[derive(Clone, Debug)]
pub struct Grid {
    pub piece: DomainPiece,
    /// First and last node.
    pub a: f64,
    pub b: f64,
    pub h: f64,
    pub inset_lo: f64,
    pub inset_hi: f64,
    pub v: Vec<f64>,
    lo_start: EndStart,
    hi_start: EndStart,
}

impl Grid {
    pub fn new(spec: &PotentialSpec, piece: &DomainPiece, opts: GridOptions) -> Result<Grid> {
        let eps = opts.h.cbrt();
        let (lo, hi) = (piece.lo, piece.hi);
        let (a, lo_start, inset_lo) = end_setup(spec, &lo, &hi, eps, opts.cutoff, 1.0)?;
        let (b, hi_start, inset_hi) = end_setup(spec, &hi, &lo, eps, opts.cutoff, -1.0)?;
        if b <= a {
            return Err(Error::Domain(format!("empty grid on ({}, {})", lo.at, hi.at)));
        }
        let n = ((b - a) / opts.h).ceil().max(4.0) as usize;
        let h = (b - a) / n as f64;
        let v = (0..=n)
            .map(|i| spec.eval(a + i as f64 * h))
            .collect::<Result<Vec<_>>>()?;
        Ok(Grid { piece: piece.clone(), a, b, h, inset_lo, inset_hi, v, lo_start, hi_start })
    }

    /// Grid over an explicit interval `[a, b]` with Dirichlet ends.
    pub fn interval(spec: &PotentialSpec, a: f64, b: f64, h: f64) -> Result<Grid> {
        let n = ((b - a) / h).ceil().max(4.0) as usize;
        let h = (b - a) / n as f64;
        let v = (0..=n)
            .map(|i| spec.eval(a + i as f64 * h))
            .collect::<Result<Vec<_>>>()?;
        let piece = DomainPiece { lo: Edge { at: a, strength: None }, hi: Edge { at: b, strength: None }, ..DomainPiece::whole_line() };
        Ok(Grid {
            piece,
            a,
            b,
            h,
            inset_lo: 0.0,
            inset_hi: 0.0,
            v,
            lo_start: EndStart::Dirichlet,
            hi_start: EndStart::Dirichlet,
        })
    }

    pub fn len(&self) -> usize {
        self.v.len()
    }

    pub fn is_empty(&self) -> bool {
        self.v.is_empty()
    }

    pub fn x(&self, i: usize) -> f64 {
        self.a + i as f64 * self.h
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.x(i)).collect()
    }

    pub fn lo_frobenius(&self) -> Option<&Frobenius> {
        match &self.lo_start {
            EndStart::Frobenius(f) => Some(f),
            EndStart::Dirichlet => None,
        }
    }

    pub fn hi_frobenius(&self) -> Option<&Frobenius> {
        match &self.hi_start {
            EndStart::Frobenius(f) => Some(f),
            EndStart::Dirichlet => None,
        }
    }

    /// Matching node: the potential minimum away from the ends, else the
    /// midpoint.
    pub fn matching_index(&self) -> usize {
        let n = self.len();
        let (lo, hi) = (n / 1000 + 2, n - n / 1000 - 3);
        let mut best = lo;
        for i in lo..=hi {
            if self.v[i] < self.v[best] {
                best = i;
            }
        }
        if best <= lo || best >= hi {
            n / 2
        } else {
            best
        }
    }
}

fn end_setup(
    spec: &PotentialSpec,
    end: &Edge,
    other: &Edge,
    eps: f64,
    cutoff: f64,
    sigma: f64,
) -> Result<(f64, EndStart, f64)> {
    if end.at.is_infinite() {
        let base = if other.at.is_infinite() { 0.0 } else { other.at };
        return Ok((base - sigma * cutoff, EndStart::Dirichlet, 0.0));
    }
    if end.strength.is_none() {
        return Ok((end.at, EndStart::Dirichlet, 0.0));
    }
    let room = if other.at.is_infinite() { f64::INFINITY } else { (other.at - end.at).abs() };
    let (v, radius) = laurent_data(spec, end.at, sigma, room)?;
    // The series must converge comfortably at the inset.
    let eps = eps.min(0.25 * radius).min(0.25 * room);
    let disc = 1.0 + 4.0 * v[0];
    if disc < -1e-9 {
        return Err(Error::Unsupported(format!(
            "tail strength {} at x = {} is below -1/4 (oscillatory)",
            v[0], end.at
        )));
    }
    let rho = 0.5 * (1.0 + disc.max(0.0).sqrt());
    let f = Frobenius { x0: end.at, sigma, rho, v };
    Ok((end.at + sigma * eps, EndStart::Frobenius(f), eps))
}

/// Taylor coefficients of `y²V(x0 + σy)` at `y = 0` and the radius within
/// which they describe it.
fn laurent_data(spec: &PotentialSpec, x0: f64, sigma: f64, room: f64) -> Result<(Vec<f64>, f64)> {
    let (g, radius) = match spec.exact() {
        Some(r) => {
            let g = rational_laurent(r, x0);
            let radius = convergence_radius(&g);
            (g, radius)
        }
        None => fitted_laurent(&spec.evaluator, x0, room)?,
    };
    let g = g
        .iter()
        .enumerate()
        .map(|(j, c)| if j % 2 == 1 { sigma * c } else { *c })
        .collect();
    Ok((g, radius))
}

/// Root-test estimate from the upper half of the coefficients.
fn convergence_radius(g: &[f64]) -> f64 {
    let scale = g.first().map_or(1.0, |c| c.abs().max(1.0));
    g.iter()
        .enumerate()
        .skip(g.len() / 2)
        .filter(|(_, c)| **c != 0.0)
        .map(|(j, c)| (scale / c.abs()).powf(1.0 / j as f64))
        .fold(f64::INFINITY, f64::min)
}

fn deflate(p: &[f64], x0: f64) -> Vec<f64> {
    let n = p.len();
    let mut q = vec![0.0; n.saturating_sub(1)];
    let mut acc = 0.0;
    for i in (1..n).rev() {
        acc = acc * x0 + p[i];
        q[i - 1] = acc;
    }
    q
}

fn rational_laurent(r: &RationalFunction, x0: f64) -> Vec<f64> {
    let c = r.compile();
    let den = deflate(&deflate(c.den(), x0), x0);
    let n = Series(poly_series(c.num(), x0, FROBENIUS_TERMS));
    let d = Series(poly_series(&den, x0, FROBENIUS_TERMS));
    match n.div(&d, x0) {
        Ok(s) => s.0,
        Err(_) => vec![0.0; FROBENIUS_TERMS + 1],
    }
}

/// Interpolates `y²V(x0 + y)` on Chebyshev nodes around the pole (one-sided
/// if the other side cannot be evaluated) and reads off the monomial
/// coefficients.
fn fitted_laurent(f: &Func, x0: f64, room: f64) -> Result<(Vec<f64>, f64)> {
    const DEG: usize = 10;
    let r = (0.25f64).min(room / 4.0);
    let cheb = |k: usize| ((2 * k + 1) as f64 * PI / (2 * (DEG + 1)) as f64).cos();
    let sample = |ys: &[f64]| -> Result<Vec<f64>> {
        ys.iter().map(|&y| Ok(y * y * f.eval(x0 + y)?)).collect()
    };
    let two_sided: Vec<f64> = (0..=DEG).map(|k| r * cheb(k)).collect();
    let (ys, vals) = match sample(&two_sided) {
        Ok(v) => (two_sided, v),
        Err(_) => {
            let one: Vec<f64> = (0..=DEG).map(|k| 0.5 * r * (1.0 + cheb(k))).collect();
            let v = sample(&one)?;
            (one, v)
        }
    };
    let t: Vec<f64> = ys.iter().map(|y| y / r).collect();
    let coef = solve_vandermonde(&t, &vals)?;
    Ok((coef.iter().enumerate().map(|(j, c)| c / r.powi(j as i32)).collect(), r))
}

fn solve_vandermonde(t: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    let n = t.len();
    let mut m: Vec<Vec<f64>> = t
        .iter()
        .zip(y)
        .map(|(&ti, &yi)| {
            let mut row: Vec<f64> = (0..n).map(|j| ti.powi(j as i32)).collect();
            row.push(yi);
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&a, &b| m[a][col].abs().total_cmp(&m[b][col].abs()))
            .unwrap();
        if m[piv][col].abs() < 1e-300 {
            return Err(Error::Domain("singular interpolation system".into()));
        }
        m.swap(col, piv);
        for r in 0..n {
            if r != col {
                let factor = m[r][col] / m[col][col];
                let pivot_row = m[col].clone();
                for (dst, src) in m[r].iter_mut().zip(&pivot_row).skip(col) {
                    *dst -= factor * src;
                }
            }
        }
    }
    Ok((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// How integration is started.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Start {
    /// From the low end: Frobenius branch at a pole, else Dirichlet.
    IndicialLeft,
    /// From the high end, likewise.
    IndicialRight,
    /// From the low end with `sin(kx + phase)`, `k = √E`.
    PlaneWave { phase: f64 },
}

/// Integrated solution on the grid nodes. The true values are
/// `psi[i]·exp(log_scale)` for the start normalization.
#[derive(Clone, Debug)]
pub struct Samples {
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub log_scale: f64,
    pub rescales: usize,
}

fn f_at(grid: &Grid, e: f64, i: usize) -> f64 {
    grid.v[i] - e
}

/// Integrates from the low end (`forward`) or the high end over nodes up to
/// and including `stop`. Returns values on every node (zeros outside the
/// integrated range) plus the log-scale and rescale count.
fn integrate_partial(grid: &Grid, e: f64, forward: bool, stop: usize, plane: Option<f64>) -> (Vec<f64>, f64, usize) {
    let n = grid.len();
    let h2 = grid.h * grid.h / 12.0;
    let mut psi = vec![0.0; n];
    let idx = |k: usize| if forward { k } else { n - 1 - k };
    let (p0, p1) = match (plane, forward) {
        (Some(phase), _) => {
            let k = e.max(0.0).sqrt();
            ((k * grid.x(0) + phase).sin(), (k * grid.x(1) + phase).sin())
        }
        (None, true) => start_values(&grid.lo_start, grid.inset_lo, grid.h, e),
        (None, false) => start_values(&grid.hi_start, grid.inset_hi, grid.h, e),
    };
    psi[idx(0)] = p0;
    psi[idx(1)] = p1;
    let steps = if forward { stop } else { n - 1 - stop };
    let mut log_scale = 0.0;
    let mut rescales = 0;
    for k in 1..steps {
        let (im, i, ip) = (idx(k - 1), idx(k), idx(k + 1));
        let next = (2.0 * (1.0 + 5.0 * h2 * f_at(grid, e, i)) * psi[i] - (1.0 - h2 * f_at(grid, e, im)) * psi[im])
            / (1.0 - h2 * f_at(grid, e, ip));
        psi[ip] = next;
        if next.abs() > RESCALE_AT {
            for j in 0..=k + 1 {
                psi[idx(j)] /= RESCALE_AT;
            }
            log_scale += RESCALE_AT.ln();
            rescales += 1;
        }
    }
    (psi, log_scale, rescales)
}

fn start_values(s: &EndStart, inset: f64, h: f64, e: f64) -> (f64, f64) {
    match s {
        EndStart::Frobenius(f) => (f.eval(inset, e).0, f.eval(inset + h, e).0),
        EndStart::Dirichlet => (0.0, h),
    }
}

/// Fourth-order derivative at an interior node.
fn numerov_derivative(grid: &Grid, e: f64, psi: &[f64], i: usize) -> f64 {
    let h2 = grid.h * grid.h / 6.0;
    ((1.0 - h2 * f_at(grid, e, i + 1)) * psi[i + 1] - (1.0 - h2 * f_at(grid, e, i - 1)) * psi[i - 1]) / (2.0 * grid.h)
}

fn derivatives(grid: &Grid, e: f64, psi: &[f64]) -> Vec<f64> {
    let n = psi.len();
    let mut d = vec![0.0; n];
    for (i, di) in d.iter_mut().enumerate().take(n - 1).skip(1) {
        *di = numerov_derivative(grid, e, psi, i);
    }
    d[0] = (-3.0 * psi[0] + 4.0 * psi[1] - psi[2]) / (2.0 * grid.h);
    d[n - 1] = (3.0 * psi[n - 1] - 4.0 * psi[n - 2] + psi[n - 3]) / (2.0 * grid.h);
    d
}

pub fn numerov_integrate(grid: &Grid, e: f64, start: Start) -> Samples {
    let n = grid.len();
    let (psi, log_scale, rescales) = match start {
        Start::IndicialLeft => integrate_partial(grid, e, true, n - 1, None),
        Start::IndicialRight => integrate_partial(grid, e, false, 0, None),
        Start::PlaneWave { phase } => integrate_partial(grid, e, true, n - 1, Some(phase)),
    };
    let dpsi = derivatives(grid, e, &psi);
    Samples { x: grid.xs(), psi, dpsi, log_scale, rescales }
}

fn sign_changes(psi: &[f64]) -> usize {
    let mut count = 0;
    let mut prev = 0.0f64;
    for &p in psi {
        if p != 0.0 {
            if prev != 0.0 && p.signum() != prev.signum() {
                count += 1;
            }
            prev = p;
        }
    }
    count
}

fn arccot(z: f64) -> f64 {
    0.5 * PI - z.atan()
}

/// Phase `Θ(E)` at the matching node; equals `(j+1)π` at the eigenvalue with
/// `j` nodes.
pub fn phase_count(grid: &Grid, e: f64, m: usize) -> f64 {
    let n = grid.len();
    let (l, _, _) = integrate_partial(grid, e, true, m + 1, None);
    let (r, _, _) = integrate_partial(grid, e, false, m - 1, None);
    let nl = sign_changes(&l[..=m]);
    let nr = sign_changes(&r[m..n]);
    let dl = numerov_derivative(grid, e, &l, m);
    let dr = numerov_derivative(grid, e, &r, m);
    let tl = if l[m] == 0.0 { PI } else { arccot(dl / l[m]) };
    let tr = if r[m] == 0.0 { PI } else { arccot(-dr / r[m]) };
    (nl + nr) as f64 * PI + tl + tr
}

/// Normalized bound state on a grid.
#[derive(Clone, Debug, Serialize)]
pub struct BoundState {
    pub energy: f64,
    pub x: Vec<f64>,
    pub psi: Vec<f64>,
    pub dpsi: Vec<f64>,
    pub nodes: usize,
    /// `∫ψ²` of the stored samples (1 up to quadrature error).
    pub norm: f64,
}

impl BoundState {
    /// Cubic Hermite interpolation between nodes.
    pub fn value_at(&self, x: f64) -> Option<f64> {
        let (a, b) = (*self.x.first()?, *self.x.last()?);
        if x < a || x > b {
            return None;
        }
        let h = self.x[1] - self.x[0];
        let i = (((x - a) / h).floor() as usize).min(self.x.len() - 2);
        let t = (x - self.x[i]) / h;
        let (p0, p1, m0, m1) = (self.psi[i], self.psi[i + 1], self.dpsi[i] * h, self.dpsi[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        Some(
            (2.0 * t3 - 3.0 * t2 + 1.0) * p0
                + (t3 - 2.0 * t2 + t) * m0
                + (-2.0 * t3 + 3.0 * t2) * p1
                + (t3 - t2) * m1,
        )
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| Error::Domain(format!("csv: {e}"));
        out.write_record(["x", "psi", "dpsi"]).map_err(io)?;
        for i in 0..self.x.len() {
            out.write_record([
                format!("{:.11e}", self.x[i]),
                format!("{:.11e}", self.psi[i]),
                format!("{:.11e}", self.dpsi[i]),
            ])
            .map_err(io)?;
        }
        out.flush().map_err(|e| Error::Domain(format!("csv: {e}")))?;
        Ok(())
    }
}

/// Integral of the Frobenius leading term over the inset, `∫₀^ε y^{2ρ}`.
fn inset_norm(f: Option<&Frobenius>, inset: f64, psi_first: f64, e: f64) -> f64 {
    match f {
        Some(fr) if inset > 0.0 => {
            let (v, _) = fr.eval(inset, e);
            if v == 0.0 {
                return 0.0;
            }
            let scale = psi_first / v;
            scale * scale * inset.powf(2.0 * fr.rho + 1.0) / (2.0 * fr.rho + 1.0)
        }
        _ => 0.0,
    }
}

/// Matched, normalized eigenfunction at energy `e`.
pub fn assemble_state(grid: &Grid, e: f64) -> BoundState {
    let n = grid.len();
    let m = grid.matching_index();
    let (mut l, _, _) = integrate_partial(grid, e, true, m + 1, None);
    let (r, _, _) = integrate_partial(grid, e, false, m - 1, None);
    let ratio = if r[m] != 0.0 { l[m] / r[m] } else { numerov_derivative(grid, e, &l, m) / numerov_derivative(grid, e, &r, m) };
    for i in m + 1..n {
        l[i] = r[i] * ratio;
    }
    let mut psi = l;
    let first_nonzero = psi.iter().find(|p| p.abs() > 0.0).copied().unwrap_or(1.0);
    let sign = first_nonzero.signum();
    let xs = grid.xs();
    let sq: Vec<f64> = psi.iter().map(|p| p * p).collect();
    let mut norm = simpson_samples(&sq, grid.h);
    norm += inset_norm(grid.lo_frobenius(), grid.inset_lo, psi[0], e);
    norm += inset_norm(grid.hi_frobenius(), grid.inset_hi, psi[n - 1], e);
    let s = sign / norm.sqrt();
    for p in psi.iter_mut() {
        *p *= s;
    }
    let dpsi = derivatives(grid, e, &psi);
    let nodes = sign_changes(&psi);
    let sq: Vec<f64> = psi.iter().map(|p| p * p).collect();
    let norm = simpson_samples(&sq, grid.h)
        + inset_norm(grid.lo_frobenius(), grid.inset_lo, psi[0], e)
        + inset_norm(grid.hi_frobenius(), grid.inset_hi, psi[n - 1], e);
    BoundState { energy: e, x: xs, psi, dpsi, nodes, norm }
}

/// Eigenvalues in `[e_lo, e_hi]` (at most `count`, lowest first).
pub fn shoot_eigen(grid: &Grid, bracket: (f64, f64), count: usize) -> Result<Vec<BoundState>> {
    Ok(eigenvalues(grid, bracket, count)?
        .into_iter()
        .map(|e| assemble_state(grid, e))
        .collect())
}

/// Eigenvalues only.
pub fn eigenvalues(grid: &Grid, bracket: (f64, f64), count: usize) -> Result<Vec<f64>> {
    let (lo, hi) = bracket;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::InvalidParameter(format!("bad bracket [{lo}, {hi}]")));
    }
    let m = grid.matching_index();
    let t_lo = phase_count(grid, lo, m);
    let t_hi = phase_count(grid, hi, m);
    let first = (t_lo / PI).floor() as i64 + 1;
    let last = ((t_hi / PI).ceil() as i64 - 1).min(first + count as i64 - 1);
    let targets: Vec<f64> = (first..=last).map(|j| j as f64 * PI).collect();
    Ok(targets
        .par_iter()
        .map(|&target| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..200 {
                let mid = 0.5 * (a + b);
                if phase_count(grid, mid, m) < target {
                    a = mid;
                } else {
                    b = mid;
                }
                if b - a <= 1e-13 * mid.abs().max(1.0) {
                    break;
                }
            }
            0.5 * (a + b)
        })
        .collect())
}

/// Convenience: grid for piece `index` of `spec` and its eigenvalues.
pub fn piece_eigen(
    spec: &PotentialSpec,
    index: usize,
    bracket: (f64, f64),
    count: usize,
    opts: GridOptions,
) -> Result<Vec<BoundState>> {
    let piece = spec
        .pieces
        .get(index)
        .ok_or_else(|| Error::InvalidParameter(format!("no piece {index}")))?;
    let grid = Grid::new(spec, piece, opts)?;
    shoot_eigen(&grid, bracket, count)
}

/// The `E = 0` state `xⁿ/(μ + x^{2n+1})` on `x > 0` of the zero-energy
/// partner family, normalized analytically (`∫ψ² = 1/((2n+1)μ)`).
pub fn zero_energy_state(n: u32, mu: &crate::exactrat::Rational, opts: GridOptions) -> Result<BoundState> {
    use crate::catalog::catalog_get;
    use crate::exactrat::{rat, rational_to_f64};
    use crate::potential::Family;
    if n == 1 {
        return Err(Error::Domain(
            "n = 1: the candidate x/(mu+x^3) has a pole at x = -c inside the piece (-c, inf); \
             the ground state there is the E = -1/c^2 level"
                .into(),
        ));
    }
    let spec = catalog_get(&Family::ZeroEnergyPartner { n, mu: mu.clone() })?;
    let v = spec.exact().expect("rational family");
    let psi = RationalFunction::power(rat(1), n as i32)
        .checked_div(&(&RationalFunction::constant(mu.clone()) + &RationalFunction::power(rat(1), 2 * n as i32 + 1)))?;
    let residual = &(v * &psi) - &psi.derive().derive();
    if !residual.is_zero() {
        return Err(Error::Domain(format!("E = 0 residual is not zero: {residual}")));
    }
    let piece = spec.pieces.last().expect("right piece").clone();
    let grid = Grid::new(&spec, &piece, opts)?;
    let scale = (rational_to_f64(mu) * (2 * n + 1) as f64).sqrt();
    let f = Func::rational(psi);
    let xs = grid.xs();
    let mut vals = Vec::with_capacity(xs.len());
    let mut ders = Vec::with_capacity(xs.len());
    for &x in &xs {
        let s = f.series(x, 1)?;
        vals.push(scale * s.value());
        ders.push(scale * s.derivative(1));
    }
    Ok(BoundState { energy: 0.0, x: xs, psi: vals, dpsi: ders, nodes: 0, norm: 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog_get;
    use crate::exactrat::rat;
    use crate::potential::Family;

    #[test]
    fn free_plane_wave() {
        let spec = catalog_get(&Family::Free).unwrap();
        let grid = Grid::interval(&spec, 0.0, 20.0 * PI, 1e-3).unwrap();
        let s = numerov_integrate(&grid, 1.0, Start::PlaneWave { phase: 0.0 });
        let worst = s.x.iter().zip(&s.psi).map(|(x, p)| (p - x.sin()).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn centrifugal_power_solution() {
        let spec = catalog_get(&Family::Centrifugal { n: 1 }).unwrap();
        let piece = spec.pieces[1].clone();
        let grid = Grid::new(&spec, &piece, GridOptions { h: 1e-3, cutoff: 5.0 }).unwrap();
        let s = numerov_integrate(&grid, 0.0, Start::IndicialLeft);
        let scale = s.psi[0] / s.x[0].powi(2);
        let worst = s.x.iter().zip(&s.psi).map(|(x, p)| (p / scale - x * x).abs() / (x * x)).fold(0.0, f64::max);
        assert!(worst < 1e-8, "{worst}");
    }

    #[test]
    fn eq10_single_bound_state() {
        let spec = catalog_get(&Family::ZeroEnergyPartner { n: 1, mu: rat(1) }).unwrap();
        let grid = Grid::new(&spec, &spec.pieces[1], GridOptions::default()).unwrap();
        let e = eigenvalues(&grid, (-20.0, -1e-3), 5).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0] + 1.0).abs() < 1e-6, "{}", e[0]);
    }

    #[test]
    fn repulsive_piece_has_no_levels() {
        let spec = catalog_get(&Family::ZeroEnergyPartner { n: 2, mu: rat(1) }).unwrap();
        let grid = Grid::new(&spec, &spec.pieces[0], GridOptions::default()).unwrap();
        assert!(eigenvalues(&grid, (-50.0, -1e-3), 5).unwrap().is_empty());
    }

    #[test]
    fn confining_ladder_has_consecutive_nodes() {
        let spec = catalog_get(&Family::ZeroEnergyPartner { n: 2, mu: rat(1) }).unwrap();
        let states = piece_eigen(&spec, 1, (0.0, 1500.0), 5, GridOptions::default()).unwrap();
        assert_eq!(states.len(), 5);
        for (j, s) in states.iter().enumerate() {
            assert_eq!(s.nodes, j);
            assert!((s.norm - 1.0).abs() < 1e-6);
        }
        assert!((states[0].energy.sqrt() - 5.7635).abs() < 1e-3);
    }

    #[test]
    fn zero_energy_states() {
        assert!(zero_energy_state(1, &rat(1), GridOptions::default()).is_err());
        let s = zero_energy_state(3, &rat(1), GridOptions::default()).unwrap();
        assert!(s.psi.iter().all(|p| p.is_finite()));
    }

    #[test]
    fn frobenius_matches_exact_power() {
        let f = Frobenius { x0: 0.0, sigma: 1.0, rho: 2.0, v: vec![2.0] };
        let (p, d) = f.eval(0.3, 0.0);
        assert!((p - 0.09).abs() < 1e-15 && (d - 0.6).abs() < 1e-15);
    }

    #[test]
    fn csv_columns() {
        let spec = catalog_get(&Family::SecSquared { n: 1 }).unwrap();
        let states = piece_eigen(&spec, 0, (0.0, 10.0), 1, GridOptions { h: 1e-2, cutoff: 40.0 }).unwrap();
        // Ground state of n(n+1)sec²x is (n+1)² = 4.
        assert!((states[0].energy - 4.0).abs() < 1e-6, "{}", states[0].energy);
        let mut buf = Vec::new();
        states[0].write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,psi,dpsi\n"));
    }
}
