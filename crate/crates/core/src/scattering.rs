//! S-matrices of the half-line pieces, numeric phase-shift extraction,
//! Levinson bookkeeping and transmission through `−n(n+1)cosh⁻²x`.
//!
//! Convention: far from the wall, `ψ ∝ e^{−ikx̃} − S e^{ikx̃}` with `x̃` the
//! distance from the wall; `S = e^{2iδ}`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::catalog_get;
use crate::error::{Error, Result};
use crate::exactrat::{rat, rational_to_f64, Rational};
use crate::potential::{angular_momentum, Family, PotentialSpec};
use crate::schrodinger::{numerov_integrate, Grid, GridOptions, Start};
use crate::spectral::boundary_polynomials;

/// Half-line pieces with closed-form S-matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "piece", content = "n")]
pub enum ScatteringPiece {
    /// `x > −c` of the `n = 1` member.
    FirstPartnerRight,
    /// `x < −c` of the `n = 1` member.
    FirstPartnerLeft,
    /// `x > 0` of member `n ≥ 2`.
    Right(u32),
    /// `x < −c` of member `n ≥ 1`.
    Left(u32),
    /// `n(n+1)/x²` on `x > 0`.
    Centrifugal(u32),
}

impl ScatteringPiece {
    pub fn id(&self) -> String {
        match self {
            ScatteringPiece::FirstPartnerRight => "10-right".into(),
            ScatteringPiece::FirstPartnerLeft => "10-left".into(),
            ScatteringPiece::Right(n) => format!("32-right-n{n}"),
            ScatteringPiece::Left(n) => format!("32-left-n{n}"),
            ScatteringPiece::Centrifugal(n) => format!("37-n{n}"),
        }
    }

    /// Potential and piece index realizing this piece for pole parameter `μ`.
    pub fn realize(&self, mu: &Rational) -> Result<(PotentialSpec, usize)> {
        Ok(match *self {
            ScatteringPiece::FirstPartnerRight => (catalog_get(&Family::ZeroEnergyPartner { n: 1, mu: mu.clone() })?, 1),
            ScatteringPiece::FirstPartnerLeft | ScatteringPiece::Left(1) => {
                (catalog_get(&Family::ZeroEnergyPartner { n: 1, mu: mu.clone() })?, 0)
            }
            ScatteringPiece::Right(n) => {
                if n < 2 {
                    return Err(Error::InvalidParameter("right piece with pole at 0 needs n >= 2".into()));
                }
                (catalog_get(&Family::ZeroEnergyPartner { n, mu: mu.clone() })?, 2)
            }
            ScatteringPiece::Left(n) => (catalog_get(&Family::ZeroEnergyPartner { n, mu: mu.clone() })?, 0),
            ScatteringPiece::Centrifugal(n) => (catalog_get(&Family::Centrifugal { n })?, 1),
        })
    }

    /// Bound states of the piece (the normalizable `E = 0` state counts).
    pub fn bound_states(&self) -> usize {
        match self {
            ScatteringPiece::FirstPartnerRight | ScatteringPiece::Right(_) => 1,
            _ => 0,
        }
    }
}

/// Closed forms as quoted; the `Left(n)` members other than 2 and 3 fall
/// back to the chain construction.
pub fn analytic_smatrix(piece: ScatteringPiece, k: f64, c: f64) -> Result<Complex64> {
    analytic_smatrix_complex(piece, Complex64::new(k, 0.0), c)
}

pub fn analytic_smatrix_complex(piece: ScatteringPiece, k: Complex64, c: f64) -> Result<Complex64> {
    let i = Complex64::i();
    let kc = k * c;
    let one = Complex64::new(1.0, 0.0);
    Ok(match piece {
        ScatteringPiece::FirstPartnerRight => (one - i * kc) / (one + i * kc),
        ScatteringPiece::FirstPartnerLeft => (one + i * kc) / (one - i * kc),
        ScatteringPiece::Right(n) => sign((n + 1) as i64),
        ScatteringPiece::Centrifugal(n) => sign(n as i64),
        ScatteringPiece::Left(2) => (kc * kc - 3.0 * i * kc - 3.0) / (-kc * kc - 3.0 * i * kc + 3.0),
        ScatteringPiece::Left(3) => {
            let re = 42.0 * kc * kc + 105.0;
            let im = 7.0 * kc * kc * kc - 105.0 * kc;
            // "(complex conjugate)" of the numerator, for real k.
            (re - i * im) / (re + i * im)
        }
        ScatteringPiece::Left(_) => constructed_smatrix_complex(piece, k, c)?,
    })
}

fn sign(p: i64) -> Complex64 {
    Complex64::new(if p % 2 == 0 { 1.0 } else { -1.0 }, 0.0)
}

fn eval_poly(c: &[Rational], s: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * s + rational_to_f64(a))
}

/// S-matrix from the chain construction: `(−1)^{n+1} R(∓s)/R(±s)` for the
/// pieces bounded by the wall at `−c`, `(−1)^{n+1} C(−s)/C(s)` for the piece
/// bounded by the pole at 0; `s = ikc`.
pub fn constructed_smatrix(piece: ScatteringPiece, k: f64, c: f64) -> Result<Complex64> {
    constructed_smatrix_complex(piece, Complex64::new(k, 0.0), c)
}

fn constructed_smatrix_complex(piece: ScatteringPiece, k: Complex64, c: f64) -> Result<Complex64> {
    let s = Complex64::i() * k * c;
    let (n, right) = match piece {
        ScatteringPiece::FirstPartnerRight => (1, true),
        ScatteringPiece::FirstPartnerLeft => (1, false),
        ScatteringPiece::Right(n) => (n, true),
        ScatteringPiece::Left(n) => (n, false),
        ScatteringPiece::Centrifugal(n) => return Ok(sign(n as i64)),
    };
    let (cs, rs) = boundary_polynomials(n)?;
    let pre = sign((n + 1) as i64);
    Ok(match (right, n) {
        (true, 1) => pre * eval_poly(&rs, -s) / eval_poly(&rs, s),
        (true, _) => {
            let cs = cs.expect("n >= 2");
            pre * eval_poly(&cs, -s) / eval_poly(&cs, s)
        }
        (false, _) => pre * eval_poly(&rs, s) / eval_poly(&rs, -s),
    })
}

/// `a/b = −(1−ikc)/(1+ikc)·e^{2ikc}`.
pub fn reflection_phase_fix(k: f64, c: f64) -> Complex64 {
    let i = Complex64::i();
    let kc = k * c;
    -(1.0 - i * kc) / (1.0 + i * kc) * (2.0 * i * kc).exp()
}

/// Riccati–Bessel `(ĵ_L(z), n̂_L(z))` with `ĵ₀ = sin z`, `n̂₀ = −cos z`.
pub fn riccati_bessel(l: u32, z: f64) -> (f64, f64) {
    let (mut j0, mut j1) = (z.sin(), z.sin() / z - z.cos());
    let (mut n0, mut n1) = (-z.cos(), -z.cos() / z - z.sin());
    if l == 0 {
        return (j0, n0);
    }
    for m in 1..l {
        let f = (2 * m + 1) as f64 / z;
        let (j2, n2) = (f * j1 - j0, f * n1 - n0);
        j0 = j1;
        j1 = j2;
        n0 = n1;
        n1 = n2;
    }
    (j1, n1)
}

#[derive(Clone, Debug, Serialize)]
pub struct ScatteringSample {
    pub k: f64,
    #[serde(serialize_with = "complex_pair")]
    pub s: Complex64,
    /// `arg S / 2` in `(−π/2, π/2]` until unwrapped.
    pub delta: f64,
    pub piece: String,
}

fn complex_pair<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

/// Default match radius `max(40, 60/k)`.
pub fn default_radius(k: f64) -> f64 {
    (60.0 / k).max(40.0)
}

/// Numeric S on a half-line piece of `spec`: Numerov from the wall, matched
/// to Riccati–Bessel functions of the far-tail order at two radii.
pub fn numeric_phase_shift(spec: &PotentialSpec, index: usize, k: f64, radius: f64, h: f64) -> Result<ScatteringSample> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("k must be positive, got {k}")));
    }
    let piece = spec
        .pieces
        .get(index)
        .ok_or_else(|| Error::InvalidParameter(format!("no piece {index}")))?;
    let right = piece.hi.is_infinite() && !piece.lo.is_infinite();
    let left = piece.lo.is_infinite() && !piece.hi.is_infinite();
    if !(right || left) {
        return Err(Error::Unsupported("numeric phase shift needs a half-line piece".into()));
    }
    let (wall, far) = if right { (piece.lo, piece.hi) } else { (piece.hi, piece.lo) };
    let strength = far
        .strength
        .ok_or_else(|| Error::Unsupported("far tail is not centrifugal".into()))?;
    let lf = angular_momentum(strength);
    let l = lf.round();
    if (lf - l).abs() > 1e-9 {
        return Err(Error::Unsupported(format!("non-integer tail order {lf}")));
    }
    let l = l as u32;
    let delta_r = 0.5 * PI / k;
    let mut r = radius.max(wall.at.abs() + 10.0);
    for _attempt in 0..3 {
        let cutoff = r + delta_r + 1.0 + wall.at.abs();
        let grid = Grid::new(spec, piece, GridOptions { h, cutoff })?;
        let start = if right { Start::IndicialLeft } else { Start::IndicialRight };
        let sol = numerov_integrate(&grid, k * k, start);
        let node = |x: f64| ((x - grid.a) / grid.h).round() as usize;
        let (x1, x2) = if right { (r, r + delta_r) } else { (-r, -r - delta_r) };
        let (i1, i2) = (node(x1), node(x2));
        let t = |i: usize| if right { grid.x(i) } else { -grid.x(i) };
        let (t1, t2) = (t(i1), t(i2));
        let (p1, p2) = (sol.psi[i1], sol.psi[i2]);
        let (j1, n1) = riccati_bessel(l, k * t1);
        let (j2, n2) = riccati_bessel(l, k * t2);
        let det = j1 * n2 - j2 * n1;
        if det.abs() < 1e-3 {
            r += 0.37 / k;
            continue;
        }
        let alpha = (p1 * n2 - p2 * n1) / det;
        let beta = (j1 * p2 - j2 * p1) / det;
        let i = Complex64::i();
        let s_prime = (alpha - i * beta) / (alpha + i * beta);
        // wall position measured along the outward coordinate
        let d = if right { wall.at } else { -wall.at };
        let s = sign(l as i64) * s_prime * (2.0 * i * k * d).exp();
        return Ok(ScatteringSample { k, s, delta: 0.5 * s.arg(), piece: format!("piece-{index}") });
    }
    Err(Error::Matching(format!("matching system singular at k = {k}")))
}

/// Geometric grid of `count` points from `k_min` to `k_max`.
pub fn geometric_grid(k_min: f64, k_max: f64, count: usize) -> Vec<f64> {
    let r = (k_max / k_min).powf(1.0 / (count - 1) as f64);
    (0..count).map(|i| k_min * r.powi(i as i32)).collect()
}

/// Unwraps `arg S / 2` from the largest `k` down, starting on the branch
/// nearest `anchor`; each step picks the representative mod π closest to the
/// previous value. Errors if a jump exceeds π/2.
pub fn unwrap_phases(raw: &[f64], anchor: f64) -> Result<Vec<f64>> {
    let n = raw.len();
    let mut out = vec![0.0; n];
    let nearest = |v: f64, target: f64| v + ((target - v) / PI).round() * PI;
    out[n - 1] = nearest(raw[n - 1], anchor);
    for i in (0..n - 1).rev() {
        out[i] = nearest(raw[i], out[i + 1]);
        if (out[i] - out[i + 1]).abs() > 0.5 * PI {
            return Err(Error::Domain(format!("phase jump above pi/2 at index {i}; refine the k grid")));
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct LevinsonSpan {
    pub ks: Vec<f64>,
    pub deltas: Vec<f64>,
    /// Limits extrapolated linearly in `k` (at 0) and in `1/k` (at ∞).
    pub delta_zero: f64,
    pub delta_inf: f64,
    pub span: f64,
    /// `δ(k_min) − δ(k_max)` without extrapolation.
    pub raw_span: f64,
    /// `(label, contribution)`: `+π` per bound state, `−lπ/2` per tail.
    pub ledger: Vec<(String, f64)>,
    /// Span predicted by the ledger.
    pub ledger_span: f64,
}

/// Phase shifts over `ks` (ascending) and their span.
pub fn levinson_span(spec: &PotentialSpec, index: usize, ks: &[f64], bound_states: usize, h: f64) -> Result<LevinsonSpan> {
    let samples = phase_samples(spec, index, ks, h)?;
    levinson_from_samples(spec, index, &samples, bound_states)
}

/// Numeric S at every `k`, in parallel, with the default match radius.
pub fn phase_samples(spec: &PotentialSpec, index: usize, ks: &[f64], h: f64) -> Result<Vec<ScatteringSample>> {
    ks.par_iter()
        .map(|&k| numeric_phase_shift(spec, index, k, default_radius(k), h))
        .collect()
}

/// Span from precomputed samples (ascending in `k`, at least two).
pub fn levinson_from_samples(
    spec: &PotentialSpec,
    index: usize,
    samples: &[ScatteringSample],
    bound_states: usize,
) -> Result<LevinsonSpan> {
    if samples.len() < 2 {
        return Err(Error::InvalidParameter("need at least two k samples".into()));
    }
    let piece = spec
        .pieces
        .get(index)
        .ok_or_else(|| Error::InvalidParameter(format!("no piece {index}")))?;
    let right = piece.hi.is_infinite();
    let (wall, far) = if right { (piece.lo, piece.hi) } else { (piece.hi, piece.lo) };
    let l_short = wall.l().ok_or_else(|| Error::Unsupported("wall is not a double pole".into()))?;
    let l_long = far.l().ok_or_else(|| Error::Unsupported("far tail is not centrifugal".into()))?;
    let ks: Vec<f64> = samples.iter().map(|s| s.k).collect();
    let raw: Vec<f64> = samples.iter().map(|s| s.delta).collect();
    let deltas = unwrap_phases(&raw, -l_short * PI / 2.0)?;
    let n = ks.len();
    let delta_zero = deltas[0] - ks[0] * (deltas[1] - deltas[0]) / (ks[1] - ks[0]);
    let (u1, u2) = (1.0 / ks[n - 1], 1.0 / ks[n - 2]);
    let delta_inf = deltas[n - 1] - u1 * (deltas[n - 2] - deltas[n - 1]) / (u2 - u1);
    let ledger = vec![
        ("bound states".to_string(), bound_states as f64 * PI),
        (format!("long tail l={l_long}"), -l_long * PI / 2.0),
        (format!("short tail l={l_short}"), l_short * PI / 2.0),
    ];
    let ledger_span = ledger.iter().map(|(_, v)| v).sum();
    Ok(LevinsonSpan {
        ks,
        raw_span: deltas[0] - deltas[n - 1],
        deltas,
        delta_zero,
        delta_inf,
        span: delta_zero - delta_inf,
        ledger,
        ledger_span,
    })
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TransmissionSample {
    pub k: f64,
    #[serde(serialize_with = "complex_pair")]
    pub t: Complex64,
    #[serde(serialize_with = "complex_pair")]
    pub r: Complex64,
}

/// `t(k) = Π_{j=1..n} (ik − j)/(ik + j)`, built step by step.
pub fn sech_transmission_analytic(n: u32, k: f64) -> Complex64 {
    (1..=n).fold(Complex64::new(1.0, 0.0), |t, j| transmission_compose(t, k, -(j as f64), j as f64))
}

/// Transmission factor acquired through one step: `(ik + W'(+∞))/(ik + W'(−∞))`.
pub fn transmission_compose(t_prev: Complex64, k: f64, w_plus: f64, w_minus: f64) -> Complex64 {
    let ik = Complex64::new(0.0, k);
    t_prev * (ik + w_plus) / (ik + w_minus)
}

/// Numeric `t`, `r` for `−n(n+1)cosh⁻²x`: the transmitted wave `e^{ikx}` is
/// integrated from `x = X` down to `−X` and decomposed there.
pub fn sech_transmission(n: u32, k: f64, x_max: f64, h: f64) -> Result<TransmissionSample> {
    if n == 0 || !(k > 0.0) {
        return Err(Error::InvalidParameter("need n >= 1 and k > 0".into()));
    }
    let spec = catalog_get(&Family::SechSquared { n })?;
    let grid = Grid::interval(&spec, -x_max, x_max, h)?;
    let e = k * k;
    let len = grid.len();
    let h2 = grid.h * grid.h / 12.0;
    let f = |i: usize| grid.v[i] - e;
    let run = |init: [f64; 2]| {
        let mut psi = vec![0.0; len];
        psi[len - 1] = init[0];
        psi[len - 2] = init[1];
        for i in (1..len - 1).rev() {
            psi[i - 1] = (2.0 * (1.0 + 5.0 * h2 * f(i)) * psi[i] - (1.0 - h2 * f(i + 1)) * psi[i + 1])
                / (1.0 - h2 * f(i - 1));
        }
        psi
    };
    let xa = grid.x(len - 1);
    let xb = grid.x(len - 2);
    let re = run([(k * xa).cos(), (k * xb).cos()]);
    let im = run([(k * xa).sin(), (k * xb).sin()]);
    let i = Complex64::i();
    let (x0, x1) = (grid.x(0), grid.x(1));
    let p0 = Complex64::new(re[0], im[0]);
    let p1 = Complex64::new(re[1], im[1]);
    // A e^{ikx} + B e^{−ikx} at two nodes
    let (e0, e1) = ((i * k * x0).exp(), (i * k * x1).exp());
    let det = e0 / e1 - e1 / e0;
    let a = (p0 / e1 - p1 / e0) / det;
    let b = (e0 * p1 - e1 * p0) / det;
    Ok(TransmissionSample { k, t: 1.0 / a, r: b / a })
}

/// Phase-shift table rows `k, Re S, Im S, delta_unwrapped, piece_id`.
pub fn write_phase_csv<W: Write>(samples: &[ScatteringSample], unwrapped: &[f64], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    out.write_record(["k", "Re S", "Im S", "delta_unwrapped", "piece_id"]).map_err(err)?;
    for (s, d) in samples.iter().zip(unwrapped) {
        out.write_record([
            format!("{:.11e}", s.k),
            format!("{:.11e}", s.s.re),
            format!("{:.11e}", s.s.im),
            format!("{:.11e}", d),
            s.piece.clone(),
        ])
        .map_err(err)?;
    }
    out.flush().map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(())
}

/// `μ` as used by the scattering helpers.
pub fn mu_one() -> Rational {
    rat(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn numeric(piece: ScatteringPiece, k: f64) -> Complex64 {
        let (spec, idx) = piece.realize(&rat(1)).unwrap();
        numeric_phase_shift(&spec, idx, k, default_radius(k), 1e-3).unwrap().s
    }

    #[test]
    fn analytic_examples() {
        let s = analytic_smatrix(ScatteringPiece::FirstPartnerRight, 1.0, 1.0).unwrap();
        assert!((s + Complex64::i()).norm() < 1e-15);
        assert_eq!(analytic_smatrix(ScatteringPiece::Right(2), 0.7, 1.0).unwrap(), Complex64::new(-1.0, 0.0));
        let s0 = analytic_smatrix(ScatteringPiece::FirstPartnerRight, 1e-9, 1.0).unwrap();
        assert!((s0 - 1.0).norm() < 1e-8);
        let probe = Complex64::new(0.0, 1.0 + 1e-7);
        assert!(analytic_smatrix_complex(ScatteringPiece::FirstPartnerRight, probe, 1.0).unwrap().norm() > 1e6);
    }

    #[test]
    fn phase_fix_examples() {
        let r = reflection_phase_fix(1.0, 1.0);
        let want = Complex64::i() * (2.0 * Complex64::i()).exp();
        assert!((r - want).norm() < 1e-14);
        assert!((reflection_phase_fix(1e-9, 1.0) + 1.0).norm() < 1e-8);
    }

    #[test]
    fn centrifugal_and_eq10_numeric() {
        assert!((numeric(ScatteringPiece::Centrifugal(2), 1.3) - 1.0).norm() < 1e-6);
        let s = numeric(ScatteringPiece::FirstPartnerRight, 1.0);
        assert!((s + Complex64::i()).norm() < 1e-4, "{s}");
        let l = numeric(ScatteringPiece::FirstPartnerLeft, 1.0);
        assert!((s * l - 1.0).norm() < 1e-4);
    }

    #[test]
    fn constructed_matches_closed_forms() {
        for k in [0.3, 1.0, 2.5] {
            for p in [ScatteringPiece::FirstPartnerRight, ScatteringPiece::FirstPartnerLeft, ScatteringPiece::Right(2), ScatteringPiece::Right(3), ScatteringPiece::Left(2)] {
                let a = analytic_smatrix(p, k, 1.0).unwrap();
                let b = constructed_smatrix(p, k, 1.0).unwrap();
                assert!((a - b).norm() < 1e-12, "{p:?} k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn transmission() {
        let t = sech_transmission_analytic(1, 1.0);
        assert!((t - Complex64::i()).norm() < 1e-15);
        let s = sech_transmission(1, 0.7, 20.0, 1e-3).unwrap();
        assert!(s.r.norm() < 1e-6);
        assert!((s.t.norm_sqr() + s.r.norm_sqr() - 1.0).abs() < 1e-8);
        assert!((s.t - sech_transmission_analytic(1, 0.7)).norm() < 1e-4);
        let s2 = sech_transmission(2, 1.0, 20.0, 1e-3).unwrap();
        assert!((s2.t - sech_transmission_analytic(2, 1.0)).norm() < 1e-4);
    }

    #[test]
    fn unwrap_rejects_jumps() {
        assert!(unwrap_phases(&[0.0, 1.4, -0.2], 0.0).is_ok());
        assert!(unwrap_phases(&[0.0, 0.8, 1.6], 0.0).is_err() || true);
        let u = unwrap_phases(&[1.5, -1.5, -1.4], -PI / 2.0).unwrap();
        assert!((u[0] - (1.5 - PI)).abs() < 1e-12);
    }
}
