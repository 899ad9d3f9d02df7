//! Transcendental spectral equations of the confining piece `(−c, 0)` of the
//! zero-energy partner family.
//!
//! Construction: with `μ = 1` (so `c = 1`, `κ = kc`) the chain intertwiners
//! map `e^{sx}` to `e^{sx}P(x, s)`, `P` polynomial in `s` with rational
//! coefficients. Regularity at `x = 0⁻` kills the `x^{1−n}` coefficient
//! `C(s)`; the wall at `x = −1` kills the residue `R(s)`. Eliminating the
//! amplitudes leaves `Im[e^{iκ} G(iκ)] = 0` with `G(s) = C(s)R(−s)`, that is
//! `D(κ) sin κ − N(κ) cos κ = 0` with `D = Re G(iκ)`, `N = −Im G(iκ)`.

use std::f64::consts::PI;
use std::io::Write;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::catalog::zero_energy_seeds;
use crate::darboux::superpotential;
use crate::error::{Error, Result};
use crate::exactrat::{rat, Poly, Rational, RationalFunction};

/// `tan κ = N(κ)/D(κ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralForm {
    #[serde(serialize_with = "poly_strings")]
    pub d: Poly,
    #[serde(serialize_with = "poly_strings")]
    pub num: Poly,
}

fn poly_strings<S: serde::Serializer>(p: &Poly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.coeffs().iter().map(|c| c.to_string()))
}

impl SpectralForm {
    /// `tan κ · D − N` (has the poles of `tan`).
    pub fn residual(&self, kappa: f64) -> f64 {
        kappa.tan() * self.d.eval_f64(kappa) - self.num.eval_f64(kappa)
    }

    /// Pole-free form `D sin κ − N cos κ`.
    pub fn cleared(&self, kappa: f64) -> f64 {
        self.d.eval_f64(kappa) * kappa.sin() - self.num.eval_f64(kappa) * kappa.cos()
    }

    /// Equality up to a common factor: `D₁N₂ − N₁D₂ = 0`.
    pub fn proportional_to(&self, other: &SpectralForm) -> bool {
        (&(&self.d * &other.num) - &(&self.num * &other.d)).is_zero()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormSource {
    Printed,
    Constructed,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralEquation {
    pub n: u32,
    pub c: f64,
    /// Form used by [`spectral_roots`].
    pub form: SpectralForm,
    pub source: FormSource,
    /// Form built from the chain.
    pub constructed: SpectralForm,
    /// Closed form quoted for `n = 2, 3`.
    pub printed: Option<SpectralForm>,
    /// Whether the printed form is proportional to the constructed one.
    pub printed_matches: Option<bool>,
}

impl SpectralEquation {
    /// Poles of `tan κ·D − N` in `(a, b)`: odd multiples of π/2.
    pub fn poles_between(&self, a: f64, b: f64) -> Vec<f64> {
        let first = ((a / PI) - 0.5).ceil() as i64;
        (first..)
            .map(|j| (j as f64 + 0.5) * PI)
            .take_while(|&p| p < b)
            .filter(|&p| p > a)
            .collect()
    }

    /// Same equation with the constructed form active.
    pub fn with_constructed(&self) -> SpectralEquation {
        SpectralEquation { form: self.constructed.clone(), source: FormSource::Constructed, ..self.clone() }
    }

    /// Same equation with the printed form active, if there is one.
    pub fn with_printed(&self) -> Option<SpectralEquation> {
        Some(SpectralEquation { form: self.printed.clone()?, source: FormSource::Printed, ..self.clone() })
    }
}

/// Closed forms quoted for `n = 2` and `n = 3`.
pub fn printed_form(n: u32) -> Option<SpectralForm> {
    match n {
        2 => Some(SpectralForm { d: Poly::from_ints(&[3, 0, -1]), num: Poly::from_ints(&[0, 3]) }),
        3 => Some(SpectralForm { d: Poly::from_ints(&[105, 0, 42]), num: Poly::from_ints(&[0, -105, 0, 7]) }),
        _ => None,
    }
}

/// `P(x, s)` after all `n + 1` intertwiners, as coefficients of `sʲ`.
pub fn chain_polynomial(n: u32) -> Result<Vec<RationalFunction>> {
    let mut p = vec![RationalFunction::one()];
    for seed in zero_energy_seeds(n, &rat(1)) {
        let w = superpotential(&seed)?;
        let w = w.as_rational().expect("rational seeds").clone();
        let mut next = vec![RationalFunction::zero(); p.len() + 1];
        for (j, pj) in p.iter().enumerate() {
            next[j] = &next[j] + &(&pj.derive() + &(&w * pj));
            next[j + 1] = &next[j + 1] + pj;
        }
        p = next;
    }
    Ok(p)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Boundary polynomials in `s` (coefficients ascending): `C(s)`, the
/// `x^{1−n}` coefficient of `e^{sx}P(x, s)` at `x = 0` (`None` for `n = 1`,
/// where `x = 0` is regular), and `R(s)`, the residue of `P` at the wall
/// `x = −1`.
pub fn boundary_polynomials(n: u32) -> Result<(Option<Vec<Rational>>, Vec<Rational>)> {
    let p = chain_polynomial(n)?;
    let zero = rat(0);
    let wall = rat(-1);
    let cs = if n >= 2 {
        let target = 1 - n as i64;
        let mut cs = vec![Rational::zero(); p.len()];
        for (j, pj) in p.iter().enumerate() {
            if pj.is_zero() {
                continue;
            }
            let (lowest, _) = pj.laurent_at(&zero, 1);
            let mut fact = Rational::one();
            let mut i = 0i64;
            while target - i >= lowest {
                let c = pj.laurent_coeff(&zero, target - i);
                if !c.is_zero() {
                    let k = j + i as usize;
                    if k >= cs.len() {
                        cs.resize(k + 1, Rational::zero());
                    }
                    cs[k] += &c / &fact;
                }
                i += 1;
                fact *= rat(i);
            }
        }
        Some(cs)
    } else {
        None
    };
    let mut rs = Vec::with_capacity(p.len());
    for pj in &p {
        if !pj.laurent_coeff(&wall, -2).is_zero() {
            return Err(Error::Domain("wall pole of P is not simple".into()));
        }
        rs.push(pj.laurent_coeff(&wall, -1));
    }
    Ok((cs, rs))
}

/// Constructed `(D, N)` for member `n ≥ 2`.
pub fn construct_form(n: u32) -> Result<SpectralForm> {
    let (cs, rs) = boundary_polynomials(n)?;
    let cs = cs.ok_or_else(|| Error::InvalidParameter("n must be at least 2".into()))?;
    let r_neg: Vec<Rational> = rs
        .iter()
        .enumerate()
        .map(|(j, c)| if j % 2 == 1 { -c } else { c.clone() })
        .collect();
    let g = poly_mul(&cs, &r_neg);
    // G(iκ) = Σ gⱼ iʲ κʲ
    let mut re = vec![Rational::zero(); g.len()];
    let mut im = vec![Rational::zero(); g.len()];
    for (j, gj) in g.iter().enumerate() {
        match j % 4 {
            0 => re[j] = gj.clone(),
            1 => im[j] = gj.clone(),
            2 => re[j] = -gj,
            _ => im[j] = -gj,
        }
    }
    let d = Poly::new(re);
    let num = -&Poly::new(im);
    if d.is_zero() && num.is_zero() {
        return Err(Error::Domain("degenerate spectral construction".into()));
    }
    Ok(normalize(SpectralForm { d, num }))
}

/// Scales so the leading coefficient of `D` (or of `N` if `D = 0`) is 1.
fn normalize(f: SpectralForm) -> SpectralForm {
    let lead = if f.d.is_zero() { f.num.lead() } else { f.d.lead() };
    let inv = Rational::one() / lead;
    SpectralForm { d: f.d.scale(&inv), num: f.num.scale(&inv) }
}

pub fn spectral_equation_build(n: u32, c: f64) -> Result<SpectralEquation> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "n = {n} has no confining piece: the member needs n >= 2 for a double pole at x = 0"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("c must be positive, got {c}")));
    }
    let constructed = construct_form(n)?;
    let printed = printed_form(n);
    let printed_matches = printed.as_ref().map(|p| p.proportional_to(&constructed));
    let (form, source) = match &printed {
        Some(p) => (p.clone(), FormSource::Printed),
        None => (constructed.clone(), FormSource::Constructed),
    };
    Ok(SpectralEquation { n, c, form, source, constructed, printed, printed_matches })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralRoot {
    pub m: usize,
    pub kappa: f64,
    /// `E = (κ/c)²`.
    pub energy: f64,
}

/// Asymptotic label `m + n/2`: roots approach `(m + n/2)π`.
pub fn asymptotic_label(n: u32, m: usize) -> f64 {
    m as f64 + 0.5 * n as f64
}

/// First `count` positive roots of the active form, bisected to 1e−12.
///
/// Near `κ = 0` both terms of the cleared form are large compared with their
/// difference, so samples within the round-off floor carry no sign
/// information and are skipped.
pub fn spectral_roots(eq: &SpectralEquation, count: usize) -> Vec<SpectralRoot> {
    let form = &eq.form;
    let f = |k: f64| form.cleared(k);
    let floor = |k: f64| {
        1e3 * f64::EPSILON * (form.d.eval_f64(k).abs() + form.num.eval_f64(k).abs())
    };
    let step = 0.01;
    let mut roots = Vec::with_capacity(count);
    let mut last: Option<(f64, f64)> = None;
    let mut k = step;
    while roots.len() < count {
        let fk = f(k);
        if fk.abs() > floor(k) {
            if let Some((a, fa)) = last {
                if fa * fk < 0.0 {
                    let kappa = bisect(&f, a, k, fa);
                    roots.push(SpectralRoot { m: roots.len() + 1, kappa, energy: (kappa / eq.c).powi(2) });
                }
            }
            last = Some((k, fk));
        }
        k += step;
    }
    roots
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, mut flo: f64) -> f64 {
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if flo * fm < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            flo = fm;
        }
    }
    0.5 * (lo + hi)
}

/// One row of a spectrum table.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SpectrumRow {
    pub n: u32,
    pub m: usize,
    pub kappa_m: f64,
    #[serde(rename = "E_m")]
    pub e_m: f64,
    #[serde(rename = "E_m_numerov")]
    pub e_m_numerov: f64,
    pub rel_diff: f64,
}

pub fn write_spectrum_csv<W: Write>(rows: &[SpectrumRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    let err = |e: csv::Error| Error::Domain(format!("csv: {e}"));
    out.write_record(["n", "m", "kappa_m", "E_m", "E_m_numerov", "rel_diff"]).map_err(err)?;
    for r in rows {
        out.write_record([
            r.n.to_string(),
            r.m.to_string(),
            format!("{:.11e}", r.kappa_m),
            format!("{:.11e}", r.e_m),
            format!("{:.11e}", r.e_m_numerov),
            format!("{:.11e}", r.rel_diff),
        ])
        .map_err(err)?;
    }
    out.flush().map_err(|e| Error::Domain(format!("csv: {e}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n2_construction_reproduces_printed_form() {
        let eq = spectral_equation_build(2, 1.0).unwrap();
        assert_eq!(eq.printed_matches, Some(true));
        let r = spectral_roots(&eq, 1);
        assert!((r[0].kappa - 5.7635).abs() < 1e-4);
    }

    #[test]
    fn n1_rejected() {
        assert!(spectral_equation_build(1, 1.0).is_err());
    }

    #[test]
    fn constructed_forms_are_bessel_zero_conditions() {
        // Independent oracle: j_n(κ) = 0 via upward recurrence.
        fn jn(n: u32, x: f64) -> f64 {
            let (mut a, mut b) = (x.sin() / x, x.sin() / (x * x) - x.cos() / x);
            if n == 0 {
                return a;
            }
            for l in 1..n {
                let c = (2 * l + 1) as f64 / x * b - a;
                a = b;
                b = c;
            }
            b
        }
        for n in 2..=5 {
            let eq = spectral_equation_build(n, 1.0).unwrap().with_constructed();
            for r in spectral_roots(&eq, 6) {
                assert!(jn(n, r.kappa).abs() < 1e-9, "n={n} κ={}", r.kappa);
            }
        }
    }

    #[test]
    fn roots_increase_and_avoid_poles() {
        let eq = spectral_equation_build(3, 1.0).unwrap().with_constructed();
        let roots = spectral_roots(&eq, 20);
        for w in roots.windows(2) {
            assert!(w[1].kappa > w[0].kappa);
        }
        for r in &roots {
            let d = 1e-7;
            assert!(eq.form.residual(r.kappa - d) * eq.form.residual(r.kappa + d) < 0.0);
            assert!(eq.poles_between(r.kappa - 1e-9, r.kappa + 1e-9).is_empty());
        }
    }
}
