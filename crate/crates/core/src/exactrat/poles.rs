//! Real-root isolation for the denominators of rational functions.
//!
//! Each square-free factor from Yun's decomposition gets a Sturm sequence;
//! roots are isolated by exact rational bisection and then refined until the
//! bracket is narrower than the requested tolerance. A root is reported as
//! exact when the simplest rational inside its final bracket is a root.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::poly::{rat, rational_to_f64, Poly, Rational};
use super::ratfunc::RationalFunction;

/// A real root of a denominator (a pole of the rational function).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Pole {
    pub location: f64,
    #[serde(skip)]
    pub exact: Option<Rational>,
    pub multiplicity: usize,
}

/// Width below which an isolating bracket is considered located.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Real poles of `a` inside the closed interval `[lo, hi]`, sorted by location.
pub fn rf_real_poles(a: &RationalFunction, lo: f64, hi: f64) -> Vec<Pole> {
    assert!(lo < hi, "rf_real_poles requires lo < hi");
    let mut out: Vec<Pole> = real_roots(a.den())
        .into_iter()
        .filter(|p| p.location >= lo && p.location <= hi)
        .collect();
    out.sort_by(|x, y| x.location.total_cmp(&y.location));
    out
}

/// All real roots of `p` with multiplicities.
pub fn real_roots(p: &Poly) -> Vec<Pole> {
    let mut out = Vec::new();
    for (factor, mult) in p.square_free() {
        for (root, exact) in isolate_square_free(&factor) {
            out.push(Pole { location: root, exact, multiplicity: mult });
        }
    }
    out.sort_by(|x, y| x.location.total_cmp(&y.location));
    out
}

fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone(), p.derive()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
        if r.is_zero() {
            break;
        }
        seq.push(-&r);
    }
    seq
}

fn sign_changes(seq: &[Poly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for q in seq {
        let v = q.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Strict bound on the absolute value of every root (Cauchy).
fn cauchy_bound(p: &Poly) -> Rational {
    let lead = p.lead().abs();
    let max = p
        .coeffs()
        .iter()
        .take(p.coeffs().len() - 1)
        .map(|c| c.abs() / &lead)
        .fold(Rational::zero(), |m, c| if c > m { c } else { m });
    max + rat(1)
}

/// Split point inside `(a, b)` that is not a root of `p`.
fn split_point(p: &Poly, a: &Rational, b: &Rational) -> Rational {
    let half = (a + b) / rat(2);
    if !p.eval(&half).is_zero() {
        return half;
    }
    let w = b - a;
    let mut k = 3i64;
    loop {
        let m = &half + &w / rat(k * 7 + 1);
        if !p.eval(&m).is_zero() {
            return m;
        }
        k += 1;
    }
}

fn isolate_square_free(p: &Poly) -> Vec<(f64, Option<Rational>)> {
    let seq = sturm_sequence(p);
    let b = cauchy_bound(p);
    let a = -b.clone();
    let mut stack = vec![(a, b)];
    let mut brackets = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let n = sign_changes(&seq, &lo) - sign_changes(&seq, &hi);
        match n {
            0 => {}
            1 => brackets.push((lo, hi)),
            _ => {
                let m = split_point(p, &lo, &hi);
                stack.push((lo, m.clone()));
                stack.push((m, hi));
            }
        }
    }
    brackets
        .into_iter()
        .map(|(lo, hi)| refine(p, lo, hi))
        .collect()
}

fn refine(p: &Poly, mut lo: Rational, mut hi: Rational) -> (f64, Option<Rational>) {
    // Isolating interval (lo, hi] with p(lo), p(hi) nonzero.
    if p.eval(&hi).is_zero() {
        return (rational_to_f64(&hi), Some(hi));
    }
    let tol = Rational::new(BigInt::one(), BigInt::from(10u64).pow(13));
    let s_lo = p.eval(&lo).is_positive();
    while &hi - &lo > tol {
        let m = split_point(p, &lo, &hi);
        if p.eval(&m).is_positive() == s_lo {
            lo = m;
        } else {
            hi = m;
        }
    }
    let cand = simplest_between(&lo, &hi);
    if p.eval(&cand).is_zero() {
        return (rational_to_f64(&cand), Some(cand));
    }
    (rational_to_f64(&((&lo + &hi) / rat(2))), None)
}

/// Simplest rational (smallest denominator) in `[lo, hi]`, via continued fractions.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi, &-lo);
    }
    simplest_positive(lo, hi, 0)
}

fn simplest_positive(lo: &Rational, hi: &Rational, depth: usize) -> Rational {
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    let next = &fl + rat(1);
    if &next <= hi || depth > 200 {
        return next;
    }
    let a = (hi - &fl).recip();
    let b = (lo - &fl).recip();
    fl + simplest_positive(&a, &b, depth + 1).recip()
}

#[cfg(test)]
mod tests {
    use super::super::poly::ratio;
    use super::*;

    #[test]
    fn simplest_rational_is_found() {
        assert_eq!(simplest_between(&ratio(31, 100), &ratio(34, 100)), ratio(1, 3));
        assert_eq!(simplest_between(&ratio(-7, 5), &ratio(-6, 5)), ratio(-4, 3));
        assert_eq!(simplest_between(&ratio(-11, 10), &ratio(-9, 10)), rat(-1));
    }

    #[test]
    fn no_real_roots() {
        let f = RationalFunction::new(Poly::one(), Poly::from_ints(&[1, 0, 1])).unwrap();
        assert!(rf_real_poles(&f, -10.0, 10.0).is_empty());
    }

    #[test]
    fn irrational_root_is_bracketed() {
        let p = Poly::from_ints(&[-2, 0, 1]);
        let r = real_roots(&p);
        assert_eq!(r.len(), 2);
        assert!((r[1].location - 2f64.sqrt()).abs() < 1e-12);
        assert!(r[1].exact.is_none());
    }

    #[test]
    fn multiplicities_reported() {
        let p = Poly::from_ints(&[1, 1]).pow(2) * Poly::from_ints(&[-3, 2]);
        let r = real_roots(&p);
        assert_eq!(r.len(), 2);
        assert_eq!(r[0].exact, Some(rat(-1)));
        assert_eq!(r[0].multiplicity, 2);
        assert_eq!(r[1].exact, Some(ratio(3, 2)));
        assert_eq!(r[1].multiplicity, 1);
    }
}
