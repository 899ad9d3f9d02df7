use std::fmt;

use serde::Serialize;

use crate::error::Result;
use crate::exactrat::{rat, rational_from_f64, rational_to_f64, rf_real_poles, Rational, RationalFunction};
use crate::func::Func;

/// Potential family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Free,
    /// `n(n+1)/x²`.
    Centrifugal { n: u32 },
    /// `n(n+1) sec²x`.
    SecSquared { n: u32 },
    /// `−n(n+1) cosh⁻²x`.
    SechSquared { n: u32 },
    /// `n(n+1) sinh⁻²x`.
    CschSquared { n: u32 },
    /// `2 csc²x`.
    CscSquared,
    /// Zero-energy partner of `n(n+1)/x²` generated by `φ = μ/xⁿ + x^{n+1}`.
    /// `n = 1` is the second-step potential `6x(x³−2μ)/(x³+μ)²`.
    ZeroEnergyPartner { n: u32, mu: Rational },
    /// `(a + b cos x)/sin²x`.
    TrigA { a: Rational, b: Rational },
    /// Output of an arbitrary Darboux step or chain.
    Custom(String),
}

impl Family {
    /// Short identifier used by the CLI and reports.
    pub fn id(&self) -> &'static str {
        match self {
            Family::Free => "free",
            Family::Centrifugal { .. } => "37",
            Family::SecSquared { .. } => "38",
            Family::SechSquared { .. } => "39",
            Family::CschSquared { .. } => "40",
            Family::CscSquared => "csc2",
            Family::ZeroEnergyPartner { n: 1, .. } => "10",
            Family::ZeroEnergyPartner { n: 2, .. } => "22",
            Family::ZeroEnergyPartner { .. } => "32",
            Family::TrigA { .. } => "41",
            Family::Custom(_) => "custom",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Free => write!(f, "V = 0"),
            Family::Centrifugal { n } => write!(f, "{}/x^2", n * (n + 1)),
            Family::SecSquared { n } => write!(f, "{} sec^2 x", n * (n + 1)),
            Family::SechSquared { n } => write!(f, "-{} cosh^-2 x", n * (n + 1)),
            Family::CschSquared { n } => write!(f, "{} sinh^-2 x", n * (n + 1)),
            Family::CscSquared => write!(f, "2 csc^2 x"),
            Family::ZeroEnergyPartner { n, mu } => write!(f, "zero-energy partner n={n}, mu={mu}"),
            Family::TrigA { a, b } => write!(f, "({a} + {b} cos x)/sin^2 x"),
            Family::Custom(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PieceCharacter {
    ScatteringWithBoundState,
    Confining,
    PurelyRepulsive,
    WholeLine,
}

/// One end of a domain piece.
///
/// `strength` is `s` in `V ≈ s/(x−at)²` at a finite end, or `V ≈ s/x²` at an
/// infinite end. `None` when the behavior is not of that form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Edge {
    pub at: f64,
    pub strength: Option<f64>,
}

impl Edge {
    pub fn new(at: f64, strength: f64) -> Edge {
        Edge { at, strength: Some(strength) }
    }

    pub fn is_infinite(&self) -> bool {
        self.at.is_infinite()
    }

    /// Angular momentum `l ≥ −1/2` with `l(l+1) = strength`.
    pub fn l(&self) -> Option<f64> {
        self.strength.map(angular_momentum)
    }
}

/// `l` with `l(l+1) = s`, taking the root `l ≥ −1/2`.
pub fn angular_momentum(s: f64) -> f64 {
    0.5 * ((1.0 + 4.0 * s).max(0.0).sqrt() - 1.0)
}

/// Open interval of the real line between two poles (or infinities).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DomainPiece {
    pub lo: Edge,
    pub hi: Edge,
    pub character: PieceCharacter,
}

impl DomainPiece {
    pub fn contains(&self, x: f64) -> bool {
        x > self.lo.at && x < self.hi.at
    }

    pub fn whole_line() -> DomainPiece {
        DomainPiece {
            lo: Edge::new(f64::NEG_INFINITY, 0.0),
            hi: Edge::new(f64::INFINITY, 0.0),
            character: PieceCharacter::WholeLine,
        }
    }
}

/// A potential family instance: evaluator plus piece decomposition.
#[derive(Clone, Debug)]
pub struct PotentialSpec {
    pub family: Family,
    pub evaluator: Func,
    pub pieces: Vec<DomainPiece>,
}

impl PotentialSpec {
    pub fn eval(&self, x: f64) -> Result<f64> {
        self.evaluator.eval(x)
    }

    pub fn exact(&self) -> Option<&RationalFunction> {
        self.evaluator.as_rational()
    }

    /// Index of the piece containing `x`.
    pub fn piece_of(&self, x: f64) -> Option<usize> {
        self.pieces.iter().position(|p| p.contains(x))
    }

    /// Piece decomposition derived from the real poles of an exact rational
    /// potential. Characters are assigned from the piece's shape: bounded
    /// pieces are confining; unbounded pieces are purely repulsive when the
    /// potential is nonnegative on a probe grid, and flagged as possibly
    /// binding otherwise.
    pub fn from_rational(family: Family, v: RationalFunction) -> PotentialSpec {
        let pieces = rational_pieces(&v);
        PotentialSpec { family, evaluator: Func::rational(v), pieces }
    }
}

/// Coefficient `s` of `s/x²` at infinity, if the decay is at least that fast.
pub fn far_strength(v: &RationalFunction) -> Option<f64> {
    let dn = v.num().degree();
    let dd = v.den().degree().unwrap_or(0);
    match dn {
        None => Some(0.0),
        Some(dn) if dn + 2 == dd => Some(rational_to_f64(&(v.num().lead() / v.den().lead()))),
        Some(dn) if dn + 2 < dd => Some(0.0),
        _ => None,
    }
}

/// Coefficient of `(x−x0)⁻²` at a real pole.
pub fn pole_strength(v: &RationalFunction, at: f64, exact: Option<&Rational>) -> f64 {
    match exact {
        Some(x0) => rational_to_f64(&v.laurent_coeff(x0, -2)),
        None => {
            // Irrational double root of the denominator: V ≈ 2N(x0)/D''(x0) / (x−x0)².
            let q = rational_from_f64(at);
            let n = v.num().eval(&q);
            let d2 = v.den().derive().derive().eval(&q);
            rational_to_f64(&(n * rat(2) / d2))
        }
    }
}

fn rational_pieces(v: &RationalFunction) -> Vec<DomainPiece> {
    let poles = rf_real_poles(v, -1e12, 1e12);
    if poles.is_empty() {
        return vec![DomainPiece::whole_line()];
    }
    let far = far_strength(v);
    let mut edges = vec![Edge { at: f64::NEG_INFINITY, strength: far }];
    for p in &poles {
        let s = if p.multiplicity == 2 {
            Some(pole_strength(v, p.location, p.exact.as_ref()))
        } else {
            None
        };
        edges.push(Edge { at: p.location, strength: s });
    }
    edges.push(Edge { at: f64::INFINITY, strength: far });
    let f = v.compile();
    edges
        .windows(2)
        .map(|w| {
            let (lo, hi) = (w[0], w[1]);
            let character = if lo.is_infinite() || hi.is_infinite() {
                let (a, b) = if lo.is_infinite() {
                    (hi.at - 50.0, hi.at)
                } else {
                    (lo.at, lo.at + 50.0)
                };
                let attractive = (1..400).any(|i| {
                    let x = a + (b - a) * i as f64 / 400.0;
                    f.eval(x).map(|y| y < 0.0).unwrap_or(false)
                });
                if attractive {
                    PieceCharacter::ScatteringWithBoundState
                } else {
                    PieceCharacter::PurelyRepulsive
                }
            } else {
                PieceCharacter::Confining
            };
            DomainPiece { lo, hi, character }
        })
        .collect()
}
