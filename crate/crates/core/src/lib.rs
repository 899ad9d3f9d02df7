#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod catalog;
pub mod darboux;
pub mod error;
pub mod exactrat;
pub mod func;
pub mod kdv;
pub mod potential;
pub mod quad;
pub mod scattering;
pub mod schrodinger;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use func::Func;
pub use potential::{DomainPiece, Edge, Family, PieceCharacter, PotentialSpec};
