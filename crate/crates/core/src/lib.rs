//! Reductions from Max NAND to nearest-codeword and minimum-distance
//! problems over small finite fields, plus exhaustive oracles that check the
//! bounds on concrete instances.

pub mod codes;
pub mod csp;
pub mod error;
pub mod gf;
pub mod io;
pub mod linalg;
pub mod monomials;
pub mod prg;
pub mod reduction;
pub mod verify;

pub use codes::{AffineSubspace, Distance, DistanceReport, LinearCode};
pub use csp::{Assignment, Constraint, MaxNandInstance};
pub use error::{Error, Result};
pub use gf::{Elem, FieldSpec, Gf};
pub use linalg::{FMatrix, FVector};
pub use prg::EvaluationSet;
