//! Independent queens on the torus `Z_n^d`.
//!
//! A queen on `Z_n^d` attacks along every line `p + t·ε` where `ε` is a
//! nonzero vector in `{-1, 0, 1}^d`. This crate builds explicit independent
//! placements, checks them with two independent verifiers, emits
//! recomputable congruence certificates that bound the maximum, and runs an
//! exact branch-and-bound search that serves as ground truth at small sizes.
//!
//! Module map:
//!
//! - [`arith`]: exact residues, CRT, prime utilities and move directions.
//! - [`lines`]: the conflict relation, line-labelling projections and the
//!   two placement verifiers.
//! - [`constructions`]: explicit placement families and the dispatcher that
//!   picks the best one for `(n, d)`.
//! - [`certificates`]: power sums and impossibility certificates.
//! - [`solver`]: exact maximum search and the decision variant.

pub mod arith;
pub mod certificates;
pub mod constructions;
mod error;
pub mod lines;
pub mod solver;

pub use arith::{crt_combine, enumerate_directions, normalize, Direction, Residue};
pub use error::{Error, Result};
pub use lines::{DiagonalMap, Placement, Point, VerifyReport};
