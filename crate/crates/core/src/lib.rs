//! Certification of non-singularity and stability for interval matrices.
//!
//! An interval matrix `[A_m - eps*Delta, A_m + eps*Delta]` is non-singular when
//! the radius of non-singularity `d(A_m, Delta)` exceeds `eps`. For a rank-1
//! perturbation `Delta = delta * v^T` the radius reduces to `d = 1/r` with
//!
//! ```text
//! r = max { v^T T_z A_m^-1 T_y delta  |  z, y in {-1, 1}^n }
//! ```
//!
//! This crate computes `r` two ways: an exact enumeration over the sign cube
//! ([`radius`]) and a QAOA heuristic run on a built-in statevector simulator
//! ([`sim`], [`opt`]). The [`verify`] module turns either value into a
//! certificate, including robust stability of symmetric interval matrices.

pub mod error;
pub mod interval;
pub mod linalg;
pub mod opt;
pub mod radius;
pub mod report;
pub mod sim;
pub mod verify;

pub use error::{Error, Result};
pub use interval::IntervalMatrix;
pub use linalg::{RealMatrix, Tolerances};
pub use opt::{QaoaConfig, QaoaParams};
pub use radius::{BitString, Rank1Delta, SignPair};
pub use report::{Decision, Method, RadiusReport};
pub use sim::{CountsHistogram, DiagonalHamiltonian, Statevector};
pub use verify::{ProblemSpec, ResolvedProblem};
