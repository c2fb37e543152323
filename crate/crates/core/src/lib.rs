//! Linear complexity, k-error linear complexity and critical error linear
//! complexity spectra (CELCS) of `2^n`-periodic binary sequences.
//!
//! - [`seq`]: the sequence type, Games-Chan and a polynomial oracle.
//! - [`spectrum`]: exact k-error complexities and spectra.
//! - [`cube`]: cubes, exponent masks and cube decompositions.
//! - [`descent`]: closed forms for the second and third descent points.
//! - [`counting`]: counting functions for sequences with given descents.
//! - [`harness`]: exhaustive and sampled verification of all of the above.

pub mod counting;
pub mod cube;
pub mod descent;
pub mod error;
pub mod harness;
pub mod seq;
pub mod spectrum;

pub use counting::{CountQuery, CountResult, DescentKind};
pub use cube::{Cube, CubeDecomposition, Mask};
pub use descent::DescentBranch;
pub use error::{Error, Result};
pub use harness::{TheoremId, VerifyReport};
pub use seq::{lc_poly_oracle, parse_sequence, Seq};
pub use spectrum::{BruteForce, Celcs};
