//! Verification engine for multiparameter Manin-matrix identities.
//!
//! Every identity is reduced to a question of the form "does `LHS - RHS` lie in the
//! two-sided ideal generated by the defining relations, in a fixed weighted degree",
//! decided by sparse exact linear algebra over a prime field or the rationals.

pub mod det;
pub mod error;
pub mod freealg;
pub mod ideal;
pub mod models;
pub mod qcomb;
pub mod report;
pub mod runner;
pub mod scalar;
pub mod suites;
pub mod tensor;
pub mod yangian;

pub use error::{Error, Result};
pub use freealg::{Alphabet, Family, Letter, NCPoly, Word};
pub use qcomb::{MultiIndex, Permutation};
pub use scalar::{Fp, Fp61, Mode, ParamMatrix, ParameterAssignment, Scalar, Q};
