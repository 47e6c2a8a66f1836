//! Orlicz norms of compact operators on Hilbert space.
//!
//! Operators are described by their singular values: finite matrices through
//! an SVD, diagonal operators directly, and infinite-rank operators through a
//! closed-form singular value sequence with a certified tail bracket.

pub mod bergman;
pub mod ensemble;
pub mod error;
pub mod harness;
pub mod linalg;
pub mod norms;
pub mod operators;
pub mod optimize;
pub mod orlicz;
pub mod output;

pub use error::{Error, Result};
pub use norms::{
    amemiya_norm, classify_membership, luxemburg_norm, modular, MembershipVerdict, ModularValue, NormMethod,
    NormResult, DEFAULT_EPS_TAIL, DEFAULT_REL_TOL,
};
pub use operators::{
    AnalyticOperator, CompactOperator, DenseOperator, DiagonalOperator, RankOneOperator, SingularSpectrum,
    TailBracket,
};
pub use orlicz::{ComplementaryFunction, Family, OrliczFunction, YoungFunction};
