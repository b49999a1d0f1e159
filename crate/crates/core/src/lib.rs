//! Exact verification machinery for subspace arrangements of the rotation
//! groups `G(m,1,2) ⊂ O₄(ℝ)` against the arrangements of real reflection
//! groups of degree at most four.
//!
//! The crate is layered bottom-up:
//!
//! * [`rational`] and [`cyclo`]: exact arithmetic in cyclotomic fields;
//! * [`linalg`]: matrices and canonical (RREF) subspaces over those fields;
//! * [`groups`]: matrix group closure, `G(m,p,n)`, realification and the
//!   catalog of real reflection groups;
//! * [`arrangements`]: isotropy and reflection arrangements, the plane
//!   meeting counts and the orthogonal-splitting dichotomy;
//! * [`verify`]: end-to-end checks that produce machine-readable reports.

pub mod arrangements;
pub mod cyclo;
pub mod groups;
pub mod linalg;
pub mod rational;
pub mod verify;

pub use cyclo::CycNum;
pub use linalg::{MatrixF, Subspace};
pub use rational::Rational;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u32, u32),
    #[error("Q(zeta_{from}) is not a subfield of Q(zeta_{to})")]
    NotASubfield { from: u32, to: u32 },
    #[error("conductor {0} is not divisible by 4, so i is not in the field")]
    NoImaginaryUnit(u32),
    #[error("element is not real")]
    NotReal,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown catalog label {0:?}")]
    UnknownLabel(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("group closure exceeded {cap} elements (group too large or not finite at this conductor)")]
    ClosureCap { cap: usize },
    #[error("group is not generated by its reflections")]
    NotAReflectionGroup,
    #[error("plane precondition violated: {0}")]
    PlanePrecondition(String),
    #[error("factor structure rejected: {0}")]
    FactorStructure(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
