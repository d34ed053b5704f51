//! Evaluation of generalized hypergeometric functions `pFq(alpha; beta; z)`
//! by linear-complexity, overflow-resistant Drummond and factorial
//! Levin-type sequence transformations.
//!
//! The public entry point is [`driver::pfq`]. Everything is generic over the
//! [`Real`] scalar, implemented for `f64`, [`Dd`] and [`Qd`].

pub mod driver;
pub mod drummond;
pub mod experiments;
pub mod grid;
pub mod hyperterm;
pub mod multifloat;
pub mod padeexp;
pub mod poles;
pub mod poly;
pub mod reference;
pub mod scalar;
pub mod weniger;

pub use driver::{pfq, pfq_guaranteed, transform_limit, EvalOptions, EvalResult, Method, Status};
pub use hyperterm::{HyperParams, OmegaKind, RecurrencePolys};
pub use multifloat::{Dd, MultiFloat, Qd};
pub use scalar::{Cx, Real};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("lower parameter beta[{0}] is a nonpositive integer and the series does not terminate before it")]
    LowerParameterPole(usize),
    #[error("remainder estimate vanishes at n = {0}")]
    ZeroOmega(usize),
    #[error("a_(n+1) - a_n vanishes identically; the Aitken remainder estimate is undefined")]
    AitkenDegenerate,
    #[error("gamma = {0} is too close to a pole of the inverse factorial weights")]
    BadGamma(f64),
    #[error("vanishing pivot in the recurrence at order {0}")]
    ZeroPivot(usize),
    #[error("series does not terminate")]
    NotTerminating,
    #[error("term overflow at index {0}")]
    Overflow(usize),
    #[error("no convergence after {0} steps")]
    NoConvergence(usize),
    #[error("successive precision tiers disagree up to {0} bits")]
    PrecisionExhausted(u32),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
