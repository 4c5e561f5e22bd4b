use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Precondition and arithmetic failures. Every variant names the invariant
/// that was violated so the CLI can report it verbatim.
#[derive(Debug, Error)]
pub enum Error {
    #[error("zero is not a valid form entry or scalar (forms are nondegenerate)")]
    ZeroValue,

    #[error("value exceeds the supported desk-scale magnitude")]
    Overflow,

    #[error("dimension {0} exceeds the supported bound of 64")]
    DimensionTooLarge(usize),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("expected dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },

    #[error("e{level} undefined: Witt class is not in I^{level} ({obstruction})")]
    NotInIdeal {
        level: u8,
        obstruction: &'static str,
    },

    #[error("delta is a square: the quadratic extension degenerates to F x F, where every unitary involution is hyperbolic; rejected")]
    SplitEtaleDelta,

    #[error("hermitian forms live over different quadratic extensions")]
    ContextMismatch,

    #[error("discriminant algebra is only defined in even rank/degree, got {0}")]
    OddRank(usize),

    #[error("degree {got} invalid here: expected {expected}")]
    WrongDegree { expected: &'static str, got: usize },

    #[error("discriminant algebras differ; the relative Arason invariant in even degree requires isomorphic discriminant algebras")]
    DiscAlgebraMismatch,

    #[error("discriminant algebra is not split; {0} requires a split discriminant algebra")]
    NonSplitDiscAlgebra(&'static str),

    #[error("non-split underlying algebra is out of scope; beta must be split")]
    NonSplitOutOfScope,

    #[error("Clifford algebras not isomorphic: the rescaled difference is not in I^3")]
    CliffordMismatch,

    #[error("discriminant ratio is not a norm of the quadratic extension; orthogonal descents must have matching discriminant algebras")]
    DiscRatioNotNorm,

    #[error("unknown check name: {0}")]
    UnknownCheck(String),

    #[error(
        "internal consistency check failed for {0}; this indicates a bug, please report the inputs"
    )]
    TheoremCheck(&'static str),
}
