use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("unknown function symbol `{0}`")]
    UnknownSymbol(String),
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("denominator vanishes at the point: {0}")]
    PoleAtPoint(String),
    #[error("no value assigned to `{0}`")]
    IncompleteValuation(String),
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("frame is linearly dependent over the fraction field (rank {rank} < {len})")]
    DependentFrame { rank: usize, len: usize },
    #[error("one-forms are linearly dependent (rank {rank} < {len})")]
    DependentForms { rank: usize, len: usize },
    #[error("generators are linearly dependent")]
    DependentGenerators,
    #[error("invalid splitting: {0}")]
    InvalidSplitting(String),
    #[error("a derivative of unknown `{unknown}` survives reduction: {witness}")]
    DerivativeObstruction { unknown: String, witness: String },
    #[error("unknowns enter nonlinearly: {0}")]
    Nonlinear(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system is underdetermined (rank defect {0})")]
    Underdetermined(usize),
    #[error("substitution and inverse do not compose to the identity: {0}")]
    NotInverse(String),
    #[error("subbundle is not spanned by coordinate fields")]
    NotCoordinateAligned,
    #[error("reduced coefficient depends on quotiented coordinate `{0}`")]
    NotBasic(String),
    #[error("bracket with the subbundle leaves the distribution")]
    NotInvariant,
    #[error("growth vector {found:?} does not match expected {expected:?}")]
    GrowthMismatch { expected: Vec<usize>, found: Vec<usize> },
    #[error("rank mismatch: {0}")]
    RankMismatch(String),
    #[error("claim `{claim}` failed at {condition}: residue {residue}")]
    ClaimFailed {
        claim: String,
        condition: String,
        residue: String,
    },
    #[error("unknown claim `{0}`")]
    UnknownClaim(String),
    #[error("nullity constraint {0} fails after substitution")]
    ConstraintResidue(String),
    #[error("function m must not be constant")]
    ConstantM,
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}
