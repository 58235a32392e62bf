use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at offset {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} values, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("polynomial still contains an uninstantiated parameter")]
    UninstantiatedParameter,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("multiindex entry {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("frame is not bracket generating within step cap {cap} (reached dimension {reached} of {dim})")]
    NotBracketGeneratingWithinCap { cap: usize, reached: usize, dim: usize },
    #[error("invalid submanifold: {0}")]
    InvalidSubmanifold(String),
    #[error("parametrization is not an immersion at the given parameters (Jacobian rank {rank} < {dim})")]
    NotImmersion { rank: usize, dim: usize },
    #[error("point is not on submanifold {0}")]
    PointNotOnSubmanifold(String),
    #[error("submanifold {name} failed the equiregularity check: {reason}")]
    EquiregularityFailed { name: String, reason: String },
    #[error("bracket family enumeration exceeded the budget of {budget} families")]
    EnumerationOverflow { budget: usize },
    #[error("no bracket families of total length {q_ref} with {n} members exist")]
    NoFamilies { q_ref: usize, n: usize },
    #[error("every bracket family of total length {q_ref} vanishes at the point")]
    AllFamiliesVanish { q_ref: usize },
    #[error("privilege test failed at truncation order {trunc}: coordinate {coord} has order {found} instead of weight {weight}")]
    TruncationInsufficient {
        trunc: u32,
        coord: usize,
        found: String,
        weight: u32,
    },
    #[error("nilpotentization left a term of weighted degree below -1 in field {field}, component {component}")]
    NonHomogeneous { field: usize, component: usize },
    #[error("adapted fields are dependent or misplaced: {0}")]
    DependentAdaptedSet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("strata list is empty")]
    EmptyStrata,
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
    #[error("integration budget exceeded: {0}")]
    IntegrationBudget(String),
    #[error("integrator failure: {0}")]
    Integrator(String),
    #[error("{location}: {source}")]
    Parse {
        location: String,
        #[source]
        source: ParseError,
    },
    #[error("{location}: {message}")]
    Manifest { location: String, message: String },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
