use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("classes live in different ambients (n = {left} vs n = {right})")]
    AmbientMismatch { left: usize, right: usize },
    #[error("class is not characteristic")]
    NotCharacteristic,
    #[error("class has square {found}, expected {expected}")]
    WrongSquare { expected: String, found: String },
    #[error("vector of square {0} does not define an integral reflection")]
    NotAReflection(String),
    #[error("no reflection reduces {0} further")]
    NormalizationStuck(String),
    #[error("move budget of {0} reflections exhausted")]
    MoveBudgetExhausted(usize),

    #[error("invalid chain parameters p = {p}, q = {q}: need p > q >= 1 and gcd(p, q) = 1")]
    InvalidPq { p: String, q: String },
    #[error("malformed chain: {0}")]
    MalformedChain(String),
    #[error("vertex index {index} out of range for a chain of length {len}")]
    VertexOutOfRange { index: usize, len: usize },
    #[error("boundary homology is not cyclic (invariants {0})")]
    NonCyclicBoundary(String),
    #[error("meridian of vertex {0} does not generate the boundary homology")]
    NotAGenerator(usize),
    #[error("chain has no (p, q) provenance and its discriminant {0} is not a square")]
    MissingProvenance(String),

    #[error("configuration does not verify: {0}")]
    UnverifiedConfiguration(String),
    #[error("kernel has rank {0}; expected at most one null direction")]
    KernelRank(usize),
    #[error("classes with pairing {0} cannot be smoothed")]
    NonPositivePairing(String),
    #[error("negative blow-up multiplicity {0}")]
    NegativeMultiplicity(i64),

    #[error("{value} - 3*sigma - 2*chi is not divisible by 4")]
    DimensionNotIntegral { value: String },
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("constraint index {0} out of range")]
    ConstraintIndex(usize),
    #[error("wall test precondition failed: {0}")]
    ChamberPrecondition(String),

    #[error("monodromy factor {index} has determinant {det}")]
    NotSl2 { index: usize, det: String },
    #[error("malformed fiber: {0}")]
    MalformedFiber(String),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("unsupported pencil: {0}")]
    UnsupportedPencil(String),
    #[error("curves share the component {0}")]
    SharedComponent(String),
    #[error("polynomial parse error: {0}")]
    PolyParse(String),

    #[error("scenario error: {0}")]
    Scenario(String),
    #[error("unknown output format {0}")]
    UnknownFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
