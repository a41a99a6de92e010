use thiserror::Error;

#[derive(Debug, Error)]
pub enum SatError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {v} out of range for n = {n}")]
    VertexRange { v: usize, n: usize },
    #[error("pattern has {got} vertices, guard is {max}")]
    PatternTooLarge { got: usize, max: usize },
    #[error("coupling violation: pair ({0}, {1}) already exposed")]
    Coupling(usize, usize),
    #[error("edge ({0}, {1}) already present")]
    EdgePresent(usize, usize),
    #[error("subgraph edge ({0}, {1}) missing from host")]
    Containment(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("size guard: {0}")]
    Size(String),
    #[error("not applicable: {0}")]
    Applicability(String),
    #[error("p = {0} outside the supported range (use force to override)")]
    Range(f64),
    #[error("construction failed: {0}")]
    ConstructionFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, SatError>;
