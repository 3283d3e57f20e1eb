use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("vertex {0} out of range")]
    VertexOutOfRange(String),
    #[error("looped edge at {0}")]
    LoopedEdge(String),
    #[error("double edge {0} -> {1}")]
    DoubleEdge(String, String),
    #[error("graph is not admissible: {0}")]
    NotAdmissible(String),
    #[error("graph is not Lie-admissible: {0}")]
    NotLieAdmissible(String),
    #[error("external vertex counts differ: {0} vs {1}")]
    ExternalMismatch(usize, usize),
    #[error("enumeration at n = {n} exceeds the configured bound n <= {max}")]
    TooLarge { n: usize, max: usize },
    #[error("bad edge order: {0}")]
    BadEdgeOrder(String),
    #[error("malformed graph data: {0}")]
    Malformed(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WeightError {
    #[error("coordinate dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("coincident points in angle evaluation")]
    CoincidentPoints,
    #[error("value is not regular: {0}")]
    NonRegularValue(String),
    #[error("solver budget exhausted: {0}")]
    SolverBudget(String),
    #[error("monte carlo budget exhausted: stderr {stderr} above tolerance {tol}")]
    SampleBudget { stderr: f64, tol: f64 },
    #[error("missing weight for class {0}")]
    MissingWeight(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("structure constants are not antisymmetric at ({0}, {1}, {2})")]
    NotAntisymmetric(usize, usize, usize),
    #[error("structure constants violate the Jacobi identity at ({0}, {1}, {2}, {3})")]
    JacobiViolated(usize, usize, usize, usize),
    #[error("expected {expected} arguments, got {got}")]
    ArgumentCount { expected: usize, got: usize },
    #[error("malformed data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
