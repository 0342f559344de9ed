use thiserror::Error;

/// Errors produced by the routing library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("size mismatch: {left} vs {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("mapping is not injective: target {0} used twice")]
    NotInjective(usize),

    #[error("domains overlap at {0}")]
    OverlappingDomains(usize),

    #[error("images overlap at {0}")]
    OverlappingImages(usize),

    #[error("invalid architecture: {0}")]
    InvalidArchitecture(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("no perfect matching exists")]
    NoPerfectMatching,

    #[error("permuter does not support this graph: {0}")]
    UnsupportedGraph(String),

    #[error("line {line}: {msg}")]
    Qasm { line: usize, msg: String },

    #[error("circuit has {qubits} qubits but the architecture only {vertices} vertices")]
    TooManyQubits { qubits: usize, vertices: usize },

    #[error("cannot simulate: {0}")]
    NotSimulable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
