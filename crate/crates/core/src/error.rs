use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} exceeded the configured cap of {cap}")]
    ResourceLimit { what: &'static str, cap: usize },

    #[error("graph is not regular")]
    NotRegular,

    #[error("graph is disconnected")]
    Disconnected,

    #[error("graph generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("{0} is not an odd prime")]
    NotPrime(u64),

    #[error("generator {0:?} is not in SL2 (determinant != 1)")]
    NotInSl2([u64; 4]),

    #[error("iterative eigensolver did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },

    #[error("subgraph is not a spanning subgraph of the host graph: {0}")]
    NotSpanningSubgraph(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
