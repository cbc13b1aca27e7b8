use thiserror::Error;

/// Crate-wide error type. Variants are grouped by the layer that raises them;
/// the CLI maps them onto exit codes (parse -> 1, precondition -> 2,
/// unsolvable -> 3).
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph construction: {0}")]
    Graph(String),

    #[error("dimacs parse: {0}")]
    DimacsParse(String),

    #[error("graph is disconnected; reduce per component before calling this")]
    Disconnected,

    #[error("coloring sequence: {0}")]
    Sequence(String),

    #[error("state space {size} exceeds the configured cap {cap}")]
    StateCap { size: u128, cap: u128 },

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("axis kind mismatch: expected {expected}, got {got}")]
    AxisKind { expected: String, got: String },

    #[error("no valid coloring{}", detail_suffix(.chromatic))]
    Unsolvable { chromatic: Option<u32> },

    #[error("constraint violation at {step}: {reason}")]
    ConstraintViolation { step: String, reason: String },

    #[error("no feasible color for node {node} within {k} colors")]
    NoFeasibleColor { node: u32, k: u32 },
}

fn detail_suffix(chromatic: &Option<u32>) -> String {
    match chromatic {
        Some(x) => format!(" (chromatic number is {x})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
