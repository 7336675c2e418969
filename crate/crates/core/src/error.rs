use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph order {0} is outside the supported range 0..={max}", max = crate::graph::MAX_ORDER)]
    OrderOutOfRange(usize),

    #[error("vertex {vertex} out of range for a graph of order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },

    #[error("vertex {0} appears more than once in the subset")]
    DuplicateVertex(usize),

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("canonical codes are defined for orders {min}..={max}, got {got}")]
    CanonicalOrder { got: usize, min: usize, max: usize },

    #[error("catalogs are available for orders 1..=6, got {0}")]
    CatalogOrder(usize),

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("expected exactly one graph in {path}, found {found}")]
    GraphCount { path: PathBuf, found: usize },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("{family}{index} is not an integer at n={n}, k={k}: {value}")]
    NonIntegral {
        family: char,
        index: usize,
        n: String,
        k: String,
        value: String,
    },

    #[error("infeasible n3={n3}: {}", .violations.join("; "))]
    InfeasibleN3 { n3: String, violations: Vec<String> },

    #[error("expression error: {0}")]
    Expr(String),

    #[error("data table error: {0}")]
    Data(String),

    #[error("brute-force census of {subsets} subsets exceeds the budget of {budget}; use the fast method")]
    BudgetExceeded { subsets: u128, budget: u128 },

    #[error("census completion failed: {0}")]
    Completion(String),

    #[error("host is not an srg(n,k,1,2): {0}")]
    NotInFamily(String),

    #[error("construction self-check failed: {0}")]
    Construction(String),

    #[error("anchor class {0} not found among feasible classes")]
    MissingAnchor(&'static str),

    #[error("serialization error: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Wraps an I/O error with the path it concerns.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
