use thiserror::Error;

use crate::upoly::Poly;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("tower mismatch: elements live in incompatible extension towers")]
    TowerMismatch,

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid extension: {0}")]
    InvalidExtension(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// Adjoining a root of `factor` would exceed the configured tower depth.
    /// `branch` is the partial sum of the solver node being expanded, if any.
    #[error("extension depth cap {cap} reached; unsplit factor {factor}{}", at_branch(.branch))]
    DepthCap {
        cap: usize,
        factor: Poly,
        branch: Option<String>,
    },

    #[error("oracle cap {cap} exceeded (requested {requested})")]
    OracleCap { cap: usize, requested: usize },

    #[error("edge does not belong to the operator's Newton polygon")]
    EdgeMismatch,

    #[error("point ({0}, {1}) is not a vertex of the Newton polygon")]
    NotAVertex(String, usize),

    #[error("internal consistency check failed: {0}")]
    Consistency(String),
}

fn at_branch(branch: &Option<String>) -> String {
    branch
        .as_ref()
        .map_or(String::new(), |b| format!(" at branch {b}"))
}

pub type Result<T> = std::result::Result<T, Error>;
