use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid scenario: {0}")]
    Scenario(String),

    #[error("{solver} did not converge after {iterations} iterations (boundary residual {boundary_residual:.3e}, normalization residual {norm_residual:.3e})")]
    NonConvergence {
        solver: &'static str,
        iterations: usize,
        boundary_residual: f64,
        norm_residual: f64,
    },

    #[error("profile has {nodes} interior node(s); expected the nodeless radial ground state")]
    NodeDetected { nodes: usize },

    #[error("profile and scenario disagree: {0}")]
    KindMismatch(String),

    #[error("potential requested on the singular rim (xi = {xi}, z = {z}); offset the point by at least 1e-6")]
    RimSingularity { xi: f64, z: f64 },

    /// `line` is 1-based; 0 refers to the file as a whole.
    #[error("{}", parse_message(.path, *.line, .message))]
    Parse { path: PathBuf, line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn parse_message(path: &std::path::Path, line: usize, message: &str) -> String {
    if line == 0 {
        format!("{}: {message}", path.display())
    } else {
        format!("{}:{line}: {message}", path.display())
    }
}
