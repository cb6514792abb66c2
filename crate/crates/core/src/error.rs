use std::path::PathBuf;

use crate::bayes::Hypothesis;

/// Errors raised by the spoofing-limit computations.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("eigensolver did not converge for a {dim}x{dim} matrix within {max_iter} iterations")]
    NoConvergence { dim: usize, max_iter: usize },

    #[error("numerical inconsistency in {context}: {value:e}")]
    NumericalInconsistency { context: &'static str, value: f64 },

    #[error("no informative projector; the optimal receiver decides {decision} unconditionally")]
    DegenerateProjector { decision: Hypothesis },

    #[error("observed outcome has zero likelihood under both hypotheses")]
    ImpossibleOutcome,

    #[error("flat amplitude prior (lambda = 0) cannot be sampled")]
    NonNormalizablePrior,

    #[error("photon-number cutoff {cutoff} too small (need at least {required})")]
    InsufficientCutoff { cutoff: usize, required: usize },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
