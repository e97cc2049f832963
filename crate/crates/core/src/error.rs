use thiserror::Error;

/// Failures raised by the dense kernel and the predicates built on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("index ({i}, {j}) out of range for {bound}x{bound} block grid")]
    Index { i: usize, j: usize, bound: usize },

    #[error("domain error in {op}: {detail}")]
    Domain { op: &'static str, detail: String },

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{op} did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence {
        op: &'static str,
        sweeps: usize,
        residual: f64,
    },
}

impl LinalgError {
    pub(crate) fn dim(op: &'static str, detail: impl Into<String>) -> Self {
        LinalgError::Dimension {
            op,
            detail: detail.into(),
        }
    }

    pub(crate) fn domain(op: &'static str, detail: impl Into<String>) -> Self {
        LinalgError::Domain {
            op,
            detail: detail.into(),
        }
    }
}

/// Errors from inequality checkers.
///
/// A violated hypothesis is never a counterexample: callers must keep
/// `Hypothesis` apart from a verdict whose `holds` flag is false.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CheckError {
    #[error("{check}: hypothesis not satisfied: {detail}")]
    Hypothesis {
        check: &'static str,
        detail: String,
        /// Smallest eigenvalues (or measured margins) that failed, for reporting.
        witnesses: Vec<(String, f64)>,
    },

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Errors from the seeded instance generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerateError {
    #[error("invalid generator parameter: {0}")]
    Parameter(String),

    #[error("generation failed after {attempts} attempts: {detail}")]
    Exhausted { attempts: usize, detail: String },

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type Result<T, E = LinalgError> = std::result::Result<T, E>;
