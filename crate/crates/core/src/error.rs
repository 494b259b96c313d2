//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by state construction and phase-space evaluation.
#[derive(Debug, Error)]
pub enum Error {
    /// A constructor was asked for a truncation that cannot hold the state.
    #[error("truncation too small: {context} requires n_max >= {required}, got {given}")]
    Truncation {
        context: String,
        required: usize,
        given: usize,
    },

    /// Evaluation requested at or beyond a pole of the distribution family.
    #[error("ordering parameter s = {s} is at or beyond the pole s = {pole} of {family}")]
    Pole { s: f64, pole: f64, family: String },

    /// An argument violated a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Mismatched matrix or array shapes.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A density matrix failed its Hermiticity check.
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// Normalization was requested for an operator with (near-)zero trace.
    #[error("cannot normalize: trace = {trace:.3e}")]
    ZeroTrace { trace: f64 },

    /// A quadrature grid does not contain the support of the integrand.
    #[error("grid coverage error: {0}")]
    GridCoverage(String),

    /// The smoothing kernel leaks outside the source grid or is unresolved.
    #[error("kernel leak: {0}")]
    KernelLeak(String),

    /// The characteristic-function quadrature failed its tail diagnostic.
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),

    /// An internal consistency check failed (e.g. imaginary residue).
    #[error("internal consistency error: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
