//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the library.
///
/// Verdict-style negatives ("this family is not tight") are values, not
/// errors; an `Error` means a precondition or shape contract was violated,
/// or a numerical routine could not complete.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("shape mismatch: {context}: expected {expected}, got {got}")]
    ShapeMismatch {
        context: &'static str,
        expected: String,
        got: String,
    },

    #[error("signature entries must be +1 or -1 (offending index {0})")]
    BadSignature(usize),

    #[error("index sets differ: left has {left} vectors, right has {right}")]
    IndexSetMismatch { left: usize, right: usize },

    #[error("subspace is degenerate: smallest principal angle to its J-orthogonal companion is {min_angle:.3e}")]
    DegenerateSubspace { min_angle: f64 },

    #[error("subspace classifies as {found}, expected a uniformly definite subspace")]
    NotDefinite { found: &'static str },

    #[error("family is not a J-frame: {0}")]
    NotAJFrame(String),

    #[error("family is not a Parseval J-frame (|S - I| = {deviation:.3e})")]
    NotParseval { deviation: f64 },

    #[error("operator is not J-selfadjoint (|S - S^+| = {deviation:.3e})")]
    NotJSelfadjoint { deviation: f64 },

    #[error("matrix is singular ({context})")]
    Singular { context: &'static str },

    #[error("spectrum touches the imaginary axis: eigenvalue {eigenvalue} has real part below tolerance")]
    SpectrumOnAxis { eigenvalue: num_complex::Complex64 },

    #[error("QR iteration failed to converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("dual family violates the sign condition at indices {0:?}")]
    SignViolation(Vec<usize>),

    #[error("family is not a dual of the reference frame: {0}")]
    NotADual(String),

    #[error("extracted perturbation is inconsistent with duality: |W T^+| = {residual:.3e}")]
    InconsistentDual { residual: f64 },

    #[error("cross-sign J-orthogonality fails at pair ({i}, {j}): [f_i, f_j] = {value}")]
    CrossOrthogonality {
        i: usize,
        j: usize,
        value: num_complex::Complex64,
    },

    #[error("infeasible generator spec: {0}")]
    InfeasibleSpec(String),

    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
