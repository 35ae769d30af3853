//! Finite-dimensional Krein spaces and J-frames.
//!
//! A Krein space here is `C^n` with the indefinite inner product
//! `[x, y] = sum_i sigma_i x_i conj(y_i)` induced by a +/-1 signature. The
//! crate builds, classifies and verifies J-frames over such spaces: the
//! J-frame operator and its positive parts, canonical and general dual
//! families, tight and Parseval J-frames, the principal square root of the
//! J-frame operator, and Naimark-type dilations of Parseval J-frames.
//!
//! Everything is dense, complex (`f64` precision) and small-scale; all
//! operations are pure functions on immutable values.

pub mod duality;
pub mod error;
pub mod frame;
pub mod jframe;
pub mod krein;
pub mod linalg;
pub mod parseval;
pub mod sampling;

pub use error::Error;
pub use frame::{FrameBounds, FrameFamily, Sign};
pub use jframe::JFrameAnalysis;
pub use krein::{KreinSpace, OperatorMatrix, Subspace, SubspaceClass};
pub use parseval::Dilation;
pub use sampling::GenSpec;

/// Relative threshold for rank and regularity decisions (relative to the
/// largest singular value of the matrix under test).
pub const DEFAULT_RTOL: f64 = 1e-9;

/// Default tolerance for residual-based verdicts (reconstruction errors,
/// projection identities, sign checks).
pub const DEFAULT_RESIDUAL_TOL: f64 = 1e-8;
