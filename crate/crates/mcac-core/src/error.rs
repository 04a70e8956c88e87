use std::path::PathBuf;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Affine matrix determinant fell below the invertibility floor.
    #[error("affine map is singular (|det| = {det:.3e} < {min:.3e})")]
    SingularMap { det: f64, min: f64 },

    /// A scalar field has uniform sign, so it carries no zero level set.
    #[error("field has uniform sign; no zero level set to extract")]
    EmptyContour,

    /// A computed gradient contained NaN or infinite entries.
    #[error("gradient contains non-finite entries")]
    NonFiniteGradient,

    /// Every target lies so far from a transformed source point that the
    /// proximity row underflows to zero.
    #[error("matching row {row} degenerated: all targets beyond kernel reach")]
    DegenerateRow { row: usize },

    /// Too few correspondences or collinear source points.
    #[error("alignment system is rank deficient (need >= 3 non-collinear pairs)")]
    RankDeficient,

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// The implicit-surface gradient vanished at a contour vertex.
    #[error("|grad phi| < {min:.1e} at contour vertex ({x:.2}, {y:.2})")]
    VanishingGradient { x: f64, y: f64, min: f64 },

    /// Backtracking exhausted its halving budget without an acceptable step.
    #[error("step stalled: backtracking exhausted {halvings} halvings")]
    StalledStep { halvings: u32 },

    /// The optimizer was started outside the feasible set E <= tau.
    #[error("infeasible start: E = {e:.6} exceeds tau = {tau:.6} (raise |tau|)")]
    InfeasibleStart { e: f64, tau: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn format(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        Error::Format {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn dim(context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
