use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeomError {
    /// A point lies outside (or on the boundary of) the chart box.
    #[error("point {coords:?} lies outside chart bounds (coordinate {axis})")]
    Domain { coords: Vec<f64>, axis: usize },

    #[error("chart construction failed: {0}")]
    InvalidChart(String),

    /// A linear system or bilinear form is singular where it must not be.
    #[error("degenerate {what}: {detail}")]
    Degenerate { what: &'static str, detail: String },

    /// An operation's precondition was measured and failed.
    #[error("precondition `{name}` failed: residual {residual:e} exceeds {tolerance:e}")]
    Precondition {
        name: &'static str,
        residual: f64,
        tolerance: f64,
    },

    #[error("unsupported input: {0}")]
    Unsupported(String),

    #[error("derivative order {requested} exceeds the supported maximum {max}")]
    OrderTooHigh { requested: usize, max: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, GeomError>;
