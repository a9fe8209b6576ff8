use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by curve construction and analysis.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("derivative order {0} is not supported (maximum is 4)")]
    UnsupportedOrder(usize),
    #[error("invalid curve specification: {0}")]
    Spec(String),
    #[error("operation requires dimension {expected}, curve has dimension {found}")]
    Dimension { expected: usize, found: usize },
    #[error("singular point at t = {t} has vanishing order above 3")]
    UnsupportedSingularity { t: f64 },
    #[error("degenerate curve: {0}")]
    DegenerateCurve(String),
    #[error("frame construction failed at t = {t}: one-sided tangents differ by {angle} rad")]
    FrameConstruction { t: f64, angle: f64 },
    #[error("angle lift needs more than {0} samples")]
    PathologicalCurve(usize),
    #[error("rotation index residual {residual} exceeds tolerance")]
    LiftInconsistency { residual: f64 },
    #[error("parameter t = {0} is a singular point")]
    Domain(f64),
    #[error("quadrature did not reach tolerance: estimate {estimate}, error {error}")]
    Accuracy { estimate: f64, error: f64 },
    #[error("segment endpoint t = {0} is singular")]
    EndpointSingular(f64),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("operation requires a closed curve")]
    NotClosed,
}
