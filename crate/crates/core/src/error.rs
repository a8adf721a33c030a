use alloc::string::String;
use core::fmt;

/// Errors raised by the numerical core.
#[allow(missing_docs)]
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two points (or a point and a domain) disagree on dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// A point was constructed with zero coordinates.
    EmptyPoint,
    /// A coordinate is NaN or infinite.
    NonFinite { context: &'static str },
    /// A scalar parameter lies outside its admissible interval.
    OutOfRange { name: &'static str, value: f64 },
    /// Box bounds are inverted on some axis.
    InvalidDomain { axis: usize },
    /// The domain collapses to a single point.
    DegenerateDomain,
    /// A tabulated schedule was queried past its end.
    ScheduleExhausted { index: usize, len: usize },
    /// A point (iterate or intermediate) left the mapping's domain.
    OutsideDomain { context: &'static str, step: usize },
    /// Supplied point is not a fixed point of the mapping.
    NotFixedPoint { residual: f64 },
    /// Reference fixed-point search failed.
    NoConvergence { iterations: usize, residual: f64 },
    /// An approximate operator differs from its base by more than the stated bound.
    OperatorGapExceeded { eps: f64, observed: f64 },
    /// Unknown catalog identifier.
    UnknownId { kind: &'static str, id: String },
    /// Input sequence contains a non-positive entry where positivity is required.
    NonPositive { index: usize, value: f64 },
    /// Invalid argument that does not fit the other variants.
    InvalidArgument(String),
}

/// Result alias for this crate.
pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::EmptyPoint => f.write_str("point must have at least one coordinate"),
            Error::NonFinite { context } => write!(f, "non-finite value in {context}"),
            Error::OutOfRange { name, value } => write!(f, "{name} = {value} is out of range"),
            Error::InvalidDomain { axis } => write!(f, "lower bound exceeds upper bound on axis {axis}"),
            Error::DegenerateDomain => f.write_str("domain is a single point"),
            Error::ScheduleExhausted { index, len } => {
                write!(f, "schedule index {index} past end of tabulation (len {len})")
            }
            Error::OutsideDomain { context, step } => {
                write!(f, "{context} left the domain at step {step}")
            }
            Error::NotFixedPoint { residual } => {
                write!(f, "point is not a fixed point (residual {residual:e})")
            }
            Error::NoConvergence { iterations, residual } => write!(
                f,
                "no convergence after {iterations} iterations (residual {residual:e}); map may not be a contraction"
            ),
            Error::OperatorGapExceeded { eps, observed } => {
                write!(f, "approximate operator gap {observed:e} exceeds eps {eps:e}")
            }
            Error::UnknownId { kind, id } => write!(f, "unknown {kind} id `{id}`"),
            Error::NonPositive { index, value } => {
                write!(f, "sequence entry {index} is not positive ({value})")
            }
            Error::InvalidArgument(msg) => f.write_str(msg),
        }
    }
}

impl core::error::Error for Error {}
