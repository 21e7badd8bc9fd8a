use core::fmt;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Operand dimensions disagree.
    DimensionMismatch { expected: usize, found: usize },
    /// Automatic dual-cone computation is only available for `d <= 3`.
    UnsupportedDimension(usize),
    /// The dual cone is `{0}` (the cone is all of R^d), so the lower
    /// C-distribution function would be an infimum over an empty set.
    DegenerateCone,
    /// Direction is zero, or lies outside the dual cone.
    InvalidDirection,
    /// Generic malformed input; the string names the offending field.
    InvalidInput(&'static str),
    /// A configuration value is out of range (e.g. too few Monte-Carlo draws).
    Config(&'static str),
    /// Operation is not defined for this region representation.
    UnsupportedRegion(&'static str),
}

impl Error {
    /// True for failures of the numerical kind (degenerate cone, unsupported
    /// dimension) as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::UnsupportedDimension(_) | Error::DegenerateCone)
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::UnsupportedDimension(d) => write!(
                f,
                "unsupported dimension {d}: dual generators must be supplied for d > 3"
            ),
            Error::DegenerateCone => write!(
                f,
                "degenerate cone: dual cone is {{0}}, lower cone distribution undefined"
            ),
            Error::InvalidDirection => write!(f, "invalid direction: zero or outside the dual cone"),
            Error::InvalidInput(what) => write!(f, "invalid input: {what}"),
            Error::Config(what) => write!(f, "invalid configuration: {what}"),
            Error::UnsupportedRegion(what) => write!(f, "unsupported region: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
