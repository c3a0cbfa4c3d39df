use core::fmt;

/// Failure modes shared by every computation in the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Fewer observations than the operation needs.
    InsufficientData { needed: usize, got: usize },
    /// Input slices that must be the same length are not.
    LengthMismatch { left: usize, right: usize },
    /// A series with zero variance where positive variance is required.
    DegenerateSeries,
    /// A window with zero variance.
    DegenerateWindow,
    /// A price that is zero, negative or not finite.
    NonPositivePrice { index: usize, value: f64 },
    /// Dates that are not strictly increasing.
    UnorderedDates { index: usize },
    /// The OLS design matrix is numerically rank deficient.
    SingularDesign,
    /// AR coefficients whose companion matrix has spectral radius >= 1.
    NonStationary,
    /// Lag pair with no admissible summand in the sample.
    WindowTooShortForLag { r: usize, s: i64 },
    /// Sample too short for the requested lag depth.
    WindowTooShort { len: usize, lag_depth: usize },
    /// Sample shorter than a single window.
    ShorterThanWindow { len: usize, window: usize },
    /// Input to a portmanteau statistic is not standardized.
    NotStandardized { mean: f64, std_dev: f64 },
    /// A parameter outside its admissible range.
    InvalidParameter(&'static str),
    /// The two dated series share no dates.
    EmptyIntersection,
    /// Paired series disagree on the date at this position.
    MisalignedDates { index: usize },
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InsufficientData { needed, got } => {
                write!(f, "insufficient data: need at least {needed} observations, got {got}")
            }
            Error::LengthMismatch { left, right } => {
                write!(f, "length mismatch: {left} vs {right}")
            }
            Error::DegenerateSeries => f.write_str("degenerate series (zero variance)"),
            Error::DegenerateWindow => f.write_str("degenerate window (zero variance)"),
            Error::NonPositivePrice { index, value } => {
                write!(f, "non-positive price {value} at position {index}")
            }
            Error::UnorderedDates { index } => {
                write!(f, "dates not strictly increasing at position {index}")
            }
            Error::SingularDesign => f.write_str("singular design"),
            Error::NonStationary => f.write_str("non-stationary autoregressive coefficients"),
            Error::WindowTooShortForLag { r, s } => {
                write!(f, "window too short for lag pair (r={r}, s={s})")
            }
            Error::WindowTooShort { len, lag_depth } => {
                write!(f, "window too short: {len} observations for lag depth {lag_depth}")
            }
            Error::ShorterThanWindow { len, window } => {
                write!(f, "sample shorter than one window: {len} < {window}")
            }
            Error::NotStandardized { mean, std_dev } => {
                write!(f, "input not standardized (mean {mean:e}, std {std_dev})")
            }
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::EmptyIntersection => f.write_str("empty intersection of dates"),
            Error::MisalignedDates { index } => {
                write!(f, "series are not date-aligned at position {index}")
            }
        }
    }
}

impl core::error::Error for Error {}
