use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("length mismatch for `{name}`: expected {expected}, got {actual}")]
    LengthMismatch {
        name: &'static str,
        expected: usize,
        actual: usize,
    },

    /// A pulse with unbounded support has no finite width.
    #[error("continuous wave has unbounded support and no FWHM")]
    UnboundedSupport,

    #[error("element {element} has non-positive path length {range_m} m")]
    NonPositiveRange { element: usize, range_m: f64 },

    #[error("incompatible inputs: {0}")]
    Incompatible(String),

    #[error("raster has no focus (all values are zero)")]
    NoFocus,

    #[error("peak escaped the grid at t = {t_s} s")]
    PeakEscapedGrid { t_s: f64 },

    #[error("angle {theta_rad} rad is outside the grid")]
    AngleOutOfGrid { theta_rad: f64 },

    #[error("config line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("config key `{key}`: {message}")]
    ConfigKey { key: String, message: String },

    #[error("missing required config keys: {}", .0.join(", "))]
    MissingKeys(Vec<String>),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
