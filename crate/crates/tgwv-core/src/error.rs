//! Error type shared by every fallible operation in this crate.

use alloc::string::String;

/// Failure modes for container construction, configuration parsing, and
/// frame processing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Two containers that must agree in size do not.
    DimensionMismatch {
        /// Size required by the operation, as (width, height).
        expected: (usize, usize),
        /// Size actually supplied.
        got: (usize, usize),
    },
    /// A frame cannot support the requested decomposition depth.
    FrameTooSmall {
        /// Frame width in pixels.
        width: usize,
        /// Frame height in pixels.
        height: usize,
        /// Requested decomposition depth.
        levels: usize,
    },
    /// A configuration or scenario value is unknown, malformed, or out of
    /// its documented range.
    Config {
        /// The offending key.
        key: String,
        /// What was wrong with it.
        message: String,
    },
    /// Text that does not parse as `key = value` lines.
    Parse {
        /// 1-based line number.
        line: usize,
        /// What was wrong with the line.
        message: String,
    },
    /// A container or argument invariant would be violated.
    Invalid {
        /// Description of the violated invariant.
        message: String,
    },
}

impl core::fmt::Display for Error {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Error::DimensionMismatch { expected, got } => write!(
                f,
                "dimension mismatch: expected {}x{}, got {}x{}",
                expected.0, expected.1, got.0, got.1
            ),
            Error::FrameTooSmall { width, height, levels } => write!(
                f,
                "frame {width}x{height} is too small for {levels} decomposition level(s); \
                 both sides must be at least 2^levels"
            ),
            Error::Config { key, message } => write!(f, "config key `{key}`: {message}"),
            Error::Parse { line, message } => write!(f, "parse error on line {line}: {message}"),
            Error::Invalid { message } => write!(f, "{message}"),
        }
    }
}

impl core::error::Error for Error {}

/// Crate-wide result alias.
pub type Result<T> = core::result::Result<T, Error>;
