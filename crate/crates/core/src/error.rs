//! Crate-wide error type.
//!
//! One enum covers configuration, ingest and engine failures so callers (the
//! CLI in particular) can classify errors without chasing nested types:
//! everything except [`Error::Io`] is a validation problem with the inputs.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A TOML document failed to parse or contained an unknown key.
    /// The underlying message names the offending field.
    #[error("invalid configuration: {0}")]
    Config(#[from] toml::de::Error),

    /// A numeric field fell outside its documented bounds.
    #[error("value {value} for `{field}` out of range [{min}, {max}]")]
    OutOfRange {
        field: &'static str,
        value: f64,
        min: f64,
        max: f64,
    },

    /// Fields that are individually valid but jointly contradictory.
    #[error("inconsistent configuration: {0}")]
    Inconsistent(String),

    /// Region name that matches no built-in preset.
    #[error("unknown region preset `{0}` (expected Paris, IleDeFrance or Kyoto)")]
    UnknownPreset(String),

    /// An hourly series or table with the wrong number of rows.
    #[error("row count {actual}, expected {expected}")]
    WrongLength { expected: usize, actual: usize },

    /// NaN or infinity in an hourly series.
    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    /// Negative value in a series whose unit forbids it (energy, irradiance).
    #[error("negative value {value} at index {index} ({unit} series must be non-negative)")]
    Negative {
        index: usize,
        value: f64,
        unit: &'static str,
    },

    /// Input table lacks a required column.
    #[error("missing column {0}")]
    MissingColumn(String),

    /// A cell failed to parse as a number.
    #[error("cannot parse row {row}, column {column}: {message}")]
    BadCell {
        row: usize,
        column: String,
        message: String,
    },

    /// Unrecognised `# unit:` flag on a demand/series file.
    #[error("unknown unit flag `{0}`")]
    UnknownUnit(String),

    /// An input collection that must not be empty was empty.
    #[error("{0} must not be empty")]
    Empty(&'static str),

    /// Two series that must align hour-by-hour have different lengths.
    #[error("series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    /// Indicators are undefined for a year with zero demand.
    #[error("zero annual load: energy indicators undefined")]
    ZeroLoad,

    /// Capacity factor needs a strictly positive nameplate capacity.
    #[error("capacity must be positive, got {0}")]
    NonPositiveCapacity(f64),

    /// Cost-saving percentage needs a positive baseline cost.
    #[error("base annual cost must be positive, got {0}")]
    NonPositiveBaseCost(f64),

    /// Monte-Carlo significance needs a minimum sample count.
    #[error("need at least {min} surrogate pairs, got {got}")]
    TooFewSurrogates { min: usize, got: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
