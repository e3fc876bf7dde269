//! Error type shared across the crate, with the process exit-code mapping
//! used by the command-line front end.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes of the library and the command layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A physical rate (`eta`, `g`, `h`, `gamma`) was negative.
    #[error("negative rate: {name} = {value} (rates must be non-negative)")]
    NegativeRate { name: &'static str, value: f64 },

    /// Group velocity handed to [`crate::params::eta_from_raw`] was not positive.
    #[error("group velocity must be positive, got {0}")]
    NonpositiveVelocity(f64),

    /// The common denominator of the closed-form amplitudes vanished.
    ///
    /// With any loss (`gamma > 0`) this never happens; it guards pathological
    /// lossless corner cases such as `eta = g = h = gamma = 0`.
    #[error("degenerate denominator (|denom| = {magnitude:e}) at delta = {delta} GHz")]
    DegenerateDenominator { delta: f64, magnitude: f64 },

    /// The 12x12 cross-check system had a pivot below the degeneracy threshold.
    #[error("singular linear system: pivot magnitude {0:e} below threshold")]
    SingularSystem(f64),

    /// A spectrum with no data points was handed to the analysis layer.
    #[error("empty spectrum")]
    EmptySpectrum,

    /// An axis specification was rejected (bad name, count, range, or a
    /// two-axis sweep over the same parameter twice).
    #[error("invalid axis: {0}")]
    InvalidAxis(String),

    /// A sweep aborted at a specific grid point (fail-fast; no NaN cells).
    #[error("sweep failed at grid index {index}: {source}")]
    SweepPoint {
        index: usize,
        #[source]
        source: Box<Error>,
    },

    /// Configuration file or command-line usage problem.
    #[error("config error: {0}")]
    Config(String),

    /// A CSV file did not match the documented schema.
    #[error("CSV format error: {0}")]
    CsvFormat(String),

    /// Operating-system level I/O failure (unwritable path, broken pipe, ...).
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code class for the command-line front end.
    ///
    /// * `2` — usage / configuration / input-schema errors,
    /// * `3` — numerical failures (degenerate denominator, singular system),
    /// * `1` — plain I/O failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NegativeRate { .. }
            | Error::NonpositiveVelocity(_)
            | Error::InvalidAxis(_)
            | Error::EmptySpectrum
            | Error::Config(_)
            | Error::CsvFormat(_) => 2,
            Error::DegenerateDenominator { .. } | Error::SingularSystem(_) => 3,
            Error::SweepPoint { source, .. } => source.exit_code(),
            Error::Io(_) => 1,
        }
    }
}
