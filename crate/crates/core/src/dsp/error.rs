use thiserror::Error;

#[derive(Debug, Error)]
pub enum DspError {
    #[error("cutoff {cutoff_hz} Hz is at or above Nyquist ({nyquist_hz} Hz)")]
    CutoffAboveNyquist { cutoff_hz: f64, nyquist_hz: f64 },
    #[error("filter order must be a positive even integer <= 256, got {0}")]
    BadFilterOrder(usize),
    #[error("section {section} unstable: pole magnitude {pole_magnitude}")]
    UnstableSection { section: usize, pole_magnitude: f64 },
    #[error("channel `{0}` not present in epoch")]
    UnknownChannel(String),
    #[error("epoch too short: {samples} samples, need at least {required}")]
    EpochTooShort { samples: usize, required: usize },
    #[error("band {low_hz}-{high_hz} Hz exceeds Nyquist ({nyquist_hz} Hz)")]
    BandAboveNyquist {
        low_hz: f64,
        high_hz: f64,
        nyquist_hz: f64,
    },
    #[error("empty input")]
    EmptyInput,
    #[error("percentile must be in (0, 100], got {0}")]
    BadPercentile(f64),
}
