//! Signal processing: Butterworth filtering, Welch spectral estimation, db4
//! wavelet scalograms, and the 11-feature vector.
//!
//! Everything here is a pure function of its inputs; epochs can be processed
//! in parallel with no shared state.

mod error;
pub mod features;
pub mod filter;
pub mod matrix;
pub mod wavelet;
pub mod welch;

pub use error::DspError;
pub use features::{
    band_power, extract_features, percentile_amplitude, standard_bands, BandDefinition, BandName,
    ChannelFeatures, FeatureVector, FEATURE_NAMES, RATIO_FLOOR,
};
pub use filter::{design_lowpass_sos, filtfilt, lowpass_filter, Biquad};
pub use matrix::{
    extract_feature_matrix, read_feature_csv, write_feature_csv, FeatureMatrix, FeatureRow,
};
pub use wavelet::{wavedec, wavelet_spectrogram, Spectrogram, DB4_DEC_LO};
pub use welch::{integrate_band, welch_psd};
