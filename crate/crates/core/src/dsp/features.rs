//! The per-channel 11-feature summary: four band powers, amplitude,
//! standard deviation, excess kurtosis, three band ratios, and the 90th
//! percentile amplitude.

use serde::{Deserialize, Serialize};

use super::error::DspError;
use super::welch::{integrate_band, welch_psd};
use crate::ingest::Epoch;

/// Floor applied to ratio denominators so near-silent channels do not blow up.
pub const RATIO_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BandName {
    Delta,
    Theta,
    Alpha,
    Beta,
}

/// A named frequency band, `low_hz < high_hz`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandDefinition {
    pub name: BandName,
    pub low_hz: f64,
    pub high_hz: f64,
}

/// Conventional clinical band edges; the pipeline uses these throughout.
pub fn standard_bands() -> [BandDefinition; 4] {
    [
        BandDefinition { name: BandName::Delta, low_hz: 0.5, high_hz: 4.0 },
        BandDefinition { name: BandName::Theta, low_hz: 4.0, high_hz: 8.0 },
        BandDefinition { name: BandName::Alpha, low_hz: 8.0, high_hz: 12.0 },
        BandDefinition { name: BandName::Beta, low_hz: 12.0, high_hz: 30.0 },
    ]
}

/// Feature names in canonical column order.
pub const FEATURE_NAMES: [&str; 11] = [
    "delta_pow",
    "theta_pow",
    "alpha_pow",
    "beta_pow",
    "amplitude",
    "std_dev",
    "kurtosis",
    "alpha_delta_ratio",
    "theta_alpha_ratio",
    "delta_theta_ratio",
    "p90_amplitude",
];

/// The 11 features for one channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelFeatures {
    pub channel: String,
    pub delta_pow: f64,
    pub theta_pow: f64,
    pub alpha_pow: f64,
    pub beta_pow: f64,
    pub amplitude: f64,
    pub std_dev: f64,
    pub kurtosis: f64,
    pub alpha_delta_ratio: f64,
    pub theta_alpha_ratio: f64,
    pub delta_theta_ratio: f64,
    pub p90_amplitude: f64,
    /// Set when std_dev was zero and kurtosis was pinned to 0.
    pub constant_signal: bool,
}

impl ChannelFeatures {
    /// Values in [`FEATURE_NAMES`] order.
    pub fn values(&self) -> [f64; 11] {
        [
            self.delta_pow,
            self.theta_pow,
            self.alpha_pow,
            self.beta_pow,
            self.amplitude,
            self.std_dev,
            self.kurtosis,
            self.alpha_delta_ratio,
            self.theta_alpha_ratio,
            self.delta_theta_ratio,
            self.p90_amplitude,
        ]
    }
}

/// Per-channel feature vectors for one epoch, in the recording's channel order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub channels: Vec<ChannelFeatures>,
}

impl FeatureVector {
    /// Flattened values, channels outermost, features in canonical order.
    pub fn flat_values(&self) -> Vec<f64> {
        self.channels.iter().flat_map(|c| c.values()).collect()
    }

    /// Column names matching [`FeatureVector::flat_values`].
    pub fn flat_names(&self) -> Vec<String> {
        self.channels
            .iter()
            .flat_map(|c| {
                FEATURE_NAMES
                    .iter()
                    .map(move |f| format!("{}_{}", c.channel, f))
            })
            .collect()
    }
}

/// Nearest-rank percentile of the absolute values: the element at index
/// ceil(p/100 * n) - 1 of the ascending-sorted |samples|.
pub fn percentile_amplitude(samples: &[f64], p: f64) -> Result<f64, DspError> {
    if samples.is_empty() {
        return Err(DspError::EmptyInput);
    }
    if !(p > 0.0 && p <= 100.0) {
        return Err(DspError::BadPercentile(p));
    }
    let mut abs: Vec<f64> = samples.iter().map(|x| x.abs()).collect();
    abs.sort_by(|a, b| a.total_cmp(b));
    let rank = ((p / 100.0) * abs.len() as f64).ceil() as usize;
    Ok(abs[rank.max(1) - 1])
}

/// Band-integrated Welch PSD of one epoch channel.
pub fn band_power(epoch: &Epoch, channel: &str, band: &BandDefinition) -> Result<f64, DspError> {
    let ch = epoch
        .channel(channel)
        .ok_or_else(|| DspError::UnknownChannel(channel.to_string()))?;
    let nyquist = ch.sample_rate_hz / 2.0;
    if band.high_hz >= nyquist {
        return Err(DspError::BandAboveNyquist {
            low_hz: band.low_hz,
            high_hz: band.high_hz,
            nyquist_hz: nyquist,
        });
    }
    let (freqs, psd) = welch_psd(&ch.samples, ch.sample_rate_hz)?;
    Ok(integrate_band(&freqs, &psd, band.low_hz, band.high_hz))
}

fn ratio(num: f64, den: f64) -> f64 {
    num / den.max(RATIO_FLOOR)
}

/// Extract all 11 features for every channel of an epoch. Requires at least
/// 2 s of samples per channel (one Welch segment). A constant channel yields
/// kurtosis 0 with the `constant_signal` flag set.
pub fn extract_features(epoch: &Epoch) -> Result<FeatureVector, DspError> {
    let bands = standard_bands();
    let mut channels = Vec::with_capacity(epoch.channels.len());
    for ch in &epoch.channels {
        let (freqs, psd) = welch_psd(&ch.samples, ch.sample_rate_hz)?;
        let mut power = [0.0; 4];
        for (slot, band) in bands.iter().enumerate() {
            power[slot] = integrate_band(&freqs, &psd, band.low_hz, band.high_hz);
        }
        let [delta, theta, alpha, beta] = power;

        let n = ch.samples.len() as f64;
        let amplitude = ch.samples.iter().map(|x| x.abs()).sum::<f64>() / n;
        let mean = ch.samples.iter().sum::<f64>() / n;
        let m2 = ch.samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
        let std_dev = m2.sqrt();
        let (kurtosis, constant_signal) = if m2 == 0.0 {
            (0.0, true)
        } else {
            let m4 = ch.samples.iter().map(|x| (x - mean).powi(4)).sum::<f64>() / n;
            (m4 / (m2 * m2) - 3.0, false)
        };
        let p90_amplitude = percentile_amplitude(&ch.samples, 90.0)?;

        channels.push(ChannelFeatures {
            channel: ch.name.clone(),
            delta_pow: delta,
            theta_pow: theta,
            alpha_pow: alpha,
            beta_pow: beta,
            amplitude,
            std_dev,
            kurtosis,
            alpha_delta_ratio: ratio(alpha, delta),
            theta_alpha_ratio: ratio(theta, alpha),
            delta_theta_ratio: ratio(delta, theta),
            p90_amplitude,
            constant_signal,
        });
    }
    Ok(FeatureVector { channels })
}
