//! Discrete wavelet scalogram: multi-level db4 decomposition with periodic
//! boundary handling. The periodized transform over an even-length signal is
//! exactly orthogonal, so squared coefficient energy equals signal energy and
//! the grid satisfies Parseval.

use serde::{Deserialize, Serialize};

use super::error::DspError;
use crate::ingest::Epoch;

/// db4 decomposition low-pass filter (8 taps, unit energy).
pub const DB4_DEC_LO: [f64; 8] = [
    -0.010597401784997278,
    0.032883011666982945,
    0.030841381835986965,
    -0.187034811718881140,
    -0.027983769416983850,
    0.630880767929590400,
    0.714846570552541500,
    0.230377813308855230,
];

/// Quadrature high-pass: hi[j] = (-1)^j * lo[L-1-j].
fn db4_dec_hi() -> [f64; 8] {
    let mut hi = [0.0; 8];
    for (j, h) in hi.iter_mut().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        *h = sign * DB4_DEC_LO[7 - j];
    }
    hi
}

const FILTER_LEN: usize = 8;
const MAX_LEVELS: usize = 8;

/// One analysis step with circular (periodized) indexing. Requires an even
/// input length; output halves are (approximation, detail).
fn dwt_step(x: &[f64], lo: &[f64; 8], hi: &[f64; 8]) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    debug_assert!(n % 2 == 0);
    let half = n / 2;
    let mut approx = vec![0.0; half];
    let mut detail = vec![0.0; half];
    for k in 0..half {
        let mut a = 0.0;
        let mut d = 0.0;
        for j in 0..FILTER_LEN {
            let idx = (2 * k + j) % n;
            a += lo[j] * x[idx];
            d += hi[j] * x[idx];
        }
        approx[k] = a;
        detail[k] = d;
    }
    (approx, detail)
}

/// Full decomposition: detail coefficients for levels 1..=levels plus the
/// final approximation.
pub fn wavedec(x: &[f64], levels: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let (lo, hi) = (DB4_DEC_LO, db4_dec_hi());
    let mut details = Vec::with_capacity(levels);
    let mut current = x.to_vec();
    for _ in 0..levels {
        let (a, d) = dwt_step(&current, &lo, &hi);
        details.push(d);
        current = a;
    }
    (details, current)
}

/// Time-frequency power grid. Rows are dyadic frequency bands ordered low to
/// high; columns tile the epoch at the finest detail resolution (two input
/// samples per column). Cell values are coefficient energies spread uniformly
/// over the columns each coefficient spans, so the grid total equals the
/// signal energy.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrogram {
    /// Column start times in seconds.
    pub time_bins: Vec<f64>,
    /// Per-row frequency band (low, high) in Hz, clipped to 0-40.
    pub freq_bands: Vec<(f64, f64)>,
    /// `power[row][col]`, all values >= 0.
    pub power: Vec<Vec<f64>>,
}

impl Spectrogram {
    pub fn total_power(&self) -> f64 {
        self.power.iter().flatten().sum()
    }

    pub fn row_power(&self, row: usize) -> f64 {
        self.power[row].iter().sum()
    }
}

fn levels_for(n: usize) -> usize {
    let mut levels = 0;
    let mut m = n;
    while m % 2 == 0 && m >= 2 && levels < MAX_LEVELS && n >= FILTER_LEN * (levels + 1) {
        levels += 1;
        m /= 2;
    }
    levels
}

/// Scalogram of one epoch channel. The frequency axis is the dyadic ladder:
/// level l detail covers [fs/2^(l+1), fs/2^l], the final approximation covers
/// [0, fs/2^(levels+1)]; bands are clipped to the 0-40 Hz display range.
pub fn wavelet_spectrogram(epoch: &Epoch, channel: &str) -> Result<Spectrogram, DspError> {
    let ch = epoch
        .channel(channel)
        .ok_or_else(|| DspError::UnknownChannel(channel.to_string()))?;
    let n = ch.samples.len();
    let levels = levels_for(n);
    if levels == 0 {
        return Err(DspError::EpochTooShort {
            samples: n,
            required: FILTER_LEN,
        });
    }

    let (details, approx) = wavedec(&ch.samples, levels);
    let fs = ch.sample_rate_hz;
    let n_cols = n / 2;
    let clip = |f: f64| f.min(40.0);

    let mut freq_bands = Vec::with_capacity(levels + 1);
    let mut power = Vec::with_capacity(levels + 1);

    // Approximation row first (lowest band), then details deep to shallow.
    freq_bands.push((0.0, clip(fs / 2f64.powi(levels as i32 + 1))));
    power.push(tile_energy(&approx, n_cols));
    for level in (1..=levels).rev() {
        let low = fs / 2f64.powi(level as i32 + 1);
        let high = fs / 2f64.powi(level as i32);
        freq_bands.push((clip(low), clip(high)));
        power.push(tile_energy(&details[level - 1], n_cols));
    }

    let time_bins = (0..n_cols).map(|i| i as f64 * 2.0 / fs).collect();
    Ok(Spectrogram {
        time_bins,
        freq_bands,
        power,
    })
}

/// Spread each coefficient's energy uniformly over the columns it spans.
fn tile_energy(coeffs: &[f64], n_cols: usize) -> Vec<f64> {
    let span = n_cols / coeffs.len();
    let mut row = vec![0.0; n_cols];
    for (k, c) in coeffs.iter().enumerate() {
        let e = c * c / span as f64;
        for cell in row.iter_mut().skip(k * span).take(span) {
            *cell = e;
        }
    }
    row
}
