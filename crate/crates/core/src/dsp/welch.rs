//! Welch power spectral density estimation: 2 s segments, 50% overlap,
//! periodic Hann window, one-sided density scaling (units²/Hz). Each segment
//! is mean-removed before windowing so DC offsets do not leak into the low
//! bands.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use super::error::DspError;

pub const WELCH_SEGMENT_S: f64 = 2.0;
pub const WELCH_OVERLAP: f64 = 0.5;

/// One-sided Welch PSD. Returns (frequencies, density) with resolution
/// `sample_rate / nperseg` where `nperseg = round(2 s * sample_rate)`.
pub fn welch_psd(samples: &[f64], sample_rate_hz: f64) -> Result<(Vec<f64>, Vec<f64>), DspError> {
    let nperseg = (WELCH_SEGMENT_S * sample_rate_hz).round() as usize;
    if samples.len() < nperseg || nperseg < 2 {
        return Err(DspError::EpochTooShort {
            samples: samples.len(),
            required: nperseg.max(2),
        });
    }
    let hop = ((nperseg as f64) * (1.0 - WELCH_OVERLAP)).round() as usize;
    let n_segments = (samples.len() - nperseg) / hop + 1;

    let window: Vec<f64> = (0..nperseg)
        .map(|i| 0.5 * (1.0 - (2.0 * std::f64::consts::PI * i as f64 / nperseg as f64).cos()))
        .collect();
    let window_energy: f64 = window.iter().map(|w| w * w).sum();

    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(nperseg);

    let n_bins = nperseg / 2 + 1;
    let mut acc = vec![0.0f64; n_bins];
    let mut buf = vec![Complex64::new(0.0, 0.0); nperseg];
    for s in 0..n_segments {
        let seg = &samples[s * hop..s * hop + nperseg];
        let mean = seg.iter().sum::<f64>() / nperseg as f64;
        for (b, (&x, &w)) in buf.iter_mut().zip(seg.iter().zip(&window)) {
            *b = Complex64::new((x - mean) * w, 0.0);
        }
        fft.process(&mut buf);
        for (k, a) in acc.iter_mut().enumerate() {
            *a += buf[k].norm_sqr();
        }
    }

    let norm = 1.0 / (sample_rate_hz * window_energy * n_segments as f64);
    let mut psd = Vec::with_capacity(n_bins);
    for (k, a) in acc.iter().enumerate() {
        // One-sided: double everything except DC and (for even nperseg) Nyquist.
        let one_sided = if k == 0 || (nperseg % 2 == 0 && k == nperseg / 2) {
            1.0
        } else {
            2.0
        };
        psd.push(a * norm * one_sided);
    }
    let freqs = (0..n_bins)
        .map(|k| k as f64 * sample_rate_hz / nperseg as f64)
        .collect();
    Ok((freqs, psd))
}

/// Trapezoid-rule integral of a sampled density over `[low_hz, high_hz]`,
/// with linear interpolation at band edges that fall between grid points.
pub fn integrate_band(freqs: &[f64], psd: &[f64], low_hz: f64, high_hz: f64) -> f64 {
    debug_assert_eq!(freqs.len(), psd.len());
    if freqs.len() < 2 || high_hz <= low_hz {
        return 0.0;
    }
    let lo = low_hz.max(freqs[0]);
    let hi = high_hz.min(*freqs.last().unwrap());
    if hi <= lo {
        return 0.0;
    }
    let value_at = |f: f64| -> f64 {
        match freqs.binary_search_by(|x| x.total_cmp(&f)) {
            Ok(i) => psd[i],
            Err(i) => {
                let (f0, f1) = (freqs[i - 1], freqs[i]);
                let t = (f - f0) / (f1 - f0);
                psd[i - 1] * (1.0 - t) + psd[i] * t
            }
        }
    };

    let mut grid: Vec<(f64, f64)> = vec![(lo, value_at(lo))];
    for (&f, &p) in freqs.iter().zip(psd) {
        if f > lo && f < hi {
            grid.push((f, p));
        }
    }
    grid.push((hi, value_at(hi)));

    grid.windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}
