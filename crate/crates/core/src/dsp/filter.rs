//! Butterworth low-pass filtering as cascaded second-order sections with
//! forward-backward (zero phase) application.
//!
//! A direct-form IIR of order 128 is numerically hopeless; the cascade keeps
//! every biquad's poles comfortably inside the unit circle in f64.

use std::f64::consts::PI;

use super::error::DspError;
use crate::ingest::ChannelSeries;

/// One biquad, normalized so a0 = 1. Stored as (b0, b1, b2, a1, a2).
#[derive(Debug, Clone, Copy)]
pub struct Biquad {
    pub b0: f64,
    pub b1: f64,
    pub b2: f64,
    pub a1: f64,
    pub a2: f64,
}

impl Biquad {
    /// Pole magnitude of the section (both poles share it for a conjugate pair).
    fn pole_magnitude(&self) -> f64 {
        // z^2 + a1 z + a2 = 0; for complex poles |z| = sqrt(a2), for real
        // poles take the larger root magnitude.
        let disc = self.a1 * self.a1 - 4.0 * self.a2;
        if disc < 0.0 {
            self.a2.sqrt()
        } else {
            let r = disc.sqrt();
            ((-self.a1 + r) / 2.0).abs().max(((-self.a1 - r) / 2.0).abs())
        }
    }

    /// DC gain b(1)/a(1).
    fn dc_gain(&self) -> f64 {
        (self.b0 + self.b1 + self.b2) / (1.0 + self.a1 + self.a2)
    }
}

/// Design an order-`order` Butterworth low-pass at `cutoff_hz` for signals
/// sampled at `sample_rate_hz`, as `order / 2` second-order sections
/// (bilinear transform with frequency prewarping).
pub fn design_lowpass_sos(
    cutoff_hz: f64,
    sample_rate_hz: f64,
    order: usize,
) -> Result<Vec<Biquad>, DspError> {
    if cutoff_hz >= sample_rate_hz / 2.0 {
        return Err(DspError::CutoffAboveNyquist {
            cutoff_hz,
            nyquist_hz: sample_rate_hz / 2.0,
        });
    }
    if order == 0 || order % 2 != 0 || order > 256 {
        return Err(DspError::BadFilterOrder(order));
    }

    // Prewarp the analog cutoff so the digital response crosses at cutoff_hz.
    let k = 2.0 * sample_rate_hz;
    let warped = k * (PI * cutoff_hz / sample_rate_hz).tan();

    let n = order as f64;
    let mut sections = Vec::with_capacity(order / 2);
    for s in 0..order / 2 {
        // Conjugate pole pair of the analog prototype: s^2 + 2*zeta*w*s + w^2
        // with zeta = -cos(theta) for theta in the left half plane.
        let theta = PI * (2.0 * s as f64 + n + 1.0) / (2.0 * n);
        let zeta = -theta.cos();
        let w2 = warped * warped;
        let a0 = k * k + 2.0 * zeta * warped * k + w2;
        let biquad = Biquad {
            b0: w2 / a0,
            b1: 2.0 * w2 / a0,
            b2: w2 / a0,
            a1: (2.0 * w2 - 2.0 * k * k) / a0,
            a2: (k * k - 2.0 * zeta * warped * k + w2) / a0,
        };
        if biquad.pole_magnitude() >= 1.0 {
            return Err(DspError::UnstableSection {
                section: s,
                pole_magnitude: biquad.pole_magnitude(),
            });
        }
        sections.push(biquad);
    }
    Ok(sections)
}

/// Run the cascade over a signal in place (direct form II transposed), with
/// each section's state initialized to its constant-input steady state for
/// the first sample. That suppresses the startup step transient.
fn run_cascade(sections: &[Biquad], signal: &mut [f64]) {
    if signal.is_empty() {
        return;
    }
    for q in sections {
        let x0 = signal[0];
        let y0 = q.dc_gain() * x0;
        let mut s1 = (q.b1 + q.b2) * x0 - (q.a1 + q.a2) * y0;
        let mut s2 = q.b2 * x0 - q.a2 * y0;
        for x in signal.iter_mut() {
            let y = q.b0 * *x + s1;
            s1 = q.b1 * *x - q.a1 * y + s2;
            s2 = q.b2 * *x - q.a2 * y;
            *x = y;
        }
    }
}

/// Forward-backward application of the cascade. The input is extended at both
/// ends by odd reflection before filtering and the extensions are discarded,
/// so edge transients decay inside the padding.
pub fn filtfilt(sections: &[Biquad], signal: &[f64]) -> Vec<f64> {
    let n = signal.len();
    if n == 0 {
        return Vec::new();
    }
    let pad = (6 * sections.len() * 2).min(n - 1);

    let mut extended = Vec::with_capacity(n + 2 * pad);
    for i in (1..=pad).rev() {
        extended.push(2.0 * signal[0] - signal[i]);
    }
    extended.extend_from_slice(signal);
    for i in (1..=pad).rev() {
        extended.push(2.0 * signal[n - 1] - signal[n - 1 - i]);
    }

    run_cascade(sections, &mut extended);
    extended.reverse();
    run_cascade(sections, &mut extended);
    extended.reverse();

    extended[pad..pad + n].to_vec()
}

/// Zero-phase Butterworth low-pass of a channel. Output length equals input
/// length.
pub fn lowpass_filter(
    signal: &ChannelSeries,
    cutoff_hz: f64,
    order: usize,
) -> Result<ChannelSeries, DspError> {
    let sections = design_lowpass_sos(cutoff_hz, signal.sample_rate_hz, order)?;
    Ok(ChannelSeries {
        name: signal.name.clone(),
        sample_rate_hz: signal.sample_rate_hz,
        samples: filtfilt(&sections, &signal.samples),
    })
}

#[cfg(test)]
pub(crate) fn rms(samples: &[f64]) -> f64 {
    (samples.iter().map(|x| x * x).sum::<f64>() / samples.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sine(freq_hz: f64, rate_hz: f64, duration_s: f64) -> ChannelSeries {
        let n = (rate_hz * duration_s) as usize;
        ChannelSeries {
            name: "test".into(),
            sample_rate_hz: rate_hz,
            samples: (0..n)
                .map(|i| (2.0 * PI * freq_hz * i as f64 / rate_hz).sin())
                .collect(),
        }
    }

    #[test]
    fn passband_sine_preserved() {
        let input = sine(5.0, 128.0, 10.0);
        let out = lowpass_filter(&input, 40.0, 128).unwrap();
        assert_eq!(out.samples.len(), input.samples.len());
        let ratio = rms(&out.samples) / rms(&input.samples);
        assert!((ratio - 1.0).abs() < 0.01, "passband RMS ratio {ratio}");
    }

    #[test]
    fn stopband_sine_attenuated() {
        let input = sine(60.0, 128.0, 10.0);
        let out = lowpass_filter(&input, 40.0, 128).unwrap();
        let ratio = rms(&out.samples) / rms(&input.samples);
        assert!(ratio < 0.01, "stopband RMS ratio {ratio}");
    }

    #[test]
    fn cutoff_above_nyquist_rejected() {
        let input = sine(5.0, 128.0, 1.0);
        assert!(matches!(
            lowpass_filter(&input, 70.0, 128),
            Err(DspError::CutoffAboveNyquist { .. })
        ));
    }

    #[test]
    fn odd_order_rejected() {
        let input = sine(5.0, 128.0, 1.0);
        assert!(matches!(
            lowpass_filter(&input, 40.0, 3),
            Err(DspError::BadFilterOrder(3))
        ));
    }

    #[test]
    fn idempotent_on_passband_content() {
        let input = sine(5.0, 128.0, 10.0);
        let once = lowpass_filter(&input, 40.0, 128).unwrap();
        let twice = lowpass_filter(&once, 40.0, 128).unwrap();
        let ratio = rms(&twice.samples) / rms(&once.samples);
        assert!((ratio - 1.0).abs() < 0.005, "double-filter RMS ratio {ratio}");
    }

    #[test]
    fn zero_phase_has_no_lag() {
        let input = sine(5.0, 128.0, 10.0);
        let out = lowpass_filter(&input, 40.0, 128).unwrap();
        // Cross-correlation peak over lags -10..=10 must sit at 0.
        let n = input.samples.len();
        let mut best = (0i64, f64::MIN);
        for lag in -10i64..=10 {
            let mut acc = 0.0;
            for i in 0..n {
                let j = i as i64 + lag;
                if j >= 0 && (j as usize) < n {
                    acc += input.samples[i] * out.samples[j as usize];
                }
            }
            if acc > best.1 {
                best = (lag, acc);
            }
        }
        assert_eq!(best.0, 0, "cross-correlation peak at lag {}", best.0);
    }

    #[test]
    fn all_sections_stable_at_order_128() {
        let sections = design_lowpass_sos(40.0, 128.0, 128).unwrap();
        assert_eq!(sections.len(), 64);
        for q in &sections {
            assert!(q.pole_magnitude() < 1.0);
            assert!((q.dc_gain() - 1.0).abs() < 1e-9);
        }
    }
}
