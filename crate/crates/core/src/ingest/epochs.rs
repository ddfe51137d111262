//! Epoch segmentation and deterministic dataset splits.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::error::IngestError;
use super::types::{
    AttentionState, Epoch, EpochChannel, EpochLabel, Recording, SleepStage, SplitSet, SplitSpec,
    StageAnnotation,
};

/// Where epoch labels come from.
pub enum LabelSource<'a> {
    /// Hypnogram annotations; the annotation covering the epoch midpoint wins.
    Stages(&'a [StageAnnotation]),
    /// One label per sample row (tabular exports); the midpoint sample's
    /// label wins. Indexed at the first channel's sample rate.
    AttentionPerSample(&'a [AttentionState]),
}

const WINDOW_ROUNDING_TOL: f64 = 1e-9;

/// Cut a recording into consecutive non-overlapping `length_s` windows. Each
/// epoch is labeled by the annotation covering its midpoint; a trailing
/// partial window is dropped. Epochs labeled `UnknownOrMovement` are flagged
/// excluded rather than removed.
pub fn segment_epochs(
    recording: &Recording,
    length_s: f64,
    labels: &LabelSource,
) -> Result<Vec<Epoch>, IngestError> {
    let mut windows = Vec::with_capacity(recording.channels.len());
    for ch in &recording.channels {
        let exact = length_s * ch.sample_rate_hz;
        if (exact - exact.round()).abs() > WINDOW_ROUNDING_TOL {
            return Err(IngestError::NonIntegerWindow {
                length_s,
                sample_rate_hz: ch.sample_rate_hz,
            });
        }
        windows.push(exact.round() as usize);
    }

    let n_epochs = recording
        .channels
        .iter()
        .zip(&windows)
        .map(|(ch, &w)| ch.samples.len() / w)
        .min()
        .unwrap_or(0);

    let mut epochs = Vec::with_capacity(n_epochs);
    for index in 0..n_epochs {
        let midpoint_s = (index as f64 + 0.5) * length_s;
        let (label, excluded) = match labels {
            LabelSource::Stages(annotations) => {
                let ann = annotations
                    .iter()
                    .find(|a| a.covers(midpoint_s))
                    .ok_or(IngestError::NoAnnotationCoverage { midpoint_s })?;
                (
                    EpochLabel::Stage(ann.stage),
                    ann.stage == SleepStage::UnknownOrMovement,
                )
            }
            LabelSource::AttentionPerSample(per_sample) => {
                let rate = recording.channels[0].sample_rate_hz;
                let sample_idx = (midpoint_s * rate) as usize;
                let state = per_sample
                    .get(sample_idx)
                    .ok_or(IngestError::NoAnnotationCoverage { midpoint_s })?;
                (EpochLabel::Attention(*state), false)
            }
        };
        let channels = recording
            .channels
            .iter()
            .zip(&windows)
            .map(|(ch, &w)| EpochChannel {
                name: ch.name.clone(),
                sample_rate_hz: ch.sample_rate_hz,
                samples: ch.samples[index * w..(index + 1) * w].to_vec(),
            })
            .collect();
        epochs.push(Epoch {
            channels,
            length_s,
            label,
            subject_id: recording.subject_id.clone(),
            index,
            excluded,
        });
    }
    Ok(epochs)
}

/// Draw disjoint train/validation/test sets with exact cardinalities.
/// Membership is a pure function of (epoch set, spec, seed): the eligible
/// epochs are shuffled once with a seeded RNG and sliced as
/// [test | train | validation]. Excluded epochs never enter a split.
pub fn make_splits(epochs: &[Epoch], spec: &SplitSpec) -> Result<SplitSet, IngestError> {
    let eligible: Vec<&Epoch> = epochs.iter().filter(|e| !e.excluded).collect();
    let requested = spec.train + spec.validation + spec.test;
    if requested > eligible.len() {
        return Err(IngestError::InsufficientEpochs {
            requested,
            available: eligible.len(),
        });
    }

    let mut order: Vec<usize> = (0..eligible.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    order.shuffle(&mut rng);

    let take = |range: std::ops::Range<usize>| -> Vec<Epoch> {
        order[range].iter().map(|&i| eligible[i].clone()).collect()
    };
    let test = take(0..spec.test);
    let train = take(spec.test..spec.test + spec.train);
    let validation = take(spec.test + spec.train..requested);

    Ok(SplitSet {
        train,
        validation,
        test,
        seed: spec.seed,
    })
}
