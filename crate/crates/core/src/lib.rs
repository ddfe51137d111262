//! Core library for EEG / behavioral sleep and attention analysis.
//!
//! The crate is organized around the processing pipeline:
//!
//! - [`ingest`] — EDF/EDF+ and CSV parsing, epoch segmentation, dataset splits
//! - [`dsp`] — filtering, spectrograms, and the per-channel feature vector
//! - [`render`] — deterministic PNG plots (waveforms, spectrograms, actograms,
//!   confusion matrices)
//! - [`classify`] — gradient-boosted trees, majority baseline, evaluation metrics
//! - [`psqi`] — Pittsburgh Sleep Quality Index scoring and text rendering
//! - [`llm_bridge`] — prompt construction, chat-completions client, response parsing
//! - [`feedback`] — personalized sleep-suggestion / guided-imagery prompts and
//!   numeric-leak validation

pub mod classify;
pub mod dsp;
pub mod feedback;
pub mod ingest;
pub mod llm_bridge;
pub mod psqi;
pub mod render;
