//! Data ingestion: EDF/EDF+ recordings, hypnogram annotations, CSV signal and
//! activity exports, epoch segmentation, and deterministic splits.
//!
//! Parsing is pure and reentrant; a [`Recording`] is immutable after
//! construction and safe to share across threads.

pub mod csv_io;
pub mod edf;
mod error;
pub mod epochs;
pub mod hypnogram;
mod types;

pub use csv_io::{
    load_activity_csv, load_attention_labels, load_signal_csv, map_attention_label,
    write_signal_csv, ColumnSchema,
};
pub use edf::parse_edf;
pub use epochs::{make_splits, segment_epochs, LabelSource};
pub use error::IngestError;
pub use hypnogram::{map_stage_label, parse_hypnogram, parse_tal};
pub use types::{
    ActivityCode, ActivityEntry, ActivitySeries, AttentionState, ChannelSeries, Epoch,
    EpochChannel, EpochLabel, Recording, RecordingSource, SleepStage, SplitSet, SplitSpec,
    StageAnnotation,
};
