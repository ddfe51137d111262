use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

/// Where a [`Recording`] came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecordingSource {
    Edf,
    Csv,
}

/// One sampled channel in physical units (microvolts for EEG).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSeries {
    pub name: String,
    pub sample_rate_hz: f64,
    pub samples: Vec<f64>,
}

impl ChannelSeries {
    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }
}

/// A multichannel recording. Channels may have different sample rates but
/// cover the same time span (within one sample period).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Recording {
    pub channels: Vec<ChannelSeries>,
    pub start_time: DateTime<Utc>,
    pub subject_id: String,
    pub source: RecordingSource,
}

impl Recording {
    pub fn channel(&self, name: &str) -> Option<&ChannelSeries> {
        self.channels.iter().find(|c| c.name == name)
    }

    /// Recording length in seconds, taken from the first channel.
    pub fn duration_s(&self) -> f64 {
        self.channels.first().map_or(0.0, |c| c.duration_s())
    }
}

/// Sleep stage codes as used throughout the pipeline. Codes 0-4 are
/// classification targets; code 5 is ingestion-only and excluded from
/// training and evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SleepStage {
    Wake = 0,
    Stage1 = 1,
    Stage2 = 2,
    Stage34 = 3,
    Rem = 4,
    UnknownOrMovement = 5,
}

impl SleepStage {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Self> {
        match code {
            0 => Some(SleepStage::Wake),
            1 => Some(SleepStage::Stage1),
            2 => Some(SleepStage::Stage2),
            3 => Some(SleepStage::Stage34),
            4 => Some(SleepStage::Rem),
            5 => Some(SleepStage::UnknownOrMovement),
            _ => None,
        }
    }

    /// Display label used in tables and confusion-matrix axes.
    pub fn display_label(self) -> &'static str {
        match self {
            SleepStage::Wake => "W",
            SleepStage::Stage1 => "1",
            SleepStage::Stage2 => "2",
            SleepStage::Stage34 => "3&4",
            SleepStage::Rem => "REM",
            SleepStage::UnknownOrMovement => "?",
        }
    }

    /// Canonical class string used in CSV exports and LLM labels.
    pub fn canonical(self) -> String {
        self.code().to_string()
    }
}

/// Binary attention state. "Drowsy" source labels are merged into
/// `Unfocused` at ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AttentionState {
    Focused,
    Unfocused,
}

impl AttentionState {
    pub fn canonical(self) -> &'static str {
        match self {
            AttentionState::Focused => "focused",
            AttentionState::Unfocused => "unfocused",
        }
    }
}

/// A stage annotation from a hypnogram: `[onset_s, onset_s + duration_s)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageAnnotation {
    pub onset_s: f64,
    pub duration_s: f64,
    pub stage: SleepStage,
}

impl StageAnnotation {
    pub fn covers(&self, t: f64) -> bool {
        t >= self.onset_s && t < self.onset_s + self.duration_s
    }
}

/// Label attached to an epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EpochLabel {
    Stage(SleepStage),
    Attention(AttentionState),
}

impl EpochLabel {
    pub fn canonical(&self) -> String {
        match self {
            EpochLabel::Stage(s) => s.canonical(),
            EpochLabel::Attention(a) => a.canonical().to_string(),
        }
    }
}

/// One channel's window inside an epoch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochChannel {
    pub name: String,
    pub sample_rate_hz: f64,
    pub samples: Vec<f64>,
}

/// A fixed-length labeled analysis window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Epoch {
    pub channels: Vec<EpochChannel>,
    pub length_s: f64,
    pub label: EpochLabel,
    pub subject_id: String,
    pub index: usize,
    /// True when the covering annotation was `UnknownOrMovement`; such epochs
    /// are kept for inspection but excluded from training and evaluation.
    pub excluded: bool,
}

impl Epoch {
    pub fn channel(&self, name: &str) -> Option<&EpochChannel> {
        self.channels.iter().find(|c| c.name == name)
    }
}

/// Phone-derived physical activity codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ActivityCode {
    Stationary = 0,
    Walking = 1,
    Running = 2,
    Unknown = 3,
}

impl ActivityCode {
    pub fn from_code(code: i64) -> Option<Self> {
        match code {
            0 => Some(ActivityCode::Stationary),
            1 => Some(ActivityCode::Walking),
            2 => Some(ActivityCode::Running),
            3 => Some(ActivityCode::Unknown),
            _ => None,
        }
    }

    pub fn code(self) -> u8 {
        self as u8
    }
}

/// Timestamped activity sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivityEntry {
    /// Unix seconds.
    pub timestamp: i64,
    pub code: ActivityCode,
}

/// A subject's activity time series; timestamps strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActivitySeries {
    pub subject_id: String,
    pub entries: Vec<ActivityEntry>,
}

/// Requested split cardinalities plus the sampling seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train: usize,
    pub validation: usize,
    pub test: usize,
    pub seed: u64,
}

/// Disjoint train/validation/test epoch sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSet {
    pub train: Vec<Epoch>,
    pub validation: Vec<Epoch>,
    pub test: Vec<Epoch>,
    pub seed: u64,
}
