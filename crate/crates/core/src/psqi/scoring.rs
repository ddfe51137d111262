//! The seven PSQI components and the global score.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Global score above which a respondent is classified a poor sleeper.
pub const POOR_SLEEPER_CUTOFF: u8 = 5;

/// The nine disturbance items (question 5b-5j) in questionnaire order.
pub const DISTURBANCE_ITEMS: [&str; 9] = [
    "wake up in the middle of the night or early morning",
    "have to get up to use the bathroom",
    "cannot breathe comfortably",
    "cough or snore loudly",
    "feel too cold",
    "feel too hot",
    "have bad dreams",
    "have pain",
    "other reason(s)",
];

#[derive(Debug, Error)]
pub enum PsqiError {
    #[error("incomplete response, missing items: {0:?}")]
    IncompleteResponse(Vec<String>),
    #[error("item `{item}` has invalid value {value:?} (expected 0-3)")]
    InvalidOrdinal { item: String, value: String },
    #[error("sleep_hours {0} exceeds 24")]
    SleepHoursOutOfRange(f64),
    #[error("bad clock time {0:?} (expected HH:MM)")]
    BadClockTime(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// Minutes-resolution wall-clock time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClockTime {
    pub hour: u8,
    pub minute: u8,
}

impl ClockTime {
    pub fn new(hour: u8, minute: u8) -> Self {
        assert!(hour < 24 && minute < 60);
        Self { hour, minute }
    }

    pub fn parse(s: &str) -> Result<Self, PsqiError> {
        let bad = || PsqiError::BadClockTime(s.to_string());
        let (h, m) = s.split_once(':').ok_or_else(bad)?;
        let hour: u8 = h.trim().parse().map_err(|_| bad())?;
        let minute: u8 = m.trim().parse().map_err(|_| bad())?;
        if hour >= 24 || minute >= 60 {
            return Err(bad());
        }
        Ok(Self { hour, minute })
    }

    fn minutes(self) -> i32 {
        self.hour as i32 * 60 + self.minute as i32
    }
}

impl std::fmt::Display for ClockTime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:02}:{:02}", self.hour, self.minute)
    }
}

/// A complete questionnaire response. Ordinal items are 0-3 frequency codes
/// (0 = not during the past month ... 3 = three or more times a week);
/// `subjective_quality` is 0 = very good ... 3 = very bad.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PsqiResponse {
    pub bedtime: ClockTime,
    pub waketime: ClockTime,
    /// Question 2: minutes to fall asleep.
    pub latency_min: f64,
    /// Question 4: hours of actual sleep.
    pub sleep_hours: f64,
    /// Question 5a: cannot get to sleep within 30 minutes.
    pub cant_sleep_30min: u8,
    /// Questions 5b-5j in [`DISTURBANCE_ITEMS`] order.
    pub disturbances: [u8; 9],
    /// Free-text reason attached to item 5j.
    pub other_reason: Option<String>,
    /// Question 6.
    pub subjective_quality: u8,
    /// Question 7: medicine to help sleep.
    pub medication: u8,
    /// Question 8: trouble staying awake during daily activities.
    pub trouble_staying_awake: u8,
    /// Question 9: trouble keeping up enough enthusiasm.
    pub low_enthusiasm: u8,
}

impl PsqiResponse {
    /// Time in bed in hours, with midnight wraparound.
    pub fn time_in_bed_hours(&self) -> f64 {
        let mut span = self.waketime.minutes() - self.bedtime.minutes();
        if span <= 0 {
            span += 24 * 60;
        }
        span as f64 / 60.0
    }

    fn validate(&self) -> Result<(), PsqiError> {
        let mut bad = Vec::new();
        let check = |v: u8, name: &str, bad: &mut Vec<String>| {
            if v > 3 {
                bad.push(name.to_string());
            }
        };
        check(self.cant_sleep_30min, "cant_sleep_30min", &mut bad);
        for (i, &d) in self.disturbances.iter().enumerate() {
            check(d, &format!("q5{}", (b'b' + i as u8) as char), &mut bad);
        }
        check(self.subjective_quality, "subjective_quality", &mut bad);
        check(self.medication, "medication", &mut bad);
        check(self.trouble_staying_awake, "trouble_staying_awake", &mut bad);
        check(self.low_enthusiasm, "low_enthusiasm", &mut bad);
        if let Some(item) = bad.first() {
            return Err(PsqiError::InvalidOrdinal {
                item: item.clone(),
                value: "out of range".into(),
            });
        }
        if self.sleep_hours > 24.0 || self.sleep_hours < 0.0 {
            return Err(PsqiError::SleepHoursOutOfRange(self.sleep_hours));
        }
        Ok(())
    }
}

/// The seven component scores (each 0-3) and the global sum (0-21).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PsqiScore {
    /// [quality, latency, duration, efficiency, disturbances, medication,
    /// daytime dysfunction]
    pub components: [u8; 7],
    pub global: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SleepQuality {
    Good,
    Poor,
}

impl SleepQuality {
    pub fn canonical(self) -> &'static str {
        match self {
            SleepQuality::Good => "good",
            SleepQuality::Poor => "poor",
        }
    }
}

fn band(value: f64, cuts: [f64; 3]) -> u8 {
    // cuts ascending; returns 0..=3
    if value <= cuts[0] {
        0
    } else if value <= cuts[1] {
        1
    } else if value <= cuts[2] {
        2
    } else {
        3
    }
}

fn sum_band(total: u8, cuts: [u8; 3]) -> u8 {
    if total == cuts[0] {
        0
    } else if total <= cuts[1] {
        1
    } else if total <= cuts[2] {
        2
    } else {
        3
    }
}

/// Score the seven standard components.
pub fn score_components(resp: &PsqiResponse) -> Result<PsqiScore, PsqiError> {
    resp.validate()?;

    // C1 subjective quality: the raw item.
    let quality = resp.subjective_quality;

    // C2 latency: minutes band (<=15, 16-30, 31-60, >60) plus item 5a, the
    // sum then banded 0 / 1-2 / 3-4 / 5-6.
    let latency_band = band(resp.latency_min, [15.0, 30.0, 60.0]);
    let latency = sum_band(latency_band + resp.cant_sleep_30min, [0, 2, 4]);

    // C3 duration: >7h -> 0, 6-7 -> 1, 5-6 -> 2, <5 -> 3.
    let duration = if resp.sleep_hours > 7.0 {
        0
    } else if resp.sleep_hours >= 6.0 {
        1
    } else if resp.sleep_hours >= 5.0 {
        2
    } else {
        3
    };

    // C4 efficiency: sleep / time-in-bed, banded >=85 / 75-84 / 65-74 / <65.
    let tib = resp.time_in_bed_hours();
    let efficiency_pct = if tib > 0.0 {
        resp.sleep_hours / tib * 100.0
    } else {
        0.0
    };
    let efficiency = if efficiency_pct >= 85.0 {
        0
    } else if efficiency_pct >= 75.0 {
        1
    } else if efficiency_pct >= 65.0 {
        2
    } else {
        3
    };

    // C5 disturbances: nine items summed then banded 0 / 1-9 / 10-18 / 19-27.
    let disturbance_sum: u8 = resp.disturbances.iter().sum();
    let disturbances = sum_band(disturbance_sum, [0, 9, 18]);

    // C6 medication: the raw item.
    let medication = resp.medication;

    // C7 daytime dysfunction: items 8 + 9 banded 0 / 1-2 / 3-4 / 5-6.
    let dysfunction = sum_band(resp.trouble_staying_awake + resp.low_enthusiasm, [0, 2, 4]);

    let components = [
        quality,
        latency,
        duration,
        efficiency,
        disturbances,
        medication,
        dysfunction,
    ];
    Ok(PsqiScore {
        components,
        global: components.iter().sum(),
    })
}

/// Good/poor classification: global > 5 is a poor sleeper.
pub fn classify_sleeper(score: &PsqiScore) -> SleepQuality {
    if score.global > POOR_SLEEPER_CUTOFF {
        SleepQuality::Poor
    } else {
        SleepQuality::Good
    }
}

#[cfg(test)]
pub(crate) fn best_case_response() -> PsqiResponse {
    PsqiResponse {
        bedtime: ClockTime::new(23, 0),
        waketime: ClockTime::new(7, 0),
        latency_min: 5.0,
        sleep_hours: 8.0,
        cant_sleep_30min: 0,
        disturbances: [0; 9],
        other_reason: None,
        subjective_quality: 0,
        medication: 0,
        trouble_staying_awake: 0,
        low_enthusiasm: 0,
    }
}
