//! Actogram construction: activity codes bucketed into one row per calendar
//! date and 24 hourly bins.

use chrono::{DateTime, Datelike, NaiveDate, TimeZone, Timelike, Utc};
use serde::{Deserialize, Serialize};

use crate::ingest::ActivitySeries;

/// Day-by-hour activity grid. Cells are the arithmetic mean of that hour's
/// codes, `None` where the hour has no samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActogramGrid {
    pub dates: Vec<NaiveDate>,
    /// `cells[row][hour]`, row order matches `dates`.
    pub cells: Vec<[Option<f64>; 24]>,
}

impl ActogramGrid {
    pub fn is_all_missing(&self) -> bool {
        self.cells.iter().flatten().all(|c| c.is_none())
    }
}

/// Bucket timestamps in UTC. Day alignment follows the subject's local
/// timezone when an offset is supplied via [`build_actogram_with_offset`].
pub fn build_actogram(activity: &ActivitySeries) -> ActogramGrid {
    build_actogram_with_offset(activity, 0)
}

/// `utc_offset_hours` shifts timestamps into the subject's local time before
/// date/hour bucketing.
pub fn build_actogram_with_offset(activity: &ActivitySeries, utc_offset_hours: i32) -> ActogramGrid {
    let offset = i64::from(utc_offset_hours) * 3600;
    let local = |ts: i64| -> DateTime<Utc> {
        Utc.timestamp_opt(ts + offset, 0)
            .single()
            .unwrap_or_else(|| Utc.timestamp_opt(0, 0).unwrap())
    };

    if activity.entries.is_empty() {
        return ActogramGrid {
            dates: Vec::new(),
            cells: Vec::new(),
        };
    }

    let first = local(activity.entries.first().unwrap().timestamp).date_naive();
    let last = local(activity.entries.last().unwrap().timestamp).date_naive();
    let n_days = (last.num_days_from_ce() - first.num_days_from_ce()) as usize + 1;

    let mut sums = vec![[0.0f64; 24]; n_days];
    let mut counts = vec![[0usize; 24]; n_days];
    for e in &activity.entries {
        let dt = local(e.timestamp);
        let row = (dt.date_naive().num_days_from_ce() - first.num_days_from_ce()) as usize;
        let hour = dt.hour() as usize;
        sums[row][hour] += e.code.code() as f64;
        counts[row][hour] += 1;
    }

    let dates = (0..n_days)
        .map(|d| first + chrono::Duration::days(d as i64))
        .collect();
    let cells = sums
        .iter()
        .zip(&counts)
        .map(|(s, c)| {
            let mut row = [None; 24];
            for h in 0..24 {
                if c[h] > 0 {
                    row[h] = Some(s[h] / c[h] as f64);
                }
            }
            row
        })
        .collect();
    ActogramGrid { dates, cells }
}

/// Per-hour-of-day mean and standard deviation of the daily hourly means.
/// A band over a single day has zero width (std over one sample is 0).
pub fn hourly_mean_std(grid: &ActogramGrid) -> ([Option<f64>; 24], [f64; 24]) {
    let mut means = [None; 24];
    let mut stds = [0.0; 24];
    for h in 0..24 {
        let values: Vec<f64> = grid.cells.iter().filter_map(|row| row[h]).collect();
        if values.is_empty() {
            continue;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        means[h] = Some(mean);
        stds[h] = var.sqrt();
    }
    (means, stds)
}
