//! The report figures: waveforms, spectrogram heatmaps, actograms, averaged
//! activity graphs, and confusion-matrix heatmaps. All output is PNG with
//! deterministic bytes for identical inputs.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::actogram::{hourly_mean_std, ActogramGrid};
use super::canvas::{Canvas, Color, BLACK, GRID_GRAY, MISSING_DATA, WHITE};
use super::colormap::ColorMap;
use crate::classify::ConfusionMatrix;
use crate::dsp::Spectrogram;
use crate::ingest::{ActivitySeries, Epoch};

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("channel `{0}` not present in epoch")]
    UnknownChannel(String),
    #[error("empty grid")]
    EmptyGrid,
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("empty activity series")]
    EmptyActivity,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ImageSpec {
    pub width_px: u32,
    pub height_px: u32,
    pub color_map: ColorMap,
    /// DPI-equivalent multiplier for margins and glyphs.
    pub scale: f64,
}

impl Default for ImageSpec {
    fn default() -> Self {
        Self {
            width_px: 512,
            height_px: 512,
            color_map: ColorMap::Viridis,
            scale: 1.0,
        }
    }
}

/// Plot-area geometry shared by the axis-bearing figures.
struct Frame {
    left: i64,
    top: i64,
    right: i64,
    bottom: i64,
}

impl Frame {
    fn new(spec: &ImageSpec) -> Self {
        let s = spec.scale.max(0.25);
        Self {
            left: (44.0 * s) as i64,
            top: (10.0 * s) as i64,
            right: spec.width_px as i64 - (10.0 * s) as i64,
            bottom: spec.height_px as i64 - (26.0 * s) as i64,
        }
    }

    fn x(&self, t: f64) -> i64 {
        self.left + (t.clamp(0.0, 1.0) * (self.right - self.left) as f64).round() as i64
    }

    /// y grows downward; t = 0 maps to the bottom edge.
    fn y(&self, t: f64) -> i64 {
        self.bottom - (t.clamp(0.0, 1.0) * (self.bottom - self.top) as f64).round() as i64
    }

    fn draw_axes(&self, canvas: &mut Canvas) {
        canvas.line(self.left, self.top, self.left, self.bottom, BLACK);
        canvas.line(self.left, self.bottom, self.right, self.bottom, BLACK);
    }
}

fn glyph_scale(spec: &ImageSpec) -> u32 {
    (spec.scale.max(0.25)).round().max(1.0) as u32
}

/// Trim a formatted tick value ("2.50" -> "2.5", "30.00" -> "30").
fn tick_label(v: f64) -> String {
    let mut s = format!("{v:.2}");
    while s.contains('.') && (s.ends_with('0') || s.ends_with('.')) {
        let drop_dot = s.ends_with('.');
        s.pop();
        if drop_dot {
            break;
        }
    }
    s
}

fn draw_x_ticks(canvas: &mut Canvas, frame: &Frame, ticks: &[(f64, String)], gs: u32) {
    for (t, label) in ticks {
        let x = frame.x(*t);
        canvas.line(x, frame.bottom, x, frame.bottom + 3, BLACK);
        let w = Canvas::text_width(label, gs);
        canvas.text(x - w / 2, frame.bottom + 5, label, BLACK, gs);
    }
}

fn draw_y_ticks(canvas: &mut Canvas, frame: &Frame, ticks: &[(f64, String)], gs: u32) {
    for (t, label) in ticks {
        let y = frame.y(*t);
        canvas.line(frame.left - 3, y, frame.left, y, BLACK);
        let w = Canvas::text_width(label, gs);
        canvas.text(frame.left - 5 - w, y - Canvas::text_height(gs) / 2, label, BLACK, gs);
    }
}

/// X-axis tick positions for a waveform: 0, mid, and the full epoch length.
pub fn waveform_x_ticks(epoch: &Epoch) -> Vec<(f64, String)> {
    [0.0, 0.5, 1.0]
        .iter()
        .map(|&t| (t, tick_label(t * epoch.length_s)))
        .collect()
}

/// EEG waveform: time on x (0 to the epoch length), amplitude on y, axes
/// labeled.
pub fn render_waveform(
    epoch: &Epoch,
    channel: &str,
    spec: &ImageSpec,
) -> Result<Vec<u8>, RenderError> {
    let ch = epoch
        .channel(channel)
        .ok_or_else(|| RenderError::UnknownChannel(channel.to_string()))?;
    let mut canvas = Canvas::new(spec.width_px, spec.height_px, WHITE);
    let frame = Frame::new(spec);
    let gs = glyph_scale(spec);

    let max_abs = ch
        .samples
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()))
        .max(1e-12);
    let y_norm = |v: f64| (v / max_abs + 1.0) / 2.0;

    // Zero-amplitude reference line.
    let y0 = frame.y(y_norm(0.0));
    canvas.line(frame.left, y0, frame.right, y0, GRID_GRAY);

    let n = ch.samples.len();
    let mut prev: Option<(i64, i64)> = None;
    for (i, &v) in ch.samples.iter().enumerate() {
        let x = frame.x(if n <= 1 { 0.0 } else { i as f64 / (n - 1) as f64 });
        let y = frame.y(y_norm(v));
        if let Some((px, py)) = prev {
            canvas.line(px, py, x, y, BLACK);
        }
        prev = Some((x, y));
    }

    frame.draw_axes(&mut canvas);
    draw_x_ticks(&mut canvas, &frame, &waveform_x_ticks(epoch), gs);
    let y_ticks = [
        (0.0, tick_label(-max_abs)),
        (0.5, tick_label(0.0)),
        (1.0, tick_label(max_abs)),
    ];
    draw_y_ticks(&mut canvas, &frame, &y_ticks, gs);
    canvas.text(
        frame.x(0.5) - Canvas::text_width("time (s)", gs) / 2,
        frame.bottom + 5 + Canvas::text_height(gs) + 2,
        "time (s)",
        BLACK,
        gs,
    );
    canvas.text(2, frame.top, "uV", BLACK, gs);
    Ok(canvas.to_png())
}

/// Spectrogram heatmap: y clipped to 0-40 Hz, intensity log10(1+p) through
/// the colormap. Row heights follow each band's share of the 0-40 Hz axis.
pub fn render_spectrogram(data: &Spectrogram, spec: &ImageSpec) -> Result<Vec<u8>, RenderError> {
    if data.power.is_empty() || data.time_bins.is_empty() {
        return Err(RenderError::EmptyGrid);
    }
    let mut canvas = Canvas::new(spec.width_px, spec.height_px, WHITE);
    let frame = Frame::new(spec);
    let gs = glyph_scale(spec);

    let max_intensity = data
        .power
        .iter()
        .flatten()
        .fold(0.0f64, |acc, &p| acc.max((1.0 + p).log10()));
    let n_cols = data.time_bins.len();
    let f_max = 40.0f64;

    for (row, bands) in data.freq_bands.iter().enumerate() {
        let (lo, hi) = *bands;
        if lo >= f_max {
            continue;
        }
        let y_top = frame.y((hi.min(f_max) / f_max).clamp(0.0, 1.0));
        let y_bot = frame.y((lo / f_max).clamp(0.0, 1.0));
        for col in 0..n_cols {
            let x0 = frame.x(col as f64 / n_cols as f64);
            let x1 = frame.x((col + 1) as f64 / n_cols as f64);
            let t = if max_intensity > 0.0 {
                (1.0 + data.power[row][col]).log10() / max_intensity
            } else {
                0.0
            };
            canvas.fill_rect(x0, y_top, x1.max(x0 + 1), y_bot.max(y_top + 1), spec.color_map.color(t));
        }
    }

    frame.draw_axes(&mut canvas);
    let total_s = data
        .time_bins
        .last()
        .copied()
        .unwrap_or(0.0)
        + if data.time_bins.len() > 1 {
            data.time_bins[1] - data.time_bins[0]
        } else {
            0.0
        };
    let x_ticks: Vec<(f64, String)> = [0.0, 0.5, 1.0]
        .iter()
        .map(|&t| (t, tick_label(t * total_s)))
        .collect();
    draw_x_ticks(&mut canvas, &frame, &x_ticks, gs);
    let y_ticks: Vec<(f64, String)> = [0.0, 0.25, 0.5, 0.75, 1.0]
        .iter()
        .map(|&t| (t, tick_label(t * f_max)))
        .collect();
    draw_y_ticks(&mut canvas, &frame, &y_ticks, gs);
    canvas.text(
        frame.x(0.5) - Canvas::text_width("time (s)", gs) / 2,
        frame.bottom + 5 + Canvas::text_height(gs) + 2,
        "time (s)",
        BLACK,
        gs,
    );
    canvas.text(2, frame.top, "Hz", BLACK, gs);
    Ok(canvas.to_png())
}

/// Actogram heatmap: dates on y, 0:00-24:00 on x; hours with no samples use
/// the reserved missing-data color (distinct from activity 0).
pub fn render_actogram(grid: &ActogramGrid, spec: &ImageSpec) -> Result<Vec<u8>, RenderError> {
    if grid.dates.is_empty() {
        return Err(RenderError::EmptyGrid);
    }
    let mut canvas = Canvas::new(spec.width_px, spec.height_px, WHITE);
    let frame = Frame::new(spec);
    let gs = glyph_scale(spec);
    let n_rows = grid.dates.len();

    for (row, cells) in grid.cells.iter().enumerate() {
        // Row 0 (earliest date) at the top.
        let y0 = frame.y(1.0 - row as f64 / n_rows as f64);
        let y1 = frame.y(1.0 - (row + 1) as f64 / n_rows as f64);
        for (hour, cell) in cells.iter().enumerate() {
            let x0 = frame.x(hour as f64 / 24.0);
            let x1 = frame.x((hour + 1) as f64 / 24.0);
            let color: Color = match cell {
                Some(v) => spec.color_map.color(v / 3.0),
                None => MISSING_DATA,
            };
            canvas.fill_rect(x0, y0, x1.max(x0 + 1), y1.max(y0 + 1), color);
        }
    }

    frame.draw_axes(&mut canvas);
    let x_ticks: Vec<(f64, String)> = [(0.0, "0:00"), (0.5, "12:00"), (1.0, "24:00")]
        .iter()
        .map(|&(t, l)| (t, l.to_string()))
        .collect();
    draw_x_ticks(&mut canvas, &frame, &x_ticks, gs);
    let first = grid.dates.first().unwrap();
    let last = grid.dates.last().unwrap();
    draw_y_ticks(
        &mut canvas,
        &frame,
        &[
            (1.0, first.format("%m-%d").to_string()),
            (0.0, last.format("%m-%d").to_string()),
        ],
        gs,
    );
    Ok(canvas.to_png())
}

/// Hourly averaged activity: per-hour-of-day mean line with a +-1 std band.
pub fn render_avg_activity(
    activity: &ActivitySeries,
    spec: &ImageSpec,
) -> Result<Vec<u8>, RenderError> {
    if activity.entries.is_empty() {
        return Err(RenderError::EmptyActivity);
    }
    let grid = super::actogram::build_actogram(activity);
    let (means, stds) = hourly_mean_std(&grid);

    let mut canvas = Canvas::new(spec.width_px, spec.height_px, WHITE);
    let frame = Frame::new(spec);
    let gs = glyph_scale(spec);
    let y_max = 3.0f64;
    let band_color = spec.color_map.color(0.35);
    let line_color = BLACK;

    // Band first, line on top.
    for h in 0..24 {
        if let Some(mean) = means[h] {
            let x0 = frame.x(h as f64 / 24.0);
            let x1 = frame.x((h + 1) as f64 / 24.0);
            let top = frame.y(((mean + stds[h]) / y_max).min(1.0));
            let bot = frame.y(((mean - stds[h]) / y_max).max(0.0));
            canvas.fill_rect(x0, top, x1.max(x0 + 1), (bot + 1).max(top + 1), band_color);
        }
    }
    let mut prev: Option<(i64, i64)> = None;
    for h in 0..24 {
        match means[h] {
            Some(mean) => {
                let x = frame.x((h as f64 + 0.5) / 24.0);
                let y = frame.y((mean / y_max).clamp(0.0, 1.0));
                if let Some((px, py)) = prev {
                    canvas.line(px, py, x, y, line_color);
                }
                prev = Some((x, y));
            }
            None => prev = None,
        }
    }

    frame.draw_axes(&mut canvas);
    let x_ticks: Vec<(f64, String)> = [(0.0, "0:00"), (0.5, "12:00"), (1.0, "24:00")]
        .iter()
        .map(|&(t, l)| (t, l.to_string()))
        .collect();
    draw_x_ticks(&mut canvas, &frame, &x_ticks, gs);
    let y_ticks: Vec<(f64, String)> = [0.0, 1.0, 2.0, 3.0]
        .iter()
        .map(|&v| (v / y_max, tick_label(v)))
        .collect();
    draw_y_ticks(&mut canvas, &frame, &y_ticks, gs);
    canvas.text(2, frame.top, "activity", BLACK, gs);
    Ok(canvas.to_png())
}

/// Row-normalized confusion-matrix heatmap with per-cell counts printed and
/// class labels on both axes.
pub fn render_confusion(matrix: &ConfusionMatrix, spec: &ImageSpec) -> Result<Vec<u8>, RenderError> {
    let k = matrix.labels.len();
    if k == 0 {
        return Err(RenderError::EmptyMatrix);
    }
    let mut canvas = Canvas::new(spec.width_px, spec.height_px, WHITE);
    let frame = Frame::new(spec);
    let gs = glyph_scale(spec);

    for truth in 0..k {
        let row_total: usize = matrix.counts[truth].iter().sum();
        let y0 = frame.y(1.0 - truth as f64 / k as f64);
        let y1 = frame.y(1.0 - (truth + 1) as f64 / k as f64);
        for predicted in 0..k {
            let x0 = frame.x(predicted as f64 / k as f64);
            let x1 = frame.x((predicted + 1) as f64 / k as f64);
            let count = matrix.counts[truth][predicted];
            let t = if row_total > 0 {
                count as f64 / row_total as f64
            } else {
                0.0
            };
            let cell_color = spec.color_map.color(t);
            canvas.fill_rect(x0, y0, x1.max(x0 + 1), y1.max(y0 + 1), cell_color);
            let label = count.to_string();
            let text_color = if t > 0.6 { BLACK } else { WHITE };
            canvas.text(
                (x0 + x1) / 2 - Canvas::text_width(&label, gs) / 2,
                (y0 + y1) / 2 - Canvas::text_height(gs) / 2,
                &label,
                text_color,
                gs,
            );
        }
    }

    frame.draw_axes(&mut canvas);
    for (i, label) in matrix.labels.iter().enumerate() {
        let cx = frame.x((i as f64 + 0.5) / k as f64);
        canvas.text(
            cx - Canvas::text_width(label, gs) / 2,
            frame.bottom + 5,
            label,
            BLACK,
            gs,
        );
        let cy = frame.y(1.0 - (i as f64 + 0.5) / k as f64);
        canvas.text(
            (frame.left - 5 - Canvas::text_width(label, gs)).max(0),
            cy - Canvas::text_height(gs) / 2,
            label,
            BLACK,
            gs,
        );
    }
    Ok(canvas.to_png())
}
