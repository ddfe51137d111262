//! Deterministic raster figures: waveform plots, spectrogram heatmaps,
//! actograms, hourly averaged activity graphs, and confusion-matrix heatmaps.
//! PNG bytes are identical for identical inputs (built-in font, no embedded
//! timestamps).

pub mod actogram;
pub mod canvas;
mod colormap;
mod font;
mod plots;

pub use actogram::{build_actogram, build_actogram_with_offset, hourly_mean_std, ActogramGrid};
pub use colormap::ColorMap;
pub use plots::{
    render_actogram, render_avg_activity, render_confusion, render_spectrogram, render_waveform,
    waveform_x_ticks, ImageSpec, RenderError,
};
