//! Joint angle/ToF/AoD MUSIC over the virtual array.
//!
//! Frames are grouped into sliding snapshot windows, each window yields a
//! signal subspace, and the pseudo-spectrum is collapsed over ToF and AoD
//! into a 180×180 (azimuth, elevation) image.

mod peaks;
mod spectrum;
mod subspace;
mod window;

pub use peaks::{detect_peaks, Peak, DEFAULT_MAX_PEAKS, DEFAULT_MIN_PROMINENCE_DB};
pub use spectrum::{spectrum, spectrum_with, GridSpec, Marginal, Spectrum2D};
pub use subspace::{
    covariance, mdl_count, noise_subspace, noise_subspace_from_window, threshold_count, Covariance,
    NoiseSubspace, SourceCount,
};
pub use window::{
    window_at, window_count, windows, SnapshotWindow, Windows, DEFAULT_STRIDE, DEFAULT_WINDOW_LEN,
};

use crate::error::Result;
use crate::sanitize::sanitize;
use crate::sim::CsiStream;

/// Settings for turning a CSI stream into a sequence of 2D images.
#[derive(Debug, Clone, PartialEq)]
pub struct ImagingConfig {
    pub window_len: usize,
    pub stride: usize,
    pub sanitize: bool,
    /// One packet, one transmitter, one subcarrier per image.
    pub degraded: bool,
    pub grids: GridSpec,
    pub marginal: Marginal,
    pub source_count: SourceCount,
}

impl Default for ImagingConfig {
    fn default() -> Self {
        Self {
            window_len: DEFAULT_WINDOW_LEN,
            stride: DEFAULT_STRIDE,
            sanitize: true,
            degraded: false,
            grids: GridSpec::default(),
            marginal: Marginal::Sum,
            source_count: SourceCount::default(),
        }
    }
}

/// Spectrum of a single window.
pub fn image_window(
    stream: &CsiStream,
    window: &SnapshotWindow,
    cfg: &ImagingConfig,
) -> Result<Spectrum2D> {
    let noise = noise_subspace_from_window(window, cfg.source_count)?;
    let mut s = spectrum_with(
        &noise,
        &cfg.grids,
        &stream.config,
        &stream.geometry,
        cfg.marginal,
    )?;
    s.timestamp_ns = window.timestamp_ns;
    Ok(s)
}

/// One spectrum per snapshot window of `stream`.
pub fn image_stream(stream: &CsiStream, cfg: &ImagingConfig) -> Result<Vec<Spectrum2D>> {
    let sanitized;
    let mut src = stream;
    if cfg.sanitize {
        sanitized = sanitize(stream)?;
        src = &sanitized;
    }
    let degraded;
    let window_len = if cfg.degraded {
        degraded = src.select(1, 1)?;
        src = &degraded;
        1
    } else {
        cfg.window_len
    };
    windows(src, window_len, cfg.stride)?
        .map(|w| image_window(src, &w, cfg))
        .collect()
}
