//! Re-identification evaluation.
//!
//! [`extract_features`] is a deliberately simple hand-crafted descriptor
//! (body extents, power and gait periodicity read off enhanced images). It
//! stands in for a learned embedding so that ranking and CMC evaluation can
//! run end to end over synthetic walkers. [`rank`] and [`cmc`] implement the
//! standard probe/gallery top-k metrics.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::music::{detect_peaks, Spectrum2D};
use crate::vision::{aggregate, SpectrumTrack, DEFAULT_AGGREGATE_FRAMES, DEFAULT_FLOOR_DB};

/// Shortest track accepted by [`extract_features`].
pub const MIN_TRACK_FRAMES: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub elevation_extent: f64,
    pub azimuth_extent: f64,
    pub total_power: f64,
    pub centroid_elevation: f64,
    /// Seconds; 0 when no periodicity was found.
    pub gait_period: f64,
    pub power_modulation_depth: f64,
}

impl FeatureVector {
    pub const LEN: usize = 6;

    pub fn to_array(&self) -> [f64; Self::LEN] {
        [
            self.elevation_extent,
            self.azimuth_extent,
            self.total_power,
            self.centroid_elevation,
            self.gait_period,
            self.power_modulation_depth,
        ]
    }

    pub fn from_array(v: [f64; Self::LEN]) -> Self {
        Self {
            elevation_extent: v[0],
            azimuth_extent: v[1],
            total_power: v[2],
            centroid_elevation: v[3],
            gait_period: v[4],
            power_modulation_depth: v[5],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureOptions {
    /// Bins further than this below an aggregated image's peak are ignored.
    pub floor_db: f64,
    /// Frames per aggregated image.
    pub aggregate_frames: usize,
    /// Minimum normalized autocorrelation for a lag to count as a gait.
    pub min_periodicity: f64,
}

impl Default for FeatureOptions {
    fn default() -> Self {
        Self {
            floor_db: DEFAULT_FLOOR_DB,
            aggregate_frames: DEFAULT_AGGREGATE_FRAMES,
            min_periodicity: 0.3,
        }
    }
}

pub fn extract_features(track: &SpectrumTrack) -> Result<FeatureVector> {
    extract_features_with(track, &FeatureOptions::default())
}

pub fn extract_features_with(
    track: &SpectrumTrack,
    opts: &FeatureOptions,
) -> Result<FeatureVector> {
    if track.len() < MIN_TRACK_FRAMES {
        return Err(Error::InsufficientFrames {
            what: "feature extraction",
            required: MIN_TRACK_FRAMES,
            available: track.len(),
        });
    }
    let power: Vec<f64> = track.frames().iter().map(Spectrum2D::total).collect();
    if power.iter().all(|&p| p == 0.0) {
        return Err(Error::NoSubject("every frame of the track is empty".into()));
    }

    let k = opts.aggregate_frames.clamp(1, track.len());
    let mut el_ext = Vec::new();
    let mut az_ext = Vec::new();
    let mut centroids = Vec::new();
    for start in (0..=track.len() - k).step_by(k) {
        let img = aggregate(&track.slice(start..start + k), k)?;
        if let Some(shape) = image_shape(&img, opts.floor_db) {
            el_ext.push(shape.elevation_extent);
            az_ext.push(shape.azimuth_extent);
            centroids.push(shape.centroid_elevation);
        }
    }
    if centroids.is_empty() {
        return Err(Error::NoSubject(
            "no aggregated image contains a subject".into(),
        ));
    }

    Ok(FeatureVector {
        elevation_extent: median(&mut el_ext),
        azimuth_extent: median(&mut az_ext),
        total_power: power.iter().sum::<f64>() / power.len() as f64,
        centroid_elevation: median(&mut centroids),
        gait_period: gait_period(&power, opts.min_periodicity) / track.frame_rate,
        power_modulation_depth: modulation_depth(&power),
    })
}

/// Extents and centroid of one image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImageShape {
    pub elevation_extent: f64,
    pub azimuth_extent: f64,
    pub centroid_elevation: f64,
}

/// Extents are the spread of local maxima within `floor_db` of the image
/// peak; the centroid is the power-weighted mean elevation of those bins.
pub fn image_shape(img: &Spectrum2D, floor_db: f64) -> Option<ImageShape> {
    let peak = img.max();
    if !(peak > 0.0) {
        return None;
    }
    let cut = peak * 10f64.powf(-floor_db / 10.0);
    let peaks: Vec<_> = detect_peaks(img, f64::NEG_INFINITY, usize::MAX)
        .into_iter()
        .filter(|p| p.power >= cut)
        .collect();
    let span = |f: fn(&crate::music::Peak) -> f64| {
        let lo = peaks.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = peaks.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        hi - lo
    };
    let (mut w, mut we) = (0.0, 0.0);
    for az in 0..Spectrum2D::SIDE {
        for el in 0..Spectrum2D::SIDE {
            let v = img.get(az, el);
            if v >= cut {
                w += v;
                we += v * (el + 1) as f64;
            }
        }
    }
    Some(ImageShape {
        elevation_extent: span(|p| p.elevation),
        azimuth_extent: span(|p| p.azimuth),
        centroid_elevation: we / w,
    })
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Normalized autocorrelation of `series` at lags `0..max_lag`.
pub fn autocorrelation(series: &[f64], max_lag: usize) -> Vec<f64> {
    let n = series.len();
    let mean = series.iter().sum::<f64>() / n as f64;
    let x: Vec<f64> = series.iter().map(|v| v - mean).collect();
    let var = x.iter().map(|v| v * v).sum::<f64>() / n as f64;
    (0..max_lag.min(n))
        .map(|lag| {
            if var <= 0.0 {
                return 0.0;
            }
            let c: f64 = (0..n - lag).map(|i| x[i] * x[i + lag]).sum::<f64>() / (n - lag) as f64;
            c / var
        })
        .collect()
}

/// Dominant period of `series` in samples, or 0.
///
/// Candidates are autocorrelation local maxima after the first zero
/// crossing; the earliest one within 80% of the best is taken so that
/// harmonics at multiples of the period are not preferred.
pub fn gait_period(series: &[f64], min_periodicity: f64) -> f64 {
    let max_lag = series.len() * 2 / 3;
    let r = autocorrelation(series, max_lag + 1);
    let Some(zero) = r.iter().position(|&v| v < 0.0) else {
        return 0.0;
    };
    let candidates: Vec<usize> = (zero.max(1)..r.len().saturating_sub(1))
        .filter(|&l| r[l] > r[l - 1] && r[l] >= r[l + 1] && r[l] >= min_periodicity)
        .collect();
    let Some(best) = candidates.iter().map(|&l| r[l]).reduce(f64::max) else {
        return 0.0;
    };
    let lag = candidates
        .into_iter()
        .find(|&l| r[l] >= 0.8 * best)
        .unwrap_or(0);
    if lag == 0 {
        return 0.0;
    }
    // Parabolic refinement around the discrete peak.
    let (a, b, c) = (r[lag - 1], r[lag], r[lag + 1]);
    let denom = a - 2.0 * b + c;
    let shift = if denom.abs() > 1e-12 {
        0.5 * (a - c) / denom
    } else {
        0.0
    };
    lag as f64 + shift.clamp(-0.5, 0.5)
}

/// `(max - min) / (max + min)` of the 3-sample moving average.
pub fn modulation_depth(series: &[f64]) -> f64 {
    if series.len() < 3 {
        return 0.0;
    }
    let smooth: Vec<f64> = series
        .windows(3)
        .map(|w| w.iter().sum::<f64>() / 3.0)
        .collect();
    let hi = smooth.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lo = smooth.iter().cloned().fold(f64::INFINITY, f64::min);
    if hi + lo > 0.0 {
        ((hi - lo) / (hi + lo)).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

/// Gallery candidates ordered by distance to one probe.
#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    pub probe_id: String,
    pub ids: Vec<String>,
    pub distances: Vec<f64>,
}

impl RankingResult {
    /// Zero-based rank of `id`, if present.
    pub fn position(&self, id: &str) -> Option<usize> {
        self.ids.iter().position(|g| g == id)
    }
}

/// Per-component mean and standard deviation over a gallery.
pub fn gallery_stats(
    gallery: &[(String, FeatureVector)],
) -> ([f64; FeatureVector::LEN], [f64; FeatureVector::LEN]) {
    let n = gallery.len() as f64;
    let mut mean = [0.0; FeatureVector::LEN];
    let mut std = [0.0; FeatureVector::LEN];
    for (_, f) in gallery {
        for (m, v) in mean.iter_mut().zip(f.to_array()) {
            *m += v / n;
        }
    }
    for (_, f) in gallery {
        for ((s, m), v) in std.iter_mut().zip(&mean).zip(f.to_array()) {
            *s += (v - m).powi(2) / n;
        }
    }
    for s in &mut std {
        *s = s.sqrt();
    }
    (mean, std)
}

/// Rank gallery entries by Euclidean distance on gallery z-normalized
/// features. Components constant across the gallery carry no weight. Ties
/// keep gallery order.
pub fn rank(
    probe_id: &str,
    probe: &FeatureVector,
    gallery: &[(String, FeatureVector)],
) -> Result<RankingResult> {
    if gallery.is_empty() {
        return Err(Error::invalid("gallery must not be empty"));
    }
    let (_, std) = gallery_stats(gallery);
    let p = probe.to_array();
    let mut scored: Vec<(usize, f64)> = gallery
        .iter()
        .enumerate()
        .map(|(i, (_, g))| {
            let d2: f64 = g
                .to_array()
                .iter()
                .zip(&p)
                .zip(&std)
                .filter(|(_, s)| **s > 0.0)
                .map(|((a, b), s)| ((a - b) / s).powi(2))
                .sum();
            (i, d2.sqrt())
        })
        .collect();
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));
    Ok(RankingResult {
        probe_id: probe_id.to_string(),
        ids: scored.iter().map(|&(i, _)| gallery[i].0.clone()).collect(),
        distances: scored.iter().map(|&(_, d)| d).collect(),
    })
}

/// Cumulative matching characteristic; `values[k - 1]` is rank-k accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct CmcCurve {
    pub values: Vec<f64>,
}

impl CmcCurve {
    pub fn rank_k(&self, k: usize) -> f64 {
        self.values[k - 1]
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,accuracy")?;
        for (i, v) in self.values.iter().enumerate() {
            writeln!(w, "{},{}", i + 1, v)?;
        }
        Ok(())
    }
}

pub fn cmc(results: &[RankingResult], truth: &HashMap<String, String>) -> Result<CmcCurve> {
    if results.is_empty() {
        return Err(Error::invalid("no ranking results"));
    }
    let n = results.iter().map(|r| r.ids.len()).max().unwrap_or(0);
    let mut hits = vec![0usize; n];
    for r in results {
        let want = truth
            .get(&r.probe_id)
            .ok_or_else(|| Error::MissingTruth(r.probe_id.clone()))?;
        if let Some(pos) = r.position(want) {
            hits[pos] += 1;
        }
    }
    let total = results.len() as f64;
    let mut acc = 0;
    let values = hits
        .iter()
        .map(|h| {
            acc += h;
            acc as f64 / total
        })
        .collect();
    Ok(CmcCurve { values })
}
