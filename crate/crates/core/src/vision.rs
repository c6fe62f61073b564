//! Human-centric post-processing of 2D images: static background
//! estimation, spectral subtraction with a dB floor, and multi-frame
//! aggregation of specular body parts.

use crate::error::{Error, Result};
use crate::music::Spectrum2D;

pub const DEFAULT_FRAME_RATE: f64 = 30.0;
pub const DEFAULT_STATIC_WINDOW: usize = 90;
pub const DEFAULT_FLOOR_DB: f64 = 20.0;
pub const DEFAULT_AGGREGATE_FRAMES: usize = 15;

/// Append-only, time-ordered sequence of images.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumTrack {
    frames: Vec<Spectrum2D>,
    pub frame_rate: f64,
}

impl SpectrumTrack {
    pub fn new(frame_rate: f64) -> Self {
        Self {
            frames: Vec::new(),
            frame_rate,
        }
    }

    pub fn from_frames(frames: Vec<Spectrum2D>, frame_rate: f64) -> Result<Self> {
        let mut t = Self::new(frame_rate);
        for f in frames {
            t.push(f)?;
        }
        Ok(t)
    }

    pub fn push(&mut self, frame: Spectrum2D) -> Result<()> {
        if let Some(last) = self.frames.last() {
            if frame.timestamp_ns <= last.timestamp_ns {
                return Err(Error::invalid(format!(
                    "track timestamps must increase ({} after {})",
                    frame.timestamp_ns, last.timestamp_ns
                )));
            }
        }
        self.frames.push(frame);
        Ok(())
    }

    pub fn frames(&self) -> &[Spectrum2D] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn latest(&self) -> Option<&Spectrum2D> {
        self.frames.last()
    }

    /// Track of the frames in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Self {
        Self {
            frames: self.frames[range].to_vec(),
            frame_rate: self.frame_rate,
        }
    }
}

fn trailing<'a>(
    track: &'a SpectrumTrack,
    n: usize,
    what: &'static str,
) -> Result<&'a [Spectrum2D]> {
    if n == 0 || track.len() < n {
        return Err(Error::InsufficientFrames {
            what,
            required: n.max(1),
            available: track.len(),
        });
    }
    Ok(&track.frames[track.len() - n..])
}

/// Per-bin temporal median over the trailing `window` frames.
pub fn static_estimate(track: &SpectrumTrack, window: usize) -> Result<Spectrum2D> {
    let frames = trailing(track, window, "static window")?;
    let mut column = vec![0.0; frames.len()];
    let mut out = Spectrum2D::zeros(frames[frames.len() - 1].timestamp_ns);
    let mid = column.len() / 2;
    for (i, v) in out.values_mut().iter_mut().enumerate() {
        for (c, f) in column.iter_mut().zip(frames) {
            *c = f.values()[i];
        }
        let (lower, m, _) = column.select_nth_unstable_by(mid, f64::total_cmp);
        let m = *m;
        *v = if frames.len() % 2 == 1 {
            m
        } else {
            let below = lower.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            (below + m) / 2.0
        };
    }
    Ok(out)
}

/// Spectral subtraction in linear power, then every bin more than
/// `floor_db` below the enhanced maximum is zeroed.
pub fn enhance(frame: &Spectrum2D, background: &Spectrum2D, floor_db: f64) -> Spectrum2D {
    let mut out = Spectrum2D::zeros(frame.timestamp_ns);
    for ((o, f), b) in out
        .values_mut()
        .iter_mut()
        .zip(frame.values())
        .zip(background.values())
    {
        *o = (f - b).max(0.0);
    }
    let peak = out.max();
    if peak > 0.0 && floor_db.is_finite() {
        let cut = peak * 10f64.powf(-floor_db / 10.0);
        for v in out.values_mut() {
            if *v < cut {
                *v = 0.0;
            }
        }
    }
    out
}

/// Enhance every frame of a track against a trailing-median background.
/// Frames earlier than the first full window use the first full window.
pub fn enhance_track(
    track: &SpectrumTrack,
    static_window: usize,
    floor_db: f64,
) -> Result<SpectrumTrack> {
    trailing(track, static_window, "static window")?;
    let first = static_estimate(&track.slice(0..static_window), static_window)?;
    let mut out = SpectrumTrack::new(track.frame_rate);
    for (i, f) in track.frames.iter().enumerate() {
        let e = if i + 1 < static_window {
            enhance(f, &first, floor_db)
        } else {
            let bg = static_estimate(&track.slice(i + 1 - static_window..i + 1), static_window)?;
            enhance(f, &bg, floor_db)
        };
        out.push(e)?;
    }
    Ok(out)
}

/// Per-bin maximum over the `k` most recent frames.
pub fn aggregate(track: &SpectrumTrack, k: usize) -> Result<Spectrum2D> {
    let frames = trailing(track, k, "aggregation window")?;
    let mut out = Spectrum2D::zeros(frames[frames.len() - 1].timestamp_ns);
    for f in frames {
        for (o, v) in out.values_mut().iter_mut().zip(f.values()) {
            *o = o.max(*v);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(t: u64, f: impl FnMut(usize, usize) -> f64) -> Spectrum2D {
        Spectrum2D::from_fn(t, f).unwrap()
    }

    fn pattern(t: u64) -> Spectrum2D {
        frame(t, |a, e| ((a * 31 + e * 17) % 97) as f64)
    }

    #[test]
    fn identical_frames_static_is_frame() {
        let t = SpectrumTrack::from_frames(
            (0..5)
                .map(|i| {
                    let mut p = pattern(0);
                    p.timestamp_ns = i;
                    p
                })
                .collect(),
            30.0,
        )
        .unwrap();
        assert_eq!(
            static_estimate(&t, 5).unwrap().values(),
            pattern(0).values()
        );
        assert_eq!(
            static_estimate(&t, 1).unwrap().values(),
            pattern(0).values()
        );
    }

    #[test]
    fn static_needs_enough_frames() {
        let t = SpectrumTrack::from_frames(vec![pattern(0), pattern(1)], 30.0).unwrap();
        match static_estimate(&t, 90) {
            Err(Error::InsufficientFrames {
                required: 90,
                available: 2,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn median_ignores_minority_transient() {
        let frames = (0..9)
            .map(|i| {
                frame(i, |a, e| {
                    if a == 10 && e == 10 && i < 4 {
                        100.0
                    } else {
                        1.0
                    }
                })
            })
            .collect();
        let t = SpectrumTrack::from_frames(frames, 30.0).unwrap();
        assert_eq!(static_estimate(&t, 9).unwrap().get(10, 10), 1.0);
    }

    #[test]
    fn enhance_identities() {
        let x = pattern(3);
        assert_eq!(enhance(&x, &x, 20.0).max(), 0.0);
        assert_eq!(
            enhance(&x, &Spectrum2D::zeros(0), f64::INFINITY).values(),
            x.values()
        );
    }

    #[test]
    fn enhance_floor_zeroes_weak_bins() {
        let f = frame(0, |a, e| match (a, e) {
            (5, 5) => 1000.0,
            (9, 9) => 5.0,
            (12, 12) => 20.0,
            _ => 0.0,
        });
        let out = enhance(&f, &Spectrum2D::zeros(0), 20.0);
        assert_eq!(out.get(5, 5), 1000.0);
        assert_eq!(out.get(9, 9), 0.0);
        assert_eq!(out.get(12, 12), 20.0);
    }

    #[test]
    fn aggregate_is_bin_max() {
        let a = frame(0, |x, y| if x < 90 { 2.0 } else { 0.0 } + y as f64 * 0.0);
        let b = frame(1, |x, _| if x >= 90 { 3.0 } else { 0.0 });
        let t = SpectrumTrack::from_frames(vec![a.clone(), b.clone()], 30.0).unwrap();
        let g = aggregate(&t, 2).unwrap();
        assert_eq!(g.get(0, 0), 2.0);
        assert_eq!(g.get(100, 0), 3.0);
        assert_eq!(aggregate(&t, 1).unwrap().values(), b.values());
        assert!(aggregate(&t, 3).is_err());
        assert!(aggregate(&t, 0).is_err());
    }

    #[test]
    fn track_rejects_out_of_order() {
        let mut t = SpectrumTrack::new(30.0);
        t.push(pattern(5)).unwrap();
        assert!(t.push(pattern(5)).is_err());
    }
}
