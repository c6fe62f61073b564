//! Removal of per-packet STO/PDD phase offsets.
//!
//! Sampling time offset and packet detection delay add a phase that is
//! linear in the subcarrier index and identical on every radio chain of a
//! NIC. Per packet we unwrap each antenna pair's phase along the subcarrier
//! axis, fit a single line by least squares pooled over every pair, and
//! rotate the whole tensor by the negated line. Only phases change.
//!
//! Before unwrapping, the packet is de-rotated by its mean phase increment
//! between adjacent subcarriers. An injected slope moves that estimate by
//! exactly the injected amount, so the residual being unwrapped is the same
//! with or without offsets. Without this step a deep fade whose phase step
//! sits near ±π unwraps onto a different branch once a slope is added.
//!
//! The fitted slope also absorbs the common true-ToF slope, so ToF after
//! sanitization is relative to the dominant path.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sim::{apply_phase_offset, CsiFrame, CsiStream};

const TWO_PI: f64 = 2.0 * PI;

/// Sequential unwrap: any jump larger than π is folded by a multiple of 2π.
pub fn unwrap_phase(phases: &mut [f64]) {
    for i in 1..phases.len() {
        let d = phases[i] - phases[i - 1];
        if d.abs() > PI {
            phases[i] -= TWO_PI * (d / TWO_PI).round();
        }
    }
}

/// Common `(offset, slope)` of a frame's unwrapped phases.
pub fn fit_phase_line(frame: &CsiFrame) -> Result<(f64, f64)> {
    let [n_rx, n_tx, n_su] = frame.dims();
    if n_su < 2 {
        return Err(Error::invalid(format!(
            "phase sanitization needs at least 2 subcarriers, have {n_su}"
        )));
    }
    let n_pairs = n_rx * n_tx;
    let coarse = frame
        .tensor()
        .chunks(n_su)
        .flat_map(|c| c.windows(2).map(|w| w[0].conj() * w[1]))
        .sum::<Complex64>()
        .arg();
    let mut reference = None;
    let mut sum_y = 0.0;
    let mut sum_ny = 0.0;
    let mut buf = vec![0.0; n_su];
    for chunk in frame.tensor().chunks(n_su) {
        for (n, (b, v)) in buf.iter_mut().zip(chunk).enumerate() {
            *b = (v * Complex64::from_polar(1.0, -coarse * n as f64)).arg();
        }
        unwrap_phase(&mut buf);
        // Anchor each pair's starting phase within π of the first pair so
        // that a common offset moves every pair identically.
        let r = *reference.get_or_insert(buf[0]);
        let shift = TWO_PI * ((r - buf[0]) / TWO_PI).round();
        for (n, &y) in buf.iter().enumerate() {
            let y = y + shift;
            sum_y += y;
            sum_ny += n as f64 * y;
        }
    }
    let count = (n_pairs * n_su) as f64;
    let n_mean = (n_su - 1) as f64 / 2.0;
    // Σ(n - n̄)² over all points; every pair contributes the same index set.
    let s_nn = n_pairs as f64 * (n_su as f64) * ((n_su * n_su) as f64 - 1.0) / 12.0;
    let y_mean = sum_y / count;
    let s_ny = sum_ny - n_mean * sum_y;
    let slope = s_ny / s_nn;
    Ok((y_mean - slope * n_mean, coarse + slope))
}

pub fn sanitize_frame(frame: &CsiFrame) -> Result<CsiFrame> {
    let (offset, slope) = fit_phase_line(frame)?;
    let mut out = frame.clone();
    apply_phase_offset(&mut out, offset, slope);
    Ok(out)
}

pub fn sanitize(stream: &CsiStream) -> Result<CsiStream> {
    if stream.geometry.n_subcarriers() < 2 {
        return Err(Error::invalid(format!(
            "phase sanitization needs at least 2 subcarriers, have {}",
            stream.geometry.n_subcarriers()
        )));
    }
    stream.map_frames(|_, f| sanitize_frame(f))
}

/// Largest per-element phase difference, wrapped to [0, π].
pub fn max_phase_difference(a: &CsiFrame, b: &CsiFrame) -> f64 {
    a.tensor()
        .iter()
        .zip(b.tensor())
        .map(|(x, y)| (x * y.conj()).arg().abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::array::{ArrayGeometry, ChannelConfig, PathHypothesis};
    use crate::sim::{inject_phase_offsets, simulate, PathTag, Scene, ScenePath};
    use num_complex::Complex64;

    fn phasor(phase: f64) -> Complex64 {
        Complex64::from_polar(1.0, phase)
    }

    fn stream(paths: Vec<ScenePath>, snr: f64) -> CsiStream {
        let c = ChannelConfig::default();
        let g = ArrayGeometry::default_for(&c);
        simulate(&Scene::new(paths, snr, 1000.0, 0.02, 4), &c, &g).unwrap()
    }

    fn path(az: f64, el: f64, tof_ns: f64, aod: f64, db: f64) -> ScenePath {
        ScenePath::with_db(
            PathHypothesis::new(az, el, tof_ns * 1e-9, aod).unwrap(),
            db,
            PathTag::Static,
        )
        .unwrap()
        .jitter(PI)
    }

    #[test]
    fn unwrap_removes_jumps() {
        let truth: Vec<f64> = (0..20).map(|i| 0.9 * i as f64).collect();
        let mut wrapped: Vec<f64> = truth.iter().map(|p| phasor(*p).arg()).collect();
        unwrap_phase(&mut wrapped);
        for (a, b) in wrapped.iter().zip(&truth) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn nothing_to_remove_is_identity() {
        let h = PathHypothesis::new(90.0, 90.0, 0.0, 180.0).unwrap();
        let p = ScenePath::new(h, Complex64::new(1.0, 0.0), PathTag::Los).unwrap();
        let s = stream(vec![p], f64::INFINITY);
        let out = sanitize(&s).unwrap();
        for (a, b) in s.frames().iter().zip(out.frames()) {
            for (x, y) in a.tensor().iter().zip(b.tensor()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn injected_offsets_are_removed() {
        let s = stream(
            vec![
                path(60.0, 70.0, 15.0, 60.0, 0.0),
                path(120.0, 110.0, 45.0, 110.0, -6.0),
            ],
            25.0,
        );
        let clean = sanitize(&s).unwrap();
        let dirty = sanitize(&inject_phase_offsets(&s, 77).unwrap()).unwrap();
        for (a, b) in clean.frames().iter().zip(dirty.frames()) {
            assert!(max_phase_difference(a, b) < 1e-6);
        }
    }

    #[test]
    fn magnitudes_unchanged_and_idempotent() {
        let s = inject_phase_offsets(&stream(vec![path(40.0, 50.0, 30.0, 80.0, 0.0)], 15.0), 3)
            .unwrap();
        let once = sanitize(&s).unwrap();
        let twice = sanitize(&once).unwrap();
        for ((a, b), c) in s.frames().iter().zip(once.frames()).zip(twice.frames()) {
            for (x, y) in a.tensor().iter().zip(b.tensor()) {
                assert!((x.norm() - y.norm()).abs() < 1e-12);
            }
            for (y, z) in b.tensor().iter().zip(c.tensor()) {
                assert!((y - z).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn single_subcarrier_is_rejected() {
        let s = stream(vec![path(40.0, 50.0, 30.0, 80.0, 0.0)], 15.0)
            .select(3, 1)
            .unwrap();
        assert!(matches!(sanitize(&s), Err(Error::InvalidParameter(_))));
    }
}
