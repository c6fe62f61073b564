//! Shared fixtures and independent reference implementations.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use wivi::music::{GridSpec, ImagingConfig};
use wivi::prelude::*;
use wivi::presets;
use wivi::vision::enhance;

pub const C: f64 = 299_792_458.0;

pub fn setup() -> (ChannelConfig, ArrayGeometry) {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    (cfg, geom)
}

pub fn hyp(az: f64, el: f64, tof_ns: f64, aod: f64) -> PathHypothesis {
    PathHypothesis::new(az, el, tof_ns * 1e-9, aod).unwrap()
}

pub fn single_path_stream(h: PathHypothesis, snr_db: f64, packets: usize, seed: u64) -> CsiStream {
    let (cfg, geom) = setup();
    let p = ScenePath::with_db(h, 0.0, PathTag::Los).unwrap();
    let scene = Scene::new(vec![p], snr_db, 1000.0, packets as f64 / 1000.0, seed);
    simulate(&scene, &cfg, &geom).unwrap()
}

/// Steering vector written out from the phase model with a plain triple
/// loop, without going through the library's factor functions.
pub fn brute_force_steering(
    cfg: &ChannelConfig,
    geom: &ArrayGeometry,
    h: &PathHypothesis,
) -> Vec<Complex64> {
    let (phi, theta, omega) = (
        h.azimuth.to_radians(),
        h.elevation.to_radians(),
        h.aod.to_radians(),
    );
    let d = [
        phi.cos() * theta.sin(),
        phi.sin() * theta.sin(),
        theta.cos(),
    ];
    let f = cfg.carrier_frequency();
    let mut out = Vec::new();
    for m in 0..geom.n_tx() {
        for l in geom.rx_positions() {
            for n in 0..geom.n_subcarriers() {
                let path = d[0] * l[0] + d[1] * l[1] + d[2] * l[2];
                let phase = -2.0 * PI * f * path / C
                    - 2.0 * PI * f * cfg.tx_antenna_spacing() * omega.sin() * m as f64 / C
                    - 2.0 * PI * cfg.subcarrier_spacing() * h.tof * n as f64;
                out.push(Complex64::from_polar(1.0, phase));
            }
        }
    }
    out
}

/// Chebyshev distance in bins between a spectrum bin and a true angle pair.
pub fn bin_error(bins: (usize, usize), az: f64, el: f64) -> f64 {
    let da = (bins.0 as f64 + 1.0 - az).abs();
    let de = (bins.1 as f64 + 1.0 - el).abs();
    da.max(de)
}

/// Clean simulated streams carry no hardware offsets, so the human-centric
/// stages are exercised without sanitization.
pub fn clean_imaging() -> ImagingConfig {
    ImagingConfig {
        sanitize: false,
        ..ImagingConfig::default()
    }
}

/// Small ToF/AoD grid around where the synthetic walkers sit; keeps
/// multi-second tracks affordable.
pub fn harness_imaging() -> ImagingConfig {
    ImagingConfig {
        sanitize: false,
        grids: GridSpec::new(vec![15e-9, 20e-9, 25e-9], vec![40.0, 60.0, 80.0]).unwrap(),
        ..ImagingConfig::default()
    }
}

pub fn track_of(stream: &CsiStream, ic: &ImagingConfig) -> SpectrumTrack {
    let rate = 1000.0 / ic.stride as f64;
    SpectrumTrack::from_frames(image_stream(stream, ic).unwrap(), rate).unwrap()
}

/// Background image of the empty preset room.
pub fn empty_room_background(ic: &ImagingConfig, seed: u64) -> Spectrum2D {
    let (cfg, geom) = setup();
    let stream = simulate(&presets::empty_room(0.5, 25.0, seed).unwrap(), &cfg, &geom).unwrap();
    let t = track_of(&stream, ic);
    static_estimate(&t, t.len()).unwrap()
}

pub fn enhanced_track(
    track: &SpectrumTrack,
    background: &Spectrum2D,
    floor_db: f64,
) -> SpectrumTrack {
    SpectrumTrack::from_frames(
        track
            .frames()
            .iter()
            .map(|f| enhance(f, background, floor_db))
            .collect(),
        track.frame_rate,
    )
    .unwrap()
}

/// A walker that stays at azimuth 60° and ToF 20 ns (on the harness grid).
pub fn stationary_persona(
    name: &str,
    el_span: f64,
    az_span: f64,
    gait: f64,
    center_el: f64,
    seed: u64,
) -> Persona {
    let mut p = Persona::new(name, el_span, az_span, gait);
    p.start_azimuth_deg = 60.0;
    p.end_azimuth_deg = 60.0;
    p.walk_speed_mps = 0.0;
    p.center_elevation_deg = center_el;
    p.gain_db = -3.0;
    p.duration_s = 2.0;
    p.seed = seed;
    p
}

pub fn persona_track(p: &Persona, background: &Spectrum2D) -> SpectrumTrack {
    let (cfg, geom) = setup();
    let ic = harness_imaging();
    let stream = simulate(&presets::room_with_persona(p).unwrap(), &cfg, &geom).unwrap();
    enhanced_track(&track_of(&stream, &ic), background, 20.0)
}
