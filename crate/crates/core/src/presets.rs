//! Ready-made scenes used by the examples, tests and CLI.

use std::f64::consts::PI;

use crate::array::PathHypothesis;
use crate::error::Result;
use crate::sim::{PathTag, Persona, Scene, ScenePath};

/// Ground truth of one preset path: (azimuth°, elevation°, ToF ns, AoD°, gain dB).
pub type PathSpec = (f64, f64, f64, f64, f64);

/// LoS plus five weaker static reflectors at distinct angles, ToFs and
/// AoDs. The LoS dominates, as it does indoors.
pub const RESOLUTION_PATHS: [PathSpec; 6] = [
    (90.0, 90.0, 5.0, 80.0, 0.0),
    (45.0, 60.0, 15.0, 40.0, -6.0),
    (135.0, 65.0, 25.0, 120.0, -7.0),
    (70.0, 125.0, 35.0, 60.0, -8.0),
    (120.0, 130.0, 45.0, 140.0, -9.0),
    (30.0, 100.0, 55.0, 100.0, -10.0),
];

pub fn path(spec: PathSpec, tag: PathTag) -> Result<ScenePath> {
    let (az, el, tof_ns, aod, db) = spec;
    Ok(ScenePath::with_db(PathHypothesis::new(az, el, tof_ns * 1e-9, aod)?, db, tag)?.jitter(PI))
}

/// LoS and five main reflectors, 100 packets at 1000 packets/s.
pub fn resolution_scene(seed: u64) -> Result<Scene> {
    let paths = RESOLUTION_PATHS
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            path(
                s,
                if i == 0 {
                    PathTag::Los
                } else {
                    PathTag::Static
                },
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Scene::new(paths, 30.0, 1000.0, 0.1, seed))
}

/// Static room: a strong LoS and one desk-like reflector.
pub const ROOM_PATHS: [PathSpec; 2] = [
    (90.0, 90.0, 0.0, 80.0, 0.0),
    (140.0, 120.0, 10.0, 120.0, -3.0),
];

pub fn room_paths() -> Result<Vec<ScenePath>> {
    ROOM_PATHS
        .iter()
        .enumerate()
        .map(|(i, &s)| {
            path(
                s,
                if i == 0 {
                    PathTag::Los
                } else {
                    PathTag::Static
                },
            )
        })
        .collect()
}

/// The room with one walker; timing and noise come from the persona.
pub fn room_with_persona(persona: &Persona) -> Result<Scene> {
    let mut paths = room_paths()?;
    paths.extend(persona.body_paths(persona.duration_s)?);
    let scene = Scene::new(
        paths,
        persona.snr_db,
        persona.packet_rate_hz,
        persona.duration_s,
        persona.seed,
    );
    scene.validate()?;
    Ok(scene)
}

/// The empty room recorded for `duration` seconds.
pub fn empty_room(duration: f64, snr_db: f64, seed: u64) -> Result<Scene> {
    let scene = Scene::new(room_paths()?, snr_db, 1000.0, duration, seed);
    scene.validate()?;
    Ok(scene)
}
