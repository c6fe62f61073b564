//! Specular body parts light up in turn; the per-bin maximum over 15 frames
//! shows all of them.

use std::f64::consts::PI;

use wivi::prelude::*;
use wivi::presets;
use wivi::sim::Visibility;

pub fn main() -> wivi::Result<()> {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    let ic = ImagingConfig {
        window_len: 100,
        stride: 100,
        sanitize: false,
        ..ImagingConfig::default()
    };
    let part = |el: f64, tof_ns: f64, phase: f64| -> wivi::Result<ScenePath> {
        Ok(ScenePath::with_db(
            PathHypothesis::new(60.0, el, tof_ns * 1e-9, 60.0)?,
            -3.0,
            PathTag::Human,
        )?
        .jitter(PI)
        .visibility(Visibility::Periodic {
            period: 0.2,
            duty: 0.5,
            phase,
        }))
    };
    let mut paths = presets::room_paths()?;
    paths.push(part(70.0, 20.0, 0.0025)?);
    paths.push(part(125.0, 25.0, 0.5025)?);
    let frames = image_stream(
        &simulate(&Scene::new(paths, 25.0, 1000.0, 1.5, 5), &cfg, &geom)?,
        &ic,
    )?;

    let empty = image_stream(
        &simulate(&presets::empty_room(0.5, 25.0, 3)?, &cfg, &geom)?,
        &ic,
    )?;
    let n = empty.len();
    let bg = static_estimate(&SpectrumTrack::from_frames(empty, 10.0)?, n)?;
    let enhanced: Vec<_> = frames.iter().map(|f| enhance(f, &bg, 20.0)).collect();

    for (i, f) in enhanced.iter().enumerate().take(4) {
        println!(
            "frame {i}: upper body {:7.3}  legs {:7.3}",
            f.max_near(59, 69, 2),
            f.max_near(59, 124, 2)
        );
    }
    let agg = aggregate(&SpectrumTrack::from_frames(enhanced, 10.0)?, 15)?;
    println!(
        "aggregate: upper body {:7.3}  legs {:7.3}",
        agg.max_near(59, 69, 2),
        agg.max_near(59, 124, 2)
    );
    Ok(())
}
