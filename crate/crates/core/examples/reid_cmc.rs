//! Synthetic re-identification: gallery and probe recordings of a few
//! walkers, ranked by feature distance and summarized as a CMC curve.

use std::collections::HashMap;

use wivi::prelude::*;
use wivi::presets;

fn track(p: &Persona, bg: &Spectrum2D, ic: &ImagingConfig) -> wivi::Result<SpectrumTrack> {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    let frames = image_stream(&simulate(&presets::room_with_persona(p)?, &cfg, &geom)?, ic)?;
    let enhanced = frames.iter().map(|f| enhance(f, bg, 20.0)).collect();
    SpectrumTrack::from_frames(enhanced, 1000.0 / ic.stride as f64)
}

pub fn main() -> wivi::Result<()> {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    let ic = ImagingConfig {
        sanitize: false,
        grids: GridSpec::new(vec![15e-9, 20e-9, 25e-9], vec![40.0, 60.0, 80.0])?,
        ..ImagingConfig::default()
    };
    let empty = image_stream(
        &simulate(&presets::empty_room(0.5, 25.0, 3)?, &cfg, &geom)?,
        &ic,
    )?;
    let n = empty.len();
    let bg = static_estimate(&SpectrumTrack::from_frames(empty, 30.0)?, n)?;

    let shapes = [
        ("ana", 20.0, 10.0, 0.7),
        ("ben", 40.0, 30.0, 0.9),
        ("cleo", 55.0, 15.0, 1.2),
        ("dev", 30.0, 40.0, 1.0),
    ];
    let record = |seed: u64| -> wivi::Result<Vec<(String, FeatureVector)>> {
        shapes
            .iter()
            .enumerate()
            .map(|(i, &(name, el, az, gait))| {
                let mut p = Persona::new(name, el, az, gait);
                p.start_azimuth_deg = 60.0;
                p.end_azimuth_deg = 60.0;
                p.walk_speed_mps = 0.0;
                p.gain_db = -3.0;
                p.duration_s = 2.0;
                p.seed = seed + i as u64;
                Ok((name.to_string(), extract_features(&track(&p, &bg, &ic)?)?))
            })
            .collect()
    };
    let gallery = record(100)?;
    let probes = record(200)?;
    for (id, f) in &gallery {
        println!(
            "{id:>5}: {:?}",
            f.to_array().map(|v| (v * 100.0).round() / 100.0)
        );
    }

    let results = probes
        .iter()
        .map(|(id, f)| rank(id, f, &gallery))
        .collect::<wivi::Result<Vec<_>>>()?;
    let truth: HashMap<_, _> = probes
        .iter()
        .map(|(id, _)| (id.clone(), id.clone()))
        .collect();
    let curve = cmc(&results, &truth)?;
    curve.write_csv(std::io::stdout())?;
    Ok(())
}
