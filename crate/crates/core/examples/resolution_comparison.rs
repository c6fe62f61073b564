//! LoS and five reflectors imaged with full diversity (100 packets, 3 tx,
//! 30 subcarriers) and with a single packet, transmitter and subcarrier.

use wivi::prelude::*;
use wivi::presets::{self, RESOLUTION_PATHS};

fn resolved(img: &Spectrum2D) -> usize {
    let peaks = detect_peaks(img, 6.0, 10);
    RESOLUTION_PATHS
        .iter()
        .filter(|&&(az, el, ..)| {
            peaks
                .iter()
                .any(|p| (p.azimuth - az).abs() <= 2.0 && (p.elevation - el).abs() <= 2.0)
        })
        .count()
}

pub fn main() -> wivi::Result<()> {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    let stream = simulate(&presets::resolution_scene(1)?, &cfg, &geom)?;

    let full = &image_stream(&stream, &ImagingConfig::default())?[0];
    let weak_cfg = ImagingConfig {
        degraded: true,
        ..ImagingConfig::default()
    };
    let weak = &image_stream(&stream, &weak_cfg)?[0];

    println!(
        "ground truth (azimuth, elevation): {:?}",
        RESOLUTION_PATHS.map(|p| (p.0, p.1))
    );
    println!("full diversity: {}/6 paths resolved", resolved(full));
    println!(
        "1 packet, 1 tx, 1 subcarrier: {}/6 paths resolved",
        resolved(weak)
    );
    Ok(())
}
