//! One MUSIC image of a single reflector, saved as PGM and CSV.

use wivi::io::save_spectrum;
use wivi::prelude::*;

pub fn main() -> wivi::Result<()> {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    let path = ScenePath::with_db(
        PathHypothesis::new(60.0, 45.0, 20e-9, 60.0)?,
        0.0,
        PathTag::Los,
    )?;
    let stream = simulate(&Scene::new(vec![path], 20.0, 1000.0, 0.1, 1), &cfg, &geom)?;

    let img = &image_stream(&stream, &ImagingConfig::default())?[0];
    let (az, el) = img.argmax();
    println!("argmax at azimuth {}°, elevation {}°", az + 1, el + 1);
    for p in detect_peaks(img, 6.0, 5) {
        println!("peak ({}, {}) power {:.2}", p.azimuth, p.elevation, p.power);
    }
    let dir = std::env::temp_dir();
    save_spectrum(img, dir.join("single_path.pgm"))?;
    save_spectrum(img, dir.join("single_path.csv"))?;
    println!("wrote {}/single_path.{{pgm,csv}}", dir.display());
    Ok(())
}
