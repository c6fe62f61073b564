//! Background subtraction: the empty room's median image is removed so the
//! walker stands out.

use wivi::prelude::*;
use wivi::presets;

pub fn main() -> wivi::Result<()> {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    // clean simulated streams carry no hardware offsets
    let ic = ImagingConfig {
        sanitize: false,
        ..ImagingConfig::default()
    };

    let empty = image_stream(
        &simulate(&presets::empty_room(0.5, 25.0, 3)?, &cfg, &geom)?,
        &ic,
    )?;
    let n = empty.len();
    let background = static_estimate(&SpectrumTrack::from_frames(empty, 30.0)?, n)?;

    let mut walker = Persona::new("walker", 30.0, 20.0, 1.0);
    walker.start_azimuth_deg = 60.0;
    walker.end_azimuth_deg = 60.0;
    walker.walk_speed_mps = 0.0;
    walker.duration_s = 0.2;
    let frame = &image_stream(
        &simulate(&presets::room_with_persona(&walker)?, &cfg, &geom)?,
        &ic,
    )?[0];
    let out = enhance(frame, &background, 20.0);

    for (name, (az, el)) in [("LoS", (89, 89)), ("desk", (139, 119))] {
        println!(
            "{name:>5}: before {:8.3}  after {:8.3}",
            frame.get(az, el),
            out.get(az, el)
        );
    }
    // the torso peak lands within a bin or two of its nominal angle
    let mut torso = (59, 94);
    for a in 56..=62 {
        for e in 90..=98 {
            if frame.get(a, e) > frame.get(torso.0, torso.1) {
                torso = (a, e);
            }
        }
    }
    println!(
        "torso: before {:8.3}  after {:8.3}",
        frame.get(torso.0, torso.1),
        out.get(torso.0, torso.1)
    );
    Ok(())
}
