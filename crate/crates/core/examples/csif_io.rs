//! CSIF round trip: header layout, payload size and f32 precision.

use wivi::io::{decode_csif, decode_header, write_csif_to, HEADER_LEN};
use wivi::prelude::*;

pub fn main() -> wivi::Result<()> {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    let path = ScenePath::with_db(
        PathHypothesis::new(100.0, 80.0, 15e-9, 70.0)?,
        0.0,
        PathTag::Los,
    )?;
    let stream = simulate(&Scene::new(vec![path], 20.0, 1000.0, 0.01, 4), &cfg, &geom)?;

    let mut bytes = Vec::new();
    write_csif_to(&stream, &mut bytes)?;
    let h = decode_header(&bytes)?;
    println!("{h:?}");
    println!(
        "{} bytes = {HEADER_LEN} header + {} packets × {} bytes",
        bytes.len(),
        h.packet_count,
        h.packet_len()
    );

    let back = decode_csif(&bytes, Some(&geom))?;
    let err = stream
        .frames()
        .iter()
        .zip(back.frames())
        .flat_map(|(a, b)| {
            a.tensor()
                .iter()
                .zip(b.tensor())
                .map(|(x, y)| (x - y).norm())
        })
        .fold(0.0, f64::max);
    println!("max round-trip error {err:.1e} (f32 storage)");

    match decode_csif(&bytes[..bytes.len() - 100], None) {
        Err(e) => println!("truncated file: {e}"),
        Ok(_) => println!("truncated file decoded?"),
    }
    Ok(())
}
