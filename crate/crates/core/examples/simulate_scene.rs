//! Simulate a scene, inject hardware phase offsets and write a CSIF file.
//!
//! cargo run --example simulate_scene -- [scene.toml] [out.csif]

use wivi::io::{load_scene, write_csif};
use wivi::prelude::*;

fn main() -> wivi::Result<()> {
    let mut args = std::env::args().skip(1);
    let scene = args.next().unwrap_or_else(|| {
        concat!(env!("CARGO_MANIFEST_DIR"), "/examples/scenes/room.toml").into()
    });
    let out = args
        .next()
        .unwrap_or_else(|| std::env::temp_dir().join("room.csif").display().to_string());

    let setup = load_scene(&scene)?;
    let clean = simulate(&setup.scene, &setup.config, &setup.geometry)?;
    let hit = inject_phase_offsets(&clean, setup.scene.rng_seed + 1)?;
    write_csif(&hit, &out)?;

    let f = &hit.frames()[0];
    println!(
        "{} paths, {} packets of {:?} (rx, tx, subcarrier)",
        setup.scene.paths.len(),
        hit.len(),
        f.dims()
    );
    println!(
        "first packet, rx 0 tx 0: |h| = {:.3}, phase {:.3} rad",
        f.tensor()[0].norm(),
        f.tensor()[0].arg()
    );
    println!("wrote {out}");
    Ok(())
}
