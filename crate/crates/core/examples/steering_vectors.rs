//! Per-antenna phase factors and the 810-element virtual steering vector.

use wivi::array::{rx_phase, subcarrier_phase, tx_phase};
use wivi::prelude::*;

pub fn main() -> wivi::Result<()> {
    let cfg = ChannelConfig::default();
    let geom = ArrayGeometry::default_for(&cfg);
    let h = PathHypothesis::new(60.0, 45.0, 20e-9, 60.0)?;

    println!(
        "wavelength {:.2} cm, ToF period {:.0} ns",
        cfg.wavelength() * 100.0,
        cfg.tof_period() * 1e9
    );
    for k in [0, 4, 8] {
        println!("rx {k}: {:.3}", rx_phase(&cfg, &geom, k, &h)?);
    }
    println!("tx 1 at 90°: {:.3}", tx_phase(&cfg, 1, 90.0));
    println!(
        "subcarrier 1 at 400 ns: {:.3}",
        subcarrier_phase(&cfg, 1, 400e-9)
    );

    let a = virtual_steering_vector(&cfg, &geom, &h);
    let worst = a
        .values()
        .iter()
        .map(|v| (v.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    println!(
        "{} elements ({} rx × {} tx × {} subcarriers), max ||a_i| - 1| = {worst:.1e}",
        a.len(),
        geom.n_rx(),
        geom.n_tx(),
        geom.n_subcarriers()
    );
    Ok(())
}
