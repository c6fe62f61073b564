//! Array geometry, channel constants and steering-vector math for the
//! virtual MIMO-OFDM array.
//!
//! A virtual sensor is one `(tx, rx, subcarrier)` triple. Its response to a
//! path is the product of three independent phase terms: the receive-array
//! phase from the 2D angle of arrival, the transmit-array phase from the
//! angle of departure, and the subcarrier phase from the time of flight.
//! Virtual vectors are laid out tx-major, then rx, then subcarrier.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Number of one-degree bins on each angle axis; bin `b` is angle `b + 1`.
pub const ANGLE_BINS: usize = 180;

/// Smallest and largest admissible angle, in degrees.
pub const MIN_ANGLE_DEG: f64 = 1.0;
pub const MAX_ANGLE_DEG: f64 = 180.0;

/// Angle in degrees of a grid bin.
#[inline]
pub fn bin_to_deg(bin: usize) -> f64 {
    (bin + 1) as f64
}

/// Nearest grid bin of an angle in degrees, clamped to the grid.
#[inline]
pub fn deg_to_bin(deg: f64) -> usize {
    (deg.round().clamp(MIN_ANGLE_DEG, MAX_ANGLE_DEG) as usize) - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    carrier_frequency: f64,
    subcarrier_spacing: f64,
    tx_antenna_spacing: f64,
}

impl ChannelConfig {
    pub const DEFAULT_CARRIER_HZ: f64 = 5.32e9;
    pub const DEFAULT_SUBCARRIER_SPACING_HZ: f64 = 1.25e6;

    pub fn new(
        carrier_frequency: f64,
        subcarrier_spacing: f64,
        tx_antenna_spacing: f64,
    ) -> Result<Self> {
        for (name, v) in [
            ("carrier_frequency", carrier_frequency),
            ("subcarrier_spacing", subcarrier_spacing),
            ("tx_antenna_spacing", tx_antenna_spacing),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("{name} must be > 0, got {v}")));
            }
        }
        Ok(Self {
            carrier_frequency,
            subcarrier_spacing,
            tx_antenna_spacing,
        })
    }

    /// Config with half-wavelength transmit spacing.
    pub fn with_carrier(carrier_frequency: f64, subcarrier_spacing: f64) -> Result<Self> {
        if !(carrier_frequency.is_finite() && carrier_frequency > 0.0) {
            return Err(Error::invalid(format!(
                "carrier_frequency must be > 0, got {carrier_frequency}"
            )));
        }
        Self::new(
            carrier_frequency,
            subcarrier_spacing,
            SPEED_OF_LIGHT / carrier_frequency / 2.0,
        )
    }

    pub fn carrier_frequency(&self) -> f64 {
        self.carrier_frequency
    }

    pub fn subcarrier_spacing(&self) -> f64 {
        self.subcarrier_spacing
    }

    pub fn tx_antenna_spacing(&self) -> f64 {
        self.tx_antenna_spacing
    }

    pub fn speed_of_light(&self) -> f64 {
        SPEED_OF_LIGHT
    }

    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_frequency
    }

    /// Delay after which the subcarrier phase term repeats.
    pub fn tof_period(&self) -> f64 {
        1.0 / self.subcarrier_spacing
    }
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self::with_carrier(
            Self::DEFAULT_CARRIER_HZ,
            Self::DEFAULT_SUBCARRIER_SPACING_HZ,
        )
        .expect("default channel config is valid")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArrayGeometry {
    rx_positions: Vec<[f64; 3]>,
    n_tx: usize,
    n_subcarriers: usize,
}

impl ArrayGeometry {
    pub fn new(rx_positions: Vec<[f64; 3]>, n_tx: usize, n_subcarriers: usize) -> Result<Self> {
        if rx_positions.is_empty() {
            return Err(Error::invalid("at least one rx antenna is required"));
        }
        if let Some((k, p)) = rx_positions.iter().enumerate().find(|(_, p)| p[1] != 0.0) {
            return Err(Error::invalid(format!(
                "rx antenna {k} has y = {}; all antennas must lie in the y = 0 plane",
                p[1]
            )));
        }
        if rx_positions.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::invalid("rx positions must be finite"));
        }
        if n_tx == 0 {
            return Err(Error::invalid("n_tx must be >= 1"));
        }
        if n_subcarriers == 0 {
            return Err(Error::invalid("n_subcarriers must be >= 1"));
        }
        Ok(Self {
            rx_positions,
            n_tx,
            n_subcarriers,
        })
    }

    /// L-shaped receive array: `per_arm` antennas along +X and `per_arm`
    /// along +Z sharing the corner element at the origin.
    pub fn l_shaped(
        per_arm: usize,
        spacing: f64,
        n_tx: usize,
        n_subcarriers: usize,
    ) -> Result<Self> {
        if per_arm == 0 {
            return Err(Error::invalid("per_arm must be >= 1"));
        }
        let mut pos = Vec::with_capacity(2 * per_arm - 1);
        pos.push([0.0, 0.0, 0.0]);
        for i in 1..per_arm {
            pos.push([i as f64 * spacing, 0.0, 0.0]);
        }
        for i in 1..per_arm {
            pos.push([0.0, 0.0, i as f64 * spacing]);
        }
        Self::new(pos, n_tx, n_subcarriers)
    }

    /// Nine-element L array at half-wavelength spacing, 3 tx, 30 subcarriers.
    pub fn default_for(cfg: &ChannelConfig) -> Self {
        Self::l_shaped(5, cfg.wavelength() / 2.0, 3, 30).expect("default geometry is valid")
    }

    pub fn rx_positions(&self) -> &[[f64; 3]] {
        &self.rx_positions
    }

    pub fn n_rx(&self) -> usize {
        self.rx_positions.len()
    }

    pub fn n_tx(&self) -> usize {
        self.n_tx
    }

    pub fn n_subcarriers(&self) -> usize {
        self.n_subcarriers
    }

    /// Length of the virtual steering vector.
    pub fn dim(&self) -> usize {
        self.n_rx() * self.n_tx * self.n_subcarriers
    }

    /// Flat index of `(tx, rx, subcarrier)` in a virtual vector.
    #[inline]
    pub fn virtual_index(&self, tx: usize, rx: usize, sub: usize) -> usize {
        (tx * self.n_rx() + rx) * self.n_subcarriers + sub
    }

    /// Same receive array with a different tx/subcarrier count.
    pub fn with_dims(&self, n_tx: usize, n_subcarriers: usize) -> Result<Self> {
        Self::new(self.rx_positions.clone(), n_tx, n_subcarriers)
    }
}

/// One path hypothesis: azimuth, elevation and AoD in degrees, ToF in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathHypothesis {
    pub azimuth: f64,
    pub elevation: f64,
    pub tof: f64,
    pub aod: f64,
}

impl PathHypothesis {
    pub fn new(azimuth: f64, elevation: f64, tof: f64, aod: f64) -> Result<Self> {
        let h = Self {
            azimuth,
            elevation,
            tof,
            aod,
        };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("azimuth", self.azimuth),
            ("elevation", self.elevation),
            ("aod", self.aod),
        ] {
            if !(MIN_ANGLE_DEG..=MAX_ANGLE_DEG).contains(&v) {
                return Err(Error::invalid(format!(
                    "{name} must be in [1, 180] degrees, got {v}"
                )));
            }
        }
        if !(self.tof.is_finite() && self.tof >= 0.0) {
            return Err(Error::invalid(format!(
                "tof must be >= 0, got {}",
                self.tof
            )));
        }
        Ok(())
    }
}

/// Unit vector towards an incident signal at (azimuth, elevation) degrees.
pub fn direction(azimuth_deg: f64, elevation_deg: f64) -> [f64; 3] {
    let (phi, theta) = (azimuth_deg.to_radians(), elevation_deg.to_radians());
    [
        phi.cos() * theta.sin(),
        phi.sin() * theta.sin(),
        theta.cos(),
    ]
}

#[inline]
fn unit_phasor(phase: f64) -> Complex64 {
    Complex64::from_polar(1.0, phase)
}

/// Receive-array phase of antenna `k` for a path's 2D angle of arrival.
pub fn rx_phase(
    cfg: &ChannelConfig,
    geom: &ArrayGeometry,
    k: usize,
    hyp: &PathHypothesis,
) -> Result<Complex64> {
    let l = geom.rx_positions.get(k).ok_or(Error::IndexOutOfRange {
        what: "rx antenna",
        index: k,
        len: geom.n_rx(),
    })?;
    Ok(rx_phase_at(cfg, l, hyp.azimuth, hyp.elevation))
}

fn rx_phase_at(cfg: &ChannelConfig, l: &[f64; 3], azimuth: f64, elevation: f64) -> Complex64 {
    let d = direction(azimuth, elevation);
    let path = d[0] * l[0] + d[1] * l[1] + d[2] * l[2];
    unit_phasor(-2.0 * PI * cfg.carrier_frequency * path / SPEED_OF_LIGHT)
}

/// Transmit-array phase `Γ(ω)^m` of transmit antenna `m`.
pub fn tx_phase(cfg: &ChannelConfig, m: usize, aod_deg: f64) -> Complex64 {
    let step =
        -2.0 * PI * cfg.carrier_frequency * cfg.tx_antenna_spacing * aod_deg.to_radians().sin()
            / SPEED_OF_LIGHT;
    unit_phasor(step * m as f64)
}

/// Subcarrier phase `Ω(τ)^n = exp(-j 2π f_δ τ n)`.
pub fn subcarrier_phase(cfg: &ChannelConfig, n: usize, tof: f64) -> Complex64 {
    unit_phasor(-2.0 * PI * cfg.subcarrier_spacing * tof * n as f64)
}

/// Per-antenna receive factor, length `n_rx`.
pub fn rx_factor(
    cfg: &ChannelConfig,
    geom: &ArrayGeometry,
    azimuth: f64,
    elevation: f64,
) -> Vec<Complex64> {
    geom.rx_positions
        .iter()
        .map(|l| rx_phase_at(cfg, l, azimuth, elevation))
        .collect()
}

/// Per-transmitter factor, length `n_tx`.
pub fn tx_factor(cfg: &ChannelConfig, n_tx: usize, aod_deg: f64) -> Vec<Complex64> {
    (0..n_tx).map(|m| tx_phase(cfg, m, aod_deg)).collect()
}

/// Per-subcarrier factor, length `n_subcarriers`.
pub fn subcarrier_factor(cfg: &ChannelConfig, n_subcarriers: usize, tof: f64) -> Vec<Complex64> {
    (0..n_subcarriers)
        .map(|n| subcarrier_phase(cfg, n, tof))
        .collect()
}

/// Response of the virtual array to one path, laid out tx-major, then rx,
/// then subcarrier.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector {
    values: Vec<Complex64>,
}

impl SteeringVector {
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.values
    }
}

pub fn virtual_steering_vector(
    cfg: &ChannelConfig,
    geom: &ArrayGeometry,
    hyp: &PathHypothesis,
) -> SteeringVector {
    let tx = tx_factor(cfg, geom.n_tx, hyp.aod);
    let rx = rx_factor(cfg, geom, hyp.azimuth, hyp.elevation);
    let sub = subcarrier_factor(cfg, geom.n_subcarriers, hyp.tof);
    SteeringVector {
        values: kron3(&tx, &rx, &sub),
    }
}

/// `a ⊗ b ⊗ c` with `a` outermost.
pub(crate) fn kron3(a: &[Complex64], b: &[Complex64], c: &[Complex64]) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(a.len() * b.len() * c.len());
    for &x in a {
        for &y in b {
            let xy = x * y;
            out.extend(c.iter().map(|&z| xy * z));
        }
    }
    out
}
