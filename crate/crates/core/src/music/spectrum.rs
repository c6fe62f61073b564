use num_complex::Complex64;
use rayon::prelude::*;

use super::subspace::NoiseSubspace;
use crate::array::{
    bin_to_deg, rx_factor, subcarrier_factor, tx_factor, ArrayGeometry, ChannelConfig, ANGLE_BINS,
};
use crate::error::{Error, Result};

/// ToF and AoD hypotheses scanned at every angle bin.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    tof: Vec<f64>,
    aod: Vec<f64>,
}

impl GridSpec {
    pub fn new(tof: Vec<f64>, aod: Vec<f64>) -> Result<Self> {
        for (name, g) in [("tof", &tof), ("aod", &aod)] {
            if g.is_empty() {
                return Err(Error::invalid(format!("{name} grid must be non-empty")));
            }
            if g.windows(2).any(|w| !(w[1] > w[0])) {
                return Err(Error::invalid(format!(
                    "{name} grid must be strictly increasing"
                )));
            }
            if g.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid(format!("{name} grid must be finite")));
            }
        }
        Ok(Self { tof, aod })
    }

    /// `count` points starting at `start` with spacing `step`.
    pub fn linear(start: f64, step: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| start + step * i as f64).collect()
    }

    pub fn tof(&self) -> &[f64] {
        &self.tof
    }

    pub fn aod(&self) -> &[f64] {
        &self.aod
    }

    pub fn len(&self) -> usize {
        self.tof.len() * self.aod.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Default for GridSpec {
    /// τ ∈ {0, 5, …, 75} ns, ω ∈ {20°, 40°, …, 160°}.
    fn default() -> Self {
        Self::new(Self::linear(0.0, 5e-9, 16), Self::linear(20.0, 20.0, 8)).expect("default grid")
    }
}

/// How the ToF/AoD dimensions are collapsed into the 2D image.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Marginal {
    #[default]
    Sum,
    Max,
}

/// 180×180 power grid over (azimuth bin, elevation bin); bin `b` is angle
/// `b + 1` degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum2D {
    data: Vec<f64>,
    pub timestamp_ns: u64,
}

impl Spectrum2D {
    pub const SIDE: usize = ANGLE_BINS;
    pub const LEN: usize = ANGLE_BINS * ANGLE_BINS;

    pub fn new(data: Vec<f64>, timestamp_ns: u64) -> Result<Self> {
        if data.len() != Self::LEN {
            return Err(Error::DimensionMismatch(format!(
                "spectrum needs {} values, got {}",
                Self::LEN,
                data.len()
            )));
        }
        if let Some(v) = data.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::invalid(format!(
                "spectrum values must be finite and >= 0, got {v}"
            )));
        }
        Ok(Self { data, timestamp_ns })
    }

    pub fn zeros(timestamp_ns: u64) -> Self {
        Self {
            data: vec![0.0; Self::LEN],
            timestamp_ns,
        }
    }

    pub fn from_fn(timestamp_ns: u64, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(Self::LEN);
        for az in 0..Self::SIDE {
            for el in 0..Self::SIDE {
                data.push(f(az, el));
            }
        }
        Self::new(data, timestamp_ns)
    }

    #[inline]
    pub fn index(az_bin: usize, el_bin: usize) -> usize {
        az_bin * Self::SIDE + el_bin
    }

    #[inline]
    pub fn get(&self, az_bin: usize, el_bin: usize) -> f64 {
        self.data[Self::index(az_bin, el_bin)]
    }

    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn values_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn max(&self) -> f64 {
        self.data.iter().cloned().fold(0.0, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    /// `(azimuth bin, elevation bin)` of the largest value; first wins ties.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = 0;
        for (i, v) in self.data.iter().enumerate() {
            if *v > self.data[best] {
                best = i;
            }
        }
        (best / Self::SIDE, best % Self::SIDE)
    }

    /// Largest value within `radius` bins (Chebyshev) of a bin.
    pub fn max_near(&self, az_bin: usize, el_bin: usize, radius: usize) -> f64 {
        let mut m: f64 = 0.0;
        for a in az_bin.saturating_sub(radius)..=(az_bin + radius).min(Self::SIDE - 1) {
            for e in el_bin.saturating_sub(radius)..=(el_bin + radius).min(Self::SIDE - 1) {
                m = m.max(self.get(a, e));
            }
        }
        m
    }

    pub fn median(&self) -> f64 {
        let mut v = self.data.clone();
        let mid = v.len() / 2;
        let (_, hi, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
        let hi = *hi;
        let lo = v[..mid].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        (lo + hi) / 2.0
    }
}

/// MUSIC pseudo-spectrum over the angle grid, collapsed over ToF/AoD by sum.
pub fn spectrum(
    noise: &NoiseSubspace,
    grids: &GridSpec,
    cfg: &ChannelConfig,
    geom: &ArrayGeometry,
) -> Result<Spectrum2D> {
    spectrum_with(noise, grids, cfg, geom, Marginal::Sum)
}

/// MUSIC pseudo-spectrum `1 / ‖E_Nᴴ a‖²` evaluated at every (azimuth,
/// elevation) bin for every (ToF, AoD) grid point and collapsed by
/// `marginal`.
///
/// Each signal basis column is reshaped to a (tx, rx, subcarrier) tensor and
/// contracted against the tx and subcarrier factors once per (ToF, AoD)
/// point, leaving an `n_rx`-vector. Per angle bin only the receive factor
/// remains to be applied.
pub fn spectrum_with(
    noise: &NoiseSubspace,
    grids: &GridSpec,
    cfg: &ChannelConfig,
    geom: &ArrayGeometry,
    marginal: Marginal,
) -> Result<Spectrum2D> {
    let (n_rx, n_tx, n_su) = (geom.n_rx(), geom.n_tx(), geom.n_subcarriers());
    let dim = geom.dim();
    if noise.dim() != dim {
        return Err(Error::DimensionMismatch(format!(
            "subspace dimension {} does not match array dimension {dim}",
            noise.dim()
        )));
    }
    let n_cols = noise.source_count();
    let n_grid = grids.len();
    let norm_a = dim as f64;
    let denom_floor = norm_a * 1e-12;

    let subs: Vec<Vec<Complex64>> = grids
        .tof()
        .iter()
        .map(|&t| subcarrier_factor(cfg, n_su, t))
        .collect();
    let txs: Vec<Vec<Complex64>> = grids
        .aod()
        .iter()
        .map(|&w| tx_factor(cfg, n_tx, w))
        .collect();

    // contracted[(g * n_cols + c) * n_rx + k] =
    //   Σ_m Σ_n conj(e_c[m, k, n]) tx_m(ω_g) sub_n(τ_g)
    let mut contracted = vec![Complex64::new(0.0, 0.0); n_grid * n_cols * n_rx];
    let signal = noise.signal_basis();
    let mut partial = vec![Complex64::new(0.0, 0.0); n_tx * n_rx];
    for (ti, sub) in subs.iter().enumerate() {
        for c in 0..n_cols {
            let col = signal.column(c);
            for m in 0..n_tx {
                for k in 0..n_rx {
                    let base = (m * n_rx + k) * n_su;
                    partial[m * n_rx + k] = (0..n_su).map(|n| col[base + n].conj() * sub[n]).sum();
                }
            }
            for (wi, tx) in txs.iter().enumerate() {
                let g = ti * txs.len() + wi;
                let out = &mut contracted[(g * n_cols + c) * n_rx..(g * n_cols + c + 1) * n_rx];
                for (k, o) in out.iter_mut().enumerate() {
                    *o = (0..n_tx).map(|m| tx[m] * partial[m * n_rx + k]).sum();
                }
            }
        }
    }

    let side = Spectrum2D::SIDE;
    let mut data = vec![0.0; Spectrum2D::LEN];
    data.par_chunks_mut(side)
        .enumerate()
        .for_each(|(az_bin, row)| {
            let az = bin_to_deg(az_bin);
            for (el_bin, out) in row.iter_mut().enumerate() {
                let rx = rx_factor(cfg, geom, az, bin_to_deg(el_bin));
                let mut acc = 0.0f64;
                for g in 0..n_grid {
                    let mut captured = 0.0;
                    for c in 0..n_cols {
                        let b = &contracted[(g * n_cols + c) * n_rx..(g * n_cols + c + 1) * n_rx];
                        let mut s = Complex64::new(0.0, 0.0);
                        for k in 0..n_rx {
                            s += b[k] * rx[k];
                        }
                        captured += s.norm_sqr();
                    }
                    let p = 1.0 / (norm_a - captured).max(denom_floor);
                    match marginal {
                        Marginal::Sum => acc += p,
                        Marginal::Max => acc = acc.max(p),
                    }
                }
                *out = acc;
            }
        });
    Spectrum2D::new(data, 0)
}
