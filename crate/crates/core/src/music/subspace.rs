//! Covariance estimation and signal/noise subspace split.
//!
//! With fewer snapshots than virtual sensors the covariance has rank at most
//! `window_len`, so the usual route decomposes the small Gram matrix `XᴴX`
//! instead of the full `dim × dim` covariance. Only the signal subspace is
//! kept; the noise subspace is its orthogonal complement and the MUSIC
//! denominator is evaluated as `‖a‖² - ‖E_Sᴴ a‖²`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::window::SnapshotWindow;
use crate::error::{Error, Result};

/// Eigenvalues below this fraction of the largest are numerically zero.
const RELATIVE_RANK_FLOOR: f64 = 1e-10;

/// How the number of signal sources is chosen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SourceCount {
    Fixed(usize),
    /// Eigenvalues above `factor` × noise floor, the floor being the median
    /// of the lower half of the eigenvalue spectrum.
    Threshold {
        factor: f64,
    },
    /// Minimum description length.
    Mdl,
}

impl Default for SourceCount {
    fn default() -> Self {
        SourceCount::Threshold { factor: 10.0 }
    }
}

/// Sample covariance `R = X Xᴴ / L` with the snapshot count it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Covariance {
    matrix: DMatrix<Complex64>,
    snapshots: usize,
}

impl Covariance {
    /// Wrap an externally computed Hermitian matrix. `snapshots` bounds its
    /// rank; pass the dimension when unknown.
    pub fn new(matrix: DMatrix<Complex64>, snapshots: usize) -> Result<Self> {
        if !matrix.is_square() || matrix.nrows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "covariance must be square and non-empty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self {
            matrix,
            snapshots: snapshots.max(1),
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn snapshots(&self) -> usize {
        self.snapshots
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

pub fn covariance(w: &SnapshotWindow) -> Covariance {
    let x = w.matrix();
    let l = w.window_len() as f64;
    let r = (x * x.adjoint()).unscale(l);
    Covariance {
        matrix: r,
        snapshots: w.window_len(),
    }
}

/// Signal subspace with its implicit orthogonal complement.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSubspace {
    dim: usize,
    signal: DMatrix<Complex64>,
    eigenvalues: Vec<f64>,
}

impl NoiseSubspace {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Estimated (or fixed) source count.
    pub fn source_count(&self) -> usize {
        self.signal.ncols()
    }

    /// Orthonormal signal basis, `dim × source_count`.
    pub fn signal_basis(&self) -> &DMatrix<Complex64> {
        &self.signal
    }

    /// Leading covariance eigenvalues, descending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `‖E_Nᴴ a‖²`, the squared norm of `a` projected onto the noise subspace.
    pub fn projection_norm_sqr(&self, a: &[Complex64]) -> f64 {
        let total: f64 = a.iter().map(|v| v.norm_sqr()).sum();
        let captured: f64 = self
            .signal
            .column_iter()
            .map(|e| {
                e.iter()
                    .zip(a)
                    .map(|(x, y)| x.conj() * y)
                    .sum::<Complex64>()
                    .norm_sqr()
            })
            .sum();
        (total - captured).max(0.0)
    }

    /// Explicit orthonormal noise basis, `dim × (dim - source_count)`.
    /// Builds a dense `dim × dim` projector; meant for small arrays and
    /// verification.
    pub fn basis(&self) -> DMatrix<Complex64> {
        let n = self.dim;
        let k = self.source_count();
        let projector = DMatrix::<Complex64>::identity(n, n) - &self.signal * self.signal.adjoint();
        let eig = projector.symmetric_eigen();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let cols: Vec<_> = order[..n - k]
            .iter()
            .map(|&i| eig.eigenvectors.column(i).into_owned())
            .collect();
        DMatrix::from_columns(&cols)
    }
}

/// Noise subspace from a dense Hermitian eigendecomposition of `R`.
pub fn noise_subspace(r: &Covariance, count: SourceCount) -> Result<NoiseSubspace> {
    let dim = r.dim();
    let eig = r.matrix.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let leading = &values[..r.snapshots.min(dim)];
    let s_hat = resolve_count(count, leading, dim, r.snapshots)?;
    let cols: Vec<_> = order[..s_hat]
        .iter()
        .map(|&i| eig.eigenvectors.column(i).into_owned())
        .collect();
    let signal = if cols.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    Ok(NoiseSubspace {
        dim,
        signal,
        eigenvalues: leading.to_vec(),
    })
}

/// Noise subspace straight from a snapshot window via the thin Gram matrix.
/// Falls back to the dense route when the window has at least as many
/// snapshots as sensors.
pub fn noise_subspace_from_window(w: &SnapshotWindow, count: SourceCount) -> Result<NoiseSubspace> {
    let (dim, l) = (w.dim(), w.window_len());
    if l >= dim {
        return noise_subspace(&covariance(w), count);
    }
    if let SourceCount::Fixed(k) = count {
        if k > l && k < dim {
            // Requested signal dimension exceeds the snapshot rank.
            return noise_subspace(&covariance(w), count);
        }
    }
    let x = w.matrix();
    let gram = (x.adjoint() * x).unscale(l as f64);
    let eig = gram.symmetric_eigen();
    let mut order: Vec<usize> = (0..l).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let s_hat = resolve_count(count, &values, dim, l)?;

    // u = X v / sqrt(L λ), then re-orthonormalize against rounding.
    let mut cols: Vec<nalgebra::DVector<Complex64>> = Vec::with_capacity(s_hat);
    for &i in &order[..s_hat] {
        let lambda = eig.eigenvalues[i];
        if lambda <= 0.0 {
            return Err(Error::Numerical(format!(
                "signal eigenvalue {lambda} is not positive"
            )));
        }
        let mut u = x * eig.eigenvectors.column(i);
        u.unscale_mut((l as f64 * lambda).sqrt());
        for prev in &cols {
            let proj = prev.dotc(&u);
            u -= prev * proj;
        }
        let n = u.norm();
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::Numerical("degenerate signal eigenvector".into()));
        }
        u.unscale_mut(n);
        cols.push(u);
    }
    let signal = if cols.is_empty() {
        DMatrix::zeros(dim, 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    Ok(NoiseSubspace {
        dim,
        signal,
        eigenvalues: values,
    })
}

fn resolve_count(
    count: SourceCount,
    eigenvalues: &[f64],
    dim: usize,
    snapshots: usize,
) -> Result<usize> {
    let s = match count {
        SourceCount::Fixed(k) => {
            if k >= dim {
                return Err(Error::invalid(format!(
                    "source count {k} leaves no noise subspace in dimension {dim}"
                )));
            }
            return Ok(k);
        }
        SourceCount::Threshold { factor } => threshold_count(eigenvalues, factor),
        SourceCount::Mdl => mdl_count(eigenvalues, snapshots),
    };
    Ok(s.clamp(1, dim.saturating_sub(1).max(1)))
}

/// Eigenvalues (descending) above `factor` × noise floor.
pub fn threshold_count(eigenvalues: &[f64], factor: f64) -> usize {
    if eigenvalues.is_empty() {
        return 0;
    }
    let top = eigenvalues[0].max(0.0);
    let lower = &eigenvalues[eigenvalues.len() / 2..];
    let mut sorted: Vec<f64> = lower.iter().map(|v| v.max(0.0)).collect();
    sorted.sort_by(f64::total_cmp);
    let median = if sorted.len() % 2 == 1 {
        sorted[sorted.len() / 2]
    } else {
        (sorted[sorted.len() / 2 - 1] + sorted[sorted.len() / 2]) / 2.0
    };
    let floor = median.max(top * RELATIVE_RANK_FLOOR);
    eigenvalues.iter().filter(|&&v| v > factor * floor).count()
}

/// Wax–Kailath minimum description length over descending eigenvalues.
pub fn mdl_count(eigenvalues: &[f64], snapshots: usize) -> usize {
    let p = eigenvalues.len();
    if p < 2 {
        return p;
    }
    let tiny = eigenvalues[0].max(f64::MIN_POSITIVE) * RELATIVE_RANK_FLOOR;
    let vals: Vec<f64> = eigenvalues.iter().map(|v| v.max(tiny)).collect();
    let n = snapshots as f64;
    (0..p)
        .map(|k| {
            let tail = &vals[k..];
            let m = tail.len() as f64;
            let log_geo = tail.iter().map(|v| v.ln()).sum::<f64>() / m;
            let arith = tail.iter().sum::<f64>() / m;
            let kf = k as f64;
            let mdl = -n * m * (log_geo - arith.ln()) + 0.5 * kf * (2.0 * p as f64 - kf) * n.ln();
            (k, mdl)
        })
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(k, _)| k)
        .unwrap_or(0)
}
