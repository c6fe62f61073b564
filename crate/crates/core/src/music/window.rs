use log::warn;
use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sim::CsiStream;

pub const DEFAULT_WINDOW_LEN: usize = 100;
pub const DEFAULT_STRIDE: usize = 33;

/// Snapshot matrix: one vectorized frame per column, rows in virtual-array
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotWindow {
    matrix: DMatrix<Complex64>,
    /// Index of the first frame in the source stream.
    pub start: usize,
    /// Timestamp of the last frame in the window.
    pub timestamp_ns: u64,
}

impl SnapshotWindow {
    pub fn new(matrix: DMatrix<Complex64>, start: usize, timestamp_ns: u64) -> Result<Self> {
        if matrix.ncols() == 0 || matrix.nrows() == 0 {
            return Err(Error::invalid("snapshot window must be non-empty"));
        }
        Ok(Self {
            matrix,
            start,
            timestamp_ns,
        })
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn window_len(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// Lazily assembled overlapping windows over a stream.
#[derive(Debug, Clone)]
pub struct Windows<'a> {
    stream: &'a CsiStream,
    window_len: usize,
    stride: usize,
    next: usize,
    count: usize,
}

impl<'a> Iterator for Windows<'a> {
    type Item = SnapshotWindow;

    fn next(&mut self) -> Option<SnapshotWindow> {
        if self.next >= self.count {
            return None;
        }
        let w = window_at(self.stream, self.next * self.stride, self.window_len);
        self.next += 1;
        Some(w)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.count - self.next;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Windows<'_> {}

/// Number of windows of `window_len` frames at `stride` in `n_frames`.
pub fn window_count(n_frames: usize, window_len: usize, stride: usize) -> usize {
    if n_frames < window_len || window_len == 0 || stride == 0 {
        0
    } else {
        (n_frames - window_len) / stride + 1
    }
}

pub fn windows(stream: &CsiStream, window_len: usize, stride: usize) -> Result<Windows<'_>> {
    if window_len == 0 || stride == 0 {
        return Err(Error::invalid(format!(
            "window length and stride must be >= 1 (got {window_len}, {stride})"
        )));
    }
    let count = window_count(stream.len(), window_len, stride);
    if count == 0 {
        warn!(
            "stream has {} frames, shorter than one {window_len}-frame window; no snapshots produced",
            stream.len()
        );
    }
    Ok(Windows {
        stream,
        window_len,
        stride,
        next: 0,
        count,
    })
}

/// Window starting at frame `start`.
pub fn window_at(stream: &CsiStream, start: usize, window_len: usize) -> SnapshotWindow {
    let frames = &stream.frames()[start..start + window_len];
    let dim = stream.geometry.dim();
    let mut data = Vec::with_capacity(dim * window_len);
    for f in frames {
        data.extend(f.to_virtual());
    }
    SnapshotWindow {
        matrix: DMatrix::from_vec(dim, window_len, data),
        start,
        timestamp_ns: frames[window_len - 1].timestamp_ns,
    }
}
