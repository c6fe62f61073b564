//! CSIF: a minimal little-endian container for CSI packet streams.
//!
//! ```text
//! "CSIF"  u16 version=1  u16 n_rx  u16 n_tx  u16 n_su
//! f64 carrier_hz  f64 subcarrier_spacing_hz  u64 packet_count
//! packet_count × { u64 timestamp_ns, 2·n_rx·n_tx·n_su × f32 (re, im) }
//! ```
//! Values are ordered rx-major, then tx, then subcarrier.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::array::{ArrayGeometry, ChannelConfig};
use crate::error::{Error, Result};
use crate::sim::{CsiFrame, CsiStream};

pub const MAGIC: &[u8; 4] = b"CSIF";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 4 + 2 * 4 + 8 * 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CsifHeader {
    pub n_rx: u16,
    pub n_tx: u16,
    pub n_su: u16,
    pub carrier_hz: f64,
    pub subcarrier_spacing_hz: f64,
    pub packet_count: u64,
}

impl CsifHeader {
    pub fn values_per_packet(&self) -> usize {
        self.n_rx as usize * self.n_tx as usize * self.n_su as usize
    }

    /// Bytes per packet record: timestamp plus interleaved f32 pairs.
    pub fn packet_len(&self) -> usize {
        8 + 2 * self.values_per_packet() * 4
    }
}

pub fn encode_header(h: &CsifHeader) -> [u8; HEADER_LEN] {
    let mut b = [0u8; HEADER_LEN];
    b[0..4].copy_from_slice(MAGIC);
    b[4..6].copy_from_slice(&VERSION.to_le_bytes());
    b[6..8].copy_from_slice(&h.n_rx.to_le_bytes());
    b[8..10].copy_from_slice(&h.n_tx.to_le_bytes());
    b[10..12].copy_from_slice(&h.n_su.to_le_bytes());
    b[12..20].copy_from_slice(&h.carrier_hz.to_le_bytes());
    b[20..28].copy_from_slice(&h.subcarrier_spacing_hz.to_le_bytes());
    b[28..36].copy_from_slice(&h.packet_count.to_le_bytes());
    b
}

pub fn decode_header(b: &[u8]) -> Result<CsifHeader> {
    if b.len() < HEADER_LEN {
        return Err(Error::Csif(format!(
            "header truncated: {} of {HEADER_LEN} bytes",
            b.len()
        )));
    }
    if &b[0..4] != MAGIC {
        return Err(Error::Csif(format!("bad magic {:?}", &b[0..4])));
    }
    let u16_at = |i: usize| u16::from_le_bytes([b[i], b[i + 1]]);
    let f64_at = |i: usize| f64::from_le_bytes(b[i..i + 8].try_into().unwrap());
    let version = u16_at(4);
    if version != VERSION {
        return Err(Error::Csif(format!("unsupported version {version}")));
    }
    let h = CsifHeader {
        n_rx: u16_at(6),
        n_tx: u16_at(8),
        n_su: u16_at(10),
        carrier_hz: f64_at(12),
        subcarrier_spacing_hz: f64_at(20),
        packet_count: u64::from_le_bytes(b[28..36].try_into().unwrap()),
    };
    if h.n_rx == 0 || h.n_tx == 0 || h.n_su == 0 {
        return Err(Error::Csif(format!(
            "zero dimension in header ({}x{}x{})",
            h.n_rx, h.n_tx, h.n_su
        )));
    }
    if !(h.carrier_hz > 0.0 && h.subcarrier_spacing_hz > 0.0) {
        return Err(Error::Csif(
            "carrier and subcarrier spacing must be > 0".into(),
        ));
    }
    Ok(h)
}

fn dim_u16(v: usize, what: &str) -> Result<u16> {
    u16::try_from(v)
        .map_err(|_| Error::invalid(format!("{what} = {v} does not fit the CSIF header")))
}

pub fn header_for(stream: &CsiStream) -> Result<CsifHeader> {
    let g = &stream.geometry;
    Ok(CsifHeader {
        n_rx: dim_u16(g.n_rx(), "n_rx")?,
        n_tx: dim_u16(g.n_tx(), "n_tx")?,
        n_su: dim_u16(g.n_subcarriers(), "n_su")?,
        carrier_hz: stream.config.carrier_frequency(),
        subcarrier_spacing_hz: stream.config.subcarrier_spacing(),
        packet_count: stream.len() as u64,
    })
}

pub fn write_csif_to<W: Write>(stream: &CsiStream, mut w: W) -> Result<()> {
    let header = header_for(stream)?;
    w.write_all(&encode_header(&header))?;
    let mut buf = Vec::with_capacity(header.packet_len());
    for f in stream.frames() {
        buf.clear();
        buf.extend_from_slice(&f.timestamp_ns.to_le_bytes());
        for v in f.tensor() {
            buf.extend_from_slice(&(v.re as f32).to_le_bytes());
            buf.extend_from_slice(&(v.im as f32).to_le_bytes());
        }
        w.write_all(&buf)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csif(stream: &CsiStream, path: impl AsRef<Path>) -> Result<()> {
    let f = fs::File::create(path)?;
    write_csif_to(stream, BufWriter::new(f))
}

/// Geometry assumed for a CSIF file, which does not carry antenna
/// positions: an L array for odd `n_rx`, otherwise a line along X, both at
/// half-wavelength spacing.
pub fn assumed_geometry(cfg: &ChannelConfig, h: &CsifHeader) -> Result<ArrayGeometry> {
    let (n_rx, n_tx, n_su) = (h.n_rx as usize, h.n_tx as usize, h.n_su as usize);
    let spacing = cfg.wavelength() / 2.0;
    if n_rx % 2 == 1 {
        ArrayGeometry::l_shaped(n_rx.div_ceil(2), spacing, n_tx, n_su)
    } else {
        ArrayGeometry::new(
            (0..n_rx).map(|i| [i as f64 * spacing, 0.0, 0.0]).collect(),
            n_tx,
            n_su,
        )
    }
}

pub fn decode_csif(bytes: &[u8], geometry: Option<&ArrayGeometry>) -> Result<CsiStream> {
    let h = decode_header(bytes)?;
    let cfg = ChannelConfig::with_carrier(h.carrier_hz, h.subcarrier_spacing_hz)?;
    let geom = match geometry {
        Some(g) => {
            if [g.n_rx(), g.n_tx(), g.n_subcarriers()]
                != [h.n_rx as usize, h.n_tx as usize, h.n_su as usize]
            {
                return Err(Error::DimensionMismatch(format!(
                    "CSIF header declares {}x{}x{} but the configured array is {}x{}x{}",
                    h.n_rx,
                    h.n_tx,
                    h.n_su,
                    g.n_rx(),
                    g.n_tx(),
                    g.n_subcarriers()
                )));
            }
            g.clone()
        }
        None => assumed_geometry(&cfg, &h)?,
    };
    let per = h.packet_len();
    let body = &bytes[HEADER_LEN..];
    let expected = per as u128 * h.packet_count as u128;
    if (body.len() as u128) < expected {
        let index = body.len() / per;
        return Err(Error::Csif(format!(
            "payload truncated in packet {index}: header declares {} packets of {per} bytes, found {} bytes",
            h.packet_count,
            body.len()
        )));
    }
    if body.len() as u128 > expected {
        return Err(Error::Csif(format!(
            "{} trailing bytes after {} packets",
            body.len() as u128 - expected,
            h.packet_count
        )));
    }
    let dims = [h.n_rx as usize, h.n_tx as usize, h.n_su as usize];
    let mut frames = Vec::with_capacity(h.packet_count as usize);
    let mut last: Option<u64> = None;
    for (i, rec) in body.chunks_exact(per).enumerate() {
        let ts = u64::from_le_bytes(rec[0..8].try_into().unwrap());
        if let Some(prev) = last {
            if ts <= prev {
                return Err(Error::Csif(format!(
                    "packet {i}: timestamp {ts} does not increase (previous {prev})"
                )));
            }
        }
        last = Some(ts);
        let tensor = rec[8..]
            .chunks_exact(8)
            .map(|c| {
                let re = f32::from_le_bytes(c[0..4].try_into().unwrap());
                let im = f32::from_le_bytes(c[4..8].try_into().unwrap());
                Complex64::new(re as f64, im as f64)
            })
            .collect();
        let frame =
            CsiFrame::new(ts, dims, tensor).map_err(|e| Error::Csif(format!("packet {i}: {e}")))?;
        frames.push(frame);
    }
    CsiStream::new(cfg, geom, frames)
}

pub fn read_csif(path: impl AsRef<Path>) -> Result<CsiStream> {
    decode_csif(&fs::read(path)?, None)
}

pub fn read_csif_with(path: impl AsRef<Path>, geometry: &ArrayGeometry) -> Result<CsiStream> {
    decode_csif(&fs::read(path)?, Some(geometry))
}
