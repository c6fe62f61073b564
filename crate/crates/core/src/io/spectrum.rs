//! Image export (PGM, CSV) and on-disk spectrum sequences.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::array::bin_to_deg;
use crate::error::{Error, Result};
use crate::music::Spectrum2D;
use crate::vision::{SpectrumTrack, DEFAULT_FRAME_RATE};

pub const CSV_HEADER: &str = "azimuth,elevation,power";
pub const INDEX_FILE: &str = "index.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Pgm,
    Csv,
}

impl ImageFormat {
    /// Format implied by a file extension (`.pgm` or `.csv`).
    pub fn from_path(path: &Path) -> Result<Self> {
        match path
            .extension()
            .and_then(|e| e.to_str())
            .map(str::to_ascii_lowercase)
            .as_deref()
        {
            Some("pgm") => Ok(Self::Pgm),
            Some("csv") => Ok(Self::Csv),
            _ => Err(Error::invalid(format!(
                "{}: expected a .pgm or .csv extension",
                path.display()
            ))),
        }
    }
}

/// 8-bit binary PGM, 180×180, maximum mapped to 255. Columns are azimuth
/// 1°..180°; the top row is elevation 180°.
pub fn encode_pgm(s: &Spectrum2D) -> Vec<u8> {
    let side = Spectrum2D::SIDE;
    let mut out = format!("P5\n{side} {side}\n255\n").into_bytes();
    let max = s.max();
    for row in 0..side {
        let el = side - 1 - row;
        for az in 0..side {
            let v = if max > 0.0 {
                (s.get(az, el) / max * 255.0).round()
            } else {
                0.0
            };
            out.push(v.clamp(0.0, 255.0) as u8);
        }
    }
    out
}

/// `azimuth,elevation,power` rows, azimuth-major, angles in degrees.
/// Powers use the shortest round-tripping decimal form.
pub fn encode_csv(s: &Spectrum2D) -> String {
    let mut out = String::with_capacity(Spectrum2D::LEN * 24);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for az in 0..Spectrum2D::SIDE {
        for el in 0..Spectrum2D::SIDE {
            writeln!(
                out,
                "{},{},{}",
                bin_to_deg(az),
                bin_to_deg(el),
                s.get(az, el)
            )
            .unwrap();
        }
    }
    out
}

pub fn decode_csv(text: &str, timestamp_ns: u64) -> Result<Spectrum2D> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        other => {
            return Err(Error::invalid(format!(
                "expected header '{CSV_HEADER}', got {other:?}"
            )))
        }
    }
    let mut data = vec![f64::NAN; Spectrum2D::LEN];
    let mut rows = 0usize;
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = || Error::invalid(format!("line {}: malformed row '{line}'", i + 2));
        let mut it = line.split(',');
        let mut field = || it.next().map(str::trim).ok_or_else(bad);
        let az: usize = field()?.parse().map_err(|_| bad())?;
        let el: usize = field()?.parse().map_err(|_| bad())?;
        let p: f64 = field()?.parse().map_err(|_| bad())?;
        if !(1..=Spectrum2D::SIDE).contains(&az) || !(1..=Spectrum2D::SIDE).contains(&el) {
            return Err(bad());
        }
        data[Spectrum2D::index(az - 1, el - 1)] = p;
        rows += 1;
    }
    if rows != Spectrum2D::LEN || data.iter().any(|v| v.is_nan()) {
        return Err(Error::DimensionMismatch(format!(
            "spectrum CSV must cover all {} bins exactly once, got {rows} rows",
            Spectrum2D::LEN
        )));
    }
    Spectrum2D::new(data, timestamp_ns)
}

pub fn export_spectrum(s: &Spectrum2D, path: impl AsRef<Path>, format: ImageFormat) -> Result<()> {
    match format {
        ImageFormat::Pgm => fs::write(path, encode_pgm(s))?,
        ImageFormat::Csv => fs::write(path, encode_csv(s))?,
    }
    Ok(())
}

/// Export with the format taken from the file extension.
pub fn save_spectrum(s: &Spectrum2D, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    export_spectrum(s, path, ImageFormat::from_path(path)?)
}

pub fn load_spectrum_csv(path: impl AsRef<Path>, timestamp_ns: u64) -> Result<Spectrum2D> {
    decode_csv(&fs::read_to_string(path)?, timestamp_ns)
}

fn frame_stem(i: usize) -> String {
    format!("frame_{i:05}")
}

/// Writes each frame as CSV (and PGM preview when `previews`) plus an
/// `index.csv` of `frame,timestamp_ns,file`.
pub fn write_spectrum_dir(
    dir: impl AsRef<Path>,
    frames: &[Spectrum2D],
    previews: bool,
) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut index = String::from("frame,timestamp_ns,file\n");
    for (i, f) in frames.iter().enumerate() {
        let stem = frame_stem(i);
        export_spectrum(f, dir.join(format!("{stem}.csv")), ImageFormat::Csv)?;
        if previews {
            export_spectrum(f, dir.join(format!("{stem}.pgm")), ImageFormat::Pgm)?;
        }
        writeln!(index, "{i},{},{stem}.csv", f.timestamp_ns).unwrap();
    }
    fs::write(dir.join(INDEX_FILE), index)?;
    Ok(())
}

fn index_entries(dir: &Path) -> Result<Vec<(u64, PathBuf)>> {
    let path = dir.join(INDEX_FILE);
    let text = fs::read_to_string(&path)
        .map_err(|e| Error::invalid(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (i, line) in text
        .lines()
        .enumerate()
        .skip(1)
        .filter(|(_, l)| !l.trim().is_empty())
    {
        let bad = || Error::invalid(format!("{}:{}: malformed index row", path.display(), i + 1));
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        if cols.len() != 3 {
            return Err(bad());
        }
        let ts: u64 = cols[1].parse().map_err(|_| bad())?;
        out.push((ts, dir.join(cols[2])));
    }
    Ok(out)
}

/// Frame rate implied by the index timestamps; falls back to the default
/// for single-frame sequences.
fn implied_rate(ts: &[u64]) -> f64 {
    match (ts.first(), ts.last()) {
        (Some(&a), Some(&b)) if b > a => (ts.len() - 1) as f64 * 1e9 / (b - a) as f64,
        _ => DEFAULT_FRAME_RATE,
    }
}

pub fn read_spectrum_dir(dir: impl AsRef<Path>) -> Result<SpectrumTrack> {
    let entries = index_entries(dir.as_ref())?;
    let ts: Vec<u64> = entries.iter().map(|e| e.0).collect();
    let frames = entries
        .into_iter()
        .map(|(t, p)| load_spectrum_csv(&p, t))
        .collect::<Result<Vec<_>>>()?;
    SpectrumTrack::from_frames(frames, implied_rate(&ts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pgm_single_bin() {
        let s = Spectrum2D::from_fn(0, |a, e| if (a, e) == (9, 19) { 3.5 } else { 0.0 }).unwrap();
        let pgm = encode_pgm(&s);
        let header = b"P5\n180 180\n255\n";
        assert_eq!(&pgm[..header.len()], header);
        let px = &pgm[header.len()..];
        assert_eq!(px.len(), 180 * 180);
        assert_eq!(px.iter().filter(|&&p| p != 0).count(), 1);
        assert_eq!(px[(179 - 19) * 180 + 9], 255);
    }

    #[test]
    fn pgm_is_deterministic() {
        let s = Spectrum2D::from_fn(0, |a, e| (a * e) as f64).unwrap();
        assert_eq!(encode_pgm(&s), encode_pgm(&s));
    }

    #[test]
    fn csv_round_trip() {
        let s = Spectrum2D::from_fn(7, |a, e| (a as f64 + 0.1) / (e as f64 + 3.0)).unwrap();
        let text = encode_csv(&s);
        assert_eq!(text.lines().count(), 32401);
        assert!(text.starts_with("azimuth,elevation,power\n1,1,"));
        assert_eq!(decode_csv(&text, 7).unwrap(), s);
    }

    #[test]
    fn csv_missing_rows_rejected() {
        let s = Spectrum2D::zeros(0);
        let text: String = encode_csv(&s)
            .lines()
            .take(100)
            .map(|l| format!("{l}\n"))
            .collect();
        assert!(decode_csv(&text, 0).is_err());
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let frames: Vec<_> = (0..3u64)
            .map(|i| {
                Spectrum2D::from_fn(1_000_000_000 * i / 30 + 1, |a, e| (a + e) as f64 * i as f64)
                    .unwrap()
            })
            .collect();
        write_spectrum_dir(dir.path(), &frames, true).unwrap();
        assert!(dir.path().join("frame_00002.pgm").exists());
        let t = read_spectrum_dir(dir.path()).unwrap();
        assert_eq!(t.frames(), &frames[..]);
        assert!((t.frame_rate - 30.0).abs() < 1e-6);
    }
}
