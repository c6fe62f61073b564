//! Command-line front end shared by the `wivi` binary.
//!
//! Exit codes: 0 success, 1 usage error, 2 invalid input, 3 numerical
//! failure.

use std::collections::HashMap;
use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::error::{Error, Result};
use crate::io::{
    load_scene, read_csif, read_spectrum_dir, save_spectrum, write_csif, write_spectrum_dir,
    ProcessingConfig,
};
use crate::music::{detect_peaks, image_stream, DEFAULT_MAX_PEAKS, DEFAULT_MIN_PROMINENCE_DB};
use crate::reid::{cmc, extract_features, rank, FeatureVector};
use crate::sim::{inject_phase_offsets, simulate, CsiStream};
use crate::vision::{aggregate, enhance_track, SpectrumTrack};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "wivi",
    version,
    about = "2D angle-of-arrival imaging from WiFi CSI"
)]
pub struct Cli {
    /// Override the RNG seed of the scene.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// TOML processing settings; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate a scene file into a CSIF stream.
    Simulate {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Apply random per-packet phase offsets, as a real radio would.
        #[arg(long)]
        inject_offsets: bool,
    },
    /// Compute one 2D spectrum per snapshot window.
    Spectrum {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long)]
        stride: Option<usize>,
        #[arg(long)]
        no_sanitize: bool,
        /// Single packet, transmitter and subcarrier per image.
        #[arg(long)]
        degraded: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Subtract the static background from a spectrum sequence.
    Enhance {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        static_window: Option<usize>,
        #[arg(long)]
        floor_db: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Per-bin maximum over the last frames; writes .pgm or .csv.
    Aggregate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        frames: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank probes against a gallery and write the CMC curve.
    Reid {
        /// Directory with one enhanced sequence per identity.
        #[arg(long)]
        gallery: PathBuf,
        /// Directory with one enhanced sequence per probe, named after its identity.
        #[arg(long)]
        probes: PathBuf,
        #[arg(long)]
        cmc: PathBuf,
    },
    /// simulate, spectrum, enhance and aggregate in one go.
    Pipeline {
        #[arg(long)]
        scene: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        inject_offsets: bool,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Numerical(_) => EXIT_NUMERICAL,
        _ => EXIT_INPUT,
    }
}

/// Parse `args` (including the program name) and run; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn execute(cli: &Cli) -> Result<()> {
    let settings = match &cli.config {
        Some(p) => ProcessingConfig::load(p)?,
        None => ProcessingConfig::default(),
    };
    let pool = {
        let mut b = rayon::ThreadPoolBuilder::new();
        if let Some(n) = cli.threads {
            if n == 0 {
                return Err(Error::invalid("--threads must be >= 1"));
            }
            b = b.num_threads(n);
        }
        b.build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?
    };
    pool.install(|| dispatch(cli, &settings))
}

fn dispatch(cli: &Cli, settings: &ProcessingConfig) -> Result<()> {
    match &cli.command {
        Command::Simulate {
            scene,
            out,
            inject_offsets,
        } => {
            let stream = simulate_scene(scene, cli.seed, *inject_offsets)?;
            write_csif(&stream, out)?;
            log::info!("wrote {} packets to {}", stream.len(), out.display());
        }
        Command::Spectrum {
            input,
            window,
            stride,
            no_sanitize,
            degraded,
            out,
        } => {
            let mut img = settings.imaging()?;
            img.window_len = window.unwrap_or(img.window_len);
            img.stride = stride.unwrap_or(img.stride);
            img.sanitize &= !no_sanitize;
            img.degraded = *degraded;
            let stream = read_csif(input)?;
            let frames = image_stream(&stream, &img)?;
            write_spectrum_dir(out, &frames, true)?;
            log::info!("wrote {} spectra to {}", frames.len(), out.display());
        }
        Command::Enhance {
            input,
            static_window,
            floor_db,
            out,
        } => {
            let track = read_spectrum_dir(input)?;
            let win = static_window.unwrap_or(settings.enhance.static_window);
            let enhanced =
                enhance_track(&track, win, floor_db.unwrap_or(settings.enhance.floor_db))?;
            write_spectrum_dir(out, enhanced.frames(), true)?;
        }
        Command::Aggregate { input, frames, out } => {
            let track = read_spectrum_dir(input)?;
            let img = aggregate(&track, frames.unwrap_or(settings.aggregate.frames))?;
            save_spectrum(&img, out)?;
        }
        Command::Reid {
            gallery,
            probes,
            cmc: out,
        } => {
            let gallery = load_identities(gallery)?;
            let probes = load_identities(probes)?;
            let known: HashMap<&str, ()> =
                gallery.iter().map(|(id, _)| (id.as_str(), ())).collect();
            let mut truth = HashMap::new();
            let mut results = Vec::new();
            for (id, f) in &probes {
                if !known.contains_key(id.as_str()) {
                    return Err(Error::MissingTruth(format!(
                        "probe '{id}' has no gallery entry of the same name"
                    )));
                }
                truth.insert(id.clone(), id.clone());
                results.push(rank(id, f, &gallery)?);
            }
            let curve = cmc(&results, &truth)?;
            let mut buf = Vec::new();
            curve.write_csv(&mut buf)?;
            fs::write(out, buf)?;
            println!("rank-1 {:.3}", curve.rank_k(1));
        }
        Command::Pipeline {
            scene,
            out,
            inject_offsets,
        } => pipeline(scene, out, cli.seed, *inject_offsets, settings)?,
    }
    Ok(())
}

fn simulate_scene(path: &Path, seed: Option<u64>, inject: bool) -> Result<CsiStream> {
    let mut setup = load_scene(path)?;
    if let Some(s) = seed {
        setup.scene.rng_seed = s;
    }
    let stream = simulate(&setup.scene, &setup.config, &setup.geometry)?;
    if inject {
        inject_phase_offsets(&stream, setup.scene.rng_seed.wrapping_add(1))
    } else {
        Ok(stream)
    }
}

/// Subdirectories of `dir`, each an enhanced sequence named by identity.
fn load_identities(dir: &Path) -> Result<Vec<(String, FeatureVector)>> {
    let mut entries: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_dir())
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(Error::invalid(format!(
            "{}: no identity directories",
            dir.display()
        )));
    }
    entries
        .iter()
        .map(|p| {
            let id = p.file_name().unwrap().to_string_lossy().into_owned();
            Ok((id, extract_features(&read_spectrum_dir(p)?)?))
        })
        .collect()
}

fn pipeline(
    scene: &Path,
    out: &Path,
    seed: Option<u64>,
    inject: bool,
    settings: &ProcessingConfig,
) -> Result<()> {
    fs::create_dir_all(out)?;
    let stream = simulate_scene(scene, seed, inject)?;
    write_csif(&stream, out.join("stream.csif"))?;
    let frames = image_stream(&stream, &settings.imaging()?)?;
    write_spectrum_dir(out.join("spectra"), &frames, true)?;
    if frames.is_empty() {
        return Err(Error::InsufficientFrames {
            what: "pipeline",
            required: 1,
            available: 0,
        });
    }
    let track = SpectrumTrack::from_frames(frames, stream_frame_rate(&stream, settings)?)?;
    let win = settings.enhance.static_window.min(track.len());
    if win < settings.enhance.static_window {
        log::warn!(
            "only {} spectra; static window shortened to {win}",
            track.len()
        );
    }
    let enhanced = enhance_track(&track, win, settings.enhance.floor_db)?;
    write_spectrum_dir(out.join("enhanced"), enhanced.frames(), true)?;
    let img = aggregate(&enhanced, settings.aggregate.frames.min(enhanced.len()))?;
    save_spectrum(&img, out.join("aggregate.pgm"))?;
    save_spectrum(&img, out.join("aggregate.csv"))?;
    let mut peaks = String::from("azimuth,elevation,power\n");
    for p in detect_peaks(&img, DEFAULT_MIN_PROMINENCE_DB, DEFAULT_MAX_PEAKS) {
        peaks.push_str(&format!("{},{},{}\n", p.azimuth, p.elevation, p.power));
    }
    fs::write(out.join("peaks.csv"), peaks)?;
    Ok(())
}

fn stream_frame_rate(stream: &CsiStream, settings: &ProcessingConfig) -> Result<f64> {
    let f = stream.frames();
    let stride = settings.imaging()?.stride as f64;
    let packet_rate = if f.len() > 1 {
        (f.len() - 1) as f64 * 1e9 / (f[f.len() - 1].timestamp_ns - f[0].timestamp_ns) as f64
    } else {
        1.0
    };
    Ok(packet_rate / stride)
}
