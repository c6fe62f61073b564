//! TOML scene descriptions and processing settings.
//!
//! Keys carry their unit (`_hz`, `_ns`, `_deg`, `_db`, `_s`, `_m`, `_rad`)
//! and unknown keys are rejected.
//!
//! ```toml
//! [channel]
//! carrier_hz = 5.32e9
//! subcarrier_spacing_hz = 1.25e6
//!
//! [geometry]
//! n_tx = 3
//! n_subcarriers = 30
//!
//! [simulation]
//! snr_db = 25.0
//! packet_rate_hz = 1000.0
//! duration_s = 0.2
//! seed = 7
//!
//! [[path]]
//! tag = "los"
//! azimuth_deg = 90.0
//! elevation_deg = 90.0
//! tof_ns = 5.0
//! aod_deg = 80.0
//! ```

use std::fs;
use std::path::Path;

use num_complex::Complex64;
use serde::Deserialize;

use crate::array::{ArrayGeometry, ChannelConfig, PathHypothesis};
use crate::error::{Error, Result};
use crate::music::{GridSpec, ImagingConfig, Marginal, SourceCount};
use crate::sim::{
    db_to_amplitude, Keyframe, PathTag, Persona, Scene, ScenePath, Trajectory, Visibility,
};
use crate::vision::{DEFAULT_AGGREGATE_FRAMES, DEFAULT_FLOOR_DB, DEFAULT_STATIC_WINDOW};

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub carrier_hz: Option<f64>,
    pub subcarrier_spacing_hz: Option<f64>,
    /// Defaults to half a wavelength.
    pub tx_spacing_m: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    /// Explicit receive positions; all must lie in the y = 0 plane.
    pub rx_positions_m: Option<Vec<[f64; 3]>>,
    /// Elements per arm of an L array at half-wavelength spacing.
    pub l_arm_elements: Option<usize>,
    pub n_tx: Option<usize>,
    pub n_subcarriers: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationSection {
    #[serde(default = "default_snr")]
    pub snr_db: f64,
    #[serde(default = "default_rate")]
    pub packet_rate_hz: f64,
    pub duration_s: f64,
    #[serde(default)]
    pub seed: u64,
}

fn default_snr() -> f64 {
    f64::INFINITY
}

fn default_rate() -> f64 {
    1000.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VisibilitySection {
    pub period_s: f64,
    pub duty: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KeyframeSection {
    pub time_s: f64,
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub tof_ns: f64,
    pub aod_deg: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSection {
    #[serde(default = "default_tag")]
    pub tag: PathTag,
    pub azimuth_deg: f64,
    pub elevation_deg: f64,
    pub tof_ns: f64,
    pub aod_deg: f64,
    #[serde(default)]
    pub gain_db: f64,
    #[serde(default)]
    pub phase_deg: f64,
    #[serde(default)]
    pub phase_jitter_rad: f64,
    pub visibility: Option<VisibilitySection>,
    #[serde(default)]
    pub keyframe: Vec<KeyframeSection>,
}

fn default_tag() -> PathTag {
    PathTag::Static
}

impl PathSection {
    pub fn to_path(&self) -> Result<ScenePath> {
        let hyp = PathHypothesis::new(
            self.azimuth_deg,
            self.elevation_deg,
            self.tof_ns * 1e-9,
            self.aod_deg,
        )?;
        let gain =
            Complex64::from_polar(db_to_amplitude(self.gain_db), self.phase_deg.to_radians());
        let mut p = ScenePath::new(hyp, gain, self.tag)?.jitter(self.phase_jitter_rad);
        if let Some(v) = &self.visibility {
            p = p.visibility(Visibility::Periodic {
                period: v.period_s,
                duty: v.duty,
                phase: v.phase,
            });
        }
        if !self.keyframe.is_empty() {
            let keys = self
                .keyframe
                .iter()
                .map(|k| {
                    Ok(Keyframe {
                        time: k.time_s,
                        hypothesis: PathHypothesis::new(
                            k.azimuth_deg,
                            k.elevation_deg,
                            k.tof_ns * 1e-9,
                            k.aod_deg,
                        )?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            p = p.motion(Trajectory::new(keys)?);
        }
        p.validate()?;
        Ok(p)
    }
}

/// A complete scene file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneFile {
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub geometry: GeometrySection,
    pub simulation: SimulationSection,
    #[serde(default)]
    pub path: Vec<PathSection>,
    /// Walkers whose body paths are added to the scene.
    #[serde(default)]
    pub persona: Vec<Persona>,
}

/// Everything needed to simulate a scene file.
#[derive(Debug, Clone)]
pub struct SceneSetup {
    pub config: ChannelConfig,
    pub geometry: ArrayGeometry,
    pub scene: Scene,
}

impl SceneFile {
    pub fn parse(text: &str) -> std::result::Result<Self, toml::de::Error> {
        toml::from_str(text)
    }

    pub fn channel_config(&self) -> Result<ChannelConfig> {
        let d = ChannelConfig::default();
        let carrier = self.channel.carrier_hz.unwrap_or(d.carrier_frequency());
        let spacing = self
            .channel
            .subcarrier_spacing_hz
            .unwrap_or(d.subcarrier_spacing());
        match self.channel.tx_spacing_m {
            Some(tx) => ChannelConfig::new(carrier, spacing, tx),
            None => ChannelConfig::with_carrier(carrier, spacing),
        }
    }

    pub fn array_geometry(&self, cfg: &ChannelConfig) -> Result<ArrayGeometry> {
        let d = ArrayGeometry::default_for(cfg);
        let g = &self.geometry;
        let n_tx = g.n_tx.unwrap_or(d.n_tx());
        let n_su = g.n_subcarriers.unwrap_or(d.n_subcarriers());
        match (&g.rx_positions_m, g.l_arm_elements) {
            (Some(_), Some(_)) => Err(Error::invalid(
                "set either rx_positions_m or l_arm_elements, not both",
            )),
            (Some(p), None) => ArrayGeometry::new(p.clone(), n_tx, n_su),
            (None, Some(n)) => ArrayGeometry::l_shaped(n, cfg.wavelength() / 2.0, n_tx, n_su),
            (None, None) => d.with_dims(n_tx, n_su),
        }
    }

    pub fn to_setup(&self) -> Result<SceneSetup> {
        let config = self.channel_config()?;
        let geometry = self.array_geometry(&config)?;
        let sim = &self.simulation;
        let mut paths = self
            .path
            .iter()
            .map(PathSection::to_path)
            .collect::<Result<Vec<_>>>()?;
        for p in &self.persona {
            paths.extend(p.body_paths(sim.duration_s)?);
        }
        let scene = Scene::new(
            paths,
            sim.snr_db,
            sim.packet_rate_hz,
            sim.duration_s,
            sim.seed,
        );
        scene.validate()?;
        Ok(SceneSetup {
            config,
            geometry,
            scene,
        })
    }
}

fn config_error(path: &Path, message: impl ToString) -> Error {
    Error::Config {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

pub fn load_scene(path: impl AsRef<Path>) -> Result<SceneSetup> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let file = SceneFile::parse(&text).map_err(|e| config_error(path, e))?;
    file.to_setup().map_err(|e| match e {
        Error::Io(_) => e,
        other => config_error(path, other),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceCountMethod {
    #[default]
    Threshold,
    Mdl,
    Fixed,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ImagingSection {
    pub window: Option<usize>,
    pub stride: Option<usize>,
    pub sanitize: Option<bool>,
    pub tof_grid_ns: Option<Vec<f64>>,
    pub aod_grid_deg: Option<Vec<f64>>,
    #[serde(default)]
    pub marginal: MarginalName,
    #[serde(default)]
    pub source_count: SourceCountMethod,
    pub threshold_factor: Option<f64>,
    pub sources: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MarginalName {
    #[default]
    Sum,
    Max,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnhanceSection {
    #[serde(default = "default_static_window")]
    pub static_window: usize,
    #[serde(default = "default_floor")]
    pub floor_db: f64,
}

fn default_static_window() -> usize {
    DEFAULT_STATIC_WINDOW
}

fn default_floor() -> f64 {
    DEFAULT_FLOOR_DB
}

impl Default for EnhanceSection {
    fn default() -> Self {
        Self {
            static_window: DEFAULT_STATIC_WINDOW,
            floor_db: DEFAULT_FLOOR_DB,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AggregateSection {
    #[serde(default = "default_frames")]
    pub frames: usize,
}

fn default_frames() -> usize {
    DEFAULT_AGGREGATE_FRAMES
}

impl Default for AggregateSection {
    fn default() -> Self {
        Self {
            frames: DEFAULT_AGGREGATE_FRAMES,
        }
    }
}

/// Processing settings shared by the command-line tool (`--config`).
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessingConfig {
    pub imaging: Option<ImagingSection>,
    #[serde(default)]
    pub enhance: EnhanceSection,
    #[serde(default)]
    pub aggregate: AggregateSection,
}

impl ProcessingConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| config_error(path, e))
    }

    pub fn imaging(&self) -> Result<ImagingConfig> {
        let mut out = ImagingConfig::default();
        let Some(s) = &self.imaging else {
            return Ok(out);
        };
        out.window_len = s.window.unwrap_or(out.window_len);
        out.stride = s.stride.unwrap_or(out.stride);
        out.sanitize = s.sanitize.unwrap_or(out.sanitize);
        if s.tof_grid_ns.is_some() || s.aod_grid_deg.is_some() {
            let tof = match &s.tof_grid_ns {
                Some(v) => v.iter().map(|t| t * 1e-9).collect(),
                None => out.grids.tof().to_vec(),
            };
            let aod = s
                .aod_grid_deg
                .clone()
                .unwrap_or_else(|| out.grids.aod().to_vec());
            out.grids = GridSpec::new(tof, aod)?;
        }
        out.marginal = match s.marginal {
            MarginalName::Sum => Marginal::Sum,
            MarginalName::Max => Marginal::Max,
        };
        out.source_count = match s.source_count {
            SourceCountMethod::Threshold => SourceCount::Threshold {
                factor: s.threshold_factor.unwrap_or(10.0),
            },
            SourceCountMethod::Mdl => SourceCount::Mdl,
            SourceCountMethod::Fixed => SourceCount::Fixed(
                s.sources
                    .ok_or_else(|| Error::invalid("source_count = \"fixed\" needs `sources`"))?,
            ),
        };
        Ok(out)
    }
}
