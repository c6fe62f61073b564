//! Synthetic CSI generator.
//!
//! Renders packet streams from a ground-truth scene of static and moving
//! reflectors. Each frame is the superposition of every path's virtual
//! steering tensor scaled by its gain at that instant, plus white complex
//! Gaussian noise. Randomness is drawn from a per-frame ChaCha stream keyed
//! by the scene seed and the frame index, so output does not depend on the
//! order or thread in which frames are rendered.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::array::{
    rx_factor, subcarrier_factor, tx_factor, ArrayGeometry, ChannelConfig, PathHypothesis,
    SPEED_OF_LIGHT,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathTag {
    Los,
    Static,
    Human,
    Secondary,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Keyframe {
    pub time: f64,
    pub hypothesis: PathHypothesis,
}

/// Piecewise-linear motion between keyframes. Outside the keyframe span the
/// nearest keyframe is held.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    keyframes: Vec<Keyframe>,
}

impl Trajectory {
    pub fn new(keyframes: Vec<Keyframe>) -> Result<Self> {
        if keyframes.is_empty() {
            return Err(Error::invalid("trajectory needs at least one keyframe"));
        }
        for w in keyframes.windows(2) {
            if !(w[1].time > w[0].time) {
                return Err(Error::invalid(format!(
                    "trajectory times must be strictly increasing ({} then {})",
                    w[0].time, w[1].time
                )));
            }
        }
        for k in &keyframes {
            k.hypothesis.validate()?;
        }
        Ok(Self { keyframes })
    }

    pub fn keyframes(&self) -> &[Keyframe] {
        &self.keyframes
    }

    pub fn at(&self, t: f64) -> PathHypothesis {
        let kf = &self.keyframes;
        if t <= kf[0].time {
            return kf[0].hypothesis;
        }
        let last = kf[kf.len() - 1];
        if t >= last.time {
            return last.hypothesis;
        }
        let i = kf.partition_point(|k| k.time <= t) - 1;
        let (a, b) = (kf[i], kf[i + 1]);
        let u = (t - a.time) / (b.time - a.time);
        let lerp = |x: f64, y: f64| x + (y - x) * u;
        PathHypothesis {
            azimuth: lerp(a.hypothesis.azimuth, b.hypothesis.azimuth),
            elevation: lerp(a.hypothesis.elevation, b.hypothesis.elevation),
            tof: lerp(a.hypothesis.tof, b.hypothesis.tof),
            aod: lerp(a.hypothesis.aod, b.hypothesis.aod),
        }
    }
}

/// On/off visibility schedule, modelling specular body parts that only
/// reflect towards the receiver for part of each gait cycle.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Visibility {
    #[default]
    Always,
    /// Visible while `frac(t / period + phase) < duty`.
    Periodic { period: f64, duty: f64, phase: f64 },
}

impl Visibility {
    pub fn factor(&self, t: f64) -> f64 {
        match *self {
            Visibility::Always => 1.0,
            Visibility::Periodic {
                period,
                duty,
                phase,
            } => {
                let cycle = (t / period + phase).rem_euclid(1.0);
                if cycle < duty {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    fn validate(&self) -> Result<()> {
        if let Visibility::Periodic { period, duty, .. } = *self {
            if !(period.is_finite() && period > 0.0) {
                return Err(Error::invalid(format!(
                    "visibility period must be > 0, got {period}"
                )));
            }
            if !(0.0..=1.0).contains(&duty) {
                return Err(Error::invalid(format!(
                    "duty must be in [0, 1], got {duty}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenePath {
    pub hypothesis: PathHypothesis,
    pub gain: Complex64,
    pub motion: Option<Trajectory>,
    pub tag: PathTag,
    pub visibility: Visibility,
    /// Half-width in radians of a uniform per-packet phase perturbation.
    /// Nonzero values decorrelate otherwise coherent paths across a window.
    pub phase_jitter: f64,
}

impl ScenePath {
    pub fn new(hypothesis: PathHypothesis, gain: Complex64, tag: PathTag) -> Result<Self> {
        let p = Self {
            hypothesis,
            gain,
            motion: None,
            tag,
            visibility: Visibility::Always,
            phase_jitter: 0.0,
        };
        p.validate()?;
        Ok(p)
    }

    /// Path with a real gain given in dB.
    pub fn with_db(hypothesis: PathHypothesis, gain_db: f64, tag: PathTag) -> Result<Self> {
        Self::new(
            hypothesis,
            Complex64::new(db_to_amplitude(gain_db), 0.0),
            tag,
        )
    }

    pub fn motion(mut self, trajectory: Trajectory) -> Self {
        self.motion = Some(trajectory);
        self
    }

    pub fn visibility(mut self, visibility: Visibility) -> Self {
        self.visibility = visibility;
        self
    }

    pub fn jitter(mut self, radians: f64) -> Self {
        self.phase_jitter = radians;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.hypothesis.validate()?;
        if !(self.gain.norm() > 0.0 && self.gain.norm().is_finite()) {
            return Err(Error::invalid("path gain magnitude must be > 0"));
        }
        if !(self.phase_jitter.is_finite() && self.phase_jitter >= 0.0) {
            return Err(Error::invalid("phase jitter must be >= 0"));
        }
        self.visibility.validate()?;
        Ok(())
    }

    pub fn hypothesis_at(&self, t: f64) -> PathHypothesis {
        match &self.motion {
            Some(m) => m.at(t),
            None => self.hypothesis,
        }
    }

    /// Gain at time `t` before per-packet jitter.
    pub fn gain_at(&self, t: f64) -> Complex64 {
        self.gain * self.visibility.factor(t)
    }
}

pub fn db_to_amplitude(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub paths: Vec<ScenePath>,
    /// Per-element SNR; `f64::INFINITY` renders noiseless frames.
    pub snr_db: f64,
    pub packet_rate: f64,
    pub duration: f64,
    pub rng_seed: u64,
}

impl Scene {
    pub fn new(
        paths: Vec<ScenePath>,
        snr_db: f64,
        packet_rate: f64,
        duration: f64,
        rng_seed: u64,
    ) -> Self {
        Self {
            paths,
            snr_db,
            packet_rate,
            duration,
            rng_seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.packet_rate.is_finite() && self.packet_rate > 0.0) {
            return Err(Error::invalid("packet_rate must be > 0"));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::invalid("duration must be > 0"));
        }
        if self.snr_db.is_nan() {
            return Err(Error::invalid("snr_db must not be NaN"));
        }
        if self.paths.iter().filter(|p| p.tag == PathTag::Los).count() > 1 {
            return Err(Error::invalid("a scene may contain at most one los path"));
        }
        for p in &self.paths {
            p.validate()?;
        }
        Ok(())
    }

    pub fn packet_count(&self) -> usize {
        ((self.duration * self.packet_rate) + 1e-9).floor().max(1.0) as usize
    }

    pub fn packet_time(&self, i: usize) -> f64 {
        i as f64 / self.packet_rate
    }

    /// Nominal per-element signal power: sum of squared path gains.
    pub fn reference_power(&self) -> f64 {
        self.paths.iter().map(|p| p.gain.norm_sqr()).sum()
    }
}

/// One packet's channel tensor, indexed `(rx, tx, subcarrier)` rx-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CsiFrame {
    pub timestamp_ns: u64,
    dims: [usize; 3],
    tensor: Vec<Complex64>,
}

impl CsiFrame {
    pub fn new(timestamp_ns: u64, dims: [usize; 3], tensor: Vec<Complex64>) -> Result<Self> {
        let n = dims.iter().product::<usize>();
        if tensor.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "frame tensor has {} values, dims {:?} need {n}",
                tensor.len(),
                dims
            )));
        }
        if tensor
            .iter()
            .any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::invalid("frame tensor values must be finite"));
        }
        Ok(Self {
            timestamp_ns,
            dims,
            tensor,
        })
    }

    /// `[n_rx, n_tx, n_subcarriers]`.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn tensor(&self) -> &[Complex64] {
        &self.tensor
    }

    #[inline]
    pub fn index(&self, rx: usize, tx: usize, sub: usize) -> usize {
        (rx * self.dims[1] + tx) * self.dims[2] + sub
    }

    pub fn get(&self, rx: usize, tx: usize, sub: usize) -> Complex64 {
        self.tensor[self.index(rx, tx, sub)]
    }

    /// Flatten into virtual-array order (tx-major, then rx, then subcarrier).
    pub fn to_virtual(&self) -> Vec<Complex64> {
        let [n_rx, n_tx, n_su] = self.dims;
        let mut out = Vec::with_capacity(self.tensor.len());
        for tx in 0..n_tx {
            for rx in 0..n_rx {
                let base = self.index(rx, tx, 0);
                out.extend_from_slice(&self.tensor[base..base + n_su]);
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsiStream {
    pub config: ChannelConfig,
    pub geometry: ArrayGeometry,
    frames: Vec<CsiFrame>,
}

impl CsiStream {
    pub fn new(
        config: ChannelConfig,
        geometry: ArrayGeometry,
        frames: Vec<CsiFrame>,
    ) -> Result<Self> {
        let dims = [geometry.n_rx(), geometry.n_tx(), geometry.n_subcarriers()];
        for (i, f) in frames.iter().enumerate() {
            if f.dims != dims {
                return Err(Error::DimensionMismatch(format!(
                    "frame {i} has dims {:?}, geometry needs {dims:?}",
                    f.dims
                )));
            }
        }
        for (i, w) in frames.windows(2).enumerate() {
            if w[1].timestamp_ns <= w[0].timestamp_ns {
                return Err(Error::invalid(format!(
                    "timestamps must be strictly increasing (frame {})",
                    i + 1
                )));
            }
        }
        Ok(Self {
            config,
            geometry,
            frames,
        })
    }

    pub fn frames(&self) -> &[CsiFrame] {
        &self.frames
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Stream restricted to the first `n_tx` transmitters and `n_subcarriers`
    /// subcarriers.
    pub fn select(&self, n_tx: usize, n_subcarriers: usize) -> Result<Self> {
        let [n_rx, full_tx, full_su] = [
            self.geometry.n_rx(),
            self.geometry.n_tx(),
            self.geometry.n_subcarriers(),
        ];
        if n_tx == 0 || n_tx > full_tx || n_subcarriers == 0 || n_subcarriers > full_su {
            return Err(Error::invalid(format!(
                "cannot select {n_tx} tx / {n_subcarriers} subcarriers from {full_tx} / {full_su}"
            )));
        }
        let geometry = self.geometry.with_dims(n_tx, n_subcarriers)?;
        let frames = self
            .frames
            .iter()
            .map(|f| {
                let mut t = Vec::with_capacity(n_rx * n_tx * n_subcarriers);
                for rx in 0..n_rx {
                    for tx in 0..n_tx {
                        let b = f.index(rx, tx, 0);
                        t.extend_from_slice(&f.tensor[b..b + n_subcarriers]);
                    }
                }
                CsiFrame {
                    timestamp_ns: f.timestamp_ns,
                    dims: [n_rx, n_tx, n_subcarriers],
                    tensor: t,
                }
            })
            .collect();
        Ok(Self {
            config: self.config,
            geometry,
            frames,
        })
    }

    /// Apply `f` to every frame, in parallel, keeping order.
    pub(crate) fn map_frames<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(usize, &CsiFrame) -> Result<CsiFrame> + Sync,
    {
        let frames = self
            .frames
            .par_iter()
            .enumerate()
            .map(|(i, fr)| f(i, fr))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            config: self.config,
            geometry: self.geometry.clone(),
            frames,
        })
    }
}

fn frame_rng(seed: u64, frame: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame as u64);
    rng
}

/// Render a scene into a CSI stream.
pub fn simulate(scene: &Scene, cfg: &ChannelConfig, geom: &ArrayGeometry) -> Result<CsiStream> {
    scene.validate()?;
    if scene.paths.is_empty() && scene.snr_db == f64::INFINITY {
        return Err(Error::DegenerateScene(
            "no paths and no noise: every frame would be identically zero".into(),
        ));
    }
    let reference = if scene.paths.is_empty() {
        1.0
    } else {
        scene.reference_power()
    };
    let noise_sigma = if scene.snr_db == f64::INFINITY {
        0.0
    } else {
        (reference / 10f64.powf(scene.snr_db / 10.0) / 2.0).sqrt()
    };
    let normal = Normal::new(0.0, 1.0).expect("unit normal");
    let (n_rx, n_tx, n_su) = (geom.n_rx(), geom.n_tx(), geom.n_subcarriers());

    let frames = (0..scene.packet_count())
        .into_par_iter()
        .map(|i| {
            let t = scene.packet_time(i);
            let mut rng = frame_rng(scene.rng_seed, i);
            let mut tensor = vec![Complex64::new(0.0, 0.0); n_rx * n_tx * n_su];
            for path in &scene.paths {
                let mut g = path.gain_at(t);
                if path.phase_jitter > 0.0 {
                    let psi = rng.random_range(-path.phase_jitter..=path.phase_jitter);
                    g *= Complex64::from_polar(1.0, psi);
                }
                if g == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let h = path.hypothesis_at(t);
                let rx = rx_factor(cfg, geom, h.azimuth, h.elevation);
                let tx = tx_factor(cfg, n_tx, h.aod);
                let sub = subcarrier_factor(cfg, n_su, h.tof);
                for (r, &a_r) in rx.iter().enumerate() {
                    for (m, &a_t) in tx.iter().enumerate() {
                        let w = g * a_t * a_r;
                        let base = (r * n_tx + m) * n_su;
                        for (v, &a_s) in tensor[base..base + n_su].iter_mut().zip(&sub) {
                            *v += w * a_s;
                        }
                    }
                }
            }
            if noise_sigma > 0.0 {
                for v in tensor.iter_mut() {
                    let re: f64 = normal.sample(&mut rng);
                    let im: f64 = normal.sample(&mut rng);
                    *v += Complex64::new(re, im) * noise_sigma;
                }
            }
            CsiFrame::new(timestamp_ns(t), [n_rx, n_tx, n_su], tensor)
        })
        .collect::<Result<Vec<_>>>()?;
    CsiStream::new(*cfg, geom.clone(), frames)
}

fn timestamp_ns(t: f64) -> u64 {
    (t * 1e9).round() as u64
}

/// Ranges for per-packet STO/PDD offsets: common phase `eta0` and
/// per-subcarrier slope `eta1`, both in radians, drawn uniformly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OffsetRanges {
    pub eta0: (f64, f64),
    pub eta1: (f64, f64),
}

impl OffsetRanges {
    pub fn for_subcarriers(n_subcarriers: usize) -> Self {
        let s = PI / n_subcarriers as f64;
        Self {
            eta0: (0.0, 2.0 * PI),
            eta1: (-s, s),
        }
    }

    pub fn zero() -> Self {
        Self {
            eta0: (0.0, 0.0),
            eta1: (0.0, 0.0),
        }
    }
}

fn draw(rng: &mut ChaCha8Rng, (lo, hi): (f64, f64)) -> f64 {
    if hi > lo {
        rng.random_range(lo..hi)
    } else {
        lo
    }
}

/// Multiply subcarrier `n` of every antenna pair by `exp(-j(eta0 + eta1 n))`.
pub fn apply_phase_offset(frame: &mut CsiFrame, eta0: f64, eta1: f64) {
    let n_su = frame.dims[2];
    let rot: Vec<Complex64> = (0..n_su)
        .map(|n| Complex64::from_polar(1.0, -(eta0 + eta1 * n as f64)))
        .collect();
    for chunk in frame.tensor.chunks_mut(n_su) {
        for (v, r) in chunk.iter_mut().zip(&rot) {
            *v *= r;
        }
    }
}

/// Inject random per-packet STO/PDD phase offsets with the default ranges.
pub fn inject_phase_offsets(stream: &CsiStream, seed: u64) -> Result<CsiStream> {
    let ranges = OffsetRanges::for_subcarriers(stream.geometry.n_subcarriers());
    inject_phase_offsets_with(stream, ranges, seed)
}

pub fn inject_phase_offsets_with(
    stream: &CsiStream,
    ranges: OffsetRanges,
    seed: u64,
) -> Result<CsiStream> {
    stream.map_frames(|i, f| {
        let mut rng = frame_rng(seed, i);
        let eta0 = draw(&mut rng, ranges.eta0);
        let eta1 = draw(&mut rng, ranges.eta1);
        let mut out = f.clone();
        if eta0 != 0.0 || eta1 != 0.0 {
            apply_phase_offset(&mut out, eta0, eta1);
        }
        Ok(out)
    })
}

/// Body-shape and gait parameters of a synthetic walker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Persona {
    pub name: String,
    /// Elevation distance between head and legs.
    pub elevation_span_deg: f64,
    /// Azimuth distance between the two arms.
    pub azimuth_span_deg: f64,
    /// Torso elevation.
    #[serde(default = "Persona::default_center_elevation")]
    pub center_elevation_deg: f64,
    #[serde(default = "Persona::default_azimuth")]
    pub start_azimuth_deg: f64,
    #[serde(default = "Persona::default_azimuth")]
    pub end_azimuth_deg: f64,
    pub gait_period_s: f64,
    /// Radial walking speed; sets the ToF ramp.
    #[serde(default = "Persona::default_speed")]
    pub walk_speed_mps: f64,
    #[serde(default = "Persona::default_tof")]
    pub start_tof_ns: f64,
    #[serde(default = "Persona::default_aod")]
    pub aod_deg: f64,
    /// Torso reflection gain.
    #[serde(default)]
    pub gain_db: f64,
    #[serde(default = "Persona::default_duration")]
    pub duration_s: f64,
    #[serde(default = "Persona::default_snr")]
    pub snr_db: f64,
    #[serde(default = "Persona::default_rate")]
    pub packet_rate_hz: f64,
    #[serde(default)]
    pub seed: u64,
    /// How far below the torso the wall bounce of the body's reflection
    /// sits; infinite disables it.
    #[serde(default = "Persona::default_secondary_gap")]
    pub secondary_gap_db: f64,
}

impl Persona {
    fn default_secondary_gap() -> f64 {
        15.0
    }
    fn default_center_elevation() -> f64 {
        95.0
    }
    fn default_azimuth() -> f64 {
        90.0
    }
    fn default_speed() -> f64 {
        1.0
    }
    fn default_tof() -> f64 {
        20.0
    }
    fn default_aod() -> f64 {
        60.0
    }
    fn default_duration() -> f64 {
        3.0
    }
    fn default_snr() -> f64 {
        25.0
    }
    fn default_rate() -> f64 {
        1000.0
    }

    pub fn new(
        name: impl Into<String>,
        elevation_span_deg: f64,
        azimuth_span_deg: f64,
        gait_period_s: f64,
    ) -> Self {
        Self {
            name: name.into(),
            elevation_span_deg,
            azimuth_span_deg,
            center_elevation_deg: Self::default_center_elevation(),
            start_azimuth_deg: Self::default_azimuth(),
            end_azimuth_deg: Self::default_azimuth(),
            gait_period_s,
            walk_speed_mps: Self::default_speed(),
            start_tof_ns: Self::default_tof(),
            aod_deg: Self::default_aod(),
            gain_db: 0.0,
            duration_s: Self::default_duration(),
            snr_db: Self::default_snr(),
            packet_rate_hz: Self::default_rate(),
            seed: 0,
            secondary_gap_db: Self::default_secondary_gap(),
        }
    }

    /// Head, torso, legs and both arms as scene paths over `duration` seconds.
    ///
    /// Head and torso are always visible. Legs reflect for the first half of
    /// each gait cycle and the arms for the second half.
    pub fn body_paths(&self, duration: f64) -> Result<Vec<ScenePath>> {
        if !(self.gait_period_s.is_finite() && self.gait_period_s > 0.0) {
            return Err(Error::invalid(format!(
                "gait period must be > 0, got {}",
                self.gait_period_s
            )));
        }
        if !(self.elevation_span_deg >= 0.0 && self.azimuth_span_deg >= 0.0) {
            return Err(Error::invalid("body spans must be >= 0"));
        }
        let tof0 = self.start_tof_ns * 1e-9;
        let tof1 = tof0 + 2.0 * self.walk_speed_mps.abs() * duration / SPEED_OF_LIGHT;
        let half_el = self.elevation_span_deg / 2.0;
        let half_az = self.azimuth_span_deg / 2.0;
        let gait = |phase: f64| Visibility::Periodic {
            period: self.gait_period_s,
            duty: 0.5,
            phase,
        };
        // (elevation offset, azimuth offset, tof offset ns, gain dB, visibility)
        let parts = [
            (-half_el, 0.0, 0.0, -2.0, Visibility::Always),
            (0.0, 0.0, 0.5, 0.0, Visibility::Always),
            (half_el, 0.0, 1.0, -1.0, gait(0.0)),
            (0.0, -half_az, 0.5, -4.0, gait(0.5)),
            (0.0, half_az, 0.5, -4.0, gait(0.5)),
        ];
        let mut paths = parts
            .iter()
            .map(|&(d_el, d_az, d_tof, g_db, vis)| {
                let at = |az: f64, tof: f64| {
                    PathHypothesis::new(
                        az + d_az,
                        self.center_elevation_deg + d_el,
                        tof + d_tof * 1e-9,
                        self.aod_deg,
                    )
                };
                let start = at(self.start_azimuth_deg, tof0)?;
                let end = at(self.end_azimuth_deg, tof1)?;
                let traj = Trajectory::new(vec![
                    Keyframe {
                        time: 0.0,
                        hypothesis: start,
                    },
                    Keyframe {
                        time: duration,
                        hypothesis: end,
                    },
                ])?;
                Ok(
                    ScenePath::with_db(start, self.gain_db + g_db, PathTag::Human)?
                        .motion(traj)
                        .visibility(vis)
                        .jitter(PI),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        // the body's reflection bounced once more off a wall on the far side
        if self.secondary_gap_db.is_finite() {
            let h = PathHypothesis::new(
                (180.0 - self.start_azimuth_deg).clamp(1.0, 180.0),
                self.center_elevation_deg,
                tof0 + 15e-9,
                self.aod_deg,
            )?;
            paths.push(
                ScenePath::with_db(h, self.gain_db - self.secondary_gap_db, PathTag::Secondary)?.jitter(PI),
            );
        }
        Ok(paths)
    }
}

/// Scene containing only the persona's body paths.
pub fn human_walk_preset(persona: &Persona) -> Result<Scene> {
    let paths = persona.body_paths(persona.duration_s)?;
    let scene = Scene::new(
        paths,
        persona.snr_db,
        persona.packet_rate_hz,
        persona.duration_s,
        persona.seed,
    );
    scene.validate()?;
    Ok(scene)
}
