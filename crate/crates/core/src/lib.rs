//! 2D imaging from WiFi channel state information.
//!
//! Turns multi-antenna MIMO-OFDM channel state information into 2D
//! angle-of-arrival images, isolates a moving person from the static
//! background, aggregates specular body parts across frames and evaluates
//! re-identification with rank-k / CMC metrics. A synthetic multipath
//! simulator provides ground truth for every stage.
//!
//! ```no_run
//! use wivi::prelude::*;
//!
//! let cfg = ChannelConfig::default();
//! let geom = ArrayGeometry::default_for(&cfg);
//! let hyp = PathHypothesis::new(60.0, 45.0, 10e-9, 80.0)?;
//! let path = ScenePath::with_db(hyp, 0.0, PathTag::Los)?;
//! let scene = Scene::new(vec![path], 20.0, 1000.0, 0.1, 7);
//! let stream = simulate(&scene, &cfg, &geom)?;
//! let images = image_stream(&stream, &ImagingConfig::default())?;
//! assert_eq!(images[0].argmax(), (59, 44));
//! # Ok::<(), wivi::Error>(())
//! ```

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod array;
pub mod cli;
mod error;
pub mod io;
pub mod music;
pub mod presets;
pub mod reid;
pub mod sanitize;
pub mod sim;
pub mod vision;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::array::{
        virtual_steering_vector, ArrayGeometry, ChannelConfig, PathHypothesis, SteeringVector,
    };
    pub use crate::music::{
        detect_peaks, image_stream, GridSpec, ImagingConfig, Marginal, Peak, SourceCount,
        Spectrum2D,
    };
    pub use crate::reid::{cmc, extract_features, rank, CmcCurve, FeatureVector, RankingResult};
    pub use crate::sanitize::sanitize;
    pub use crate::sim::{
        human_walk_preset, inject_phase_offsets, simulate, CsiFrame, CsiStream, PathTag, Persona,
        Scene, ScenePath,
    };
    pub use crate::vision::{aggregate, enhance, static_estimate, SpectrumTrack};
}
