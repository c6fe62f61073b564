//! File formats: CSIF packet streams, spectrum images and sequences, and
//! TOML scene and processing configuration.

mod config;
mod csif;
mod spectrum;

pub use config::{
    load_scene, AggregateSection, ChannelSection, EnhanceSection, GeometrySection, ImagingSection,
    KeyframeSection, MarginalName, PathSection, ProcessingConfig, SceneFile, SceneSetup,
    SimulationSection, SourceCountMethod, VisibilitySection,
};
pub use csif::{
    assumed_geometry, decode_csif, decode_header, encode_header, header_for, read_csif,
    read_csif_with, write_csif, write_csif_to, CsifHeader, HEADER_LEN, MAGIC, VERSION,
};
pub use spectrum::{
    decode_csv, encode_csv, encode_pgm, export_spectrum, load_spectrum_csv, read_spectrum_dir,
    save_spectrum, write_spectrum_dir, ImageFormat, CSV_HEADER, INDEX_FILE,
};
