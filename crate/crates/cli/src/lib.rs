//! File formats, IO and experiment orchestration around `hitviz-core`.
//!
//! * [`manifest`]: `path,label` CSV manifests and raw file reads
//! * [`png_io`]: 8-bit PNG output for [`ImageTensor`](hitviz_core::imaging::ImageTensor)
//! * [`model_io`]: the `CTN1` binary model format
//! * [`transform`]: file → image pipeline configuration
//! * [`features`]: GIST / raw-byte feature extraction and the feature CSV
//! * [`corpus`]: seeded synthetic benign/malicious corpus
//! * [`experiment`]: scheme comparison, cut-point sweep, class-mean images

pub mod corpus;
pub mod error;
pub mod experiment;
pub mod features;
pub mod manifest;
pub mod model_io;
pub mod png_io;
pub mod transform;

pub use error::{Error, Result};
