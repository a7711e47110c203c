//! `CTN1` model files.
//!
//! ```text
//! "CTN1"
//! u32 LE x 7: in_channels, side, kernel, width1, width2, width3, classes
//! f32 LE x param_count: conv1 kernels, conv1 bias, conv2 kernels,
//!                       conv2 bias, conv3 kernels, conv3 bias,
//!                       fc weights, fc bias
//! ```
//!
//! Nothing follows the parameters.
//!
//! Linear SVMs are stored as JSON: `{"weights": [...], "bias": b}`.

use std::fs;
use std::path::Path;

use hitviz_core::baselines::{SvmHyper, SvmModel};
use hitviz_core::nn::{CtnArch, CtnModel};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"CTN1";
const HEADER_FIELDS: usize = 7;

pub fn encode_model(m: &CtnModel) -> Vec<u8> {
    let a = &m.arch;
    let mut out = Vec::with_capacity(4 + 4 * HEADER_FIELDS + 4 * m.params.len());
    out.extend_from_slice(MAGIC);
    for v in [
        a.in_channels,
        a.side,
        a.kernel,
        a.widths[0],
        a.widths[1],
        a.widths[2],
        a.classes,
    ] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for p in &m.params {
        out.extend_from_slice(&p.to_le_bytes());
    }
    out
}

pub fn decode_model(bytes: &[u8]) -> Result<CtnModel> {
    if bytes.len() < MAGIC.len() {
        return Err(Error::ShapeHeaderMismatch(
            "file shorter than the magic".into(),
        ));
    }
    if &bytes[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    let header_end = 4 + 4 * HEADER_FIELDS;
    if bytes.len() < header_end {
        return Err(Error::ShapeHeaderMismatch(
            "truncated architecture header".into(),
        ));
    }
    let dims: Vec<usize> = bytes[4..header_end]
        .chunks_exact(4)
        .map(|c| u32::from_le_bytes(c.try_into().unwrap()) as usize)
        .collect();
    let arch = CtnArch {
        in_channels: dims[0],
        side: dims[1],
        kernel: dims[2],
        widths: [dims[3], dims[4], dims[5]],
        classes: dims[6],
    };
    arch.validate()
        .map_err(|e| Error::ShapeHeaderMismatch(format!("invalid architecture: {e}")))?;
    let body = &bytes[header_end..];
    let expected = 4 * arch.param_count();
    if body.len() != expected {
        return Err(Error::ShapeHeaderMismatch(format!(
            "header implies {expected} parameter bytes, file has {}",
            body.len()
        )));
    }
    let params = body
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(CtnModel::from_params(arch, params)?)
}

pub fn save_model(m: &CtnModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, encode_model(m)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<CtnModel> {
    let path = path.as_ref();
    decode_model(&fs::read(path).map_err(|e| Error::io(path, e))?)
}

#[derive(Serialize, Deserialize)]
struct SvmFile {
    weights: Vec<f64>,
    bias: f64,
}

pub fn save_svm(m: &SvmModel, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let json = serde_json::to_string(&SvmFile {
        weights: m.weights.clone(),
        bias: m.bias,
    })?;
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

/// Training hyperparameters are not stored; the result carries the defaults.
pub fn load_svm(path: impl AsRef<Path>) -> Result<SvmModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let f: SvmFile = serde_json::from_str(&text)?;
    Ok(SvmModel {
        weights: f.weights,
        bias: f.bias,
        hyper: SvmHyper::default(),
    })
}
