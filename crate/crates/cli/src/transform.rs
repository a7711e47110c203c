//! File → image pipeline: entropy profile, color encoding, layout, resize.

use std::path::Path;

use hitviz_core::colorize::{self, Cut, LetterRanges, Scheme};
use hitviz_core::entropy::{self, EntropyParams};
use hitviz_core::imaging::{self, ImageTensor, LayoutMode, LayoutSpec};
use serde::Serialize;

use crate::manifest::read_bytes;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformConfig {
    pub scheme: Scheme,
    pub entropy: EntropyParams,
    pub layout: LayoutSpec,
}

impl Default for TransformConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::hit(Cut::Eight),
            entropy: EntropyParams::default(),
            layout: LayoutSpec::default(),
        }
    }
}

impl TransformConfig {
    pub fn with_scheme(self, scheme: Scheme) -> Self {
        Self { scheme, ..self }
    }

    pub fn snapshot(&self) -> TransformSnapshot {
        let (mode, window, stride) = match self.entropy {
            EntropyParams::Block { size } => ("block", size, size),
            EntropyParams::Sliding { window, stride } => ("sliding", window, stride),
        };
        let (cut, strict) = match self.scheme {
            Scheme::Hit { cut, letters } => (Some(cut.count()), letters == LetterRanges::Literal),
            _ => (None, false),
        };
        TransformSnapshot {
            scheme: self.scheme.to_string(),
            cut,
            strict_table: strict,
            entropy_mode: mode.into(),
            window,
            stride,
            layout: self.layout.mode.name().into(),
            size: self.layout.target,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransformSnapshot {
    pub scheme: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cut: Option<usize>,
    pub strict_table: bool,
    pub entropy_mode: String,
    pub window: usize,
    pub stride: usize,
    pub layout: String,
    pub size: usize,
}

/// Bytes to a `size x size x 3` image.
pub fn transform_bytes(bytes: &[u8], cfg: &TransformConfig) -> Result<ImageTensor> {
    let profile = if cfg.scheme.needs_entropy() {
        Some(entropy::entropy_profile(bytes, cfg.entropy)?)
    } else {
        None
    };
    let pixels = colorize::encode(bytes, cfg.scheme, profile.as_ref())?;
    Ok(imaging::render(&pixels, cfg.layout)?)
}

pub fn transform_file(path: impl AsRef<Path>, cfg: &TransformConfig) -> Result<ImageTensor> {
    transform_bytes(&read_bytes(path)?.bytes, cfg)
}

/// Full-resolution canvas without the final resize.
pub fn canvas_bytes(bytes: &[u8], cfg: &TransformConfig) -> Result<ImageTensor> {
    let profile = if cfg.scheme.needs_entropy() {
        Some(entropy::entropy_profile(bytes, cfg.entropy)?)
    } else {
        None
    };
    let pixels = colorize::encode(bytes, cfg.scheme, profile.as_ref())?;
    Ok(imaging::layout(&pixels, cfg.layout.mode)?)
}

pub fn layout_mode(s: &str) -> Result<LayoutMode> {
    Ok(s.parse()?)
}
