//! Pixel layout onto a 2D canvas, nearest-neighbour resizing and class means.

use alloc::vec;
use alloc::vec::Vec;
use core::str::FromStr;

use crate::colorize::PixelSequence;
use crate::hilbert::{self, Rgb};
use crate::{Error, Result};

pub const DEFAULT_SIDE: usize = 64;

/// Row-major, channel-interleaved image with values in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTensor {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<f64>,
}

impl ImageTensor {
    pub fn new(width: usize, height: usize, channels: usize, data: Vec<f64>) -> Result<Self> {
        if channels != 1 && channels != 3 {
            return Err(Error::ShapeMismatch("channels must be 1 or 3"));
        }
        if data.len() != width * height * channels {
            return Err(Error::ShapeMismatch(
                "data length != width * height * channels",
            ));
        }
        if data.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::BadConfig("image values must lie in [0, 1]"));
        }
        Ok(Self {
            width,
            height,
            channels,
            data,
        })
    }

    pub fn zeros(width: usize, height: usize, channels: usize) -> Self {
        Self {
            width,
            height,
            channels,
            data: vec![0.0; width * height * channels],
        }
    }

    pub fn same_shape(&self, other: &ImageTensor) -> bool {
        self.width == other.width && self.height == other.height && self.channels == other.channels
    }

    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> &[f64] {
        let at = (row * self.width + col) * self.channels;
        &self.data[at..at + self.channels]
    }

    #[inline]
    fn pixel_mut(&mut self, row: usize, col: usize) -> &mut [f64] {
        let at = (row * self.width + col) * self.channels;
        &mut self.data[at..at + self.channels]
    }

    /// Mean of channel `c` over all pixels.
    pub fn channel_mean(&self, c: usize) -> f64 {
        let n = self.width * self.height;
        if n == 0 {
            return 0.0;
        }
        self.data.iter().skip(c).step_by(self.channels).sum::<f64>() / n as f64
    }

    /// Channel values quantized to bytes with `round(v * 255)`.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.data
            .iter()
            .map(|&v| libm::round(v.clamp(0.0, 1.0) * 255.0) as u8)
            .collect()
    }

    /// Channel-planar copy (`c, h, w` order), the network's input layout.
    pub fn to_planar(&self) -> Vec<f64> {
        let plane = self.width * self.height;
        let mut out = vec![0.0; self.data.len()];
        for (i, px) in self.data.chunks_exact(self.channels).enumerate() {
            for (c, &v) in px.iter().enumerate() {
                out[c * plane + i] = v;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum LayoutMode {
    #[default]
    Horizontal,
    Vertical,
    Hilbert,
}

impl LayoutMode {
    pub fn name(self) -> &'static str {
        match self {
            LayoutMode::Horizontal => "horizontal",
            LayoutMode::Vertical => "vertical",
            LayoutMode::Hilbert => "hilbert",
        }
    }
}

impl FromStr for LayoutMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "horizontal" => Ok(LayoutMode::Horizontal),
            "vertical" => Ok(LayoutMode::Vertical),
            "hilbert" => Ok(LayoutMode::Hilbert),
            _ => Err(Error::BadConfig("unknown layout")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LayoutSpec {
    pub mode: LayoutMode,
    pub target: usize,
}

impl LayoutSpec {
    pub fn new(mode: LayoutMode, target: usize) -> Result<Self> {
        if !matches!(target, 32 | 64 | 128) {
            return Err(Error::BadConfig("target side must be 32, 64 or 128"));
        }
        Ok(Self { mode, target })
    }
}

impl Default for LayoutSpec {
    fn default() -> Self {
        Self {
            mode: LayoutMode::Horizontal,
            target: DEFAULT_SIDE,
        }
    }
}

fn ceil_sqrt(n: usize) -> usize {
    let mut s = libm::sqrt(n as f64) as usize;
    while s * s < n {
        s += 1;
    }
    while s > 0 && (s - 1) * (s - 1) >= n {
        s -= 1;
    }
    s
}

/// Smallest `k >= 1` with `4^k >= n`.
fn hilbert_order_for(n: usize) -> u32 {
    let mut k = 1;
    while (1usize << (2 * k)) < n {
        k += 1;
    }
    k
}

/// (row, col) of pixel `i` for a canvas of the given side.
pub fn position(mode: LayoutMode, side: usize, i: usize) -> (usize, usize) {
    match mode {
        LayoutMode::Horizontal => (i / side, i % side),
        LayoutMode::Vertical => (i % side, i / side),
        LayoutMode::Hilbert => {
            let k = side.trailing_zeros();
            let (x, y) = hilbert::d2xy(k, i as u64).expect("index within canvas");
            (y as usize, x as usize)
        }
    }
}

/// Side of the square canvas `layout` allocates for `n` pixels.
pub fn canvas_side(mode: LayoutMode, n: usize) -> usize {
    match mode {
        LayoutMode::Hilbert => 1 << hilbert_order_for(n),
        _ => ceil_sqrt(n),
    }
}

/// Place pixels on a square canvas, padding the tail with black.
///
/// Horizontal fills rows, vertical fills columns, both on a
/// `ceil(sqrt(n))` side. Hilbert places pixel `d` at the `d`-th cell of the
/// smallest Hilbert grid holding all pixels (x = column, y = row).
pub fn layout(p: &PixelSequence, mode: LayoutMode) -> Result<ImageTensor> {
    if p.is_empty() {
        return Err(Error::EmptySequence);
    }
    let side = canvas_side(mode, p.len());
    let mut img = ImageTensor::zeros(side, side, 3);
    for (i, px) in p.pixels.iter().enumerate() {
        let (row, col) = position(mode, side, i);
        write_rgb(img.pixel_mut(row, col), *px);
    }
    Ok(img)
}

fn write_rgb(dst: &mut [f64], px: Rgb) {
    for (d, c) in dst.iter_mut().zip(px.channels()) {
        *d = f64::from(c) / 255.0;
    }
}

/// Nearest-neighbour resample to `target x target`; source index is
/// `floor(dst * src / target)` on each axis.
pub fn resize_nearest(img: &ImageTensor, target: usize) -> ImageTensor {
    if img.width == target && img.height == target {
        return img.clone();
    }
    let mut out = ImageTensor::zeros(target, target, img.channels);
    for row in 0..target {
        let sr = row * img.height / target;
        for col in 0..target {
            let sc = col * img.width / target;
            out.pixel_mut(row, col).copy_from_slice(img.pixel(sr, sc));
        }
    }
    out
}

/// Layout followed by resize to `spec.target`.
pub fn render(p: &PixelSequence, spec: LayoutSpec) -> Result<ImageTensor> {
    Ok(resize_nearest(&layout(p, spec.mode)?, spec.target))
}

/// Element-wise mean of same-shaped images.
pub fn mean_image(imgs: &[ImageTensor]) -> Result<ImageTensor> {
    let first = imgs.first().ok_or(Error::EmptyList)?;
    if imgs.iter().any(|im| !im.same_shape(first)) {
        return Err(Error::ShapeMismatch("mean_image inputs differ in shape"));
    }
    let mut sum = vec![0.0; first.data.len()];
    for im in imgs {
        for (s, v) in sum.iter_mut().zip(&im.data) {
            *s += v;
        }
    }
    let n = imgs.len() as f64;
    sum.iter_mut().for_each(|s| *s /= n);
    Ok(ImageTensor {
        data: sum,
        ..first.clone()
    })
}
