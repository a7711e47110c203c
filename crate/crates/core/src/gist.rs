//! GIST descriptors: grid-averaged Gabor response magnitudes.
//!
//! Each filter is a complex Gabor with an isotropic Gaussian envelope,
//! corrected to zero mean Morlet-style:
//!
//! ```text
//! h(x, y) = G(x) G(y) (exp(i (u x + v y)) - kappa)
//! ```
//!
//! `(u, v) = 2 pi f (cos theta, sin theta)` with `x` along columns and `y`
//! along rows, and `kappa` chosen so the truncated kernel sums to exactly
//! zero. Both terms factor into a row kernel times a column kernel, so the
//! filter is applied as two separable passes. The envelope width gives a
//! one-octave frequency bandwidth: `sigma = 0.5622 / f`, truncated at
//! `min(ceil(3 sigma), size / 2)`.
//!
//! Scale `s` is centred at `0.25 / 2^s` cycles/pixel; orientation `o` at
//! `o * pi / orientations`. Borders use reflect padding (`-1 -> 1`).

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::imaging::ImageTensor;
use crate::{Error, Result};

pub const DEFAULT_SCALES: usize = 4;
pub const DEFAULT_ORIENTATIONS: usize = 8;
pub const DEFAULT_GRID: usize = 4;
const BASE_FREQUENCY: f64 = 0.25;
const SIGMA_TIMES_FREQ: f64 = 0.562_25;

#[derive(Debug, Clone, Copy, PartialEq)]
struct C64 {
    re: f64,
    im: f64,
}

impl C64 {
    const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

    fn mul(self, o: C64) -> C64 {
        C64 {
            re: self.re * o.re - self.im * o.im,
            im: self.re * o.im + self.im * o.re,
        }
    }

    fn scale(self, s: f64) -> C64 {
        C64 {
            re: self.re * s,
            im: self.im * s,
        }
    }

    fn add(self, o: C64) -> C64 {
        C64 {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }

    fn abs(self) -> f64 {
        libm::hypot(self.re, self.im)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaborFilter {
    pub scale: usize,
    pub orientation: usize,
    /// Centre frequency in cycles/pixel.
    pub frequency: f64,
    /// Wave-vector angle in radians.
    pub theta: f64,
    pub sigma: f64,
    pub radius: usize,
    envelope: Vec<f64>,
    wave_x: Vec<C64>,
    wave_y: Vec<C64>,
    kappa: C64,
}

impl GaborFilter {
    fn new(scale: usize, orientation: usize, orientations: usize, size: usize) -> Self {
        let frequency = BASE_FREQUENCY / (1u64 << scale) as f64;
        let theta = orientation as f64 * PI / orientations as f64;
        let sigma = SIGMA_TIMES_FREQ / frequency;
        let radius = (libm::ceil(3.0 * sigma) as usize).min(size / 2).max(1);
        let taps = || (0..=2 * radius).map(|t| t as f64 - radius as f64);

        let raw: Vec<f64> = taps()
            .map(|t| libm::exp(-t * t / (2.0 * sigma * sigma)))
            .collect();
        let norm: f64 = raw.iter().sum();
        let envelope: Vec<f64> = raw.iter().map(|g| g / norm).collect();

        let (u, v) = (
            2.0 * PI * frequency * libm::cos(theta),
            2.0 * PI * frequency * libm::sin(theta),
        );
        let wave = |k: f64| -> Vec<C64> {
            taps()
                .zip(&envelope)
                .map(|(t, &g)| C64 {
                    re: g * libm::cos(k * t),
                    im: g * libm::sin(k * t),
                })
                .collect()
        };
        let wave_x = wave(u);
        let wave_y = wave(v);
        // envelope sums to 1 per axis, so kappa is the product of the wave sums
        let sum = |w: &[C64]| w.iter().fold(C64::ZERO, |a, &b| a.add(b));
        let kappa = sum(&wave_x).mul(sum(&wave_y));
        Self {
            scale,
            orientation,
            frequency,
            theta,
            sigma,
            radius,
            envelope,
            wave_x,
            wave_y,
            kappa,
        }
    }

    /// Dense `(2r+1) x (2r+1)` kernel as `(re, im)` pairs, row-major with
    /// rows along `y`.
    pub fn kernel(&self) -> Vec<(f64, f64)> {
        let n = 2 * self.radius + 1;
        let mut out = Vec::with_capacity(n * n);
        for y in 0..n {
            for x in 0..n {
                let a = self.wave_y[y].mul(self.wave_x[x]);
                let b = self.kappa.scale(self.envelope[y] * self.envelope[x]);
                out.push((a.re - b.re, a.im - b.im));
            }
        }
        out
    }

    /// Response magnitude at every pixel of a `side x side` real image.
    pub fn response_magnitude(&self, plane: &[f64], side: usize) -> Vec<f64> {
        let wave = correlate_separable(plane, side, &self.wave_x, &self.wave_y);
        let env: Vec<C64> = self
            .envelope
            .iter()
            .map(|&g| C64 { re: g, im: 0.0 })
            .collect();
        let smooth = correlate_separable(plane, side, &env, &env);
        wave.iter()
            .zip(&smooth)
            .map(|(&a, &b)| a.add(self.kappa.mul(b).scale(-1.0)).abs())
            .collect()
    }
}

/// Reflect `i` into `[0, n)` without repeating the edge sample.
pub fn reflect_index(i: isize, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as isize - 1);
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - m) as usize
    }
}

/// Rows with `kx`, then columns with `ky`; kernels centred at index `r`.
fn correlate_separable(plane: &[f64], side: usize, kx: &[C64], ky: &[C64]) -> Vec<C64> {
    let r = (kx.len() / 2) as isize;
    let offsets: Vec<Vec<usize>> = (0..side as isize)
        .map(|p| (-r..=r).map(|t| reflect_index(p + t, side)).collect())
        .collect();
    let mut rows = vec![C64::ZERO; side * side];
    for y in 0..side {
        let src = &plane[y * side..(y + 1) * side];
        for x in 0..side {
            let mut acc = C64::ZERO;
            for (k, &ix) in kx.iter().zip(&offsets[x]) {
                acc = acc.add(k.scale(src[ix]));
            }
            rows[y * side + x] = acc;
        }
    }
    let mut out = vec![C64::ZERO; side * side];
    for y in 0..side {
        for x in 0..side {
            let mut acc = C64::ZERO;
            for (k, &iy) in ky.iter().zip(&offsets[y]) {
                acc = acc.add(k.mul(rows[iy * side + x]));
            }
            out[y * side + x] = acc;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaborBank {
    pub size: usize,
    pub scales: usize,
    pub orientations: usize,
    pub filters: Vec<GaborFilter>,
}

/// Filters ordered scale-major, then orientation.
pub fn build_gabor_bank(scales: usize, orientations: usize, size: usize) -> Result<GaborBank> {
    if scales == 0 || orientations == 0 || size < 2 {
        return Err(Error::BadConfig(
            "scales, orientations >= 1 and size >= 2 required",
        ));
    }
    if scales > 16 {
        return Err(Error::BadConfig("at most 16 scales"));
    }
    let filters = (0..scales)
        .flat_map(|s| (0..orientations).map(move |o| (s, o)))
        .map(|(s, o)| GaborFilter::new(s, o, orientations, size))
        .collect();
    Ok(GaborBank {
        size,
        scales,
        orientations,
        filters,
    })
}

impl GaborBank {
    pub fn default_for(size: usize) -> Result<Self> {
        build_gabor_bank(DEFAULT_SCALES, DEFAULT_ORIENTATIONS, size)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GistDescriptor {
    pub values: Vec<f64>,
}

/// Rec.601 luminance of an RGB image, or the single channel as is.
pub fn luminance(img: &ImageTensor) -> Vec<f64> {
    if img.channels == 1 {
        return img.data.clone();
    }
    img.data
        .chunks_exact(img.channels)
        .map(|p| 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2])
        .collect()
}

/// Per filter, the mean response magnitude over each cell of a
/// `grid x grid` partition; filter-major, then cells row-major.
pub fn gist_descriptor(img: &ImageTensor, bank: &GaborBank, grid: usize) -> Result<GistDescriptor> {
    if img.width != img.height || img.width != bank.size {
        return Err(Error::ShapeMismatch(
            "image must be square with the bank's size",
        ));
    }
    if grid == 0 || grid > bank.size {
        return Err(Error::BadConfig("grid must lie in 1..=size"));
    }
    let side = bank.size;
    let plane = luminance(img);
    let bounds: Vec<usize> = (0..=grid).map(|g| g * side / grid).collect();
    let mut values = Vec::with_capacity(bank.filters.len() * grid * grid);
    for f in &bank.filters {
        let mag = f.response_magnitude(&plane, side);
        for gy in 0..grid {
            for gx in 0..grid {
                let (y0, y1, x0, x1) = (bounds[gy], bounds[gy + 1], bounds[gx], bounds[gx + 1]);
                let mut sum = 0.0;
                for y in y0..y1 {
                    sum += mag[y * side + x0..y * side + x1].iter().sum::<f64>();
                }
                values.push(sum / ((y1 - y0) * (x1 - x0)) as f64);
            }
        }
    }
    Ok(GistDescriptor { values })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bank_cardinality_and_frequencies() {
        let bank = build_gabor_bank(4, 8, 64).unwrap();
        assert_eq!(bank.filters.len(), 32);
        let f: Vec<f64> = bank
            .filters
            .iter()
            .step_by(8)
            .map(|f| f.frequency)
            .collect();
        assert_eq!(f, [0.25, 0.125, 0.0625, 0.03125]);
        assert!(bank.filters.iter().all(|f| f.theta >= 0.0 && f.theta < PI));
        assert!(build_gabor_bank(0, 8, 64).is_err());
        assert!(build_gabor_bank(4, 0, 64).is_err());
    }

    #[test]
    fn kernels_are_zero_mean() {
        let bank = build_gabor_bank(4, 8, 64).unwrap();
        for f in &bank.filters {
            let k = f.kernel();
            let n = k.len() as f64;
            let (re, im) = k.iter().fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
            assert!((re / n).abs() < 1e-6 && (im / n).abs() < 1e-6);
        }
    }

    #[test]
    fn reflect_indices() {
        let got: Vec<usize> = (-3..8).map(|i| reflect_index(i, 4)).collect();
        assert_eq!(got, [3, 2, 1, 0, 1, 2, 3, 2, 1, 0, 1]);
        assert_eq!(reflect_index(-5, 1), 0);
    }

    #[test]
    fn constant_image_gives_zero_descriptor() {
        let bank = GaborBank::default_for(32).unwrap();
        let img = ImageTensor::new(32, 32, 3, vec![0.6; 32 * 32 * 3]).unwrap();
        let d = gist_descriptor(&img, &bank, 4).unwrap();
        assert_eq!(d.values.len(), 512);
        assert!(d.values.iter().all(|v| v.abs() < 1e-6));
    }

    #[test]
    fn shape_checks() {
        let bank = GaborBank::default_for(32).unwrap();
        assert!(gist_descriptor(&ImageTensor::zeros(16, 16, 1), &bank, 4).is_err());
        assert!(gist_descriptor(&ImageTensor::zeros(32, 16, 1), &bank, 4).is_err());
        assert!(gist_descriptor(&ImageTensor::zeros(32, 32, 1), &bank, 0).is_err());
    }
}
