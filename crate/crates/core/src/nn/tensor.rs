use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Dense `n x c x h x w` tensor, row-major with `w` fastest.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Tensor4 {
    pub n: usize,
    pub c: usize,
    pub h: usize,
    pub w: usize,
    pub data: Vec<f64>,
}

impl Tensor4 {
    pub fn zeros(n: usize, c: usize, h: usize, w: usize) -> Self {
        Self {
            n,
            c,
            h,
            w,
            data: vec![0.0; n * c * h * w],
        }
    }

    pub fn from_vec(n: usize, c: usize, h: usize, w: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * c * h * w {
            return Err(Error::ShapeMismatch("tensor data length != n * c * h * w"));
        }
        Ok(Self { n, c, h, w, data })
    }

    pub fn shape(&self) -> [usize; 4] {
        [self.n, self.c, self.h, self.w]
    }

    /// Elements per sample.
    pub fn sample_len(&self) -> usize {
        self.c * self.h * self.w
    }

    pub fn sample(&self, i: usize) -> &[f64] {
        let len = self.sample_len();
        &self.data[i * len..(i + 1) * len]
    }

    #[inline]
    pub fn plane(&self, n: usize, c: usize) -> &[f64] {
        let len = self.h * self.w;
        let at = (n * self.c + c) * len;
        &self.data[at..at + len]
    }

    #[inline]
    pub fn plane_mut(&mut self, n: usize, c: usize) -> &mut [f64] {
        let len = self.h * self.w;
        let at = (n * self.c + c) * len;
        &mut self.data[at..at + len]
    }
}
