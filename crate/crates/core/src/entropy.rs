//! Shannon entropy of byte blocks and per-byte entropy profiles.
//!
//! Entropy is measured in bits (log base 2) and normalized by 8 = log2(256),
//! so every profile value lies in [0, 1].
//!
//! Sliding-window profiles keep a 256-bin histogram that is updated as the
//! window moves. The entropy of a window of `N` bytes with counts `c_i` is
//! `(N log2 N - sum c_i log2 c_i) / N`. The sum is kept as a fixed-point
//! integer (scale 2^40) so that adding and removing bytes never accumulates
//! rounding drift: a histogram built incrementally and one built from scratch
//! over the same bytes yield bit-identical entropies.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

pub const DEFAULT_WINDOW: usize = 64;
pub const DEFAULT_BLOCK: usize = 256;
const MAX_BITS: f64 = 8.0;
const FIXED_SCALE: f64 = (1u64 << 40) as f64;

/// How the per-byte entropy profile is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntropyParams {
    /// Non-overlapping blocks; every byte of a block gets the block entropy.
    Block { size: usize },
    /// Window of `window` bytes centred on each evaluated position. With
    /// `stride > 1` only every `stride`-th position is evaluated and the
    /// bytes up to the next evaluated position reuse its value.
    Sliding { window: usize, stride: usize },
}

impl Default for EntropyParams {
    fn default() -> Self {
        EntropyParams::Sliding {
            window: DEFAULT_WINDOW,
            stride: 1,
        }
    }
}

impl EntropyParams {
    pub fn block(size: usize) -> Result<Self> {
        let p = EntropyParams::Block { size };
        p.validate()?;
        Ok(p)
    }

    pub fn sliding(window: usize, stride: usize) -> Result<Self> {
        let p = EntropyParams::Sliding { window, stride };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            EntropyParams::Block { size: 0 } => {
                Err(Error::BadConfig("block size must be at least 1"))
            }
            EntropyParams::Sliding { window, stride } => {
                if window == 0 {
                    Err(Error::BadConfig("window must be at least 1"))
                } else if stride == 0 || stride > window {
                    Err(Error::BadConfig("stride must lie in 1..=window"))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyProfile {
    pub values: Vec<f64>,
    pub params: EntropyParams,
}

impl EntropyProfile {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Shannon entropy of `block` in bits, in [0, 8].
pub fn shannon_entropy(block: &[u8]) -> Result<f64> {
    if block.is_empty() {
        return Err(Error::EmptyBlock);
    }
    let mut counts = [0u64; 256];
    for &b in block {
        counts[b as usize] += 1;
    }
    let n = block.len() as f64;
    let mut h = 0.0;
    for &c in counts.iter().filter(|&&c| c > 0) {
        let p = c as f64 / n;
        h -= p * libm::log2(p);
    }
    // -0.0 for single-symbol blocks
    Ok(h.clamp(0.0, MAX_BITS))
}

/// `round(c * log2(c) * 2^40)` for `c` in `0..=max`.
#[derive(Debug, Clone)]
pub struct CountLogTable {
    entries: Vec<u128>,
}

impl CountLogTable {
    pub fn new(max: usize) -> Self {
        let entries = (0..=max)
            .map(|c| {
                if c < 2 {
                    0
                } else {
                    let c = c as f64;
                    libm::round(c * libm::log2(c) * FIXED_SCALE) as u128
                }
            })
            .collect();
        Self { entries }
    }

    pub fn max_count(&self) -> usize {
        self.entries.len() - 1
    }

    #[inline]
    fn get(&self, c: u32) -> u128 {
        self.entries[c as usize]
    }
}

/// Byte histogram over a window with an exactly maintained
/// `sum c log2 c` term.
#[derive(Debug, Clone)]
pub struct WindowHistogram<'t> {
    table: &'t CountLogTable,
    counts: [u32; 256],
    len: usize,
    sum_clogc: u128,
}

impl<'t> WindowHistogram<'t> {
    pub fn new(table: &'t CountLogTable) -> Self {
        Self {
            table,
            counts: [0; 256],
            len: 0,
            sum_clogc: 0,
        }
    }

    pub fn from_slice(table: &'t CountLogTable, bytes: &[u8]) -> Self {
        let mut h = Self::new(table);
        for &b in bytes {
            h.counts[b as usize] += 1;
        }
        h.len = bytes.len();
        h.sum_clogc = h.counts.iter().map(|&c| table.get(c)).sum();
        h
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Panics if the window would exceed the table's maximum count.
    #[inline]
    pub fn add(&mut self, b: u8) {
        let c = &mut self.counts[b as usize];
        self.sum_clogc = self.sum_clogc - self.table.get(*c) + self.table.get(*c + 1);
        *c += 1;
        self.len += 1;
    }

    /// Panics if `b` is not in the window.
    #[inline]
    pub fn remove(&mut self, b: u8) {
        let c = &mut self.counts[b as usize];
        assert!(*c > 0, "removing byte {b:#04x} that is not in the window");
        self.sum_clogc = self.sum_clogc - self.table.get(*c) + self.table.get(*c - 1);
        *c -= 1;
        self.len -= 1;
    }

    /// Entropy of the current window in bits; 0 for an empty window.
    pub fn entropy_bits(&self) -> f64 {
        if self.len == 0 {
            return 0.0;
        }
        let total = self.table.get(self.len as u32);
        let diff = total.saturating_sub(self.sum_clogc) as f64;
        (diff / FIXED_SCALE / self.len as f64).clamp(0.0, MAX_BITS)
    }
}

/// Bounds `[start, end)` of the window centred on `i`, intersected with
/// `[0, n)`. The window nominally spans `i - window/2 .. i - window/2 + window`.
pub fn window_bounds(i: usize, window: usize, n: usize) -> (usize, usize) {
    let half = window / 2;
    let start = i.saturating_sub(half);
    let end = (i + window - half).min(n);
    (start, end)
}

/// Per-byte normalized entropy of `bytes`.
pub fn entropy_profile(bytes: &[u8], params: EntropyParams) -> Result<EntropyProfile> {
    if bytes.is_empty() {
        return Err(Error::EmptyStream);
    }
    params.validate()?;
    let values = match params {
        EntropyParams::Block { size } => block_profile(bytes, size),
        EntropyParams::Sliding { window, stride } => sliding_profile(bytes, window, stride),
    };
    Ok(EntropyProfile { values, params })
}

fn block_profile(bytes: &[u8], size: usize) -> Vec<f64> {
    let mut values = Vec::with_capacity(bytes.len());
    for block in bytes.chunks(size) {
        // chunks never yields an empty block
        let h = shannon_entropy(block).unwrap_or(0.0) / MAX_BITS;
        values.extend(core::iter::repeat_n(h, block.len()));
    }
    values
}

fn sliding_profile(bytes: &[u8], window: usize, stride: usize) -> Vec<f64> {
    let n = bytes.len();
    let table = CountLogTable::new(window.min(n));
    let mut hist = WindowHistogram::new(&table);
    let (mut lo, mut hi) = (0usize, 0usize);
    let mut values = vec![0.0; n];
    let mut i = 0;
    while i < n {
        let (start, end) = window_bounds(i, window, n);
        // start never passes the previous end because stride <= window
        while lo < start {
            hist.remove(bytes[lo]);
            lo += 1;
        }
        while hi < end {
            hist.add(bytes[hi]);
            hi += 1;
        }
        let h = hist.entropy_bits() / MAX_BITS;
        let stop = (i + stride).min(n);
        values[i..stop].fill(h);
        i = stop;
    }
    values
}
