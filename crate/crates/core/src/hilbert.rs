//! Hilbert space-filling curves.
//!
//! 2D: the classic iterative quadrant rotate/flip construction, cell `d` of an
//! order-`k` curve on a `2^k x 2^k` grid. Order 1 visits (0,0), (0,1), (1,1),
//! (1,0).
//!
//! 3D: Skilling's transpose construction ("Programming the Hilbert curve",
//! AIP Conf. Proc. 707, 2004). The index bits are distributed round-robin
//! over the three axes (most significant first, x gets the top bit), then the
//! transposed Gray code is decoded and the per-level reflections undone.
//! Consecutive indices map to cells at Manhattan distance 1.

use crate::{Error, Result};

pub const MAX_ORDER_2D: u32 = 16;
pub const MAX_ORDER_3D: u32 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rgb {
    pub r: u8,
    pub g: u8,
    pub b: u8,
}

impl Rgb {
    pub const BLACK: Rgb = Rgb { r: 0, g: 0, b: 0 };

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Self { r, g, b }
    }

    pub fn channels(self) -> [u8; 3] {
        [self.r, self.g, self.b]
    }
}

fn check_order(k: u32, max: u32) -> Result<()> {
    if k == 0 || k > max {
        return Err(Error::BadConfig("hilbert order out of range"));
    }
    Ok(())
}

/// Cell `(x, y)` visited at position `d` of the order-`k` curve.
pub fn d2xy(k: u32, d: u64) -> Result<(u32, u32)> {
    check_order(k, MAX_ORDER_2D)?;
    let n = 1u64 << k;
    if d >= n * n {
        return Err(Error::IndexOutOfRange { order: k, index: d });
    }
    let (mut x, mut y) = (0u64, 0u64);
    let mut t = d;
    let mut s = 1u64;
    while s < n {
        let rx = 1 & (t / 2);
        let ry = 1 & (t ^ rx);
        rotate(s, &mut x, &mut y, rx, ry);
        x += s * rx;
        y += s * ry;
        t /= 4;
        s *= 2;
    }
    Ok((x as u32, y as u32))
}

/// Position of cell `(x, y)` along the order-`k` curve.
pub fn xy2d(k: u32, x: u32, y: u32) -> Result<u64> {
    check_order(k, MAX_ORDER_2D)?;
    let n = 1u64 << k;
    let (mut x, mut y) = (x as u64, y as u64);
    if x >= n || y >= n {
        return Err(Error::CoordOutOfRange { order: k });
    }
    let mut d = 0u64;
    let mut s = n / 2;
    while s > 0 {
        let rx = u64::from(x & s > 0);
        let ry = u64::from(y & s > 0);
        d += s * s * ((3 * rx) ^ ry);
        rotate(n, &mut x, &mut y, rx, ry);
        s /= 2;
    }
    Ok(d)
}

fn rotate(n: u64, x: &mut u64, y: &mut u64, rx: u64, ry: u64) {
    if ry == 0 {
        if rx == 1 {
            *x = n - 1 - *x;
            *y = n - 1 - *y;
        }
        core::mem::swap(x, y);
    }
}

/// Cell `(x, y, z)` visited at position `d` of the order-`k` 3D curve.
pub fn hilbert3d_point(k: u32, d: u64) -> Result<(u32, u32, u32)> {
    check_order(k, MAX_ORDER_3D)?;
    if d >= 1u64 << (3 * k) {
        return Err(Error::IndexOutOfRange { order: k, index: d });
    }
    // Transpose: bit j of level i (from the top) goes to axis j.
    let mut axes = [0u32; 3];
    for level in 0..k {
        for (j, axis) in axes.iter_mut().enumerate() {
            let bit = (d >> (3 * (k - 1 - level) + (2 - j as u32))) & 1;
            *axis |= (bit as u32) << (k - 1 - level);
        }
    }

    // Gray decode.
    let t = axes[2] >> 1;
    for i in (1..3).rev() {
        axes[i] ^= axes[i - 1];
    }
    axes[0] ^= t;

    // Undo excess work.
    let top = 1u32 << k;
    let mut q = 2u32;
    while q != top {
        let p = q - 1;
        for i in (0..3).rev() {
            if axes[i] & q != 0 {
                axes[0] ^= p;
            } else {
                let t = (axes[0] ^ axes[i]) & p;
                axes[0] ^= t;
                axes[i] ^= t;
            }
        }
        q <<= 1;
    }
    Ok((axes[0], axes[1], axes[2]))
}

/// Color for byte value `v`: the `v`-th cell of the order-3 3D curve with each
/// coordinate scaled from `0..=7` to `0..=255`.
pub fn byte_to_rgb_hilbert(v: u8) -> Rgb {
    let (x, y, z) = hilbert3d_point(3, u64::from(v)).expect("order 3 covers 512 cells");
    let scale = |c: u32| libm::round(f64::from(c) * 255.0 / 7.0) as u8;
    Rgb::new(scale(x), scale(y), scale(z))
}
