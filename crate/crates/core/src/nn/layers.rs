//! Layer kernels. Convolutions are stride 1 cross-correlations with zero
//! padding; kernels are laid out `out_c x in_c x k x k`.

use alloc::vec;
use alloc::vec::Vec;

use super::tensor::Tensor4;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvShape {
    pub in_c: usize,
    pub out_c: usize,
    pub k: usize,
    pub pad: usize,
}

impl ConvShape {
    pub fn kernel_len(&self) -> usize {
        self.out_c * self.in_c * self.k * self.k
    }

    fn out_dims(&self, h: usize, w: usize) -> Result<(usize, usize)> {
        let oh = (h + 2 * self.pad).checked_sub(self.k).map(|v| v + 1);
        let ow = (w + 2 * self.pad).checked_sub(self.k).map(|v| v + 1);
        match (oh, ow) {
            (Some(oh), Some(ow)) if oh > 0 && ow > 0 => Ok((oh, ow)),
            _ => Err(Error::ShapeMismatch("kernel larger than padded input")),
        }
    }

    fn check(&self, x: &Tensor4, kernels: &[f64]) -> Result<(usize, usize)> {
        if x.c != self.in_c {
            return Err(Error::ShapeMismatch("conv input channels"));
        }
        if kernels.len() != self.kernel_len() {
            return Err(Error::ShapeMismatch("conv kernel length"));
        }
        self.out_dims(x.h, x.w)
    }
}

/// Output positions `o` along one axis whose input `o + kk - pad` is in
/// bounds, as `(o_start, o_end, i_start)`.
#[inline]
fn valid_span(kk: usize, pad: usize, in_len: usize, out_len: usize) -> (usize, usize, usize) {
    let o0 = pad.saturating_sub(kk);
    let o1 = (in_len + pad).saturating_sub(kk).min(out_len);
    (o0, o1.max(o0), o0 + kk - pad)
}

pub fn conv2d_forward(x: &Tensor4, kernels: &[f64], bias: &[f64], s: ConvShape) -> Result<Tensor4> {
    let (oh, ow) = s.check(x, kernels)?;
    if bias.len() != s.out_c {
        return Err(Error::ShapeMismatch("conv bias length"));
    }
    let (h, w, k) = (x.h, x.w, s.k);
    let mut out = Tensor4::zeros(x.n, s.out_c, oh, ow);
    for n in 0..x.n {
        for oc in 0..s.out_c {
            let plane = out.plane_mut(n, oc);
            plane.fill(bias[oc]);
            for ic in 0..s.in_c {
                let input = x.plane(n, ic);
                let kern = &kernels[(oc * s.in_c + ic) * k * k..][..k * k];
                for ky in 0..k {
                    let (oy0, oy1, iy0) = valid_span(ky, s.pad, h, oh);
                    for kx in 0..k {
                        let wgt = kern[ky * k + kx];
                        let (ox0, ox1, ix0) = valid_span(kx, s.pad, w, ow);
                        let len = ox1 - ox0;
                        for (r, oy) in (oy0..oy1).enumerate() {
                            let src = &input[(iy0 + r) * w + ix0..][..len];
                            let dst = &mut plane[oy * ow + ox0..][..len];
                            for (d, &v) in dst.iter_mut().zip(src) {
                                *d += wgt * v;
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvGrads {
    pub input: Tensor4,
    pub kernels: Vec<f64>,
    pub bias: Vec<f64>,
}

/// Gradients of a scalar loss through [`conv2d_forward`], given the upstream
/// gradient `dout` with respect to the convolution output.
pub fn conv2d_backward(
    x: &Tensor4,
    kernels: &[f64],
    s: ConvShape,
    dout: &Tensor4,
) -> Result<ConvGrads> {
    let (oh, ow) = s.check(x, kernels)?;
    if dout.shape() != [x.n, s.out_c, oh, ow] {
        return Err(Error::ShapeMismatch("conv upstream gradient shape"));
    }
    let (h, w, k) = (x.h, x.w, s.k);
    let mut dx = Tensor4::zeros(x.n, x.c, h, w);
    let mut dk = vec![0.0; kernels.len()];
    let mut db = vec![0.0; s.out_c];
    #[allow(clippy::needless_range_loop)]
    for n in 0..x.n {
        for oc in 0..s.out_c {
            let g = dout.plane(n, oc);
            db[oc] += g.iter().sum::<f64>();
            for ic in 0..s.in_c {
                let input = x.plane(n, ic);
                let base = (oc * s.in_c + ic) * k * k;
                for ky in 0..k {
                    let (oy0, oy1, iy0) = valid_span(ky, s.pad, h, oh);
                    for kx in 0..k {
                        let wgt = kernels[base + ky * k + kx];
                        let (ox0, ox1, ix0) = valid_span(kx, s.pad, w, ow);
                        let len = ox1 - ox0;
                        let mut acc = 0.0;
                        let dxp = dx.plane_mut(n, ic);
                        for (r, oy) in (oy0..oy1).enumerate() {
                            let grow = &g[oy * ow + ox0..][..len];
                            let at = (iy0 + r) * w + ix0;
                            let irow = &input[at..][..len];
                            acc += grow.iter().zip(irow).map(|(a, b)| a * b).sum::<f64>();
                            for (d, &gv) in dxp[at..at + len].iter_mut().zip(grow) {
                                *d += wgt * gv;
                            }
                        }
                        dk[base + ky * k + kx] += acc;
                    }
                }
            }
        }
    }
    Ok(ConvGrads {
        input: dx,
        kernels: dk,
        bias: db,
    })
}

/// 2x2 stride-2 max pooling. Returns the pooled tensor and, per output
/// element, the flat input index that won (first in row-major window order
/// on ties).
pub fn maxpool2_forward(x: &Tensor4) -> Result<(Tensor4, Vec<usize>)> {
    if !x.h.is_multiple_of(2) || !x.w.is_multiple_of(2) {
        return Err(Error::OddSpatialDim { h: x.h, w: x.w });
    }
    let (oh, ow) = (x.h / 2, x.w / 2);
    let mut out = Tensor4::zeros(x.n, x.c, oh, ow);
    let mut argmax = Vec::with_capacity(out.data.len());
    let mut o = 0;
    for plane in 0..x.n * x.c {
        let base = plane * x.h * x.w;
        for oy in 0..oh {
            for ox in 0..ow {
                let mut best = base + 2 * oy * x.w + 2 * ox;
                for (dy, dx) in [(0, 1), (1, 0), (1, 1)] {
                    let i = base + (2 * oy + dy) * x.w + 2 * ox + dx;
                    if x.data[i] > x.data[best] {
                        best = i;
                    }
                }
                out.data[o] = x.data[best];
                argmax.push(best);
                o += 1;
            }
        }
    }
    Ok((out, argmax))
}

pub fn maxpool2_backward(
    input_shape: [usize; 4],
    argmax: &[usize],
    dout: &Tensor4,
) -> Result<Tensor4> {
    if argmax.len() != dout.data.len() {
        return Err(Error::ShapeMismatch("pool upstream gradient length"));
    }
    let [n, c, h, w] = input_shape;
    let mut dx = Tensor4::zeros(n, c, h, w);
    for (&i, &g) in argmax.iter().zip(&dout.data) {
        dx.data[i] += g;
    }
    Ok(dx)
}

pub fn relu_forward(x: &Tensor4) -> Tensor4 {
    let mut out = x.clone();
    out.data.iter_mut().for_each(|v| *v = v.max(0.0));
    out
}

/// Gradient through ReLU given its input `x`; the subgradient at 0 is 0.
pub fn relu_backward(x: &Tensor4, dout: &Tensor4) -> Tensor4 {
    let mut dx = dout.clone();
    for (d, &v) in dx.data.iter_mut().zip(&x.data) {
        if v <= 0.0 {
            *d = 0.0;
        }
    }
    dx
}

/// `W x + b` for one sample; `weights` is `out x in` row-major.
pub fn dense_forward(x: &[f64], weights: &[f64], bias: &[f64]) -> Result<Vec<f64>> {
    if bias.is_empty() || weights.len() != bias.len() * x.len() {
        return Err(Error::ShapeMismatch("dense weight shape"));
    }
    Ok(weights
        .chunks_exact(x.len())
        .zip(bias)
        .map(|(row, b)| b + row.iter().zip(x).map(|(w, v)| w * v).sum::<f64>())
        .collect())
}

/// Accumulates `dW += dout x^T` and `db += dout` into `dw`/`db`, returns `dx`.
pub fn dense_backward(
    x: &[f64],
    weights: &[f64],
    dout: &[f64],
    dw: &mut [f64],
    db: &mut [f64],
) -> Result<Vec<f64>> {
    let out = dout.len();
    if weights.len() != out * x.len() || dw.len() != weights.len() || db.len() != out {
        return Err(Error::ShapeMismatch("dense gradient shape"));
    }
    let mut dx = vec![0.0; x.len()];
    for (o, &g) in dout.iter().enumerate() {
        db[o] += g;
        let row = &weights[o * x.len()..][..x.len()];
        let drow = &mut dw[o * x.len()..][..x.len()];
        for ((d, &v), (dxi, &wv)) in drow.iter_mut().zip(x).zip(dx.iter_mut().zip(row)) {
            *d += g * v;
            *dxi += g * wv;
        }
    }
    Ok(dx)
}

/// `-log softmax(logits)[label]` and its gradient `softmax - onehot`.
pub fn softmax_xent(logits: &[f64], label: usize) -> Result<(f64, Vec<f64>)> {
    if label >= logits.len() {
        return Err(Error::ShapeMismatch("label outside logits"));
    }
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = logits.iter().map(|&z| libm::exp(z - max)).collect();
    let sum: f64 = exps.iter().sum();
    let loss = libm::log(sum) - (logits[label] - max);
    let mut grad: Vec<f64> = exps.iter().map(|e| e / sum).collect();
    grad[label] -= 1.0;
    Ok((loss, grad))
}

pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}
