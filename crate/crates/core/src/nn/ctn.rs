//! The CTN classifier: three 3x3 convolutions, two 2x2 max-pools, one dense
//! layer.
//!
//! ```text
//! input c x S x S
//!   conv1 -> relu -> pool      w1 x S/2 x S/2
//!   conv2 -> relu -> pool      w2 x S/4 x S/4
//!   conv3 -> relu              w3 x S/4 x S/4
//!   flatten -> dense           classes
//! ```
//!
//! Parameters live in one flat vector in the order conv1 kernels, conv1 bias,
//! conv2 kernels, conv2 bias, conv3 kernels, conv3 bias, fc weights, fc bias.
//! The model file stores them in the same order.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use rand::Rng as _;

use super::layers::{self, ConvShape};
use super::tensor::Tensor4;
use crate::{rng, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CtnArch {
    pub in_channels: usize,
    pub side: usize,
    pub kernel: usize,
    pub widths: [usize; 3],
    pub classes: usize,
}

impl Default for CtnArch {
    /// 3 x 64 x 64 input, 16/32/64 filters, 2 classes.
    fn default() -> Self {
        Self {
            in_channels: 3,
            side: 64,
            kernel: 3,
            widths: [16, 32, 64],
            classes: 2,
        }
    }
}

/// Index ranges of each parameter tensor inside the flat vector.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParamLayout {
    pub conv_kernels: [Range<usize>; 3],
    pub conv_bias: [Range<usize>; 3],
    pub fc_weights: Range<usize>,
    pub fc_bias: Range<usize>,
}

impl CtnArch {
    pub fn with_side(side: usize) -> Self {
        Self {
            side,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.side == 0 || !self.side.is_multiple_of(4) {
            return Err(Error::BadConfig(
                "input side must be a positive multiple of 4",
            ));
        }
        if self.kernel.is_multiple_of(2) {
            return Err(Error::BadConfig("kernel size must be odd"));
        }
        if self.in_channels == 0 || self.classes < 2 || self.widths.contains(&0) {
            return Err(Error::BadConfig(
                "channel counts must be positive, classes >= 2",
            ));
        }
        Ok(())
    }

    pub fn conv_shape(&self, i: usize) -> ConvShape {
        let in_c = if i == 0 {
            self.in_channels
        } else {
            self.widths[i - 1]
        };
        ConvShape {
            in_c,
            out_c: self.widths[i],
            k: self.kernel,
            pad: self.kernel / 2,
        }
    }

    pub fn fc_inputs(&self) -> usize {
        let s = self.side / 4;
        self.widths[2] * s * s
    }

    pub fn input_len(&self) -> usize {
        self.in_channels * self.side * self.side
    }

    pub fn layout(&self) -> ParamLayout {
        let mut at = 0;
        let mut take = |len: usize| {
            let r = at..at + len;
            at += len;
            r
        };
        let mut kernels: [Range<usize>; 3] = Default::default();
        let mut bias: [Range<usize>; 3] = Default::default();
        for i in 0..3 {
            let s = self.conv_shape(i);
            kernels[i] = take(s.kernel_len());
            bias[i] = take(s.out_c);
        }
        let fc_weights = take(self.classes * self.fc_inputs());
        let fc_bias = take(self.classes);
        ParamLayout {
            conv_kernels: kernels,
            conv_bias: bias,
            fc_weights,
            fc_bias,
        }
    }

    pub fn param_count(&self) -> usize {
        self.layout().fc_bias.end
    }

    /// Fan-in of each parameter tensor in layout order (biases report 0).
    fn fan_ins(&self) -> [(Range<usize>, usize); 8] {
        let l = self.layout();
        let k2 = self.kernel * self.kernel;
        [
            (l.conv_kernels[0].clone(), self.in_channels * k2),
            (l.conv_bias[0].clone(), 0),
            (l.conv_kernels[1].clone(), self.widths[0] * k2),
            (l.conv_bias[1].clone(), 0),
            (l.conv_kernels[2].clone(), self.widths[1] * k2),
            (l.conv_bias[2].clone(), 0),
            (l.fc_weights.clone(), self.fc_inputs()),
            (l.fc_bias.clone(), 0),
        ]
    }
}

/// Architecture plus `f32` parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CtnModel {
    pub arch: CtnArch,
    pub params: Vec<f32>,
}

impl CtnModel {
    pub fn zeros(arch: CtnArch) -> Result<Self> {
        arch.validate()?;
        Ok(Self {
            arch,
            params: vec![0.0; arch.param_count()],
        })
    }

    /// He-style uniform init: weights drawn from
    /// `U(-b, b)` with `b = scale * sqrt(6 / fan_in)`, biases zero.
    pub fn init(arch: CtnArch, seed: u64, scale: f64) -> Result<Self> {
        let mut rng = rng::seeded(seed);
        Self::init_with(arch, &mut rng, scale)
    }

    pub(crate) fn init_with(arch: CtnArch, rng: &mut rng::Rng, scale: f64) -> Result<Self> {
        let mut m = Self::zeros(arch)?;
        for (range, fan_in) in arch.fan_ins() {
            if fan_in == 0 {
                continue;
            }
            let bound = scale * libm::sqrt(6.0 / fan_in as f64);
            for p in &mut m.params[range] {
                *p = (rng.random_range(-1.0..1.0) * bound) as f32;
            }
        }
        Ok(m)
    }

    pub fn from_params(arch: CtnArch, params: Vec<f32>) -> Result<Self> {
        arch.validate()?;
        if params.len() != arch.param_count() {
            return Err(Error::DimMismatch {
                expected: arch.param_count(),
                got: params.len(),
            });
        }
        if params.iter().any(|p| !p.is_finite()) {
            return Err(Error::BadConfig("non-finite parameter"));
        }
        Ok(Self { arch, params })
    }

    pub fn params_f64(&self) -> Vec<f64> {
        self.params.iter().map(|&p| f64::from(p)).collect()
    }

    /// Logits, `n x classes` row-major.
    pub fn forward(&self, batch: &Tensor4) -> Result<Vec<f64>> {
        forward(&self.arch, &self.params_f64(), batch)
    }

    pub fn predict(&self, batch: &Tensor4) -> Result<Vec<usize>> {
        let logits = self.forward(batch)?;
        Ok(logits
            .chunks_exact(self.arch.classes)
            .map(layers::argmax)
            .collect())
    }
}

/// Intermediate activations kept for the backward pass.
struct Trace {
    inputs: [Tensor4; 3],
    pre_relu: [Tensor4; 3],
    pool_in_shapes: [[usize; 4]; 2],
    pool_idx: [Vec<usize>; 2],
    flat: Tensor4,
}

fn check_batch(arch: &CtnArch, params: &[f64], batch: &Tensor4) -> Result<()> {
    arch.validate()?;
    if params.len() != arch.param_count() {
        return Err(Error::DimMismatch {
            expected: arch.param_count(),
            got: params.len(),
        });
    }
    if batch.c != arch.in_channels || batch.h != arch.side || batch.w != arch.side {
        return Err(Error::ShapeMismatch(
            "batch does not match the network input",
        ));
    }
    Ok(())
}

fn run(arch: &CtnArch, params: &[f64], batch: &Tensor4) -> Result<(Vec<f64>, Trace)> {
    check_batch(arch, params, batch)?;
    let l = arch.layout();
    let mut x = batch.clone();
    let mut inputs: [Tensor4; 3] = Default::default();
    let mut pre_relu: [Tensor4; 3] = Default::default();
    let mut pool_in_shapes = [[0; 4]; 2];
    let mut pool_idx: [Vec<usize>; 2] = Default::default();
    for i in 0..3 {
        let z = layers::conv2d_forward(
            &x,
            &params[l.conv_kernels[i].clone()],
            &params[l.conv_bias[i].clone()],
            arch.conv_shape(i),
        )?;
        let a = layers::relu_forward(&z);
        inputs[i] = core::mem::replace(&mut x, a);
        pre_relu[i] = z;
        if i < 2 {
            let (p, idx) = layers::maxpool2_forward(&x)?;
            pool_in_shapes[i] = x.shape();
            pool_idx[i] = idx;
            x = p;
        }
    }
    let w = &params[l.fc_weights.clone()];
    let b = &params[l.fc_bias.clone()];
    let mut logits = Vec::with_capacity(x.n * arch.classes);
    for n in 0..x.n {
        logits.extend(layers::dense_forward(x.sample(n), w, b)?);
    }
    let trace = Trace {
        inputs,
        pre_relu,
        pool_in_shapes,
        pool_idx,
        flat: x,
    };
    Ok((logits, trace))
}

/// Logits for a batch, `n x classes` row-major.
pub fn forward(arch: &CtnArch, params: &[f64], batch: &Tensor4) -> Result<Vec<f64>> {
    run(arch, params, batch).map(|(logits, _)| logits)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LossGrad {
    /// Mean cross-entropy over the batch.
    pub loss: f64,
    /// Gradient of the mean loss, same layout as the parameters.
    pub grad: Vec<f64>,
    pub logits: Vec<f64>,
}

/// Mean softmax cross-entropy of the batch and its gradient with respect to
/// every parameter.
pub fn loss_and_grad(
    arch: &CtnArch,
    params: &[f64],
    batch: &Tensor4,
    labels: &[usize],
) -> Result<LossGrad> {
    if labels.len() != batch.n || batch.n == 0 {
        return Err(Error::ShapeMismatch("one label per sample required"));
    }
    let (logits, trace) = run(arch, params, batch)?;
    let l = arch.layout();
    let scale = 1.0 / batch.n as f64;
    let mut grad = vec![0.0; params.len()];

    let mut loss = 0.0;
    let mut dflat = Tensor4::zeros(trace.flat.n, trace.flat.c, trace.flat.h, trace.flat.w);
    {
        let (dw, rest) = grad[l.fc_weights.start..].split_at_mut(l.fc_weights.len());
        let db = &mut rest[..l.fc_bias.len()];
        let w = &params[l.fc_weights.clone()];
        for (n, (z, &y)) in logits.chunks_exact(arch.classes).zip(labels).enumerate() {
            let (li, mut g) = layers::softmax_xent(z, y)?;
            loss += li;
            g.iter_mut().for_each(|v| *v *= scale);
            let dx = layers::dense_backward(trace.flat.sample(n), w, &g, dw, db)?;
            let len = dx.len();
            dflat.data[n * len..(n + 1) * len].copy_from_slice(&dx);
        }
    }

    let mut upstream = dflat;
    for i in (0..3).rev() {
        if i < 2 {
            upstream =
                layers::maxpool2_backward(trace.pool_in_shapes[i], &trace.pool_idx[i], &upstream)?;
        }
        let dz = layers::relu_backward(&trace.pre_relu[i], &upstream);
        let g = layers::conv2d_backward(
            &trace.inputs[i],
            &params[l.conv_kernels[i].clone()],
            arch.conv_shape(i),
            &dz,
        )?;
        grad[l.conv_kernels[i].clone()].copy_from_slice(&g.kernels);
        grad[l.conv_bias[i].clone()].copy_from_slice(&g.bias);
        upstream = g.input;
    }

    Ok(LossGrad {
        loss: loss * scale,
        grad,
        logits,
    })
}
