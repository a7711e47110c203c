//! Minibatch SGD with momentum for the CTN.

use alloc::vec::Vec;

use rand::seq::SliceRandom;

use super::ctn::{self, CtnArch, CtnModel};
use super::tensor::Tensor4;
use crate::dataset::Label;
use crate::imaging::ImageTensor;
use crate::metrics::{self, Metrics};
use crate::{rng, Error, Result};

/// One training or evaluation example: channel-planar input plus label.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub input: Vec<f64>,
    pub label: Label,
}

impl Sample {
    pub fn from_image(img: &ImageTensor, label: Label) -> Self {
        Self {
            input: img.to_planar(),
            label,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub seed: u64,
    pub weight_init_scale: f64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            momentum: 0.9,
            batch_size: 32,
            epochs: 30,
            seed: 42,
            // full He bounds make the 16k-input dense layer step too large
            // for lr 0.01 with momentum 0.9
            weight_init_scale: 0.5,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate >= 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::BadConfig(
                "learning_rate must be finite and non-negative",
            ));
        }
        if !(0.0..1.0).contains(&self.momentum) {
            return Err(Error::BadConfig("momentum must lie in [0, 1)"));
        }
        if self.batch_size == 0 || self.epochs == 0 {
            return Err(Error::BadConfig("batch_size and epochs must be at least 1"));
        }
        Ok(())
    }
}

/// Mean loss and accuracy over the batches of one epoch, measured on each
/// batch before its update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EpochStats {
    pub epoch: usize,
    pub loss: f64,
    pub accuracy: f64,
}

pub fn stack(arch: &CtnArch, samples: &[&Sample]) -> Result<Tensor4> {
    let len = arch.input_len();
    let mut data = Vec::with_capacity(samples.len() * len);
    for s in samples {
        if s.input.len() != len {
            return Err(Error::DimMismatch {
                expected: len,
                got: s.input.len(),
            });
        }
        data.extend_from_slice(&s.input);
    }
    Tensor4::from_vec(samples.len(), arch.in_channels, arch.side, arch.side, data)
}

/// Train a freshly initialized CTN. Single-threaded and deterministic for a
/// fixed config: the seed drives weight init, then the per-epoch shuffles.
pub fn train_ctn(
    arch: CtnArch,
    data: &[Sample],
    cfg: &TrainConfig,
) -> Result<(CtnModel, Vec<EpochStats>)> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut rng = rng::seeded(cfg.seed);
    let init = CtnModel::init_with(arch, &mut rng, cfg.weight_init_scale)?;
    let mut params = init.params_f64();
    let mut velocity = alloc::vec![0.0; params.len()];
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut history = Vec::with_capacity(cfg.epochs);

    for epoch in 1..=cfg.epochs {
        order.shuffle(&mut rng);
        let (mut loss_sum, mut correct) = (0.0, 0usize);
        for chunk in order.chunks(cfg.batch_size) {
            let samples: Vec<&Sample> = chunk.iter().map(|&i| &data[i]).collect();
            let batch = stack(&arch, &samples)?;
            let labels: Vec<usize> = samples.iter().map(|s| s.label.index()).collect();
            let lg = ctn::loss_and_grad(&arch, &params, &batch, &labels)?;
            if !lg.loss.is_finite() {
                return Err(Error::DivergenceDetected { epoch });
            }
            loss_sum += lg.loss * chunk.len() as f64;
            correct += lg
                .logits
                .chunks_exact(arch.classes)
                .zip(&labels)
                .filter(|(z, &y)| super::layers::argmax(z) == y)
                .count();
            for ((p, v), g) in params.iter_mut().zip(&mut velocity).zip(&lg.grad) {
                *v = cfg.momentum * *v - cfg.learning_rate * g;
                *p += *v;
            }
        }
        history.push(EpochStats {
            epoch,
            loss: loss_sum / data.len() as f64,
            accuracy: correct as f64 / data.len() as f64,
        });
    }

    let params: Vec<f32> = params.iter().map(|&p| p as f32).collect();
    if params.iter().any(|p| !p.is_finite()) {
        return Err(Error::DivergenceDetected { epoch: cfg.epochs });
    }
    Ok((CtnModel { arch, params }, history))
}

/// Predicted labels for `data`, evaluated in batches of 32.
pub fn predict(m: &CtnModel, data: &[Sample]) -> Result<Vec<Label>> {
    let mut out = Vec::with_capacity(data.len());
    for chunk in data.chunks(32) {
        let refs: Vec<&Sample> = chunk.iter().collect();
        let idx = m.predict(&stack(&m.arch, &refs)?)?;
        out.extend(metrics::labels_from_indices(&idx));
    }
    Ok(out)
}

pub fn evaluate(m: &CtnModel, data: &[Sample]) -> Result<Metrics> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let truth: Vec<Label> = data.iter().map(|s| s.label).collect();
    Metrics::from_predictions(&truth, &predict(m, data)?)
}
