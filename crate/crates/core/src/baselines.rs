//! Classical baselines: k-nearest neighbours and a linear SVM.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::dataset::Label;
use crate::metrics::Metrics;
use crate::{rng, Error, Result};

pub const DEFAULT_RAW_DIM: usize = 4096;
pub const DEFAULT_K: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub id: String,
    pub vector: Vec<f64>,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FeatureSet {
    pub dim: usize,
    pub rows: Vec<FeatureRow>,
}

impl FeatureSet {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: FeatureRow) -> Result<()> {
        if row.vector.len() != self.dim {
            return Err(Error::DimMismatch {
                expected: self.dim,
                got: row.vector.len(),
            });
        }
        if row.vector.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadConfig("non-finite feature value"));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn labels(&self) -> Vec<Label> {
        self.rows.iter().map(|r| r.label).collect()
    }
}

/// Bytes scaled to [0, 1], truncated or zero-padded to `dim`.
pub fn raw_vector(bytes: &[u8], dim: usize) -> Result<Vec<f64>> {
    if bytes.is_empty() {
        return Err(Error::EmptyStream);
    }
    let mut v = vec![0.0; dim];
    for (d, &b) in v.iter_mut().zip(bytes) {
        *d = f64::from(b) / 255.0;
    }
    Ok(v)
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Majority label among the `k` nearest training rows (Euclidean).
///
/// Equal distances keep training-set order; a tied vote goes to the label of
/// the single nearest row. `k` larger than the training set uses every row.
pub fn knn_predict(train: &FeatureSet, query: &[f64], k: usize) -> Result<Label> {
    if train.is_empty() {
        return Err(Error::EmptyTrainSet);
    }
    if query.len() != train.dim {
        return Err(Error::DimMismatch {
            expected: train.dim,
            got: query.len(),
        });
    }
    if k == 0 {
        return Err(Error::BadConfig("k must be at least 1"));
    }
    let mut dist: Vec<(f64, usize)> = train
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| (squared_distance(&r.vector, query), i))
        .collect();
    // stable: equal distances stay in training order
    dist.sort_by(|a, b| a.0.total_cmp(&b.0));
    let nearest = &dist[..k.min(dist.len())];
    let mut votes = [0usize; 2];
    for &(_, i) in nearest {
        votes[train.rows[i].label.index()] += 1;
    }
    Ok(match votes[0].cmp(&votes[1]) {
        core::cmp::Ordering::Greater => Label::Benign,
        core::cmp::Ordering::Less => Label::Malicious,
        core::cmp::Ordering::Equal => train.rows[nearest[0].1].label,
    })
}

pub fn knn_evaluate(train: &FeatureSet, test: &FeatureSet, k: usize) -> Result<Metrics> {
    let pred = test
        .rows
        .iter()
        .map(|r| knn_predict(train, &r.vector, k))
        .collect::<Result<Vec<_>>>()?;
    Metrics::from_predictions(&test.labels(), &pred)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvmHyper {
    /// Weight of the `||w||^2` penalty.
    pub lambda: f64,
    pub epochs: usize,
    /// Initial step size.
    pub lr: f64,
    pub seed: u64,
}

impl Default for SvmHyper {
    fn default() -> Self {
        Self {
            lambda: 1e-3,
            epochs: 50,
            lr: 0.1,
            seed: 42,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyper: SvmHyper,
}

impl SvmModel {
    pub fn score(&self, x: &[f64]) -> f64 {
        self.bias + self.weights.iter().zip(x).map(|(w, v)| w * v).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.weights.iter().map(|w| w * w).sum())
    }

    /// Mean of `max(0, 1 - y (w.x + b))` over the set.
    pub fn hinge_loss(&self, data: &FeatureSet) -> f64 {
        if data.is_empty() {
            return 0.0;
        }
        let total: f64 = data
            .rows
            .iter()
            .map(|r| (1.0 - sign_of(r.label) * self.score(&r.vector)).max(0.0))
            .sum();
        total / data.len() as f64
    }
}

fn sign_of(l: Label) -> f64 {
    match l {
        Label::Benign => -1.0,
        Label::Malicious => 1.0,
    }
}

/// Minimizes `mean hinge + lambda ||w||^2` by per-sample SGD.
///
/// Step `t` (counting from 0 across epochs) uses
/// `eta_t = lr / (1 + 2 lr lambda t)`, which keeps the weight-decay factor
/// `1 - 2 lambda eta_t` in (0, 1] for any lambda. The bias is not penalized.
/// Sample order is reshuffled every epoch from the seed.
pub fn svm_train(data: &FeatureSet, hyper: SvmHyper) -> Result<SvmModel> {
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if !(hyper.lambda >= 0.0 && hyper.lr > 0.0) || hyper.epochs == 0 {
        return Err(Error::BadConfig(
            "svm needs lambda >= 0, lr > 0, epochs >= 1",
        ));
    }
    if let Some(r) = data.rows.iter().find(|r| r.vector.len() != data.dim) {
        return Err(Error::DimMismatch {
            expected: data.dim,
            got: r.vector.len(),
        });
    }
    let mut model = SvmModel {
        weights: vec![0.0; data.dim],
        bias: 0.0,
        hyper,
    };
    let mut rng = rng::seeded(hyper.seed);
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut t = 0u64;
    for _ in 0..hyper.epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let row = &data.rows[i];
            let y = sign_of(row.label);
            let eta = hyper.lr / (1.0 + 2.0 * hyper.lr * hyper.lambda * t as f64);
            let margin = y * model.score(&row.vector);
            let decay = 1.0 - 2.0 * hyper.lambda * eta;
            model.weights.iter_mut().for_each(|w| *w *= decay);
            if margin < 1.0 {
                for (w, &x) in model.weights.iter_mut().zip(&row.vector) {
                    *w += eta * y * x;
                }
                model.bias += eta * y;
            }
            t += 1;
        }
    }
    Ok(model)
}

/// `Malicious` when `w.x + b > 0`, else `Benign`.
pub fn svm_predict(m: &SvmModel, x: &[f64]) -> Result<Label> {
    if x.len() != m.weights.len() {
        return Err(Error::DimMismatch {
            expected: m.weights.len(),
            got: x.len(),
        });
    }
    Ok(if m.score(x) > 0.0 {
        Label::Malicious
    } else {
        Label::Benign
    })
}

pub fn svm_evaluate(m: &SvmModel, test: &FeatureSet) -> Result<Metrics> {
    let pred = test
        .rows
        .iter()
        .map(|r| svm_predict(m, &r.vector))
        .collect::<Result<Vec<_>>>()?;
    Metrics::from_predictions(&test.labels(), &pred)
}
