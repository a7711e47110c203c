use alloc::vec::Vec;

use crate::dataset::Label;
use crate::{Error, Result};

/// Binary classification summary. `confusion[truth][predicted]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Metrics {
    pub accuracy: f64,
    /// `None` when the class has no samples.
    pub per_class_accuracy: [Option<f64>; 2],
    pub confusion: [[usize; 2]; 2],
}

impl Metrics {
    pub fn from_predictions(truth: &[Label], predicted: &[Label]) -> Result<Self> {
        if truth.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if truth.len() != predicted.len() {
            return Err(Error::DimMismatch {
                expected: truth.len(),
                got: predicted.len(),
            });
        }
        let mut confusion = [[0usize; 2]; 2];
        for (t, p) in truth.iter().zip(predicted) {
            confusion[t.index()][p.index()] += 1;
        }
        let correct = confusion[0][0] + confusion[1][1];
        let per_class_accuracy = [0, 1].map(|c| {
            let total: usize = confusion[c].iter().sum();
            (total > 0).then(|| confusion[c][c] as f64 / total as f64)
        });
        Ok(Self {
            accuracy: correct as f64 / truth.len() as f64,
            per_class_accuracy,
            confusion,
        })
    }

    pub fn total(&self) -> usize {
        self.confusion.iter().flatten().sum()
    }
}

pub(crate) fn labels_from_indices(idx: &[usize]) -> Vec<Label> {
    idx.iter()
        .map(|&i| Label::from_index(i).unwrap_or(Label::Malicious))
        .collect()
}
