//! Dataset entries and the deterministic stratified train/validation split.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;

use crate::{rng, Error, Result};

/// Class label. The numeric value is the network's output index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Benign = 0,
    Malicious = 1,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Benign, Label::Malicious];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Label> {
        match i {
            0 => Some(Label::Benign),
            1 => Some(Label::Malicious),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Label::Benign => "benign",
            Label::Malicious => "malicious",
        }
    }
}

/// Raw file contents. Encoders reject empty streams.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ByteStream {
    pub bytes: Vec<u8>,
    pub source_path: String,
}

impl ByteStream {
    pub fn new(bytes: Vec<u8>, source_path: impl Into<String>) -> Self {
        Self {
            bytes,
            source_path: source_path.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bytes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: String,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetManifest {
    pub name: String,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn new(name: impl Into<String>, entries: Vec<ManifestEntry>) -> Self {
        Self {
            name: name.into(),
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, label: Label) -> usize {
        self.entries.iter().filter(|e| e.label == label).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::BadConfig("train_fraction must lie in (0, 1)"));
        }
        Ok(Self {
            train_fraction,
            seed,
        })
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.8,
            seed: 42,
        }
    }
}

/// Stratified split into `(train, val)`.
///
/// The training set has `round(train_fraction * n)` entries. That total is
/// shared out between the classes by largest remainder of
/// `train_fraction * class_size`, so each class is within one sample of its
/// exact proportion. Which entries of a class go to training is decided by a
/// seeded shuffle of that class; both outputs keep manifest order.
pub fn split_dataset(
    m: &DatasetManifest,
    spec: SplitSpec,
) -> Result<(DatasetManifest, DatasetManifest)> {
    if m.is_empty() {
        return Err(Error::EmptyManifest);
    }
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(Error::BadConfig("train_fraction must lie in (0, 1)"));
    }

    let by_class: Vec<Vec<usize>> = Label::ALL
        .iter()
        .map(|&l| {
            m.entries
                .iter()
                .enumerate()
                .filter(|(_, e)| e.label == l)
                .map(|(i, _)| i)
                .collect()
        })
        .collect();

    let total = libm::round(spec.train_fraction * m.len() as f64) as usize;
    let quotas: Vec<f64> = by_class
        .iter()
        .map(|c| spec.train_fraction * c.len() as f64)
        .collect();
    let mut take: Vec<usize> = quotas.iter().map(|&q| libm::floor(q) as usize).collect();
    let mut order: Vec<usize> = (0..quotas.len()).collect();
    // Largest fractional part first; stable sort keeps class order on ties.
    order.sort_by(|&a, &b| {
        let fa = quotas[a] - libm::floor(quotas[a]);
        let fb = quotas[b] - libm::floor(quotas[b]);
        fb.partial_cmp(&fa).unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut remaining = total.saturating_sub(take.iter().sum());
    for &c in order.iter().cycle().take(order.len() * 2) {
        if remaining == 0 {
            break;
        }
        if take[c] < by_class[c].len() {
            take[c] += 1;
            remaining -= 1;
        }
    }

    let mut rng = rng::seeded(spec.seed);
    let mut in_train = alloc::vec![false; m.len()];
    for (members, &k) in by_class.iter().zip(&take) {
        let mut shuffled = members.clone();
        shuffled.shuffle(&mut rng);
        for &i in &shuffled[..k] {
            in_train[i] = true;
        }
    }

    let pick = |want: bool| {
        m.entries
            .iter()
            .zip(&in_train)
            .filter(|(_, &t)| t == want)
            .map(|(e, _)| e.clone())
            .collect::<Vec<_>>()
    };
    Ok((
        DatasetManifest::new(alloc::format!("{}-train", m.name), pick(true)),
        DatasetManifest::new(alloc::format!("{}-val", m.name), pick(false)),
    ))
}
