//! Scheme x feature comparison, cut-point sweep and class-mean images.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hitviz_core::baselines::{self, FeatureRow, FeatureSet, SvmHyper};
use hitviz_core::colorize::{Cut, LetterRanges, Scheme};
use hitviz_core::dataset::{split_dataset, DatasetManifest, Label, SplitSpec};
use hitviz_core::gist::DEFAULT_GRID;
use hitviz_core::imaging::{mean_image, ImageTensor};
use hitviz_core::metrics::Metrics;
use hitviz_core::nn::{self, CtnArch, Sample, TrainConfig};
use serde::Serialize;

use crate::features::gist_features;
use crate::manifest::{read_bytes, write_manifest};
use crate::model_io::{save_model, save_svm};
use crate::png_io::write_png;
use crate::transform::{transform_bytes, TransformConfig, TransformSnapshot};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Feature {
    GistKnn,
    Cnn,
    SvmRaw,
}

impl Feature {
    pub const ALL: [Feature; 3] = [Feature::GistKnn, Feature::Cnn, Feature::SvmRaw];

    pub fn name(self) -> &'static str {
        match self {
            Feature::GistKnn => "gist+knn",
            Feature::Cnn => "cnn",
            Feature::SvmRaw => "svm-raw",
        }
    }
}

impl FromStr for Feature {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Feature::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::Usage(format!(
                    "unknown feature {s:?}, expected gist+knn, cnn or svm-raw"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    /// Scheme field is ignored by `run_comparison`, which takes its own list.
    pub transform: TransformConfig,
    pub split: SplitSpec,
    pub train: TrainConfig,
    pub k: usize,
    pub grid: usize,
    pub svm: SvmHyper,
    pub raw_dim: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            transform: TransformConfig::default(),
            split: SplitSpec::default(),
            train: TrainConfig::default(),
            k: baselines::DEFAULT_K,
            grid: DEFAULT_GRID,
            svm: SvmHyper::default(),
            raw_dim: baselines::DEFAULT_RAW_DIM,
        }
    }
}

impl ExperimentConfig {
    /// One seed for the split, CNN training and SVM training.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.split.seed = seed;
        self.train.seed = seed;
        self.svm.seed = seed;
        self
    }

    pub fn snapshot(&self) -> ConfigSnapshot {
        ConfigSnapshot {
            transform: self.transform.snapshot(),
            train_fraction: self.split.train_fraction,
            learning_rate: self.train.learning_rate,
            momentum: self.train.momentum,
            batch_size: self.train.batch_size,
            epochs: self.train.epochs,
            weight_init_scale: self.train.weight_init_scale,
            k: self.k,
            grid: self.grid,
            svm_lambda: self.svm.lambda,
            svm_epochs: self.svm.epochs,
            svm_lr: self.svm.lr,
            raw_dim: self.raw_dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigSnapshot {
    pub transform: TransformSnapshot,
    pub train_fraction: f64,
    pub learning_rate: f64,
    pub momentum: f64,
    pub batch_size: usize,
    pub epochs: usize,
    pub weight_init_scale: f64,
    pub k: usize,
    pub grid: usize,
    pub svm_lambda: f64,
    pub svm_epochs: usize,
    pub svm_lr: f64,
    pub raw_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub scheme: String,
    pub feature: String,
    pub train_acc: f64,
    pub val_acc: f64,
    /// Validation confusion matrix, `[truth][predicted]`.
    pub confusion: [[usize; 2]; 2],
}

impl ReportRow {
    fn new(scheme: &str, feature: Feature, train: &Metrics, val: &Metrics) -> Self {
        Self {
            scheme: scheme.into(),
            feature: feature.name().into(),
            train_acc: train.accuracy,
            val_acc: val.accuracy,
            confusion: val.confusion,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub seed: u64,
    pub config: ConfigSnapshot,
    pub n_train: usize,
    pub n_val: usize,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()? + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn table(&self) -> String {
        let w = self
            .rows
            .iter()
            .map(|r| r.scheme.len())
            .max()
            .unwrap_or(0)
            .max(6);
        let mut out = format!(
            "{:<w$}  {:<8}  {:>9}  {:>7}\n",
            "scheme", "feature", "train_acc", "val_acc"
        );
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<w$}  {:<8}  {:>9.4}  {:>7.4}",
                r.scheme, r.feature, r.train_acc, r.val_acc
            );
        }
        out
    }
}

/// Loaded bytes of both halves of the shared split.
struct SplitData {
    train: DatasetManifest,
    val: DatasetManifest,
    bytes: HashMap<String, Vec<u8>>,
}

impl SplitData {
    fn load(m: &DatasetManifest, spec: SplitSpec) -> Result<Self> {
        let (train, val) = split_dataset(m, spec)?;
        if train.is_empty() || val.is_empty() {
            return Err(Error::Usage(
                "split leaves the training or validation side empty".into(),
            ));
        }
        let mut bytes = HashMap::with_capacity(m.len());
        for e in &m.entries {
            bytes.insert(e.path.clone(), read_bytes(&e.path)?.bytes);
        }
        Ok(Self { train, val, bytes })
    }

    fn render(&self, side: &DatasetManifest, cfg: &TransformConfig) -> Result<Vec<ImageTensor>> {
        side.entries
            .iter()
            .map(|e| transform_bytes(&self.bytes[&e.path], cfg))
            .collect()
    }
}

fn samples(m: &DatasetManifest, images: &[ImageTensor]) -> Vec<Sample> {
    m.entries
        .iter()
        .zip(images)
        .map(|(e, img)| Sample::from_image(img, e.label))
        .collect()
}

fn gist_set(m: &DatasetManifest, images: &[ImageTensor], grid: usize) -> Result<FeatureSet> {
    let refs: Vec<_> = m
        .entries
        .iter()
        .zip(images)
        .map(|(e, img)| (e.path.clone(), img, e.label))
        .collect();
    gist_features(&refs, grid)
}

fn raw_set(data: &SplitData, m: &DatasetManifest, dim: usize) -> Result<FeatureSet> {
    let mut set = FeatureSet::new(dim);
    for e in &m.entries {
        set.push(FeatureRow {
            id: e.path.clone(),
            vector: baselines::raw_vector(&data.bytes[&e.path], dim)?,
            label: e.label,
        })?;
    }
    Ok(set)
}

fn cnn_cell(
    train: &[Sample],
    val: &[Sample],
    cfg: &ExperimentConfig,
    save_to: Option<PathBuf>,
) -> Result<(Metrics, Metrics)> {
    let arch = CtnArch::with_side(cfg.transform.layout.target);
    let (model, _) = nn::train_ctn(arch, train, &cfg.train)?;
    if let Some(p) = save_to {
        save_model(&model, p)?;
    }
    Ok((nn::evaluate(&model, train)?, nn::evaluate(&model, val)?))
}

/// Trains and evaluates every (scheme, feature) cell on one shared split.
/// `svm-raw` ignores the scheme and contributes a single row with scheme
/// `raw`. With `models_dir`, the split manifests and every trained model are
/// written there so the reported accuracies can be re-evaluated.
pub fn run_comparison(
    m: &DatasetManifest,
    schemes: &[Scheme],
    features: &[Feature],
    cfg: &ExperimentConfig,
    models_dir: Option<&Path>,
) -> Result<ExperimentReport> {
    let data = SplitData::load(m, cfg.split)?;
    if let Some(dir) = models_dir {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        write_manifest(&data.train, dir.join("train.csv"))?;
        write_manifest(&data.val, dir.join("val.csv"))?;
    }
    let mut rows = Vec::new();
    let image_features = features.iter().any(|f| *f != Feature::SvmRaw);
    if image_features {
        for &scheme in schemes {
            let tcfg = cfg.transform.with_scheme(scheme);
            let train_img = data.render(&data.train, &tcfg)?;
            let val_img = data.render(&data.val, &tcfg)?;
            for &f in features {
                match f {
                    Feature::GistKnn => {
                        let tr = gist_set(&data.train, &train_img, cfg.grid)?;
                        let va = gist_set(&data.val, &val_img, cfg.grid)?;
                        let train_m = baselines::knn_evaluate(&tr, &tr, cfg.k)?;
                        let val_m = baselines::knn_evaluate(&tr, &va, cfg.k)?;
                        rows.push(ReportRow::new(&scheme.to_string(), f, &train_m, &val_m));
                    }
                    Feature::Cnn => {
                        let save = models_dir.map(|d| d.join(format!("{scheme}_cnn.ctn")));
                        let (train_m, val_m) = cnn_cell(
                            &samples(&data.train, &train_img),
                            &samples(&data.val, &val_img),
                            cfg,
                            save,
                        )?;
                        rows.push(ReportRow::new(&scheme.to_string(), f, &train_m, &val_m));
                    }
                    Feature::SvmRaw => {}
                }
            }
        }
    }
    if features.contains(&Feature::SvmRaw) {
        let tr = raw_set(&data, &data.train, cfg.raw_dim)?;
        let va = raw_set(&data, &data.val, cfg.raw_dim)?;
        let model = baselines::svm_train(&tr, cfg.svm)?;
        if let Some(dir) = models_dir {
            save_svm(&model, dir.join("raw_svm.json"))?;
        }
        let train_m = baselines::svm_evaluate(&model, &tr)?;
        let val_m = baselines::svm_evaluate(&model, &va)?;
        rows.push(ReportRow::new("raw", Feature::SvmRaw, &train_m, &val_m));
    }
    Ok(ExperimentReport {
        seed: cfg.split.seed,
        config: cfg.snapshot(),
        n_train: data.train.len(),
        n_val: data.val.len(),
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub cut: usize,
    pub train_acc: f64,
    pub val_acc: f64,
}

/// HIT + CNN at each cut point on the shared split. The letter-range
/// setting of `cfg.transform.scheme` carries over when it is a HIT scheme.
pub fn sweep_cut(
    m: &DatasetManifest,
    cuts: &[Cut],
    cfg: &ExperimentConfig,
) -> Result<Vec<SweepRow>> {
    let data = SplitData::load(m, cfg.split)?;
    let letters = match cfg.transform.scheme {
        Scheme::Hit { letters, .. } => letters,
        _ => LetterRanges::Full,
    };
    let mut rows = Vec::with_capacity(cuts.len());
    for &cut in cuts {
        let tcfg = cfg.transform.with_scheme(Scheme::Hit { cut, letters });
        let train = samples(&data.train, &data.render(&data.train, &tcfg)?);
        let val = samples(&data.val, &data.render(&data.val, &tcfg)?);
        let (train_m, val_m) = cnn_cell(&train, &val, cfg, None)?;
        rows.push(SweepRow {
            cut: cut.count(),
            train_acc: train_m.accuracy,
            val_acc: val_m.accuracy,
        });
    }
    Ok(rows)
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("cut,train_acc,val_acc\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.cut, r.train_acc, r.val_acc);
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanViz {
    pub benign: ImageTensor,
    pub malicious: ImageTensor,
    pub benign_path: PathBuf,
    pub malicious_path: PathBuf,
}

/// Per-class mean of every rendered file, written as `benign_mean.png` and
/// `malicious_mean.png` in `out_dir`.
pub fn mean_viz(
    m: &DatasetManifest,
    cfg: &TransformConfig,
    out_dir: impl AsRef<Path>,
) -> Result<MeanViz> {
    for label in Label::ALL {
        if m.count(label) == 0 {
            return Err(Error::MissingClass(label));
        }
    }
    let mut per_class: [Vec<ImageTensor>; 2] = [Vec::new(), Vec::new()];
    for e in &m.entries {
        per_class[e.label.index()].push(transform_bytes(&read_bytes(&e.path)?.bytes, cfg)?);
    }
    let benign = mean_image(&per_class[0])?;
    let malicious = mean_image(&per_class[1])?;
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let benign_path = dir.join("benign_mean.png");
    let malicious_path = dir.join("malicious_mean.png");
    write_png(&benign, &benign_path)?;
    write_png(&malicious, &malicious_path)?;
    Ok(MeanViz {
        benign,
        malicious,
        benign_path,
        malicious_path,
    })
}
