//! Feature extraction over manifests and the feature CSV format.
//!
//! One row per file: `path,v1,...,vD,label` with no header. Values use
//! Rust's shortest round-trip float formatting so a write/read cycle is
//! lossless. Paths must not contain commas.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use hitviz_core::baselines::{self, FeatureRow, FeatureSet};
use hitviz_core::dataset::{split_dataset, DatasetManifest, Label, ManifestEntry, SplitSpec};
use hitviz_core::gist::{self, GaborBank};
use hitviz_core::imaging::ImageTensor;

use crate::manifest::{parse_label, read_bytes};
use crate::transform::{transform_bytes, TransformConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Gist,
    Raw,
}

impl FeatureKind {
    pub fn name(self) -> &'static str {
        match self {
            FeatureKind::Gist => "gist",
            FeatureKind::Raw => "raw",
        }
    }
}

impl FromStr for FeatureKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gist" => Ok(FeatureKind::Gist),
            "raw" => Ok(FeatureKind::Raw),
            _ => Err(Error::Usage(format!(
                "unknown feature {s:?}, expected gist or raw"
            ))),
        }
    }
}

/// GIST descriptors of already-rendered images, one per image.
pub fn gist_features(images: &[(String, &ImageTensor, Label)], grid: usize) -> Result<FeatureSet> {
    let Some((_, first, _)) = images.first() else {
        return Err(hitviz_core::Error::EmptyDataset.into());
    };
    let bank = GaborBank::default_for(first.width)?;
    let mut set = FeatureSet::new(bank.filters.len() * grid * grid);
    for (id, img, label) in images {
        let d = gist::gist_descriptor(img, &bank, grid)?;
        set.push(FeatureRow {
            id: id.clone(),
            vector: d.values,
            label: *label,
        })?;
    }
    Ok(set)
}

pub fn featurize(
    m: &DatasetManifest,
    kind: FeatureKind,
    cfg: &TransformConfig,
    grid: usize,
    raw_dim: usize,
) -> Result<FeatureSet> {
    if m.is_empty() {
        return Err(hitviz_core::Error::EmptyManifest.into());
    }
    match kind {
        FeatureKind::Raw => {
            let mut set = FeatureSet::new(raw_dim);
            for e in &m.entries {
                let s = read_bytes(&e.path)?;
                set.push(FeatureRow {
                    id: e.path.clone(),
                    vector: baselines::raw_vector(&s.bytes, raw_dim)?,
                    label: e.label,
                })?;
            }
            Ok(set)
        }
        FeatureKind::Gist => {
            let mut images = Vec::with_capacity(m.len());
            for e in &m.entries {
                images.push(transform_bytes(&read_bytes(&e.path)?.bytes, cfg)?);
            }
            let refs: Vec<_> = m
                .entries
                .iter()
                .zip(&images)
                .map(|(e, img)| (e.path.clone(), img, e.label))
                .collect();
            gist_features(&refs, grid)
        }
    }
}

pub fn format_features(set: &FeatureSet) -> Result<String> {
    let mut out = String::new();
    for r in &set.rows {
        if r.id.contains(',') || r.id.contains('\n') {
            return Err(Error::Usage(format!(
                "feature id {:?} contains a comma or newline",
                r.id
            )));
        }
        out.push_str(&r.id);
        for v in &r.vector {
            let _ = write!(out, ",{v}");
        }
        let _ = writeln!(out, ",{}", r.label.index());
    }
    Ok(out)
}

pub fn write_features(set: &FeatureSet, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, format_features(set)?).map_err(|e| Error::io(path, e))
}

pub fn parse_features(text: &str, path: &Path) -> Result<FeatureSet> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut set: Option<FeatureSet> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < 3 {
            return Err(parse_err(i + 1, "expected `id,values...,label`".into()));
        }
        let label = parse_label(fields[fields.len() - 1])
            .ok_or_else(|| parse_err(i + 1, format!("bad label {:?}", fields[fields.len() - 1])))?;
        let vector = fields[1..fields.len() - 1]
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| parse_err(i + 1, format!("bad value: {e}")))?;
        let set = set.get_or_insert_with(|| FeatureSet::new(vector.len()));
        set.push(FeatureRow {
            id: fields[0].to_string(),
            vector,
            label,
        })
        .map_err(|e| parse_err(i + 1, e.to_string()))?;
    }
    set.ok_or_else(|| hitviz_core::Error::EmptyDataset.into())
}

pub fn read_features(path: impl AsRef<Path>) -> Result<FeatureSet> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_features(&text, path)
}

/// Splits rows exactly as `split_dataset` splits a manifest whose paths are
/// the row ids, so features and images of the same files land on the same side.
pub fn split_features(set: &FeatureSet, spec: SplitSpec) -> Result<(FeatureSet, FeatureSet)> {
    let entries = set
        .rows
        .iter()
        .map(|r| ManifestEntry {
            path: r.id.clone(),
            label: r.label,
        })
        .collect();
    let (train, val) = split_dataset(&DatasetManifest::new("features", entries), spec)?;
    let pick = |m: &DatasetManifest| -> Result<FeatureSet> {
        let keep: std::collections::HashSet<&str> =
            m.entries.iter().map(|e| e.path.as_str()).collect();
        let mut out = FeatureSet::new(set.dim);
        for r in set.rows.iter().filter(|r| keep.contains(r.id.as_str())) {
            out.push(r.clone())?;
        }
        Ok(out)
    };
    Ok((pick(&train)?, pick(&val)?))
}
