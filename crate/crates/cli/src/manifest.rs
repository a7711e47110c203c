//! Dataset manifests: one `path,label` pair per line.
//!
//! Labels are `0`, `1`, `benign` or `malicious`. Blank lines and lines
//! starting with `#` are skipped, as is a leading `path,label` header. The
//! label is taken after the last comma so paths may contain commas. Relative
//! paths are resolved against the manifest's directory.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use hitviz_core::dataset::{ByteStream, DatasetManifest, Label, ManifestEntry};

use crate::{Error, Result};

pub fn parse_label(s: &str) -> Option<Label> {
    match s.trim().to_ascii_lowercase().as_str() {
        "0" | "benign" => Some(Label::Benign),
        "1" | "malicious" => Some(Label::Malicious),
        _ => None,
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    parse_manifest(&text, path, base)
}

fn parse_manifest(text: &str, path: &Path, base: &Path) -> Result<DatasetManifest> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((file, label)) = line.rsplit_once(',') else {
            return Err(parse_err(
                i + 1,
                format!("expected `path,label`, got {line:?}"),
            ));
        };
        if entries.is_empty() && label.trim() == "label" {
            continue;
        }
        let label = parse_label(label).ok_or_else(|| {
            parse_err(
                i + 1,
                format!("label {:?} not in {{0,1,benign,malicious}}", label.trim()),
            )
        })?;
        let file = file.trim();
        if file.is_empty() {
            return Err(parse_err(i + 1, "empty path".into()));
        }
        let resolved = base.join(file).to_string_lossy().into_owned();
        if !seen.insert(resolved.clone()) {
            return Err(parse_err(i + 1, format!("duplicate path {file:?}")));
        }
        entries.push(ManifestEntry {
            path: resolved,
            label,
        });
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    Ok(DatasetManifest::new(name, entries))
}

/// Writes `path,label` lines with numeric labels. Paths are written as given.
pub fn write_manifest(m: &DatasetManifest, path: impl AsRef<Path>) -> Result<()> {
    let mut out = String::new();
    for e in &m.entries {
        let _ = writeln!(out, "{},{}", e.path, e.label.index());
    }
    fs::write(path.as_ref(), out).map_err(|e| Error::io(path.as_ref(), e))
}

pub fn read_bytes(path: impl AsRef<Path>) -> Result<ByteStream> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(ByteStream::new(bytes, path.to_string_lossy()))
}

pub fn path_of(entry: &ManifestEntry) -> PathBuf {
    PathBuf::from(&entry.path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<DatasetManifest> {
        parse_manifest(text, Path::new("m.csv"), Path::new(""))
    }

    #[test]
    fn two_entries() {
        let m = parse("a.bin,0\nb.bin,1\n").unwrap();
        assert_eq!(m.len(), 2);
        assert_eq!(m.entries[0].path, "a.bin");
        assert_eq!(m.entries[1].label, Label::Malicious);
    }

    #[test]
    fn empty_is_empty() {
        assert!(parse("").unwrap().is_empty());
    }

    #[test]
    fn bad_label_reports_line() {
        match parse("a.bin,2") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
        match parse("a.bin,0\n\nb.bin\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn header_comments_and_named_labels() {
        let m = parse("path,label\n# note\nx,y.bin,benign\nz.bin, Malicious\n").unwrap();
        assert_eq!(m.entries[0].path, "x,y.bin");
        assert_eq!(m.entries[0].label, Label::Benign);
        assert_eq!(m.entries[1].label, Label::Malicious);
    }

    #[test]
    fn duplicates_rejected() {
        assert!(matches!(
            parse("a,0\na,1"),
            Err(Error::Parse { line: 2, .. })
        ));
    }
}
