//! Seeded synthetic corpus standing in for real benign/malicious binaries.
//!
//! Benign files are printable prose broken up by zero runs: low entropy and
//! mostly letters. Malicious files are uniform random sections, as in packed
//! or encrypted code, interleaved with short NUL-terminated strings.

use std::fs;
use std::path::{Path, PathBuf};

use hitviz_core::dataset::{DatasetManifest, Label, ManifestEntry};
use hitviz_core::rng::{self, Rng};
use rand::{Rng as _, RngCore};

use crate::manifest::write_manifest;
use crate::{Error, Result};

/// Window used when checking the corpus entropy contrast. A 64-byte window
/// cannot exceed 6 bits (0.75 normalized), so the contrast is measured on
/// 256-byte windows.
pub const CORPUS_ENTROPY_WINDOW: usize = 256;
pub const MANIFEST_NAME: &str = "manifest.csv";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SyntheticCorpusSpec {
    pub n_per_class: usize,
    pub seed: u64,
    pub min_size: usize,
    pub max_size: usize,
}

impl Default for SyntheticCorpusSpec {
    fn default() -> Self {
        Self {
            n_per_class: 100,
            seed: 42,
            min_size: 4096,
            max_size: 12288,
        }
    }
}

impl SyntheticCorpusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_per_class == 0 {
            return Err(Error::Usage("n_per_class must be at least 1".into()));
        }
        if self.min_size == 0 || self.min_size > self.max_size {
            return Err(Error::Usage(
                "size range must satisfy 1 <= min <= max".into(),
            ));
        }
        Ok(())
    }
}

const WORDS: &[&str] = &[
    "the", "file", "system", "user", "open", "read", "write", "data", "value", "table", "index",
    "window", "message", "print", "error", "status", "config", "service", "string", "buffer",
    "update", "version", "license", "program", "library", "module", "option", "default",
    "document", "report", "setting", "display", "network", "request", "response", "record", "and",
    "with", "from", "for", "this", "that", "is", "are", "of", "to", "in", "on",
];

const STRINGS: &[&str] = &[
    "kernel32.dll",
    "GetProcAddress",
    "LoadLibraryA",
    "VirtualAlloc",
    "WriteProcessMemory",
    "CreateRemoteThread",
    "ntdll.dll",
    "RegSetValueExA",
    "InternetOpenUrlA",
    "cmd.exe /c",
    "http://",
    "WinExec",
    "ShellExecuteA",
    "advapi32.dll",
];

fn prose(rng: &mut Rng, len: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(len + 64);
    while out.len() < len {
        let words = rng.random_range(5..15);
        for w in 0..words {
            let word = WORDS[rng.random_range(0..WORDS.len())];
            if w == 0 {
                let mut c = word.as_bytes().to_vec();
                c[0] = c[0].to_ascii_uppercase();
                out.extend(c);
            } else {
                out.push(b' ');
                if rng.random_bool(0.05) {
                    out.extend(rng.random_range(0..2000u32).to_string().bytes());
                } else {
                    out.extend(word.bytes());
                }
            }
        }
        out.extend(if rng.random_bool(0.2) {
            &b".\r\n"[..]
        } else {
            &b". "[..]
        });
    }
    out.truncate(len);
    out
}

fn benign_file(rng: &mut Rng, size: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        if rng.random_bool(0.7) {
            let n = rng.random_range(200..1200);
            out.extend(prose(rng, n));
        } else {
            let n = rng.random_range(64..600);
            out.extend(std::iter::repeat_n(0u8, n));
        }
    }
    out.truncate(size);
    out
}

fn malicious_file(rng: &mut Rng, size: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(size);
    while out.len() < size {
        if rng.random_bool(0.8) {
            let n = rng.random_range(512..3000);
            let start = out.len();
            out.resize(start + n, 0);
            rng.fill_bytes(&mut out[start..]);
        } else {
            let s = STRINGS[rng.random_range(0..STRINGS.len())];
            out.extend(s.bytes());
            out.push(0);
        }
    }
    out.truncate(size);
    out
}

/// All files of the corpus as (file name, label, bytes), benign first.
pub fn generate(spec: &SyntheticCorpusSpec) -> Result<Vec<(String, Label, Vec<u8>)>> {
    spec.validate()?;
    let mut master = rng::seeded(spec.seed);
    let mut files = Vec::with_capacity(2 * spec.n_per_class);
    for label in Label::ALL {
        for i in 0..spec.n_per_class {
            let mut r = rng::seeded(master.next_u64());
            let size = r.random_range(spec.min_size..=spec.max_size);
            let bytes = match label {
                Label::Benign => benign_file(&mut r, size),
                Label::Malicious => malicious_file(&mut r, size),
            };
            files.push((format!("{}_{i:04}.bin", label.name()), label, bytes));
        }
    }
    Ok(files)
}

/// Writes the files and `manifest.csv` into `out_dir`. The returned manifest
/// holds the files' full paths; the CSV on disk holds bare file names.
pub fn gen_synthetic_corpus(
    spec: &SyntheticCorpusSpec,
    out_dir: impl AsRef<Path>,
) -> Result<DatasetManifest> {
    let dir = out_dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut relative = Vec::new();
    let mut resolved = Vec::new();
    for (name, label, bytes) in generate(spec)? {
        let path: PathBuf = dir.join(&name);
        fs::write(&path, &bytes).map_err(|e| Error::io(&path, e))?;
        relative.push(ManifestEntry { path: name, label });
        resolved.push(ManifestEntry {
            path: path.to_string_lossy().into_owned(),
            label,
        });
    }
    write_manifest(
        &DatasetManifest::new("synthetic", relative),
        dir.join(MANIFEST_NAME),
    )?;
    Ok(DatasetManifest::new("synthetic", resolved))
}
