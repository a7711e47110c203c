use std::path::PathBuf;

use hitviz_core::dataset::Label;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] hitviz_core::Error),
    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),
    #[error("io error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("bad magic: not a CTN1 model file")]
    BadMagic,
    #[error("model file does not match its shape header: {0}")]
    ShapeHeaderMismatch(String),
    #[error("png encoding failed: {0}")]
    Png(String),
    #[error("manifest has no {} samples", .0.name())]
    MissingClass(Label),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid argument: {0}")]
    Usage(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        let path = path.into();
        if source.kind() == std::io::ErrorKind::NotFound {
            Error::MissingFile(path)
        } else {
            Error::Io { path, source }
        }
    }

    /// Stable machine-readable error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Core(_) => "core",
            Error::MissingFile(_) => "missing_file",
            Error::Io { .. } => "io",
            Error::Parse { .. } => "parse",
            Error::BadMagic => "bad_magic",
            Error::ShapeHeaderMismatch(_) => "shape_header_mismatch",
            Error::Png(_) => "png",
            Error::MissingClass(_) => "missing_class",
            Error::Json(_) => "json",
            Error::Usage(_) => "usage",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
