use thiserror::Error;

/// Errors raised by the pure transforms and classifiers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("empty byte stream")]
    EmptyStream,
    #[error("empty block")]
    EmptyBlock,
    #[error("empty manifest")]
    EmptyManifest,
    #[error("empty pixel sequence")]
    EmptySequence,
    #[error("empty image list")]
    EmptyList,
    #[error("empty dataset")]
    EmptyDataset,
    #[error("empty training set")]
    EmptyTrainSet,
    #[error("invalid parameter: {0}")]
    BadConfig(&'static str),
    #[error("index {index} out of range for order {order}")]
    IndexOutOfRange { order: u32, index: u64 },
    #[error("coordinate out of range for order {order}")]
    CoordOutOfRange { order: u32 },
    #[error("unsupported cut point {0} (expected 4, 8 or 16)")]
    UnsupportedCut(u32),
    #[error("entropy profile length {profile} does not match stream length {stream}")]
    ProfileMismatch { stream: usize, profile: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("spatial dimensions must be even for 2x2 pooling (got {h}x{w})")]
    OddSpatialDim { h: usize, w: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("training diverged at epoch {epoch}")]
    DivergenceDetected { epoch: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
