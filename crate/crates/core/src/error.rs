use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vector length {0} is not a power of two")]
    InvalidLength(usize),
    #[error("matrix shape {rows}x{cols} is not a power of two in both dimensions")]
    InvalidShape { rows: usize, cols: usize },
    #[error("{levels} decomposition levels requested but a {rows}x{cols} matrix supports at most {max}")]
    LevelTooDeep {
        levels: u32,
        rows: usize,
        cols: usize,
        max: u32,
    },
    #[error("pyramid decomposition needs at least one level")]
    ZeroLevels,
    #[error("threshold must be a finite nonnegative number, got {0}")]
    InvalidThreshold(f64),
    #[error("universal threshold needs at least 2 non-exempt coefficients, found {0}")]
    InsufficientCoefficients(usize),
    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("reference image has zero energy")]
    DegenerateReference,
    #[error("matrix contains a non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("malformed sparse payload: {0}")]
    MalformedSparse(String),
    #[error("header does not match payload: {0}")]
    HeaderMismatch(String),
    #[error("bad magic bytes, not an HWZ1 stream")]
    BadMagic,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u8),
    #[error("payload truncated: needed {needed} bytes, have {available}")]
    TruncatedPayload { needed: usize, available: usize },
    #[error("invalid header field: {0}")]
    BadHeaderField(String),
    #[error("{0} unexpected bytes after the last entry")]
    TrailingBytes(usize),
    #[error("invalid rate target: {0}")]
    InvalidTarget(String),
    #[error("unknown {kind} `{name}`")]
    UnknownStrategy { kind: &'static str, name: String },
    #[error("bad PGM data: {0}")]
    BadFormat(String),
    #[error("unsupported PGM maxval {0} (must be 1..=255)")]
    UnsupportedMaxval(u32),
    #[error("PGM file truncated: expected {expected} pixels, found {found}")]
    TruncatedFile { expected: usize, found: usize },
    #[error("invalid epsilon list: {0}")]
    InvalidSweep(String),
    #[error("bad environment setting: {0}")]
    InvalidEnv(String),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
