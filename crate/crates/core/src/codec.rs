//! The HWZ1 container: a fixed little-endian header followed by the nonzero
//! coefficients as `(row, col, value)` records in row-major order.
//!
//! ```text
//! offset size field
//!      0    4 magic "HWZ1"
//!      4    1 version (1)
//!      5    1 mode (0 standard, 1 pyramid)
//!      6    1 levels
//!      7    1 threshold method (0 none, 1 hard, 2 soft, 3 universal)
//!      8    8 epsilon, f64
//!     16    4 original width
//!     20    4 original height
//!     24    4 padded width
//!     28    4 padded height
//!     32    4 entry count
//!     36   16 per entry: u32 row, u32 col, f64 value
//! ```

use crate::error::{Error, Result};
use crate::matrix::CoeffMatrix;
use crate::threshold::ThresholdMethod;
use crate::transform::{max_levels, Mode};

pub const MAGIC: [u8; 4] = *b"HWZ1";
pub const FORMAT_VERSION: u8 = 1;
pub const HEADER_LEN: usize = 4 + 1 + 1 + 1 + 1 + 8 + 4 + 4 + 4 + 4 + 4;
pub const ENTRY_LEN: usize = 4 + 4 + 8;

/// Size in bytes of an encoded stream with `nnz` entries.
pub const fn encoded_len(nnz: usize) -> usize {
    HEADER_LEN + ENTRY_LEN * nnz
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparseEntry {
    pub row: u32,
    pub col: u32,
    pub value: f64,
}

/// Nonzero coefficients of a `rows x cols` matrix, strictly sorted by
/// `(row, col)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseCoeffs {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<SparseEntry>,
}

impl SparseCoeffs {
    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn validate(&self) -> Result<()> {
        let mut prev: Option<(u32, u32)> = None;
        for (i, e) in self.entries.iter().enumerate() {
            if e.row as usize >= self.rows || e.col as usize >= self.cols {
                return Err(Error::MalformedSparse(format!(
                    "entry {i} at ({}, {}) outside {}x{}",
                    e.row, e.col, self.rows, self.cols
                )));
            }
            if e.value == 0.0 || !e.value.is_finite() {
                return Err(Error::MalformedSparse(format!(
                    "entry {i} has value {} (must be finite and nonzero)",
                    e.value
                )));
            }
            let key = (e.row, e.col);
            if let Some(p) = prev {
                if key == p {
                    return Err(Error::MalformedSparse(format!(
                        "duplicate position ({}, {})",
                        e.row, e.col
                    )));
                }
                if key < p {
                    return Err(Error::MalformedSparse(format!(
                        "entry {i} at ({}, {}) is out of order",
                        e.row, e.col
                    )));
                }
            }
            prev = Some(key);
        }
        Ok(())
    }
}

/// Every exactly-nonzero position of `c`, row-major.
pub fn to_sparse(c: &CoeffMatrix) -> SparseCoeffs {
    let entries = c
        .iter_indexed()
        .filter(|&(_, _, v)| v != 0.0)
        .map(|(r, col, value)| SparseEntry {
            row: r as u32,
            col: col as u32,
            value,
        })
        .collect();
    SparseCoeffs {
        rows: c.rows(),
        cols: c.cols(),
        entries,
    }
}

pub fn from_sparse(s: &SparseCoeffs) -> Result<CoeffMatrix> {
    s.validate()?;
    let mut m = CoeffMatrix::zeros(s.rows, s.cols);
    for e in &s.entries {
        m[(e.row as usize, e.col as usize)] = e.value;
    }
    Ok(m)
}

/// Everything needed to rebuild an image from the stored coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressedHeader {
    pub format_version: u8,
    pub mode: Mode,
    pub levels: u8,
    pub threshold_method: ThresholdMethod,
    pub epsilon: f64,
    pub orig_width: u32,
    pub orig_height: u32,
    pub padded_width: u32,
    pub padded_height: u32,
}

impl CompressedHeader {
    fn validate(&self) -> std::result::Result<(), String> {
        let (pw, ph) = (self.padded_width as usize, self.padded_height as usize);
        if !pw.is_power_of_two() || !ph.is_power_of_two() {
            return Err(format!("padded size {pw}x{ph} is not a power of two"));
        }
        if self.orig_width == 0 || self.orig_height == 0 {
            return Err("original size must be nonzero".into());
        }
        if self.orig_width > self.padded_width || self.orig_height > self.padded_height {
            return Err(format!(
                "original size {}x{} exceeds padded size {pw}x{ph}",
                self.orig_width, self.orig_height
            ));
        }
        if self.mode == Mode::Pyramid {
            let max = max_levels(ph, pw);
            if self.levels == 0 || u32::from(self.levels) > max {
                return Err(format!(
                    "pyramid levels {} outside 1..={max} for {pw}x{ph}",
                    self.levels
                ));
            }
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 0.0) {
            return Err(format!(
                "epsilon {} is not a finite nonnegative number",
                self.epsilon
            ));
        }
        Ok(())
    }
}

fn mode_code(mode: Mode) -> u8 {
    match mode {
        Mode::Standard => 0,
        Mode::Pyramid => 1,
    }
}

fn method_code(method: ThresholdMethod) -> u8 {
    match method {
        ThresholdMethod::None => 0,
        ThresholdMethod::Hard => 1,
        ThresholdMethod::Soft => 2,
        ThresholdMethod::Universal => 3,
    }
}

pub fn encode(header: &CompressedHeader, s: &SparseCoeffs) -> Result<Vec<u8>> {
    if header.format_version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(header.format_version));
    }
    header.validate().map_err(Error::HeaderMismatch)?;
    if header.padded_height as usize != s.rows || header.padded_width as usize != s.cols {
        return Err(Error::HeaderMismatch(format!(
            "header says {}x{} but payload is {}x{}",
            header.padded_width, header.padded_height, s.cols, s.rows
        )));
    }
    s.validate()?;
    let count = u32::try_from(s.nnz())
        .map_err(|_| Error::HeaderMismatch(format!("{} entries exceed u32", s.nnz())))?;

    let mut out = Vec::with_capacity(encoded_len(s.nnz()));
    out.extend_from_slice(&MAGIC);
    out.push(header.format_version);
    out.push(mode_code(header.mode));
    out.push(header.levels);
    out.push(method_code(header.threshold_method));
    out.extend_from_slice(&header.epsilon.to_le_bytes());
    for v in [
        header.orig_width,
        header.orig_height,
        header.padded_width,
        header.padded_height,
        count,
    ] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for e in &s.entries {
        out.extend_from_slice(&e.row.to_le_bytes());
        out.extend_from_slice(&e.col.to_le_bytes());
        out.extend_from_slice(&e.value.to_le_bytes());
    }
    Ok(out)
}

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take<const N: usize>(&mut self) -> [u8; N] {
        let bytes = self.data[self.pos..self.pos + N].try_into().unwrap();
        self.pos += N;
        bytes
    }

    fn u8(&mut self) -> u8 {
        self.take::<1>()[0]
    }

    fn u32(&mut self) -> u32 {
        u32::from_le_bytes(self.take())
    }

    fn f64(&mut self) -> f64 {
        f64::from_le_bytes(self.take())
    }
}

pub fn decode(data: &[u8]) -> Result<(CompressedHeader, SparseCoeffs)> {
    if data.len() < MAGIC.len() {
        return Err(Error::TruncatedPayload {
            needed: HEADER_LEN,
            available: data.len(),
        });
    }
    if data[..4] != MAGIC {
        return Err(Error::BadMagic);
    }
    if data.len() < HEADER_LEN {
        return Err(Error::TruncatedPayload {
            needed: HEADER_LEN,
            available: data.len(),
        });
    }
    let mut rd = Reader { data, pos: 4 };
    let format_version = rd.u8();
    if format_version != FORMAT_VERSION {
        return Err(Error::UnsupportedVersion(format_version));
    }
    let mode = match rd.u8() {
        0 => Mode::Standard,
        1 => Mode::Pyramid,
        b => return Err(Error::BadHeaderField(format!("mode byte {b}"))),
    };
    let levels = rd.u8();
    let threshold_method = match rd.u8() {
        0 => ThresholdMethod::None,
        1 => ThresholdMethod::Hard,
        2 => ThresholdMethod::Soft,
        3 => ThresholdMethod::Universal,
        b => return Err(Error::BadHeaderField(format!("threshold method byte {b}"))),
    };
    let header = CompressedHeader {
        format_version,
        mode,
        levels,
        threshold_method,
        epsilon: rd.f64(),
        orig_width: rd.u32(),
        orig_height: rd.u32(),
        padded_width: rd.u32(),
        padded_height: rd.u32(),
    };
    header.validate().map_err(Error::BadHeaderField)?;
    let count = rd.u32() as usize;

    let needed = count
        .checked_mul(ENTRY_LEN)
        .and_then(|n| n.checked_add(HEADER_LEN))
        .unwrap_or(usize::MAX);
    if data.len() < needed {
        return Err(Error::TruncatedPayload {
            needed,
            available: data.len(),
        });
    }
    if data.len() > needed {
        return Err(Error::TrailingBytes(data.len() - needed));
    }
    let entries = (0..count)
        .map(|_| SparseEntry {
            row: rd.u32(),
            col: rd.u32(),
            value: rd.f64(),
        })
        .collect();
    let sparse = SparseCoeffs {
        rows: header.padded_height as usize,
        cols: header.padded_width as usize,
        entries,
    };
    sparse.validate()?;
    Ok((header, sparse))
}
