//! Haar averaging/differencing transforms.
//!
//! Two 2D decompositions are provided, both behind [`Decomposition`]:
//!
//! * `standard`: the full 1D transform on every row, then on every column.
//! * `pyramid`: one row+column pass per level, recursing into the LL quadrant.
//!
//! Implementations are looked up by name through [`registry`] so the CLI and
//! the rate controller can pick one at runtime.

mod haar1d;
mod pyramid;
mod standard;

use std::fmt;
use std::str::FromStr;

pub use haar1d::{forward1d, inverse1d};
pub use pyramid::{forward2d_pyramid, inverse2d_pyramid, Pyramid};
pub use standard::{forward2d_standard, inverse2d_standard, Standard};

use crate::error::{Error, Result};
use crate::matrix::CoeffMatrix;
use crate::threshold::ExemptMask;

/// A reversible 2D wavelet decomposition.
pub trait Decomposition: Send + Sync + fmt::Debug {
    fn name(&self) -> &'static str;

    /// Decomposition depth; 0 for decompositions that always run to full depth.
    fn levels(&self) -> u32;

    fn forward(&self, m: &CoeffMatrix) -> Result<CoeffMatrix>;

    fn inverse(&self, m: &CoeffMatrix) -> Result<CoeffMatrix>;

    /// Positions holding averages rather than details for a `rows x cols` transform.
    fn exempt_mask(&self, rows: usize, cols: usize) -> Result<ExemptMask>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Standard,
    Pyramid,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Standard => "standard",
            Mode::Pyramid => "pyramid",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        registry::lookup(s).map(|entry| entry.mode)
    }
}

/// Decomposition mode plus depth. `levels` only matters for pyramid mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformSpec {
    pub mode: Mode,
    pub levels: u32,
}

impl TransformSpec {
    pub const STANDARD: TransformSpec = TransformSpec {
        mode: Mode::Standard,
        levels: 0,
    };

    pub fn pyramid(levels: u32) -> Self {
        Self {
            mode: Mode::Pyramid,
            levels,
        }
    }

    pub fn build(&self) -> Box<dyn Decomposition> {
        registry::build(self.mode, self.levels)
    }
}

impl Default for TransformSpec {
    fn default() -> Self {
        Self::STANDARD
    }
}

pub mod registry {
    //! Name-indexed table of the available decompositions.

    use super::{Decomposition, Mode, Pyramid, Standard};
    use crate::error::{Error, Result};

    pub struct Entry {
        pub name: &'static str,
        pub mode: Mode,
        pub summary: &'static str,
        pub build: fn(u32) -> Box<dyn Decomposition>,
    }

    static ENTRIES: &[Entry] = &[
        Entry {
            name: "standard",
            mode: Mode::Standard,
            summary: "full row transform, then full column transform",
            build: |_| Box::new(Standard),
        },
        Entry {
            name: "pyramid",
            mode: Mode::Pyramid,
            summary: "per-level row+column pass recursing into the LL band",
            build: |levels| Box::new(Pyramid { levels }),
        },
    ];

    pub fn entries() -> &'static [Entry] {
        ENTRIES
    }

    pub fn names() -> impl Iterator<Item = &'static str> {
        ENTRIES.iter().map(|e| e.name)
    }

    pub fn lookup(name: &str) -> Result<&'static Entry> {
        ENTRIES
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "transform mode",
                name: name.to_string(),
            })
    }

    pub fn build(mode: Mode, levels: u32) -> Box<dyn Decomposition> {
        let entry = ENTRIES
            .iter()
            .find(|e| e.mode == mode)
            .expect("every mode is registered");
        (entry.build)(levels)
    }
}

pub(crate) fn check_pow2_shape(m: &CoeffMatrix) -> Result<()> {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 || !rows.is_power_of_two() || !cols.is_power_of_two() {
        return Err(Error::InvalidShape { rows, cols });
    }
    Ok(())
}

/// Largest pyramid depth a `rows x cols` matrix supports.
pub fn max_levels(rows: usize, cols: usize) -> u32 {
    rows.min(cols).max(1).ilog2()
}

pub(crate) fn check_levels(rows: usize, cols: usize, levels: u32) -> Result<()> {
    if levels == 0 {
        return Err(Error::ZeroLevels);
    }
    let max = max_levels(rows, cols);
    if levels > max {
        return Err(Error::LevelTooDeep {
            levels,
            rows,
            cols,
            max,
        });
    }
    Ok(())
}
