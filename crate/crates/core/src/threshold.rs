//! Detail-coefficient thresholding.
//!
//! Every policy leaves the exempt block (the averages) untouched and zeroes a
//! detail `x` exactly when `|x| < eps`. Policies are registered by name in
//! [`registry`].

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::CoeffMatrix;

/// Top-left block of a transform that holds averages rather than details.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExemptMask {
    rows: usize,
    cols: usize,
    block_rows: usize,
    block_cols: usize,
}

impl ExemptMask {
    pub fn new(rows: usize, cols: usize, block_rows: usize, block_cols: usize) -> Result<Self> {
        if block_rows == 0 || block_cols == 0 || block_rows > rows || block_cols > cols {
            return Err(Error::InvalidShape { rows, cols });
        }
        Ok(Self {
            rows,
            cols,
            block_rows,
            block_cols,
        })
    }

    #[inline]
    pub fn contains(&self, row: usize, col: usize) -> bool {
        row < self.block_rows && col < self.block_cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn block(&self) -> (usize, usize) {
        (self.block_rows, self.block_cols)
    }

    pub fn exempt_count(&self) -> usize {
        self.block_rows * self.block_cols
    }

    pub fn detail_count(&self) -> usize {
        self.rows * self.cols - self.exempt_count()
    }

    /// Values at non-exempt positions, row-major.
    pub fn details<'a>(&'a self, c: &'a CoeffMatrix) -> impl Iterator<Item = f64> + 'a {
        c.iter_indexed()
            .filter(move |&(r, col, _)| !self.contains(r, col))
            .map(|(_, _, v)| v)
    }

    fn check(&self, c: &CoeffMatrix) -> Result<()> {
        if c.shape() != self.shape() {
            return Err(Error::ShapeMismatch {
                left_rows: c.rows(),
                left_cols: c.cols(),
                right_rows: self.rows,
                right_cols: self.cols,
            });
        }
        Ok(())
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(Error::InvalidThreshold(eps));
    }
    Ok(())
}

fn map_details(c: &CoeffMatrix, mask: &ExemptMask, f: impl Fn(f64) -> f64) -> CoeffMatrix {
    let cols = c.cols();
    let mut out = c.clone();
    for (i, v) in out.as_mut_slice().iter_mut().enumerate() {
        if !mask.contains(i / cols, i % cols) {
            *v = f(*v);
        }
    }
    out
}

/// Zero every detail with `|x| < eps`; keep everything else.
pub fn apply_hard(c: &CoeffMatrix, eps: f64, mask: &ExemptMask) -> Result<CoeffMatrix> {
    check_eps(eps)?;
    mask.check(c)?;
    Ok(map_details(c, mask, |x| if x.abs() < eps { 0.0 } else { x }))
}

/// Zero details with `|x| < eps` and shrink the rest toward zero by `eps`.
pub fn apply_soft(c: &CoeffMatrix, eps: f64, mask: &ExemptMask) -> Result<CoeffMatrix> {
    check_eps(eps)?;
    mask.check(c)?;
    Ok(map_details(c, mask, |x| {
        if x.abs() < eps {
            0.0
        } else {
            x.signum() * (x.abs() - eps)
        }
    }))
}

/// `sigma * sqrt(2 * log2(N))` over the `N` non-exempt coefficients, with
/// `sigma` their population standard deviation.
pub fn universal_epsilon(c: &CoeffMatrix, mask: &ExemptMask) -> Result<f64> {
    mask.check(c)?;
    // Welford's single pass
    let mut n = 0usize;
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for x in mask.details(c) {
        n += 1;
        let delta = x - mean;
        mean += delta / n as f64;
        m2 += delta * (x - mean);
    }
    if n < 2 {
        return Err(Error::InsufficientCoefficients(n));
    }
    let sigma = (m2 / n as f64).sqrt();
    Ok(sigma * (2.0 * (n as f64).log2()).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ThresholdMethod {
    None,
    Hard,
    Soft,
    Universal,
}

impl ThresholdMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            ThresholdMethod::None => "none",
            ThresholdMethod::Hard => "hard",
            ThresholdMethod::Soft => "soft",
            ThresholdMethod::Universal => "universal",
        }
    }
}

impl fmt::Display for ThresholdMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ThresholdMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        registry::lookup(s).map(|e| e.method)
    }
}

/// Method plus its user-supplied epsilon. Universal computes its own.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPolicy {
    None,
    Hard(f64),
    Soft(f64),
    Universal,
}

impl ThresholdPolicy {
    pub fn method(&self) -> ThresholdMethod {
        match self {
            ThresholdPolicy::None => ThresholdMethod::None,
            ThresholdPolicy::Hard(_) => ThresholdMethod::Hard,
            ThresholdPolicy::Soft(_) => ThresholdMethod::Soft,
            ThresholdPolicy::Universal => ThresholdMethod::Universal,
        }
    }

    pub fn build(&self) -> Result<Box<dyn Thresholder>> {
        let eps = match *self {
            ThresholdPolicy::Hard(e) | ThresholdPolicy::Soft(e) => Some(e),
            _ => None,
        };
        registry::build(self.method(), eps)
    }
}

/// Thresholded coefficients together with the epsilon actually used.
#[derive(Debug, Clone)]
pub struct Thresholded {
    pub coeffs: CoeffMatrix,
    pub epsilon: f64,
}

pub trait Thresholder: Send + Sync + fmt::Debug {
    fn method(&self) -> ThresholdMethod;

    /// Epsilon this policy would use on `c`.
    fn epsilon(&self, c: &CoeffMatrix, mask: &ExemptMask) -> Result<f64>;

    fn apply(&self, c: &CoeffMatrix, mask: &ExemptMask) -> Result<Thresholded>;
}

#[derive(Debug)]
struct Identity;

impl Thresholder for Identity {
    fn method(&self) -> ThresholdMethod {
        ThresholdMethod::None
    }

    fn epsilon(&self, _: &CoeffMatrix, _: &ExemptMask) -> Result<f64> {
        Ok(0.0)
    }

    fn apply(&self, c: &CoeffMatrix, mask: &ExemptMask) -> Result<Thresholded> {
        mask.check(c)?;
        Ok(Thresholded {
            coeffs: c.clone(),
            epsilon: 0.0,
        })
    }
}

#[derive(Debug)]
struct Hard(f64);

impl Thresholder for Hard {
    fn method(&self) -> ThresholdMethod {
        ThresholdMethod::Hard
    }

    fn epsilon(&self, _: &CoeffMatrix, _: &ExemptMask) -> Result<f64> {
        Ok(self.0)
    }

    fn apply(&self, c: &CoeffMatrix, mask: &ExemptMask) -> Result<Thresholded> {
        Ok(Thresholded {
            coeffs: apply_hard(c, self.0, mask)?,
            epsilon: self.0,
        })
    }
}

#[derive(Debug)]
struct Soft(f64);

impl Thresholder for Soft {
    fn method(&self) -> ThresholdMethod {
        ThresholdMethod::Soft
    }

    fn epsilon(&self, _: &CoeffMatrix, _: &ExemptMask) -> Result<f64> {
        Ok(self.0)
    }

    fn apply(&self, c: &CoeffMatrix, mask: &ExemptMask) -> Result<Thresholded> {
        Ok(Thresholded {
            coeffs: apply_soft(c, self.0, mask)?,
            epsilon: self.0,
        })
    }
}

#[derive(Debug)]
struct Universal;

impl Thresholder for Universal {
    fn method(&self) -> ThresholdMethod {
        ThresholdMethod::Universal
    }

    fn epsilon(&self, c: &CoeffMatrix, mask: &ExemptMask) -> Result<f64> {
        universal_epsilon(c, mask)
    }

    fn apply(&self, c: &CoeffMatrix, mask: &ExemptMask) -> Result<Thresholded> {
        let epsilon = universal_epsilon(c, mask)?;
        Ok(Thresholded {
            coeffs: apply_hard(c, epsilon, mask)?,
            epsilon,
        })
    }
}

pub mod registry {
    //! Name-indexed table of thresholding policies.

    use super::{check_eps, Hard, Identity, Soft, ThresholdMethod, Thresholder, Universal};
    use crate::error::{Error, Result};

    pub struct Entry {
        pub name: &'static str,
        pub method: ThresholdMethod,
        /// Whether the policy takes a user-supplied epsilon.
        pub takes_epsilon: bool,
        build: fn(f64) -> Box<dyn Thresholder>,
    }

    static ENTRIES: &[Entry] = &[
        Entry {
            name: "none",
            method: ThresholdMethod::None,
            takes_epsilon: false,
            build: |_| Box::new(Identity),
        },
        Entry {
            name: "hard",
            method: ThresholdMethod::Hard,
            takes_epsilon: true,
            build: |e| Box::new(Hard(e)),
        },
        Entry {
            name: "soft",
            method: ThresholdMethod::Soft,
            takes_epsilon: true,
            build: |e| Box::new(Soft(e)),
        },
        Entry {
            name: "universal",
            method: ThresholdMethod::Universal,
            takes_epsilon: false,
            build: |_| Box::new(Universal),
        },
    ];

    pub fn entries() -> &'static [Entry] {
        ENTRIES
    }

    pub fn lookup(name: &str) -> Result<&'static Entry> {
        ENTRIES
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "threshold method",
                name: name.to_string(),
            })
    }

    /// Instantiate a policy. Policies that take an epsilon default it to 0.
    pub fn build(method: ThresholdMethod, epsilon: Option<f64>) -> Result<Box<dyn Thresholder>> {
        let entry = ENTRIES
            .iter()
            .find(|e| e.method == method)
            .expect("every method is registered");
        let eps = if entry.takes_epsilon {
            epsilon.unwrap_or(0.0)
        } else {
            0.0
        };
        check_eps(eps)?;
        Ok((entry.build)(eps))
    }

    pub fn by_name(name: &str, epsilon: Option<f64>) -> Result<Box<dyn Thresholder>> {
        build(lookup(name)?.method, epsilon)
    }
}
