use crate::error::{Error, Result};
use crate::matrix::CoeffMatrix;

/// 8-bit grayscale raster, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Panics if `pixels.len() != width * height`.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Self {
        assert_eq!(
            pixels.len(),
            width * height,
            "pixel count does not match dimensions"
        );
        Self {
            width,
            height,
            pixels,
        }
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let width = rows.first().map_or(0, |r| r.as_ref().len());
        let mut pixels = Vec::with_capacity(width * rows.len());
        for r in rows {
            assert_eq!(r.as_ref().len(), width, "ragged rows");
            pixels.extend_from_slice(r.as_ref());
        }
        Self::new(width, rows.len(), pixels)
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self::new(width, height, vec![value; width * height])
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Exact real-valued copy with the same shape (rows = height).
    pub fn to_matrix(&self) -> CoeffMatrix {
        CoeffMatrix::from_vec(
            self.height,
            self.width,
            self.pixels.iter().map(|&p| f64::from(p)).collect(),
        )
    }

    pub(crate) fn ensure_same_shape(&self, other: &Self) -> Result<()> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::ShapeMismatch {
                left_rows: self.height,
                left_cols: self.width,
                right_rows: other.height,
                right_cols: other.width,
            });
        }
        Ok(())
    }
}
