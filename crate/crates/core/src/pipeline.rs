//! Image -> padded matrix -> transform -> threshold -> sparse stream, and back.

use crate::codec::{self, CompressedHeader, SparseCoeffs, FORMAT_VERSION};
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::matrix::CoeffMatrix;
use crate::metrics::MetricsReport;
use crate::pgm::{crop_and_quantize, pad_to_pow2, OrigDims};
use crate::threshold::{apply_hard, ExemptMask, ThresholdMethod, Thresholder};
use crate::transform::{Decomposition, Mode, TransformSpec};

/// A transformed image, ready to be thresholded any number of times.
#[derive(Debug)]
pub struct Pipeline<'a> {
    image: &'a GrayImage,
    spec: TransformSpec,
    decomposition: Box<dyn Decomposition>,
    dims: OrigDims,
    padded: CoeffMatrix,
    coeffs: CoeffMatrix,
    mask: ExemptMask,
}

/// Result of thresholding and reconstructing once.
#[derive(Debug, Clone)]
pub struct Compressed {
    pub header: CompressedHeader,
    pub thresholded: CoeffMatrix,
    pub reconstructed: GrayImage,
    pub report: MetricsReport,
}

impl Compressed {
    pub fn sparse(&self) -> SparseCoeffs {
        codec::to_sparse(&self.thresholded)
    }

    pub fn encode(&self) -> Result<Vec<u8>> {
        codec::encode(&self.header, &self.sparse())
    }
}

impl<'a> Pipeline<'a> {
    pub fn new(image: &'a GrayImage, spec: TransformSpec) -> Result<Self> {
        let (padded, dims) = pad_to_pow2(image);
        let decomposition = spec.build();
        let coeffs = decomposition.forward(&padded)?;
        let mask = decomposition.exempt_mask(padded.rows(), padded.cols())?;
        if u8::try_from(decomposition.levels()).is_err() {
            return Err(Error::LevelTooDeep {
                levels: decomposition.levels(),
                rows: padded.rows(),
                cols: padded.cols(),
                max: u8::MAX.into(),
            });
        }
        Ok(Self {
            image,
            spec,
            decomposition,
            dims,
            padded,
            coeffs,
            mask,
        })
    }

    pub fn image(&self) -> &GrayImage {
        self.image
    }

    pub fn spec(&self) -> TransformSpec {
        self.spec
    }

    /// The padded pixel matrix that was transformed.
    pub fn padded(&self) -> &CoeffMatrix {
        &self.padded
    }

    pub fn coefficients(&self) -> &CoeffMatrix {
        &self.coeffs
    }

    pub fn mask(&self) -> &ExemptMask {
        &self.mask
    }

    pub fn header(&self, method: ThresholdMethod, epsilon: f64) -> CompressedHeader {
        CompressedHeader {
            format_version: FORMAT_VERSION,
            mode: self.spec.mode,
            levels: match self.spec.mode {
                Mode::Standard => 0,
                Mode::Pyramid => self.decomposition.levels() as u8,
            },
            threshold_method: method,
            epsilon,
            orig_width: self.dims.width as u32,
            orig_height: self.dims.height as u32,
            padded_width: self.padded.cols() as u32,
            padded_height: self.padded.rows() as u32,
        }
    }

    fn finish(&self, method: ThresholdMethod, epsilon: f64, thresholded: CoeffMatrix) -> Result<Compressed> {
        let restored = self.decomposition.inverse(&thresholded)?;
        let reconstructed = crop_and_quantize(&restored, self.dims);
        let report = MetricsReport::compute(&self.padded, &thresholded, self.image, &reconstructed)?;
        Ok(Compressed {
            header: self.header(method, epsilon),
            thresholded,
            reconstructed,
            report,
        })
    }

    pub fn run(&self, policy: &dyn Thresholder) -> Result<Compressed> {
        let out = policy.apply(&self.coeffs, &self.mask)?;
        self.finish(policy.method(), out.epsilon, out.coeffs)
    }

    /// Shortcut for hard thresholding at `epsilon`.
    pub fn run_hard(&self, epsilon: f64) -> Result<Compressed> {
        let thresholded = apply_hard(&self.coeffs, epsilon, &self.mask)?;
        self.finish(ThresholdMethod::Hard, epsilon, thresholded)
    }
}

/// Rebuild the 8-bit image described by a decoded stream.
pub fn reconstruct(header: &CompressedHeader, sparse: &SparseCoeffs) -> Result<GrayImage> {
    let coeffs = codec::from_sparse(sparse)?;
    let spec = TransformSpec {
        mode: header.mode,
        levels: u32::from(header.levels),
    };
    let restored = spec.build().inverse(&coeffs)?;
    Ok(crop_and_quantize(
        &restored,
        OrigDims {
            width: header.orig_width as usize,
            height: header.orig_height as usize,
        },
    ))
}

pub fn decompress(data: &[u8]) -> Result<GrayImage> {
    let (header, sparse) = codec::decode(data)?;
    reconstruct(&header, &sparse)
}
