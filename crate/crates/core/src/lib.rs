//! Haar averaging/differencing wavelet compression for 8-bit grayscale
//! images.
//!
//! The crate is organized around two runtime-selectable strategy families:
//! [`transform::Decomposition`] (standard or pyramid) and
//! [`threshold::Thresholder`] (none, hard, soft, universal). Both are looked
//! up by name in their module's `registry`. Around them sit the sparse
//! [`codec`], the [`metrics`], threshold search in [`rate`], PGM I/O in
//! [`pgm`] and epsilon sweeps in [`sweep`].

pub mod codec;
pub mod error;
pub mod image;
pub mod matrix;
pub mod metrics;
pub mod pgm;
pub mod pipeline;
pub mod rate;
pub mod sweep;
pub mod threshold;
pub mod transform;

pub use error::{Error, Result};
pub use image::GrayImage;
pub use matrix::CoeffMatrix;
pub use metrics::MetricsReport;
pub use pipeline::{Compressed, Pipeline};
pub use threshold::{ExemptMask, ThresholdMethod, ThresholdPolicy, Thresholder};
pub use transform::{Decomposition, Mode, TransformSpec};

/// Environment variable capping worker threads; 0 or unset keeps rayon's default.
pub const THREADS_ENV: &str = "HWZ_THREADS";

/// Size the global thread pool from `HWZ_THREADS`. Call once, before any
/// parallel work; later calls are ignored.
pub fn init_threads_from_env() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| Error::InvalidEnv(format!("{THREADS_ENV}=`{raw}` is not a thread count")))?;
    if n > 0 {
        // a pool that is already initialized keeps its size
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}
