//! PGM (P2/P5) reading and writing, plus the power-of-two padding used to
//! feed arbitrary image sizes to the transforms.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::matrix::CoeffMatrix;

struct Header {
    binary: bool,
    width: usize,
    height: usize,
    maxval: u32,
    /// Offset of the first raster byte (P5) or the first unread byte (P2).
    data_start: usize,
}

/// Whitespace/comment-aware token scanner over the PGM header.
struct Tokens<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Tokens<'a> {
    fn skip_space(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Option<&'a [u8]> {
        self.skip_space();
        let start = self.pos;
        while let Some(&b) = self.data.get(self.pos) {
            if b.is_ascii_whitespace() || b == b'#' {
                break;
            }
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }

    fn next_number(&mut self, what: &str) -> Result<u32> {
        let tok = self
            .next_token()
            .ok_or_else(|| Error::BadFormat(format!("missing {what}")))?;
        parse_u32(tok).ok_or_else(|| {
            Error::BadFormat(format!(
                "{what} `{}` is not a number",
                String::from_utf8_lossy(tok)
            ))
        })
    }
}

fn parse_u32(tok: &[u8]) -> Option<u32> {
    std::str::from_utf8(tok).ok()?.parse().ok()
}

fn parse_header(data: &[u8]) -> Result<Header> {
    let mut toks = Tokens { data, pos: 0 };
    let binary = match toks.next_token() {
        Some(b"P5") => true,
        Some(b"P2") => false,
        Some(other) => {
            return Err(Error::BadFormat(format!(
                "unsupported magic `{}`",
                String::from_utf8_lossy(other)
            )))
        }
        None => return Err(Error::BadFormat("empty file".into())),
    };
    let width = toks.next_number("width")? as usize;
    let height = toks.next_number("height")? as usize;
    if width == 0 || height == 0 {
        return Err(Error::BadFormat(format!("degenerate size {width}x{height}")));
    }
    let maxval = toks.next_number("maxval")?;
    if maxval == 0 || maxval > 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    let mut data_start = toks.pos;
    if binary {
        // exactly one whitespace byte separates maxval from the raster
        match data.get(data_start) {
            Some(b) if b.is_ascii_whitespace() => data_start += 1,
            _ => return Err(Error::BadFormat("missing whitespace after maxval".into())),
        }
    }
    Ok(Header {
        binary,
        width,
        height,
        maxval,
        data_start,
    })
}

/// Parse an in-memory P2 or P5 graymap.
pub fn parse_pgm(data: &[u8]) -> Result<GrayImage> {
    let h = parse_header(data)?;
    let expected = h.width * h.height;
    let pixels = if h.binary {
        let raster = &data[h.data_start..];
        if raster.len() < expected {
            return Err(Error::TruncatedFile {
                expected,
                found: raster.len(),
            });
        }
        raster[..expected].to_vec()
    } else {
        let mut toks = Tokens {
            data,
            pos: h.data_start,
        };
        let mut pixels = Vec::with_capacity(expected);
        for found in 0..expected {
            let tok = toks
                .next_token()
                .ok_or(Error::TruncatedFile { expected, found })?;
            let v = parse_u32(tok).ok_or_else(|| {
                Error::BadFormat(format!(
                    "pixel `{}` is not a number",
                    String::from_utf8_lossy(tok)
                ))
            })?;
            if v > h.maxval {
                return Err(Error::BadFormat(format!("pixel {v} exceeds maxval {}", h.maxval)));
            }
            pixels.push(v as u8);
        }
        pixels
    };
    if let Some(&v) = pixels.iter().find(|&&v| u32::from(v) > h.maxval) {
        return Err(Error::BadFormat(format!("pixel {v} exceeds maxval {}", h.maxval)));
    }
    Ok(GrayImage::new(h.width, h.height, pixels))
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    parse_pgm(&fs::read(path)?)
}

/// Serialize as P5 (`binary`) or P2 with maxval 255.
pub fn encode_pgm(img: &GrayImage, binary: bool) -> Vec<u8> {
    let mut out = format!(
        "{}\n{} {}\n255\n",
        if binary { "P5" } else { "P2" },
        img.width(),
        img.height()
    )
    .into_bytes();
    if binary {
        out.extend_from_slice(img.pixels());
    } else {
        for row in img.pixels().chunks(img.width()) {
            let line = row.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
            out.extend_from_slice(line.as_bytes());
            out.push(b'\n');
        }
    }
    out
}

pub fn write_pgm(img: &GrayImage, path: impl AsRef<Path>, binary: bool) -> Result<()> {
    fs::write(path, encode_pgm(img, binary))?;
    Ok(())
}

/// Original `(width, height)` of an image before padding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OrigDims {
    pub width: usize,
    pub height: usize,
}

/// Grow each dimension to the next power of two by repeating the last
/// row and column.
pub fn pad_to_pow2(img: &GrayImage) -> (CoeffMatrix, OrigDims) {
    let (w, h) = (img.width(), img.height());
    let (pw, ph) = (w.next_power_of_two(), h.next_power_of_two());
    let m = CoeffMatrix::from_fn(ph, pw, |r, c| f64::from(img.get(c.min(w - 1), r.min(h - 1))));
    (m, OrigDims { width: w, height: h })
}

/// Crop to `dims`, round half away from zero and clamp into `0..=255`.
pub fn crop_and_quantize(m: &CoeffMatrix, dims: OrigDims) -> GrayImage {
    assert!(
        dims.width <= m.cols() && dims.height <= m.rows(),
        "crop {}x{} larger than {}x{} matrix",
        dims.width,
        dims.height,
        m.cols(),
        m.rows()
    );
    let mut pixels = Vec::with_capacity(dims.width * dims.height);
    for r in 0..dims.height {
        for &v in &m.row(r)[..dims.width] {
            pixels.push(quantize(v));
        }
    }
    GrayImage::new(dims.width, dims.height, pixels)
}

#[inline]
fn quantize(v: f64) -> u8 {
    if v.is_nan() {
        return 0;
    }
    v.round().clamp(0.0, 255.0) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ascii_example() {
        let img = parse_pgm(b"P2\n2 2\n255\n0 255 128 64\n").unwrap();
        assert_eq!(img, GrayImage::from_rows(&[[0u8, 255], [128, 64]]));
    }

    #[test]
    fn comments_are_skipped() {
        let img = parse_pgm(b"P2\n# made by hand\n2 # width\n1\n# max\n255\n7 # first\n9\n").unwrap();
        assert_eq!(img.pixels(), &[7, 9]);
        let img = parse_pgm(b"P5 # c\n2 1 255\n\x01\x02").unwrap();
        assert_eq!(img.pixels(), &[1, 2]);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            parse_pgm(b"P2\n1 1\n65535\n0\n"),
            Err(Error::UnsupportedMaxval(65535))
        ));
        assert!(matches!(parse_pgm(b"P6\n1 1\n255\n"), Err(Error::BadFormat(_))));
        assert!(matches!(parse_pgm(b""), Err(Error::BadFormat(_))));
        assert!(matches!(
            parse_pgm(b"P2\n2 2\n255\n1 2 3\n"),
            Err(Error::TruncatedFile {
                expected: 4,
                found: 3
            })
        ));
        assert!(matches!(
            parse_pgm(b"P5\n2 2\n255\n\x00\x01"),
            Err(Error::TruncatedFile {
                expected: 4,
                found: 2
            })
        ));
        assert!(matches!(
            parse_pgm(b"P2\n1 1\n15\n16\n"),
            Err(Error::BadFormat(_))
        ));
        assert!(matches!(parse_pgm(b"P2\n0 1\n255\n"), Err(Error::BadFormat(_))));
        assert!(matches!(
            parse_pgm(b"P2\n1 1\n255\nabc\n"),
            Err(Error::BadFormat(_))
        ));
    }

    #[test]
    fn padding_examples() {
        let img = GrayImage::new(4, 3, (0..12).collect());
        let (m, dims) = pad_to_pow2(&img);
        assert_eq!(m.shape(), (4, 4));
        assert_eq!(dims, OrigDims { width: 4, height: 3 });
        assert_eq!(m.row(3), m.row(2));

        let img = GrayImage::new(5, 5, (0..25).collect());
        let (m, _) = pad_to_pow2(&img);
        assert_eq!(m.shape(), (8, 8));
        for r in 0..8 {
            for c in 5..8 {
                assert_eq!(m[(r, c)], m[(r, 4)]);
            }
        }
        let back = crop_and_quantize(&m, dims_of(&img));
        assert_eq!(back, img);

        let img = GrayImage::filled(256, 256, 3);
        assert_eq!(pad_to_pow2(&img).0, img.to_matrix());
    }

    fn dims_of(img: &GrayImage) -> OrigDims {
        OrigDims {
            width: img.width(),
            height: img.height(),
        }
    }

    #[test]
    fn quantize_rounds_and_clamps() {
        let m = CoeffMatrix::from_rows(&[[127.5, -3.2, 260.0, 0.49], [2.5, -0.5, 254.5, f64::NAN]]);
        let img = crop_and_quantize(&m, OrigDims { width: 4, height: 2 });
        assert_eq!(img.pixels(), &[128, 0, 255, 0, 3, 0, 255, 0]);
    }

    fn image_strategy() -> impl Strategy<Value = GrayImage> {
        (1usize..20, 1usize..20).prop_flat_map(|(w, h)| {
            prop::collection::vec(any::<u8>(), w * h).prop_map(move |p| GrayImage::new(w, h, p))
        })
    }

    proptest! {
        #[test]
        fn write_read_roundtrip(img in image_strategy(), binary in any::<bool>()) {
            prop_assert_eq!(parse_pgm(&encode_pgm(&img, binary)).unwrap(), img);
        }

        #[test]
        fn pad_then_crop_is_identity(img in image_strategy()) {
            let (m, dims) = pad_to_pow2(&img);
            prop_assert!(m.rows().is_power_of_two() && m.cols().is_power_of_two());
            prop_assert_eq!(crop_and_quantize(&m, dims), img);
        }
    }
}
