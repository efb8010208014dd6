//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

use hwz_core::{CoeffMatrix, GrayImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const BLOCK8: [[f64; 8]; 8] = [
    [64., 2., 3., 61., 60., 6., 7., 57.],
    [9., 55., 54., 12., 13., 51., 50., 16.],
    [17., 47., 46., 20., 21., 43., 42., 24.],
    [40., 26., 27., 37., 36., 30., 31., 33.],
    [32., 34., 35., 29., 28., 38., 39., 25.],
    [41., 23., 22., 44., 45., 19., 18., 48.],
    [49., 15., 14., 52., 53., 11., 10., 56.],
    [8., 58., 59., 5., 4., 62., 63., 1.],
];

/// Rows of BLOCK8 after the full row transform.
pub const BLOCK8_ROWS: [[f64; 8]; 8] = [
    [32.5, 0., 0.5, 0.5, 31., -29., 27., -25.],
    [32.5, 0., -0.5, -0.5, -23., 21., -19., 17.],
    [32.5, 0., -0.5, -0.5, -15., 13., -11., 9.],
    [32.5, 0., 0.5, 0.5, 7., -5., 3., -1.],
    [32.5, 0., 0.5, 0.5, -1., 3., -5., 7.],
    [32.5, 0., -0.5, -0.5, 9., -11., 13., -15.],
    [32.5, 0., -0.5, -0.5, 17., -19., 21., -23.],
    [32.5, 0., 0.5, 0.5, -25., 27., -29., 31.],
];

/// Full standard transform of BLOCK8.
pub const BLOCK8_STANDARD: [[f64; 8]; 8] = [
    [32.5, 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 0., 0., 0., 0.],
    [0., 0., 0., 0., 4., -4., 4., -4.],
    [0., 0., 0., 0., 4., -4., 4., -4.],
    [0., 0., 0.5, 0.5, 27., -25., 23., -21.],
    [0., 0., -0.5, -0.5, -11., 9., -7., 5.],
    [0., 0., 0.5, 0.5, -5., 7., -9., 11.],
    [0., 0., -0.5, -0.5, 21., -23., 25., -27.],
];

pub fn block8() -> CoeffMatrix {
    CoeffMatrix::from_rows(&BLOCK8)
}

pub fn block8_image() -> GrayImage {
    GrayImage::new(8, 8, BLOCK8.iter().flatten().map(|&v| v as u8).collect())
}

pub fn block8_standard() -> CoeffMatrix {
    CoeffMatrix::from_rows(&BLOCK8_STANDARD)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_image(rng: &mut impl Rng, width: usize, height: usize) -> GrayImage {
    GrayImage::new(width, height, (0..width * height).map(|_| rng.gen()).collect())
}

/// Smooth-ish random image: a few gradients plus noise, so thresholding has
/// something meaningful to remove.
pub fn textured_image(rng: &mut impl Rng, n: usize) -> GrayImage {
    let (a, b, c) = (
        rng.gen_range(0.0..2.0),
        rng.gen_range(0.0..2.0),
        rng.gen_range(0.0..60.0),
    );
    let pixels = (0..n * n)
        .map(|i| {
            let (x, y) = ((i % n) as f64, (i / n) as f64);
            let v = a * x + b * y + c * ((x / 5.0).sin() + (y / 7.0).cos()) + rng.gen_range(-10.0..10.0);
            v.round().clamp(0.0, 255.0) as u8
        })
        .collect();
    GrayImage::new(n, n, pixels)
}

pub fn random_matrix(rng: &mut impl Rng, rows: usize, cols: usize) -> CoeffMatrix {
    CoeffMatrix::from_fn(rows, cols, |_, _| f64::from(rng.gen::<u8>()))
}

// ---------------------------------------------------------------------------
// Brute-force transform oracle: every averaging/differencing pass is an
// explicit dense operator, and the 2D transforms are plain matrix products.

type Dense = Vec<Vec<f64>>;

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect()
}

fn matmul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b[0].len());
    let mut out = vec![vec![0.0; m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut s = 0.0;
            for t in 0..k {
                s += a[i][t] * b[t][j];
            }
            out[i][j] = s;
        }
    }
    out
}

fn transpose(a: &Dense) -> Dense {
    (0..a[0].len())
        .map(|j| a.iter().map(|r| r[j]).collect())
        .collect()
}

/// Operator for one forward pass on the first `width` of `n` samples.
fn analysis_pass(n: usize, width: usize) -> Dense {
    let mut w = identity(n);
    let half = width / 2;
    for k in 0..half {
        w[k] = vec![0.0; n];
        w[k][2 * k] = 0.5;
        w[k][2 * k + 1] = 0.5;
        // x[2k] - (x[2k] + x[2k+1]) / 2
        w[half + k] = vec![0.0; n];
        w[half + k][2 * k] = 0.5;
        w[half + k][2 * k + 1] = -0.5;
    }
    w
}

/// Operator undoing `analysis_pass(n, width)`.
fn synthesis_pass(n: usize, width: usize) -> Dense {
    let mut v = identity(n);
    let half = width / 2;
    for k in 0..half {
        v[2 * k] = vec![0.0; n];
        v[2 * k][k] = 1.0;
        v[2 * k][half + k] = 1.0;
        v[2 * k + 1] = vec![0.0; n];
        v[2 * k + 1][k] = 1.0;
        v[2 * k + 1][half + k] = -1.0;
    }
    v
}

/// Full-depth 1D analysis operator: passes at widths n, n/2, ..., 2.
fn full_analysis(n: usize) -> Dense {
    let mut op = identity(n);
    let mut width = n;
    while width > 1 {
        op = matmul(&analysis_pass(n, width), &op);
        width /= 2;
    }
    op
}

fn full_synthesis(n: usize) -> Dense {
    let mut op = identity(n);
    let mut width = 2;
    while width <= n {
        op = matmul(&synthesis_pass(n, width), &op);
        width *= 2;
    }
    op
}

fn to_dense(m: &CoeffMatrix) -> Dense {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn from_dense(d: &Dense) -> CoeffMatrix {
    CoeffMatrix::from_rows(d)
}

pub fn oracle_forward_standard(m: &CoeffMatrix) -> CoeffMatrix {
    let d = to_dense(m);
    let rows_done = matmul(&d, &transpose(&full_analysis(m.cols())));
    from_dense(&matmul(&full_analysis(m.rows()), &rows_done))
}

pub fn oracle_inverse_standard(m: &CoeffMatrix) -> CoeffMatrix {
    let d = to_dense(m);
    let cols_undone = matmul(&full_synthesis(m.rows()), &d);
    from_dense(&matmul(&cols_undone, &transpose(&full_synthesis(m.cols()))))
}

fn block(d: &Dense, h: usize, w: usize) -> Dense {
    d[..h].iter().map(|r| r[..w].to_vec()).collect()
}

fn put_block(d: &mut Dense, b: &Dense) {
    for (r, row) in b.iter().enumerate() {
        d[r][..row.len()].copy_from_slice(row);
    }
}

/// Each level transforms only the current top-left LL block.
pub fn oracle_forward_pyramid(m: &CoeffMatrix, levels: u32) -> CoeffMatrix {
    let mut d = to_dense(m);
    for level in 0..levels {
        let (h, w) = (m.rows() >> level, m.cols() >> level);
        let ll = block(&d, h, w);
        let ll = matmul(&ll, &transpose(&analysis_pass(w, w)));
        let ll = matmul(&analysis_pass(h, h), &ll);
        put_block(&mut d, &ll);
    }
    from_dense(&d)
}

pub fn oracle_inverse_pyramid(m: &CoeffMatrix, levels: u32) -> CoeffMatrix {
    let mut d = to_dense(m);
    for level in (0..levels).rev() {
        let (h, w) = (m.rows() >> level, m.cols() >> level);
        let ll = block(&d, h, w);
        let ll = matmul(&synthesis_pass(h, h), &ll);
        let ll = matmul(&ll, &transpose(&synthesis_pass(w, w)));
        put_block(&mut d, &ll);
    }
    from_dense(&d)
}

// ---------------------------------------------------------------------------

/// Two-pass population statistics of the values outside the top-left
/// `block_rows x block_cols` block, then sigma * sqrt(2 log2 N).
pub fn oracle_universal_epsilon(m: &CoeffMatrix, block_rows: usize, block_cols: usize) -> f64 {
    let mut details = Vec::new();
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !(r < block_rows && c < block_cols) {
                details.push(m[(r, c)]);
            }
        }
    }
    let n = details.len() as f64;
    let mean = details.iter().sum::<f64>() / n;
    let var = details.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    var.sqrt() * (2.0 * n.log2()).sqrt()
}

/// Candidate epsilons rebuilt from scratch: 0, then the next float above
/// each distinct nonzero detail magnitude.
pub fn oracle_candidates(coeffs: &CoeffMatrix, block_rows: usize, block_cols: usize) -> Vec<f64> {
    let mut mags = std::collections::BTreeSet::new();
    for r in 0..coeffs.rows() {
        for c in 0..coeffs.cols() {
            let v = coeffs[(r, c)];
            if !(r < block_rows && c < block_cols) && v != 0.0 {
                mags.insert(v.abs().to_bits());
            }
        }
    }
    std::iter::once(0.0)
        .chain(mags.into_iter().map(|b| f64::from_bits(b).next_up()))
        .collect()
}
