//! Simulation of the lossy core of baseline JPEG.
//!
//! Each 8×8 block is level shifted by −128, transformed with an orthonormal
//! 2-D DCT-II, quantized and dequantized with a quality-scaled luminance
//! table, inverse transformed and shifted back. Entropy coding is lossless
//! and therefore skipped; [`estimate_bpp`] gives a first-order entropy
//! estimate of the quantized coefficients instead of a real file size.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::BLOCK;

pub type Block = [[f64; BLOCK]; BLOCK];

/// Luminance quantization table from Annex K of the JPEG standard, row-major
/// (row = vertical frequency).
const ANNEX_K_LUMINANCE: [[u16; BLOCK]; BLOCK] = [
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantTable {
    pub steps: [[u16; BLOCK]; BLOCK],
    pub quality: u32,
}

impl QuantTable {
    /// Table with every step equal to 1.
    pub fn unit() -> Self {
        Self {
            steps: [[1; BLOCK]; BLOCK],
            quality: 100,
        }
    }

    pub fn for_quality(quality: u32) -> Result<Self> {
        scale_table(&base_luminance_table(), quality)
    }
}

impl fmt::Display for QuantTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.steps {
            let line: Vec<String> = row.iter().map(|s| format!("{s:3}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

pub fn base_luminance_table() -> QuantTable {
    QuantTable {
        steps: ANNEX_K_LUMINANCE,
        quality: 50,
    }
}

/// IJG quality scaling: `scale = 5000 / q` below 50, `200 − 2q` otherwise.
pub fn scale_table(base: &QuantTable, quality: u32) -> Result<QuantTable> {
    if !(1..=100).contains(&quality) {
        return Err(Error::Quality(quality));
    }
    let scale = if quality < 50 {
        5000 / quality
    } else {
        200 - 2 * quality
    };
    let mut steps = [[0u16; BLOCK]; BLOCK];
    for (out_row, base_row) in steps.iter_mut().zip(&base.steps) {
        for (out, &b) in out_row.iter_mut().zip(base_row) {
            let v = (u32::from(b) * scale + 50) / 100;
            *out = v.clamp(1, 255) as u16;
        }
    }
    Ok(QuantTable { steps, quality })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodecConfig {
    pub quality: u32,
    pub estimate_bpp: bool,
}

impl CodecConfig {
    pub fn new(quality: u32) -> Result<Self> {
        if !(1..=100).contains(&quality) {
            return Err(Error::Quality(quality));
        }
        Ok(Self {
            quality,
            estimate_bpp: false,
        })
    }

    pub fn with_bpp(mut self, on: bool) -> Self {
        self.estimate_bpp = on;
        self
    }
}

/// Information produced alongside a simulated decode.
#[derive(Debug, Clone, PartialEq)]
pub struct CodecSidecar {
    pub table: QuantTable,
    pub bpp: Option<f64>,
}

/// `basis[k][n] = c(k)/2 · cos((2n+1)kπ/16)`, `c(0) = 1/√2`.
fn dct_basis() -> &'static Block {
    static BASIS: OnceLock<Block> = OnceLock::new();
    BASIS.get_or_init(|| {
        let mut m = [[0.0; BLOCK]; BLOCK];
        for (k, row) in m.iter_mut().enumerate() {
            let ck = if k == 0 { std::f64::consts::FRAC_1_SQRT_2 } else { 1.0 };
            for (n, v) in row.iter_mut().enumerate() {
                *v = 0.5 * ck * ((2 * n + 1) as f64 * k as f64 * PI / 16.0).cos();
            }
        }
        m
    })
}

/// Forward orthonormal 2-D DCT-II of a level-shifted block, computed
/// separably as `B · f · Bᵀ`. Output is indexed `[vertical][horizontal]`.
pub fn dct8x8_forward(block: &Block) -> Block {
    let b = dct_basis();
    let mut tmp = [[0.0; BLOCK]; BLOCK];
    // rows: tmp[y][u] = Σx f[y][x] b[u][x]
    for y in 0..BLOCK {
        for u in 0..BLOCK {
            tmp[y][u] = (0..BLOCK).map(|x| block[y][x] * b[u][x]).sum();
        }
    }
    let mut out = [[0.0; BLOCK]; BLOCK];
    for v in 0..BLOCK {
        for u in 0..BLOCK {
            out[v][u] = (0..BLOCK).map(|y| b[v][y] * tmp[y][u]).sum();
        }
    }
    out
}

pub fn dct8x8_inverse(coeffs: &Block) -> Block {
    let b = dct_basis();
    let mut tmp = [[0.0; BLOCK]; BLOCK];
    // tmp[v][x] = Σu F[v][u] b[u][x]
    for v in 0..BLOCK {
        for x in 0..BLOCK {
            tmp[v][x] = (0..BLOCK).map(|u| coeffs[v][u] * b[u][x]).sum();
        }
    }
    let mut out = [[0.0; BLOCK]; BLOCK];
    for y in 0..BLOCK {
        for x in 0..BLOCK {
            out[y][x] = (0..BLOCK).map(|v| b[v][y] * tmp[v][x]).sum();
        }
    }
    out
}

/// Quantization indices `round(c / step)`, ties away from zero.
pub fn quantize(coeffs: &Block, table: &QuantTable) -> [[i32; BLOCK]; BLOCK] {
    let mut out = [[0; BLOCK]; BLOCK];
    for r in 0..BLOCK {
        for c in 0..BLOCK {
            out[r][c] = (coeffs[r][c] / f64::from(table.steps[r][c])).round() as i32;
        }
    }
    out
}

pub fn dequantize(indices: &[[i32; BLOCK]; BLOCK], table: &QuantTable) -> Block {
    let mut out = [[0.0; BLOCK]; BLOCK];
    for r in 0..BLOCK {
        for c in 0..BLOCK {
            out[r][c] = f64::from(indices[r][c]) * f64::from(table.steps[r][c]);
        }
    }
    out
}

pub fn quantize_dequantize(coeffs: &Block, table: &QuantTable) -> Block {
    dequantize(&quantize(coeffs, table), table)
}

/// First-order entropy of `stream` in bits per pixel: `H · symbols / pixels`.
pub fn estimate_bpp(stream: &[i32], pixels: usize) -> f64 {
    if stream.is_empty() || pixels == 0 {
        return 0.0;
    }
    let mut hist: HashMap<i32, usize> = HashMap::new();
    for &s in stream {
        *hist.entry(s).or_default() += 1;
    }
    let n = stream.len() as f64;
    let mut counts: Vec<usize> = hist.into_values().collect();
    counts.sort_unstable();
    let entropy: f64 = counts
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.log2()
        })
        .sum();
    entropy * n / pixels as f64
}

fn read_block(img: &Image, by: usize, bx: usize) -> Block {
    let mut block = [[0.0; BLOCK]; BLOCK];
    for (y, row) in block.iter_mut().enumerate() {
        let src = &img.row(by * BLOCK + y)[bx * BLOCK..(bx + 1) * BLOCK];
        for (v, s) in row.iter_mut().zip(src) {
            *v = s - 128.0;
        }
    }
    block
}

/// Runs `per_block` on every level-shifted block and reassembles the
/// result (unshifted, not yet clamped). Blocks are processed in parallel,
/// one block row per task.
fn map_blocks<T: Send>(
    img: &Image,
    per_block: impl Fn(&Block) -> (Block, T) + Sync,
) -> Result<(Image, Vec<T>)> {
    img.check_block_aligned()?;
    let (w, h) = (img.width(), img.height());
    let blocks_x = w / BLOCK;
    let rows: Vec<(Vec<f64>, Vec<T>)> = (0..h / BLOCK)
        .into_par_iter()
        .map(|by| {
            let mut strip = vec![0.0; w * BLOCK];
            let mut extras = Vec::with_capacity(blocks_x);
            for bx in 0..blocks_x {
                let (out, extra) = per_block(&read_block(img, by, bx));
                for (y, row) in out.iter().enumerate() {
                    let dst = &mut strip[y * w + bx * BLOCK..y * w + (bx + 1) * BLOCK];
                    for (d, v) in dst.iter_mut().zip(row) {
                        *d = v + 128.0;
                    }
                }
                extras.push(extra);
            }
            (strip, extras)
        })
        .collect();
    let mut pixels = Vec::with_capacity(w * h);
    let mut extras = Vec::with_capacity(blocks_x * h / BLOCK);
    for (strip, e) in rows {
        pixels.extend(strip);
        extras.extend(e);
    }
    Ok((Image::new(w, h, pixels)?, extras))
}

/// Forward and inverse DCT with no quantization; the storage-form output
/// equals the input exactly.
pub fn transform_round_trip(img: &Image) -> Result<Image> {
    let (out, _) = map_blocks(img, |b| (dct8x8_inverse(&dct8x8_forward(b)), ()))?;
    Ok(out.to_storage())
}

pub fn encode_decode_with_table(
    img: &Image,
    table: &QuantTable,
    estimate: bool,
) -> Result<(Image, CodecSidecar)> {
    img.check_storage_form()?;
    let (out, indices) = map_blocks(img, |b| {
        let q = quantize(&dct8x8_forward(b), table);
        (dct8x8_inverse(&dequantize(&q, table)), q)
    })?;
    let bpp = estimate.then(|| {
        let stream: Vec<i32> = indices.iter().flatten().flatten().copied().collect();
        estimate_bpp(&stream, img.len())
    });
    Ok((
        out.to_storage(),
        CodecSidecar {
            table: table.clone(),
            bpp,
        },
    ))
}

/// Simulated compress/decompress at `cfg.quality`; returns a storage-form image.
pub fn encode_decode(img: &Image, cfg: &CodecConfig) -> Result<(Image, CodecSidecar)> {
    let table = QuantTable::for_quality(cfg.quality)?;
    encode_decode_with_table(img, &table, cfg.estimate_bpp)
}
