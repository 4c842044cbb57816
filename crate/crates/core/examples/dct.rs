//! Forward transform of one block, its quantized indices at a low quality
//! and the reconstruction error.
//!
//!     cargo run --example dct

use jpeg_deblock::codec::{dct8x8_forward, dct8x8_inverse, dequantize, quantize};
use jpeg_deblock::QuantTable;

fn print(label: &str, rows: impl Iterator<Item = String>) {
    println!("{label}");
    for r in rows {
        println!("  {r}");
    }
}

fn main() -> jpeg_deblock::Result<()> {
    let block: [[f64; 8]; 8] = std::array::from_fn(|r| std::array::from_fn(|c| (8 * r + 4 * c) as f64 - 128.0));
    let coeffs = dct8x8_forward(&block);
    print("coefficients:", coeffs.iter().map(|r| r.iter().map(|v| format!("{v:8.2}")).collect()));

    let table = QuantTable::for_quality(10)?;
    let idx = quantize(&coeffs, &table);
    print("indices at q=10:", idx.iter().map(|r| r.iter().map(|v| format!("{v:4}")).collect()));

    let back = dct8x8_inverse(&dequantize(&idx, &table));
    let worst = block
        .iter()
        .flatten()
        .zip(back.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("max reconstruction error: {worst:.3}");
    Ok(())
}
