//! Compresses a fixture at low quality, runs the post-filter and reports
//! the PSNR change together with pipeline counters. Writes the three
//! images next to each other when an output directory is given.
//!
//!     cargo run --example deblock [quality] [out-dir]

use std::path::PathBuf;

use jpeg_deblock::deblock::deblock_pipeline_with_stats;
use jpeg_deblock::harness::{gen_synthetic, SyntheticKind, SyntheticSpec};
use jpeg_deblock::metrics::psnr;
use jpeg_deblock::pgm::save_pgm;
use jpeg_deblock::{encode_decode, CodecConfig, DeblockConfig};

fn main() -> jpeg_deblock::Result<()> {
    let mut args = std::env::args().skip(1);
    let quality = args.next().and_then(|s| s.parse().ok()).unwrap_or(5);
    let out_dir = args.next().map(PathBuf::from);

    let original = gen_synthetic(&SyntheticSpec::new(SyntheticKind::SmoothNoise, 256, 256, 42))?;
    let (blocked, _) = encode_decode(&original, &CodecConfig::new(quality)?)?;
    let cfg = DeblockConfig::default();
    let (deblocked, stats) = deblock_pipeline_with_stats(&blocked, &cfg)?;

    let before = psnr(&original, &blocked)?;
    let after = psnr(&original, &deblocked)?;
    println!("quality {quality}: blocked {before:.4} dB, deblocked {after:.4} dB");
    println!("{stats:#?}");

    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir)?;
        save_pgm(&original, dir.join("original.pgm"))?;
        save_pgm(&blocked, dir.join("blocked.pgm"))?;
        save_pgm(&deblocked, dir.join("deblocked.pgm"))?;
    }
    Ok(())
}
