//! Compares two PGM files, or the built-in ramp against its q=10 decode.
//!
//!     cargo run --example metrics [reference.pgm test.pgm]

use jpeg_deblock::harness::{gen_synthetic, SyntheticKind, SyntheticSpec};
use jpeg_deblock::pgm::load_pgm;
use jpeg_deblock::{encode_decode, psnr_from_mse, CodecConfig, MetricsReport};

fn main() -> jpeg_deblock::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (reference, test) = match args.as_slice() {
        [a, b] => (load_pgm(a)?, load_pgm(b)?),
        _ => {
            let img = gen_synthetic(&SyntheticSpec::new(SyntheticKind::Ramp, 256, 256, 0))?;
            let (out, _) = encode_decode(&img, &CodecConfig::new(10)?)?;
            (img, out)
        }
    };
    println!("{}", MetricsReport::compare(&reference, &test)?);
    for mse in [0.0, 1.0, 18.7149, 39.8685, 65025.0] {
        println!("mse {mse:>10} -> psnr {:.4}", psnr_from_mse(mse)?);
    }
    Ok(())
}
