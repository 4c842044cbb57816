//! Simulates compression of a PGM (or a synthetic ramp) at several
//! qualities and prints error and entropy estimates.
//!
//!     cargo run --example encode [input.pgm]

use jpeg_deblock::harness::{gen_synthetic, SyntheticKind, SyntheticSpec};
use jpeg_deblock::pgm::load_pgm;
use jpeg_deblock::{encode_decode, CodecConfig, MetricsReport, QuantTable};

fn main() -> jpeg_deblock::Result<()> {
    let img = match std::env::args().nth(1) {
        Some(path) => load_pgm(path)?.crop_to_block_grid()?,
        None => gen_synthetic(&SyntheticSpec::new(SyntheticKind::Ramp, 256, 256, 0))?,
    };
    println!("quantization table at quality 10:\n{}", QuantTable::for_quality(10)?);
    for q in [1, 5, 10, 25, 50, 75, 95] {
        let (blocked, sidecar) = encode_decode(&img, &CodecConfig::new(q)?.with_bpp(true))?;
        let report = MetricsReport::compare(&img, &blocked)?
            .with_quality(q)
            .with_bpp(sidecar.bpp);
        println!("{report}");
    }
    Ok(())
}
