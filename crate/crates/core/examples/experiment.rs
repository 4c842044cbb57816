//! Runs the blocked-vs-deblocked matrix on the built-in synthetic fixtures
//! and prints the CSV to stdout.
//!
//!     cargo run --release --example experiment [seed]

use jpeg_deblock::harness::{gen_synthetic, run_matrix, write_csv, CorpusImage, SyntheticKind, SyntheticSpec};
use jpeg_deblock::DeblockConfig;

fn main() -> jpeg_deblock::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(42);
    let images = [SyntheticKind::Ramp, SyntheticKind::Step, SyntheticKind::SmoothNoise]
        .into_iter()
        .map(|kind| {
            let spec = SyntheticSpec::new(kind, 256, 256, seed);
            gen_synthetic(&spec).map(|img| CorpusImage::new(spec.to_string(), img))
        })
        .collect::<jpeg_deblock::Result<Vec<_>>>()?;
    let outcome = run_matrix(&images, &[1, 5, 10], &DeblockConfig::default());
    write_csv(&outcome.rows, std::io::stdout().lock())?;
    for f in &outcome.failures {
        eprintln!("{} q={:?}: {}", f.image, f.quality, f.error);
    }
    Ok(())
}
