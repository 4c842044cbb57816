//! Writes every synthetic fixture to a directory as PGM.
//!
//!     cargo run --example synth [out-dir] [seed]

use std::path::PathBuf;

use jpeg_deblock::harness::{gen_synthetic, SyntheticKind, SyntheticSpec};
use jpeg_deblock::pgm::save_pgm;

fn main() -> jpeg_deblock::Result<()> {
    let mut args = std::env::args().skip(1);
    let dir = PathBuf::from(args.next().unwrap_or_else(|| "fixtures".into()));
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    std::fs::create_dir_all(&dir)?;
    for kind in [SyntheticKind::Ramp, SyntheticKind::Step, SyntheticKind::SmoothNoise] {
        let spec = SyntheticSpec::new(kind, 256, 256, seed);
        let path = dir.join(format!("{spec}.pgm"));
        save_pgm(&gen_synthetic(&spec)?, &path)?;
        println!("{}", path.display());
    }
    Ok(())
}
