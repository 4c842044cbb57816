//! Prints a map of which 8-pixel edge segments the detector marks as
//! blocked, for vertical and horizontal block boundaries.
//!
//!     cargo run --example detect_edges [quality]

use jpeg_deblock::deblock::{detect_edge, interior_edges, smooth_all_boundaries, Orientation, RowFlag};
use jpeg_deblock::harness::{gen_synthetic, SyntheticKind, SyntheticSpec};
use jpeg_deblock::{encode_decode, CodecConfig, DeblockConfig};

fn main() -> jpeg_deblock::Result<()> {
    let quality = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(5);
    let original = gen_synthetic(&SyntheticSpec::new(SyntheticKind::SmoothNoise, 128, 128, 7))?;
    let (blocked, _) = encode_decode(&original, &CodecConfig::new(quality)?)?;
    let cfg = DeblockConfig::default();
    let smoothed = smooth_all_boundaries(&blocked, &cfg)?;

    for orientation in [Orientation::Vertical, Orientation::Horizontal] {
        println!("{orientation:?} edges ('#' blocked, digit = flagged rows):");
        let edges = interior_edges(&smoothed, orientation);
        // Boundary-major: one printed line per block boundary.
        let per_line = match orientation {
            Orientation::Vertical => smoothed.height() / 8,
            Orientation::Horizontal => smoothed.width() / 8,
        };
        let mut flags = [0usize; 4];
        for (i, edge) in edges.iter().enumerate() {
            let det = detect_edge(&smoothed, edge, &cfg)?;
            for f in det.flags {
                flags[match f {
                    RowFlag::NotTriggered => 0,
                    RowFlag::Eq1 => 1,
                    RowFlag::Eq2 => 2,
                    RowFlag::Both => 3,
                }] += 1;
            }
            if det.blocked {
                print!("#");
            } else {
                print!("{}", det.counter);
            }
            if (i + 1) % per_line == 0 {
                println!();
            }
        }
        println!("rows: none={} left-only={} right-only={} both={}\n", flags[0], flags[1], flags[2], flags[3]);
    }
    Ok(())
}
