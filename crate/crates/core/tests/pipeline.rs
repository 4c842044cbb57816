use jpeg_deblock::codec::{encode_decode, CodecConfig};
use jpeg_deblock::harness::{gen_synthetic, run_matrix, write_csv, CorpusImage, SyntheticKind, SyntheticSpec, CSV_HEADER};
use jpeg_deblock::metrics::psnr;
use jpeg_deblock::{deblock_pipeline, mse, psnr_from_mse, DeblockConfig, Image};

fn synth(kind: SyntheticKind, w: usize, h: usize, seed: u64) -> Image {
    gen_synthetic(&SyntheticSpec::new(kind, w, h, seed)).unwrap()
}

fn blocked(img: &Image, q: u32) -> Image {
    encode_decode(img, &CodecConfig::new(q).unwrap()).unwrap().0
}

#[test]
fn mse_does_not_increase_with_quality() {
    for kind in [SyntheticKind::Ramp, SyntheticKind::Step, SyntheticKind::SmoothNoise] {
        let img = synth(kind, 128, 128, 5);
        let errs: Vec<f64> = [1, 5, 10].iter().map(|&q| mse(&img, &blocked(&img, q)).unwrap()).collect();
        assert!(errs.windows(2).all(|w| w[1] <= w[0]), "{kind:?}: {errs:?}");
    }
}

#[test]
fn ramp_discontinuities_sit_on_block_boundaries() {
    let img = synth(SyntheticKind::Ramp, 128, 64, 0);
    for q in [1, 5, 10] {
        let out = blocked(&img, q);
        let (mut edge, mut inner) = (Vec::new(), Vec::new());
        for r in 0..out.height() {
            for c in 1..out.width() {
                let d = (out.get(r, c) - out.get(r, c - 1)).abs();
                if c % 8 == 0 { edge.push(d) } else { inner.push(d) }
            }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        assert!(mean(&edge) > mean(&inner), "q={q}");
    }
}

#[test]
fn bpp_grows_with_quality() {
    let img = synth(SyntheticKind::SmoothNoise, 128, 128, 2);
    let bpp: Vec<f64> = [1, 5, 10, 50, 90]
        .iter()
        .map(|&q| encode_decode(&img, &CodecConfig::new(q).unwrap().with_bpp(true)).unwrap().1.bpp.unwrap())
        .collect();
    assert!(bpp.windows(2).all(|w| w[1] >= w[0]), "{bpp:?}");
}

#[test]
fn deblocking_helps_blocky_ramp() {
    let img = synth(SyntheticKind::Ramp, 256, 256, 0);
    let b = blocked(&img, 5);
    let d = deblock_pipeline(&b, &DeblockConfig::default()).unwrap();
    assert!(psnr(&img, &d).unwrap().db() > psnr(&img, &b).unwrap().db());
}

#[test]
fn mid_block_step_is_untouched() {
    let img = synth(SyntheticKind::Step, 256, 64, 0);
    assert_eq!(deblock_pipeline(&img, &DeblockConfig::default()).unwrap(), img);
}

#[test]
fn smooth_noise_is_smooth() {
    for seed in [0, 1, 42] {
        let img = synth(SyntheticKind::SmoothNoise, 256, 256, seed);
        let diffs: Vec<f64> = (0..img.height())
            .flat_map(|r| img.row(r).windows(2).map(|p| (p[1] - p[0]).abs()).collect::<Vec<_>>())
            .collect();
        let small = diffs.iter().filter(|&&d| d <= 8.0).count() as f64 / diffs.len() as f64;
        assert!(small >= 0.95, "seed {seed}: {small}");
    }
}

#[test]
fn matrix_rows_are_consistent_and_serialise() {
    let images = vec![
        CorpusImage::new("ramp", synth(SyntheticKind::Ramp, 64, 64, 0)),
        CorpusImage::new("noise", synth(SyntheticKind::SmoothNoise, 64, 64, 3)),
    ];
    let out = run_matrix(&images, &[1, 5, 10], &DeblockConfig::default());
    assert!(out.failures.is_empty());
    assert_eq!(out.rows.len(), 6);
    assert_eq!(out.rows[0].image, "ramp");
    assert_eq!(out.rows[3].quality, 1);
    for row in &out.rows {
        assert!((psnr_from_mse(row.mse_blocked).unwrap().db() - row.psnr_blocked.db()).abs() < 1e-3);
        assert!((psnr_from_mse(row.mse_deblocked).unwrap().db() - row.psnr_deblocked.db()).abs() < 1e-3);
        assert!((row.delta_psnr - (row.psnr_deblocked.db() - row.psnr_blocked.db())).abs() < 1e-9);
    }

    let mut buf = Vec::new();
    write_csv(&out.rows, &mut buf).unwrap();
    let mut rdr = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(rdr.headers().unwrap().iter().collect::<Vec<_>>(), CSV_HEADER);
    let records: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 6);
    for (rec, row) in records.iter().zip(&out.rows) {
        let psnr_b: f64 = rec[2].parse().unwrap();
        assert!((psnr_b - row.psnr_blocked.db()).abs() < 1e-4);
    }
}
