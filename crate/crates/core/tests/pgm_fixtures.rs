use std::fs;
use std::path::PathBuf;

use jpeg_deblock::pgm::{decode_pgm, encode_pgm, load_pgm, save_pgm};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn raster(bytes: &[u8], w: usize, h: usize) -> &[u8] {
    &bytes[bytes.len() - w * h..]
}

#[test]
fn rasters_survive_round_trip() {
    for (name, w, h) in [("gradient16.pgm", 16, 16), ("commented13x9.pgm", 13, 9), ("noise24x8.pgm", 24, 8)] {
        let original = fs::read(fixture(name)).unwrap();
        let img = decode_pgm(&original).unwrap();
        assert_eq!((img.width(), img.height()), (w, h), "{name}");
        let written = encode_pgm(&img).unwrap();
        assert!(written.starts_with(format!("P5\n{w} {h}\n255\n").as_bytes()));
        assert_eq!(raster(&written, w, h), raster(&original, w, h), "{name}");
    }
}

#[test]
fn canonical_header_is_byte_identical() {
    let path = fixture("gradient16.pgm");
    let original = fs::read(&path).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("copy.pgm");
    save_pgm(&load_pgm(&path).unwrap(), &out).unwrap();
    assert_eq!(fs::read(out).unwrap(), original);
}

#[test]
fn missing_file_is_io_error() {
    let err = load_pgm(fixture("absent.pgm")).unwrap_err();
    assert!(matches!(err, jpeg_deblock::Error::Io(_)));
}
