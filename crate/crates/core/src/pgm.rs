//! Binary PGM (`P5`) reading and writing.
//!
//! Only 8-bit rasters are accepted. The writer always emits the exact
//! header `P5\n<w> <h>\n255\n` followed by the row-major raster.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::image::Image;

pub fn load_pgm(path: impl AsRef<Path>) -> Result<Image> {
    let data = fs::read(path)?;
    decode_pgm(&data)
}

pub fn save_pgm(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_pgm(img)?;
    fs::write(path, bytes)?;
    Ok(())
}

pub fn write_pgm<W: Write>(img: &Image, mut out: W) -> Result<()> {
    out.write_all(&encode_pgm(img)?)?;
    Ok(())
}

pub fn encode_pgm(img: &Image) -> Result<Vec<u8>> {
    let raster = img.to_bytes()?;
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend_from_slice(&raster);
    Ok(out)
}

struct HeaderCursor<'a> {
    data: &'a [u8],
    pos: usize,
}

impl HeaderCursor<'_> {
    fn skip_whitespace_and_comments(&mut self) {
        while let Some(&b) = self.data.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.data.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<u32> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.data.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::MalformedHeader(format!("expected {what}")));
        }
        std::str::from_utf8(&self.data[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::MalformedHeader(format!("{what} is not a valid number")))
    }
}

pub fn decode_pgm(data: &[u8]) -> Result<Image> {
    if data.len() < 2 || &data[..2] != b"P5" {
        let magic = String::from_utf8_lossy(&data[..data.len().min(2)]).into_owned();
        return Err(Error::BadMagic(magic));
    }
    let mut cur = HeaderCursor { data, pos: 2 };
    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "zero dimension {width}x{height}"
        )));
    }
    if maxval == 0 {
        return Err(Error::MalformedHeader("maxval must be positive".into()));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedMaxval(maxval));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match data.get(cur.pos) {
        Some(b) if b.is_ascii_whitespace() => cur.pos += 1,
        _ => {
            return Err(Error::MalformedHeader(
                "missing whitespace after maxval".into(),
            ))
        }
    }
    let expected = width * height;
    let raster = &data[cur.pos..];
    if raster.len() < expected {
        return Err(Error::TruncatedRaster {
            expected,
            found: raster.len(),
        });
    }
    Image::from_bytes(width, height, &raster[..expected])
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p5(header: &str, raster: &[u8]) -> Vec<u8> {
        let mut v = header.as_bytes().to_vec();
        v.extend_from_slice(raster);
        v
    }

    #[test]
    fn decodes_2x2() {
        let img = decode_pgm(&p5("P5\n2 2\n255\n", &[0, 255, 128, 64])).unwrap();
        assert_eq!((img.width(), img.height()), (2, 2));
        assert_eq!(img.get(0, 0), 0.0);
        assert_eq!(img.get(0, 1), 255.0);
        assert_eq!(img.get(1, 0), 128.0);
        assert_eq!(img.get(1, 1), 64.0);
    }

    #[test]
    fn header_comments_are_skipped() {
        let img = decode_pgm(&p5("P5 # made by hand\n# second\n3 1 255\n", &[1, 2, 3])).unwrap();
        assert_eq!(img.pixels(), &[1.0, 2.0, 3.0]);
    }

    #[test]
    fn rejects_16_bit() {
        let err = decode_pgm(&p5("P5\n1 1\n65535\n", &[0, 0])).unwrap_err();
        assert!(matches!(err, Error::UnsupportedMaxval(65535)));
        assert!(err.to_string().contains("unsupported maxval"));
    }

    #[test]
    fn distinct_errors() {
        assert!(matches!(
            decode_pgm(b"P2\n1 1\n255\n0"),
            Err(Error::BadMagic(_))
        ));
        assert!(matches!(
            decode_pgm(b"P5\n1 x\n255\n0"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(
            decode_pgm(&p5("P5\n4 4\n255\n", &[0; 10])),
            Err(Error::TruncatedRaster {
                expected: 16,
                found: 10
            })
        ));
    }

    #[test]
    fn encodes_single_pixel() {
        let img = Image::from_bytes(1, 1, &[42]).unwrap();
        assert_eq!(encode_pgm(&img).unwrap(), b"P5\n1 1\n255\n\x2a");
    }

    #[test]
    fn refuses_working_form() {
        let img = Image::new(1, 1, vec![255.4]).unwrap();
        assert!(matches!(
            encode_pgm(&img),
            Err(Error::NotStorageForm { .. })
        ));
    }

    proptest! {
        #[test]
        fn round_trip((w, bytes) in (1usize..20, 1usize..20)
            .prop_flat_map(|(w, h)| (Just(w), proptest::collection::vec(any::<u8>(), w * h))))
        {
            let img = Image::from_bytes(w, bytes.len() / w, &bytes).unwrap();
            let back = decode_pgm(&encode_pgm(&img).unwrap()).unwrap();
            prop_assert_eq!(back, img);
        }
    }
}
