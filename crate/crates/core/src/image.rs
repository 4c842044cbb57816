//! Grayscale image model.
//!
//! An [`Image`] is always real-valued. Pixels read from disk are integral
//! and inside `[0, 255]` ("storage form"); intermediate results of the
//! deblocking filter may be fractional or leave that range ("working
//! form"). Conversion back to storage form happens once, via
//! [`Image::to_storage`].

use crate::error::{Error, Result};
use crate::BLOCK;

#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    width: usize,
    height: usize,
    pixels: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, pixels: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Dimensions {
                width,
                height,
                reason: "width and height must be positive",
            });
        }
        if pixels.len() != width * height {
            return Err(Error::Dimensions {
                width,
                height,
                reason: "pixel count does not match width x height",
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Image with every pixel set to `value`.
    pub fn filled(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn from_bytes(width: usize, height: usize, bytes: &[u8]) -> Result<Self> {
        Self::new(width, height, bytes.iter().map(|&b| f64::from(b)).collect())
    }

    /// Builds an image by evaluating `f(row, col)` for every pixel.
    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> f64,
    ) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                pixels.push(f(r, c));
            }
        }
        Self::new(width, height, pixels)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    #[inline]
    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    #[inline]
    pub fn pixels_mut(&mut self) -> &mut [f64] {
        &mut self.pixels
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.pixels[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        self.pixels[row * self.width + col] = value;
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.pixels[row * self.width..(row + 1) * self.width]
    }

    pub fn column(&self, col: usize) -> Vec<f64> {
        (0..self.height).map(|r| self.get(r, col)).collect()
    }

    /// Index of the first pixel that is not integral or lies outside `[0, 255]`.
    pub fn first_non_storage(&self) -> Option<usize> {
        self.pixels
            .iter()
            .position(|&v| !(0.0..=255.0).contains(&v) || v.fract() != 0.0)
    }

    pub fn is_storage_form(&self) -> bool {
        self.first_non_storage().is_none()
    }

    /// Fails with [`Error::NotStorageForm`] unless every pixel is an integer in `[0, 255]`.
    pub fn check_storage_form(&self) -> Result<()> {
        match self.first_non_storage() {
            None => Ok(()),
            Some(index) => Err(Error::NotStorageForm {
                index,
                value: self.pixels[index],
            }),
        }
    }

    /// Raster bytes of a storage-form image.
    pub fn to_bytes(&self) -> Result<Vec<u8>> {
        self.check_storage_form()?;
        Ok(self.pixels.iter().map(|&v| v as u8).collect())
    }

    /// Clamps every pixel to `[0, 255]` and rounds to the nearest integer,
    /// ties away from zero.
    pub fn to_storage(&self) -> Image {
        Image {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().map(|&v| to_storage_value(v)).collect(),
        }
    }

    pub fn is_block_aligned(&self) -> bool {
        self.width % BLOCK == 0 && self.height % BLOCK == 0
    }

    pub fn check_block_aligned(&self) -> Result<()> {
        if self.is_block_aligned() {
            Ok(())
        } else {
            Err(Error::Dimensions {
                width: self.width,
                height: self.height,
                reason: "dimensions must be multiples of 8",
            })
        }
    }

    /// Crops (top-left anchored) to the largest multiple-of-8 dimensions.
    pub fn crop_to_block_grid(&self) -> Result<Image> {
        if self.width < BLOCK || self.height < BLOCK {
            return Err(Error::Dimensions {
                width: self.width,
                height: self.height,
                reason: "image is smaller than one 8x8 block",
            });
        }
        let width = self.width - self.width % BLOCK;
        let height = self.height - self.height % BLOCK;
        if width == self.width && height == self.height {
            return Ok(self.clone());
        }
        let mut pixels = Vec::with_capacity(width * height);
        for r in 0..height {
            pixels.extend_from_slice(&self.row(r)[..width]);
        }
        Image::new(width, height, pixels)
    }
}

#[inline]
pub fn to_storage_value(v: f64) -> f64 {
    // f64::round rounds half-way cases away from zero.
    v.clamp(0.0, 255.0).round()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_pixel_count() {
        assert!(Image::new(2, 2, vec![0.0; 3]).is_err());
        assert!(Image::new(0, 2, vec![]).is_err());
    }

    #[test]
    fn to_storage_clamps_and_rounds() {
        let img = Image::new(3, 1, vec![-3.0, 260.2, 110.5]).unwrap();
        assert_eq!(img.to_storage().pixels(), &[0.0, 255.0, 111.0]);
        let img = Image::new(4, 1, vec![0.5, 1.49, 254.5, 2.5]).unwrap();
        assert_eq!(img.to_storage().pixels(), &[1.0, 1.0, 255.0, 3.0]);
    }

    #[test]
    fn to_storage_is_identity_on_storage_form() {
        let img = Image::from_bytes(2, 2, &[0, 255, 128, 64]).unwrap();
        assert_eq!(img.to_storage(), img);
    }

    #[test]
    fn storage_form_check() {
        let img = Image::new(2, 1, vec![12.0, 255.4]).unwrap();
        assert!(matches!(
            img.check_storage_form(),
            Err(Error::NotStorageForm { index: 1, .. })
        ));
        assert!(img.to_bytes().is_err());
    }

    #[test]
    fn crop_keeps_512_square() {
        let img = Image::filled(512, 512, 7.0).unwrap();
        let out = img.crop_to_block_grid().unwrap();
        assert_eq!((out.width(), out.height()), (512, 512));
    }

    #[test]
    fn crop_13x9_to_8x8_top_left() {
        let img = Image::from_fn(13, 9, |r, c| (r * 13 + c) as f64).unwrap();
        let out = img.crop_to_block_grid().unwrap();
        assert_eq!((out.width(), out.height()), (8, 8));
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(out.get(r, c), img.get(r, c));
            }
        }
    }

    #[test]
    fn crop_rejects_small() {
        let img = Image::filled(7, 20, 0.0).unwrap();
        assert!(matches!(
            img.crop_to_block_grid(),
            Err(Error::Dimensions { .. })
        ));
    }

    proptest! {
        #[test]
        fn to_storage_bounds(values in proptest::collection::vec(-1000.0f64..1000.0, 1..64)) {
            let n = values.len();
            let img = Image::new(n, 1, values.clone()).unwrap();
            let out = img.to_storage();
            prop_assert!(out.is_storage_form());
            for (o, v) in out.pixels().iter().zip(&values) {
                prop_assert!((o - v.clamp(0.0, 255.0)).abs() <= 0.5);
            }
            prop_assert_eq!(out.to_storage(), out);
        }
    }
}
