//! MSE and PSNR between a reference and a test image.

use std::fmt;

use crate::deblock::DeblockConfig;
use crate::error::{Error, Result};
use crate::image::Image;

/// Peak signal value for 8-bit images.
pub const PEAK: f64 = 255.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Psnr {
    Finite(f64),
    /// The two images are identical (MSE = 0).
    Identical,
}

impl Psnr {
    /// Decibel value, with `Identical` mapped to +∞.
    pub fn db(self) -> f64 {
        match self {
            Psnr::Finite(v) => v,
            Psnr::Identical => f64::INFINITY,
        }
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => match f.precision() {
                Some(p) => write!(f, "{v:.p$}"),
                None => write!(f, "{v}"),
            },
            Psnr::Identical => f.write_str("inf"),
        }
    }
}

/// Fixed-order pairwise summation.
fn pairwise_sum(values: &[f64]) -> f64 {
    const LEAF: usize = 64;
    if values.len() <= LEAF {
        return values.iter().sum();
    }
    let (lo, hi) = values.split_at(values.len() / 2);
    pairwise_sum(lo) + pairwise_sum(hi)
}

/// Mean of squared pixel differences.
pub fn mse(reference: &Image, test: &Image) -> Result<f64> {
    if reference.width() != test.width() || reference.height() != test.height() {
        return Err(Error::DimensionMismatch(
            reference.width(),
            reference.height(),
            test.width(),
            test.height(),
        ));
    }
    let sq: Vec<f64> = reference
        .pixels()
        .iter()
        .zip(test.pixels())
        .map(|(b, a)| (b - a) * (b - a))
        .collect();
    Ok(pairwise_sum(&sq) / sq.len() as f64)
}

/// `20·log10(255/√mse)`; zero MSE yields [`Psnr::Identical`].
pub fn psnr_from_mse(mse: f64) -> Result<Psnr> {
    if mse < 0.0 || mse.is_nan() {
        return Err(Error::NegativeMse(mse));
    }
    if mse == 0.0 {
        return Ok(Psnr::Identical);
    }
    Ok(Psnr::Finite(20.0 * (PEAK / mse.sqrt()).log10()))
}

pub fn psnr(reference: &Image, test: &Image) -> Result<Psnr> {
    psnr_from_mse(mse(reference, test)?)
}

/// Quality measurement of one image at one codec quality.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricsReport {
    pub mse: f64,
    pub psnr: Psnr,
    pub n: usize,
    pub quality: Option<u32>,
    pub bpp: Option<f64>,
    pub config: Option<DeblockConfig>,
}

impl MetricsReport {
    pub fn compare(reference: &Image, test: &Image) -> Result<Self> {
        let mse = mse(reference, test)?;
        Ok(Self {
            mse,
            psnr: psnr_from_mse(mse)?,
            n: reference.len(),
            quality: None,
            bpp: None,
            config: None,
        })
    }

    pub fn with_quality(mut self, quality: u32) -> Self {
        self.quality = Some(quality);
        self
    }

    pub fn with_bpp(mut self, bpp: Option<f64>) -> Self {
        self.bpp = bpp;
        self
    }

    pub fn with_config(mut self, config: DeblockConfig) -> Self {
        self.config = Some(config);
        self
    }
}

impl fmt::Display for MetricsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "mse={:.4} psnr={:.4} n={}", self.mse, self.psnr, self.n)?;
        if let Some(q) = self.quality {
            write!(f, " quality={q} table=ijg-annex-k")?;
        }
        if let Some(bpp) = self.bpp {
            write!(f, " bpp~{bpp:.4}")?;
        }
        if let Some(c) = &self.config {
            write!(
                f,
                " threshold={} th={} window={} symmetric_taper={}",
                c.smooth_threshold, c.row_threshold, c.window, c.symmetric_taper
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn mse_examples() {
        let a = Image::from_bytes(2, 1, &[0, 0]).unwrap();
        let b = Image::from_bytes(2, 1, &[3, 4]).unwrap();
        assert_eq!(mse(&a, &a).unwrap(), 0.0);
        assert_eq!(mse(&a, &b).unwrap(), 12.5);
        let c = Image::from_bytes(1, 2, &[3, 4]).unwrap();
        assert!(matches!(mse(&a, &c), Err(Error::DimensionMismatch(..))));
    }

    #[test]
    fn psnr_examples() {
        let p = psnr_from_mse(39.8685).unwrap().db();
        assert!((p - 32.1245).abs() < 1e-3);
        let p = psnr_from_mse(18.7149).unwrap().db();
        assert!((p - 35.4089).abs() < 1e-3);
        assert_eq!(psnr_from_mse(65025.0).unwrap(), Psnr::Finite(0.0));
        assert_eq!(psnr_from_mse(0.0).unwrap(), Psnr::Identical);
        assert_eq!(Psnr::Identical.to_string(), "inf");
        assert!(psnr_from_mse(-1.0).is_err());
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let v: Vec<f64> = (0..1000).map(|i| (i % 97) as f64).collect();
        assert_eq!(pairwise_sum(&v), v.iter().sum::<f64>());
    }

    #[test]
    fn report_display() {
        let a = Image::from_bytes(2, 1, &[0, 0]).unwrap();
        let b = Image::from_bytes(2, 1, &[3, 4]).unwrap();
        let r = MetricsReport::compare(&a, &b).unwrap().with_quality(10);
        assert!(r.to_string().starts_with("mse=12.5000 psnr=37.1617 n=2 quality=10"));
    }

    proptest! {
        #[test]
        fn mse_symmetric(a in proptest::collection::vec(0u8..=255, 16), b in proptest::collection::vec(0u8..=255, 16)) {
            let a = Image::from_bytes(4, 4, &a).unwrap();
            let b = Image::from_bytes(4, 4, &b).unwrap();
            prop_assert_eq!(mse(&a, &b).unwrap(), mse(&b, &a).unwrap());
        }

        #[test]
        fn psnr_decreasing(x in 1e-6f64..1e5, dx in 1e-3f64..1e3) {
            prop_assert!(psnr_from_mse(x).unwrap().db() > psnr_from_mse(x + dx).unwrap().db());
        }
    }
}
