use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::image::Image;
use crate::BLOCK;

const BLUR_RADIUS: usize = 4;
/// 9×9 box passes applied to the noise field before stretching.
const BLUR_PASSES: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SyntheticKind {
    /// Horizontal linear gradient from 0 at the left column to 255 at the right.
    Ramp,
    /// Two flat half-planes split vertically in the middle of a block.
    Step,
    /// Seeded uniform noise blurred by repeated 9×9 box passes and
    /// stretched to `[0, 255]`.
    SmoothNoise,
}

impl SyntheticKind {
    pub fn name(self) -> &'static str {
        match self {
            SyntheticKind::Ramp => "ramp",
            SyntheticKind::Step => "step",
            SyntheticKind::SmoothNoise => "smooth-noise",
        }
    }
}

impl FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ramp" => Ok(SyntheticKind::Ramp),
            "step" => Ok(SyntheticKind::Step),
            "smooth-noise" | "noise" => Ok(SyntheticKind::SmoothNoise),
            other => Err(Error::Harness(format!("unknown synthetic kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub width: usize,
    pub height: usize,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(kind: SyntheticKind, width: usize, height: usize, seed: u64) -> Self {
        Self {
            kind,
            width,
            height,
            seed,
        }
    }

    /// Column where the step image switches from the low to the high level.
    pub fn step_column(&self) -> usize {
        (self.width / BLOCK / 2) * BLOCK + BLOCK / 2
    }
}

impl fmt::Display for SyntheticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}x{}", self.kind.name(), self.width, self.height)?;
        if self.kind == SyntheticKind::SmoothNoise {
            write!(f, "-s{}", self.seed)?;
        }
        Ok(())
    }
}

/// Parses `kind[:WxH[:seed]]`, e.g. `smooth-noise:256x256:7`. Size
/// defaults to 256×256 and seed to 0.
impl FromStr for SyntheticSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(':');
        let kind: SyntheticKind = parts.next().unwrap_or_default().parse()?;
        let (width, height) = match parts.next() {
            None => (256, 256),
            Some(dims) => {
                let (w, h) = dims
                    .split_once(['x', 'X'])
                    .ok_or_else(|| Error::Harness(format!("bad dimensions {dims:?}")))?;
                let parse = |v: &str| {
                    v.parse::<usize>()
                        .map_err(|_| Error::Harness(format!("bad dimensions {dims:?}")))
                };
                (parse(w)?, parse(h)?)
            }
        };
        let seed = match parts.next() {
            None => 0,
            Some(v) => v
                .parse()
                .map_err(|_| Error::Harness(format!("bad seed {v:?}")))?,
        };
        if parts.next().is_some() {
            return Err(Error::Harness(format!("trailing fields in {s:?}")));
        }
        Ok(SyntheticSpec::new(kind, width, height, seed))
    }
}

pub fn gen_synthetic(spec: &SyntheticSpec) -> Result<Image> {
    let (w, h) = (spec.width, spec.height);
    if w == 0 || h == 0 || w % BLOCK != 0 || h % BLOCK != 0 {
        return Err(Error::Dimensions {
            width: w,
            height: h,
            reason: "synthetic dimensions must be positive multiples of 8",
        });
    }
    match spec.kind {
        SyntheticKind::Ramp => {
            Image::from_fn(w, h, |_, c| (255.0 * c as f64 / (w - 1) as f64).round())
        }
        SyntheticKind::Step => {
            let split = spec.step_column();
            Image::from_fn(w, h, |_, c| if c < split { 48.0 } else { 208.0 })
        }
        SyntheticKind::SmoothNoise => smooth_noise(w, h, spec.seed),
    }
}

fn box_blur(src: &[f64], w: usize, h: usize) -> Vec<f64> {
    let clamp = |v: isize, n: usize| v.clamp(0, n as isize - 1) as usize;
    let r = BLUR_RADIUS as isize;
    let norm = ((2 * BLUR_RADIUS + 1) * (2 * BLUR_RADIUS + 1)) as f64;
    // Separable, with edge replication.
    let mut horiz = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            horiz[y * w + x] = (-r..=r)
                .map(|d| src[y * w + clamp(x as isize + d, w)])
                .sum::<f64>();
        }
    }
    let mut out = vec![0.0; w * h];
    for y in 0..h {
        for x in 0..w {
            out[y * w + x] = (-r..=r)
                .map(|d| horiz[clamp(y as isize + d, h) * w + x])
                .sum::<f64>()
                / norm;
        }
    }
    out
}

fn smooth_noise(w: usize, h: usize, seed: u64) -> Result<Image> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut field: Vec<f64> = (0..w * h).map(|_| rng.gen::<f64>()).collect();
    for _ in 0..BLUR_PASSES {
        field = box_blur(&field, w, h);
    }
    let lo = field.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = field.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let span = if hi > lo { hi - lo } else { 1.0 };
    let pixels = field
        .iter()
        .map(|v| (255.0 * (v - lo) / span).round())
        .collect();
    Image::new(w, h, pixels)
}
