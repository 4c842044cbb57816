//! Spatial deblocking post-filter.
//!
//! The filter runs in two stages over the interior 8×8 block boundaries:
//!
//! 1. **Uniform boundary smoothing.** For every row crossing a boundary,
//!    a boundary difference of at least `smooth_threshold` is split in half
//!    and redistributed over three pixels on each side, tapering away from
//!    the boundary. Vertical boundaries are processed first, then
//!    horizontal boundaries on the result.
//! 2. **Blocked-edge detection and filtering.** Each 8-pixel boundary
//!    segment is examined row by row over ten pixels `p0..p9` straddling
//!    the boundary (`p4 | p5`). A row is flagged when the boundary gap
//!    `G0 = |p4 − p5|` exceeds every neighbour difference on the left
//!    side, or on the right side. A segment with more than
//!    `row_threshold` flagged rows is *blocked*, and the pixels around the
//!    boundary of its flagged rows are replaced by an intensity-weighted
//!    Gaussian average taken along the row.
//!
//! Real-valued pixels are carried through both stages; clamping and
//! rounding happen once, at the end of [`deblock_pipeline`].

use crate::error::{Error, Result};
use crate::image::Image;
use crate::BLOCK;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeblockConfig {
    /// Minimum boundary difference that triggers smoothing.
    pub smooth_threshold: f64,
    /// A segment is blocked when strictly more rows than this are flagged.
    pub row_threshold: u8,
    /// Gaussian window length (odd, ≥ 3).
    pub window: usize,
    /// Use `s/4` for the outermost tap on both sides instead of `s/2` before
    /// the boundary and `s/4` after it.
    pub symmetric_taper: bool,
}

impl Default for DeblockConfig {
    fn default() -> Self {
        Self {
            smooth_threshold: 8.0,
            row_threshold: 4,
            window: 5,
            symmetric_taper: false,
        }
    }
}

impl DeblockConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.smooth_threshold >= 0.0) {
            return Err(Error::Config(format!(
                "smooth threshold must be >= 0, got {}",
                self.smooth_threshold
            )));
        }
        if self.row_threshold > 8 {
            return Err(Error::Config(format!(
                "row threshold must be in 0..=8, got {}",
                self.row_threshold
            )));
        }
        if self.window < 3 || self.window % 2 == 0 {
            return Err(Error::Config(format!(
                "window must be odd and >= 3, got {}",
                self.window
            )));
        }
        Ok(())
    }
}

/// Direction of a block-boundary line.
///
/// A `Vertical` boundary separates two columns and is crossed by rows; a
/// `Horizontal` boundary separates two rows and is crossed by columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Vertical,
    Horizontal,
}

/// One 8-pixel segment of a block-boundary line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EdgeDescriptor {
    pub orientation: Orientation,
    /// Index of the first column (vertical) or row (horizontal) after the line.
    pub boundary: usize,
    /// First row (vertical) or column (horizontal) of the segment.
    pub span_start: usize,
}

impl EdgeDescriptor {
    pub fn vertical(boundary: usize, span_start: usize) -> Self {
        Self {
            orientation: Orientation::Vertical,
            boundary,
            span_start,
        }
    }

    pub fn horizontal(boundary: usize, span_start: usize) -> Self {
        Self {
            orientation: Orientation::Horizontal,
            boundary,
            span_start,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RowFlag {
    #[default]
    NotTriggered,
    /// Left-side differences are all below the gap.
    Eq1,
    /// Right-side differences are all below the gap.
    Eq2,
    Both,
}

impl RowFlag {
    pub fn is_triggered(self) -> bool {
        self != RowFlag::NotTriggered
    }

    /// Offsets of the filtered pixels relative to the boundary index
    /// (`-1` is `p4`, `0` is `p5`).
    fn targets(self) -> &'static [isize] {
        match self {
            RowFlag::NotTriggered => &[],
            RowFlag::Eq1 => &[-1, 0, 1],
            RowFlag::Eq2 => &[-2, -1, 0],
            RowFlag::Both => &[-2, -1, 0, 1],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdgeDetection {
    pub counter: u8,
    pub flags: [RowFlag; BLOCK],
    pub blocked: bool,
}

/// Gap-vs-neighbour classification of ten pixels straddling a boundary.
pub fn classify_row(p: &[f64; 10]) -> RowFlag {
    let gap = (p[4] - p[5]).abs();
    let left = (1..=4)
        .map(|i| (p[5 - i] - p[4 - i]).abs())
        .fold(f64::NEG_INFINITY, f64::max);
    let right = (1..=4)
        .map(|i| (p[4 + i] - p[5 + i]).abs())
        .fold(f64::NEG_INFINITY, f64::max);
    match (left < gap, right < gap) {
        (true, true) => RowFlag::Both,
        (true, false) => RowFlag::Eq1,
        (false, true) => RowFlag::Eq2,
        (false, false) => RowFlag::NotTriggered,
    }
}

/// Flat index of position `pos` along line `line` crossing boundaries of `orientation`.
#[inline]
fn line_index(width: usize, orientation: Orientation, line: usize, pos: usize) -> usize {
    match orientation {
        Orientation::Vertical => line * width + pos,
        Orientation::Horizontal => pos * width + line,
    }
}

/// (length of lines crossing the boundary, number of such lines)
fn line_geometry(img: &Image, orientation: Orientation) -> (usize, usize) {
    match orientation {
        Orientation::Vertical => (img.width(), img.height()),
        Orientation::Horizontal => (img.height(), img.width()),
    }
}

fn gather_line(img: &Image, orientation: Orientation, line: usize) -> Vec<f64> {
    let (len, _) = line_geometry(img, orientation);
    let px = img.pixels();
    (0..len)
        .map(|pos| px[line_index(img.width(), orientation, line, pos)])
        .collect()
}

/// Applies the boundary smoothing update to `line`, where `a = line[y]` and
/// `b = line[y + 1]` sit on either side of the boundary. Returns whether
/// the update fired.
pub fn smooth_edge_row(line: &mut [f64], y: usize, cfg: &DeblockConfig) -> Result<bool> {
    if y < 2 || y + 3 >= line.len() {
        return Err(Error::EdgeOutOfRange(format!(
            "boundary at {y} needs 2 pixels before and 3 after in a line of {}",
            line.len()
        )));
    }
    let (a, b) = (line[y], line[y + 1]);
    let diff = (a - b).abs();
    if diff < cfg.smooth_threshold || a == b {
        return Ok(false);
    }
    let s = diff / 2.0;
    let sign = if a < b { 1.0 } else { -1.0 };
    let outer_before = if cfg.symmetric_taper { s / 4.0 } else { s / 2.0 };
    line[y] += sign * s;
    line[y + 1] -= sign * s;
    line[y - 1] += sign * s / 2.0;
    line[y + 2] -= sign * s / 2.0;
    line[y - 2] += sign * outer_before;
    line[y + 3] -= sign * s / 4.0;
    Ok(true)
}

/// Interior boundary indices along a dimension of `len` pixels.
fn boundaries(len: usize) -> impl Iterator<Item = usize> {
    (BLOCK..len).step_by(BLOCK)
}

fn smooth_pass(img: &mut Image, orientation: Orientation, cfg: &DeblockConfig) -> usize {
    let (len, lines) = line_geometry(img, orientation);
    let width = img.width();
    let px = img.pixels_mut();
    let mut fired = 0;
    for boundary in boundaries(len) {
        for line in 0..lines {
            let idx: [usize; 6] =
                std::array::from_fn(|k| line_index(width, orientation, line, boundary - 3 + k));
            let mut stencil = idx.map(|i| px[i]);
            // y = 2 inside the stencil; cannot fail.
            if smooth_edge_row(&mut stencil, 2, cfg).unwrap_or(false) {
                fired += 1;
                for (i, v) in idx.iter().zip(stencil) {
                    px[*i] = v;
                }
            }
        }
    }
    fired
}

pub fn smooth_all_boundaries(img: &Image, cfg: &DeblockConfig) -> Result<Image> {
    img.check_block_aligned()?;
    let mut out = img.clone();
    smooth_pass(&mut out, Orientation::Vertical, cfg);
    smooth_pass(&mut out, Orientation::Horizontal, cfg);
    Ok(out)
}

fn check_edge(img: &Image, edge: &EdgeDescriptor) -> Result<()> {
    let (len, lines) = line_geometry(img, edge.orientation);
    let b = edge.boundary;
    if b % BLOCK != 0 || b < 5 || b + 5 > len {
        return Err(Error::EdgeOutOfRange(format!(
            "{:?} boundary {b} is not an interior block boundary of a {len}-pixel line",
            edge.orientation
        )));
    }
    if edge.span_start + BLOCK > lines {
        return Err(Error::EdgeOutOfRange(format!(
            "span {}..{} exceeds {lines} lines",
            edge.span_start,
            edge.span_start + BLOCK
        )));
    }
    Ok(())
}

/// The ten pixels `p0..p9` of row `k` (0..8) of an edge segment.
pub fn edge_pixels(img: &Image, edge: &EdgeDescriptor, k: usize) -> [f64; 10] {
    let px = img.pixels();
    let line = edge.span_start + k;
    std::array::from_fn(|i| {
        px[line_index(img.width(), edge.orientation, line, edge.boundary - 5 + i)]
    })
}

pub fn detect_edge(
    img: &Image,
    edge: &EdgeDescriptor,
    cfg: &DeblockConfig,
) -> Result<EdgeDetection> {
    check_edge(img, edge)?;
    let flags: [RowFlag; BLOCK] = std::array::from_fn(|k| classify_row(&edge_pixels(img, edge, k)));
    let counter = flags.iter().filter(|f| f.is_triggered()).count() as u8;
    Ok(EdgeDetection {
        counter,
        flags,
        blocked: counter > cfg.row_threshold,
    })
}

/// Intensity-weighted Gaussian average of `window` around `center`.
///
/// The spread is the mean absolute difference from the centre pixel over
/// the whole window; a flat window returns the centre unchanged.
pub fn gaussian_filter_1d(window: &[f64], center: usize) -> Result<f64> {
    if window.len() % 2 == 0 {
        return Err(Error::Config(format!(
            "gaussian window must have odd length, got {}",
            window.len()
        )));
    }
    let xc = *window.get(center).ok_or_else(|| {
        Error::Config(format!("center {center} outside window of {}", window.len()))
    })?;
    let eps = window.iter().map(|x| (xc - x).abs()).sum::<f64>() / window.len() as f64;
    if eps == 0.0 {
        return Ok(xc);
    }
    let denom = 2.0 * eps * eps;
    let (num, wsum) = window.iter().fold((0.0, 0.0), |(num, wsum), &x| {
        let w = (-(xc - x).powi(2) / denom).exp();
        (num + x * w, wsum + w)
    });
    Ok(num / wsum)
}

fn filter_in_place(
    img: &mut Image,
    edge: &EdgeDescriptor,
    det: &EdgeDetection,
    window: usize,
) -> usize {
    let half = window / 2;
    let width = img.width();
    let mut buf = vec![0.0; window];
    let mut rows = 0;
    for (k, flag) in det.flags.iter().enumerate() {
        let targets = flag.targets();
        if targets.is_empty() {
            continue;
        }
        rows += 1;
        let line = edge.span_start + k;
        let snapshot = gather_line(img, edge.orientation, line);
        let last = snapshot.len() as isize - 1;
        let px = img.pixels_mut();
        for &off in targets {
            let t = edge.boundary as isize + off;
            for (j, slot) in buf.iter_mut().enumerate() {
                let pos = (t + j as isize - half as isize).clamp(0, last);
                *slot = snapshot[pos as usize];
            }
            // odd window and center in range, checked by config validation
            let y = gaussian_filter_1d(&buf, half).unwrap_or(snapshot[t as usize]);
            px[line_index(width, edge.orientation, line, t as usize)] = y;
        }
    }
    rows
}

/// Replaces the boundary pixels of every flagged row of a blocked edge
/// with their Gaussian-filtered values.
pub fn filter_marked_rows(
    img: &Image,
    edge: &EdgeDescriptor,
    det: &EdgeDetection,
    cfg: &DeblockConfig,
) -> Result<Image> {
    cfg.validate()?;
    check_edge(img, edge)?;
    if !det.blocked {
        return Err(Error::Config("edge is not marked as blocked".into()));
    }
    let mut out = img.clone();
    filter_in_place(&mut out, edge, det, cfg.window);
    Ok(out)
}

/// All interior edge segments of `orientation`, boundary-major.
pub fn interior_edges(img: &Image, orientation: Orientation) -> Vec<EdgeDescriptor> {
    let (len, lines) = line_geometry(img, orientation);
    boundaries(len)
        .flat_map(|boundary| {
            (0..lines - lines % BLOCK)
                .step_by(BLOCK)
                .map(move |span_start| EdgeDescriptor {
                    orientation,
                    boundary,
                    span_start,
                })
        })
        .collect()
}

/// Counters collected while running [`deblock_pipeline_with_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PipelineStats {
    /// Boundary rows changed by the smoothing stage.
    pub smoothed_rows: usize,
    pub edges_examined: usize,
    pub flagged_rows: usize,
    pub blocked_edges: usize,
    pub filtered_rows: usize,
}

fn detect_and_filter(
    img: &mut Image,
    orientation: Orientation,
    cfg: &DeblockConfig,
    stats: &mut PipelineStats,
) -> Result<()> {
    let edges = interior_edges(img, orientation);
    // Detection reads the pass input; filters are then applied edge by edge.
    let detections = edges
        .iter()
        .map(|e| detect_edge(img, e, cfg))
        .collect::<Result<Vec<_>>>()?;
    stats.edges_examined += edges.len();
    for (edge, det) in edges.iter().zip(&detections) {
        stats.flagged_rows += usize::from(det.counter);
        if det.blocked {
            stats.blocked_edges += 1;
            stats.filtered_rows += filter_in_place(img, edge, det, cfg.window);
        }
    }
    Ok(())
}

/// Both stages on a working-form image, without the final rounding.
pub fn deblock_working(img: &Image, cfg: &DeblockConfig) -> Result<(Image, PipelineStats)> {
    cfg.validate()?;
    img.check_block_aligned()?;
    let mut stats = PipelineStats::default();
    let mut work = img.clone();
    stats.smoothed_rows += smooth_pass(&mut work, Orientation::Vertical, cfg);
    stats.smoothed_rows += smooth_pass(&mut work, Orientation::Horizontal, cfg);
    detect_and_filter(&mut work, Orientation::Vertical, cfg, &mut stats)?;
    detect_and_filter(&mut work, Orientation::Horizontal, cfg, &mut stats)?;
    Ok((work, stats))
}

pub fn deblock_pipeline_with_stats(
    blocky: &Image,
    cfg: &DeblockConfig,
) -> Result<(Image, PipelineStats)> {
    blocky.check_storage_form()?;
    let (work, stats) = deblock_working(blocky, cfg)?;
    Ok((work.to_storage(), stats))
}

/// Full post-filter: storage-form blocky image in, storage-form image out.
pub fn deblock_pipeline(blocky: &Image, cfg: &DeblockConfig) -> Result<Image> {
    deblock_pipeline_with_stats(blocky, cfg).map(|(img, _)| img)
}
