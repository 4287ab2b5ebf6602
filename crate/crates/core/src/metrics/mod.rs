//! Ground-truth density rasterization and the evaluation metric suite.
//!
//! A [`DensityMap`] is a nonnegative grid whose total mass encodes a person
//! count. [`rasterize_density`] turns point annotations into such a map by
//! placing one truncated, per-point-renormalized Gaussian per annotation, so
//! the map's mass equals the point count even at image borders.
//!
//! GAME(L) splits the image into `4^L` regions by recursive quadrant split
//! and sums the per-region absolute count errors; GAME(0) coincides with the
//! per-image absolute count error, so its dataset average equals MAE.

mod io;

pub use io::{read_density_bin, read_points_csv, write_density_bin, write_points_csv};

use crate::error::{Error, Result};
use ndarray::Array2;

/// Point annotations for one image: `(x, y)` pixel coordinates, plus the
/// image size they live in.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<(f64, f64)>,
    h: usize,
    w: usize,
}

impl PointSet {
    /// Build a point set, rejecting out-of-bounds or non-finite coordinates.
    /// Valid coordinates satisfy `0 <= x < W` and `0 <= y < H`.
    pub fn new(points: Vec<(f64, f64)>, h: usize, w: usize) -> Result<Self> {
        for (i, &(x, y)) in points.iter().enumerate() {
            if !x.is_finite() || !y.is_finite() || x < 0.0 || y < 0.0 || x >= w as f64 || y >= h as f64 {
                return Err(Error::InvalidInput(format!(
                    "point {i} at ({x}, {y}) outside {w}x{h} image bounds"
                )));
            }
        }
        Ok(Self { points, h, w })
    }

    pub fn empty(h: usize, w: usize) -> Self {
        Self { points: Vec::new(), h, w }
    }

    pub fn count(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    /// `(H, W)` of the annotated image.
    pub fn image_size(&self) -> (usize, usize) {
        (self.h, self.w)
    }
}

/// Nonnegative `H x W` density grid; total mass is the encoded count.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMap {
    values: Array2<f64>,
}

impl DensityMap {
    /// Wrap a grid, rejecting negative or non-finite entries.
    pub fn new(values: Array2<f64>) -> Result<Self> {
        for &v in values.iter() {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidInput(format!(
                    "density map entry {v} is negative or non-finite"
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn zeros(h: usize, w: usize) -> Self {
        Self { values: Array2::zeros((h, w)) }
    }

    pub fn h(&self) -> usize {
        self.values.dim().0
    }

    pub fn w(&self) -> usize {
        self.values.dim().1
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Total mass, summed in row-major order. The full-image region sum in
    /// [`game`] uses the same order, so `game(pred, gt, 0)` equals
    /// `|mass - count|` bit-for-bit.
    pub fn mass(&self) -> f64 {
        let mut acc = 0.0;
        for &v in self.values.iter() {
            acc += v;
        }
        acc
    }

    /// Mass-preserving nearest upsampling: each cell expands into an
    /// `s x s` block carrying `value / s^2` per pixel.
    pub fn upsample(&self, s: usize) -> DensityMap {
        let (h, w) = self.values.dim();
        let inv = 1.0 / (s * s) as f64;
        let mut out = Array2::zeros((h * s, w * s));
        for r in 0..h * s {
            for c in 0..w * s {
                out[(r, c)] = self.values[(r / s, c / s)] * inv;
            }
        }
        DensityMap { values: out }
    }
}

/// One axis-aligned region of a grid partition; half-open `[row0, row1) x [col0, col1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub row0: usize,
    pub row1: usize,
    pub col0: usize,
    pub col1: usize,
}

impl Region {
    pub fn contains(&self, row: usize, col: usize) -> bool {
        row >= self.row0 && row < self.row1 && col >= self.col0 && col < self.col1
    }
}

/// The `4^L` regions produced by `L` recursive quadrant splits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridPartition {
    level: u32,
    h: usize,
    w: usize,
    regions: Vec<Region>,
}

impl GridPartition {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    /// Index of the region containing pixel `(row, col)`.
    pub fn region_of(&self, row: usize, col: usize) -> Option<usize> {
        self.regions.iter().position(|r| r.contains(row, col))
    }
}

/// Sum of raw (unnormalized) truncated-kernel weights for a point at
/// `(x, y)`: Gaussian weights over pixel centers within the `4 sigma` square
/// window, clipped to the image. Rasterization divides by this value so each
/// point contributes exactly unit mass.
pub fn truncated_window_weight_sum(x: f64, y: f64, sigma: f64, h: usize, w: usize) -> f64 {
    let radius = 4.0 * sigma;
    let c0 = ((x - radius).ceil().max(0.0)) as usize;
    let c1 = ((x + radius).floor().min((w - 1) as f64)) as usize;
    let r0 = ((y - radius).ceil().max(0.0)) as usize;
    let r1 = ((y + radius).floor().min((h - 1) as f64)) as usize;
    let inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    let mut sum = 0.0;
    for r in r0..=r1 {
        let dy = r as f64 - y;
        for c in c0..=c1 {
            let dx = c as f64 - x;
            sum += (-(dx * dx + dy * dy) * inv_two_sigma2).exp();
        }
    }
    sum
}

/// Rasterize point annotations into a density map. One isotropic Gaussian of
/// standard deviation `sigma` is placed per point, truncated at a `4 sigma`
/// window and renormalized per point, so the output mass equals
/// `points.count()` within 1e-6 even for border-touching points.
pub fn rasterize_density(points: &PointSet, sigma: f64) -> Result<DensityMap> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("sigma must be positive, got {sigma}")));
    }
    let (h, w) = points.image_size();
    let mut values = Array2::zeros((h, w));
    let radius = 4.0 * sigma;
    let inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
    for &(x, y) in points.points() {
        let norm = truncated_window_weight_sum(x, y, sigma, h, w);
        // A point in bounds always covers at least its own pixel.
        debug_assert!(norm > 0.0);
        let inv_norm = 1.0 / norm;
        let c0 = ((x - radius).ceil().max(0.0)) as usize;
        let c1 = ((x + radius).floor().min((w - 1) as f64)) as usize;
        let r0 = ((y - radius).ceil().max(0.0)) as usize;
        let r1 = ((y + radius).floor().min((h - 1) as f64)) as usize;
        for r in r0..=r1 {
            let dy = r as f64 - y;
            for c in c0..=c1 {
                let dx = c as f64 - x;
                values[(r, c)] += (-(dx * dx + dy * dy) * inv_two_sigma2).exp() * inv_norm;
            }
        }
    }
    Ok(DensityMap { values })
}

/// Split an `H x W` image into `4^L` regions by recursive quadrant split.
/// When a dimension is odd the earlier (top/left) half takes the extra
/// row/column. Regions are emitted depth-first in TL, TR, BL, BR order.
pub fn partition_regions(h: usize, w: usize, level: u32) -> Result<GridPartition> {
    let min = 1usize
        .checked_shl(level)
        .ok_or_else(|| Error::InvalidParameter(format!("level {level} out of range")))?;
    if h < min || w < min {
        return Err(Error::InvalidParameter(format!(
            "level {level} requires at least {min}x{min} pixels, image is {h}x{w}"
        )));
    }
    let mut regions = Vec::with_capacity(4usize.pow(level));
    split_region(
        Region { row0: 0, row1: h, col0: 0, col1: w },
        level,
        &mut regions,
    );
    Ok(GridPartition { level, h, w, regions })
}

fn split_region(r: Region, level: u32, out: &mut Vec<Region>) {
    if level == 0 {
        out.push(r);
        return;
    }
    let rows = r.row1 - r.row0;
    let cols = r.col1 - r.col0;
    let rmid = r.row0 + rows.div_ceil(2);
    let cmid = r.col0 + cols.div_ceil(2);
    let quads = [
        Region { row0: r.row0, row1: rmid, col0: r.col0, col1: cmid },
        Region { row0: r.row0, row1: rmid, col0: cmid, col1: r.col1 },
        Region { row0: rmid, row1: r.row1, col0: r.col0, col1: cmid },
        Region { row0: rmid, row1: r.row1, col0: cmid, col1: r.col1 },
    ];
    for q in quads {
        split_region(q, level - 1, out);
    }
}

/// Grid Average Mean Absolute Error term for a single image: the sum over the
/// `4^L` regions of `|predicted count - ground-truth count|`. A ground-truth
/// point belongs to the region containing its `(floor(y), floor(x))` pixel.
/// Dataset-level GAME averages this value over images.
pub fn game(pred: &DensityMap, gt: &PointSet, level: u32) -> Result<f64> {
    let (h, w) = gt.image_size();
    if (pred.h(), pred.w()) != (h, w) {
        return Err(Error::InvalidInput(format!(
            "density map is {}x{} but points are annotated on {h}x{w}",
            pred.h(),
            pred.w()
        )));
    }
    let partition = partition_regions(h, w, level)?;
    let mut err = 0.0;
    let mut gt_counts = vec![0usize; partition.regions.len()];
    for &(x, y) in gt.points() {
        let row = y.floor() as usize;
        let col = x.floor() as usize;
        let idx = partition
            .region_of(row, col)
            .expect("partition tiles the image");
        gt_counts[idx] += 1;
    }
    for (region, &g) in partition.regions.iter().zip(&gt_counts) {
        let mut p = 0.0;
        for r in region.row0..region.row1 {
            for c in region.col0..region.col1 {
                p += pred.values()[(r, c)];
            }
        }
        err += (p - g as f64).abs();
    }
    Ok(err)
}

/// Root mean square error of per-image total counts.
pub fn rmse(pred_counts: &[f64], gt_counts: &[f64]) -> Result<f64> {
    check_paired(pred_counts, gt_counts)?;
    let n = pred_counts.len() as f64;
    let mut acc = 0.0;
    for (p, g) in pred_counts.iter().zip(gt_counts) {
        let d = p - g;
        acc += d * d;
    }
    Ok((acc / n).sqrt())
}

/// Mean absolute error of per-image total counts.
pub fn mae(pred_counts: &[f64], gt_counts: &[f64]) -> Result<f64> {
    check_paired(pred_counts, gt_counts)?;
    let n = pred_counts.len() as f64;
    let mut acc = 0.0;
    for (p, g) in pred_counts.iter().zip(gt_counts) {
        acc += (p - g).abs();
    }
    Ok(acc / n)
}

fn check_paired(pred: &[f64], gt: &[f64]) -> Result<()> {
    if pred.is_empty() || pred.len() != gt.len() {
        return Err(Error::InvalidInput(format!(
            "count lists must be equal-length and nonempty (got {} and {})",
            pred.len(),
            gt.len()
        )));
    }
    Ok(())
}
