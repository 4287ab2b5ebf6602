//! Small grid utilities shared across modules.

use ndarray::{Array2, Array3};

/// Bilinear sample of `grid` at continuous coordinates `(x, y)` with clamped
/// borders. `x` indexes columns, `y` rows. Sampling at exact integer
/// coordinates returns the stored value bit-for-bit.
pub fn bilinear_sample(grid: &Array2<f64>, x: f64, y: f64) -> f64 {
    let (h, w) = grid.dim();
    let xc = x.clamp(0.0, (w - 1) as f64);
    let yc = y.clamp(0.0, (h - 1) as f64);
    let x0 = xc.floor() as usize;
    let y0 = yc.floor() as usize;
    let x1 = (x0 + 1).min(w - 1);
    let y1 = (y0 + 1).min(h - 1);
    let tx = xc - x0 as f64;
    let ty = yc - y0 as f64;
    let v00 = grid[(y0, x0)];
    let v01 = grid[(y0, x1)];
    let v10 = grid[(y1, x0)];
    let v11 = grid[(y1, x1)];
    let top = v00 * (1.0 - tx) + v01 * tx;
    let bot = v10 * (1.0 - tx) + v11 * tx;
    top * (1.0 - ty) + bot * ty
}

/// Sum-pool a grid over non-overlapping `s x s` blocks. Dimensions must be
/// divisible by `s`. Preserves total mass exactly up to addition order.
pub fn sum_pool(grid: &Array2<f64>, s: usize) -> Array2<f64> {
    let (h, w) = grid.dim();
    assert!(s > 0 && h % s == 0 && w % s == 0, "pool stride must divide dims");
    let mut out = Array2::zeros((h / s, w / s));
    for r in 0..h {
        for c in 0..w {
            out[(r / s, c / s)] += grid[(r, c)];
        }
    }
    out
}

/// Average-pool over non-overlapping `s x s` blocks.
pub fn avg_pool(grid: &Array2<f64>, s: usize) -> Array2<f64> {
    let mut out = sum_pool(grid, s);
    let inv = 1.0 / (s * s) as f64;
    out.mapv_inplace(|v| v * inv);
    out
}

/// Bilinearly resize each channel of a `(C, h, w)` tensor to `(C, h2, w2)`.
/// When the shapes already match the input is returned unchanged.
pub fn resize_bilinear(t: &Array3<f64>, h2: usize, w2: usize) -> Array3<f64> {
    let (c, h, w) = t.dim();
    if h == h2 && w == w2 {
        return t.clone();
    }
    let sy = h as f64 / h2 as f64;
    let sx = w as f64 / w2 as f64;
    let mut out = Array3::zeros((c, h2, w2));
    for ch in 0..c {
        let plane = t.index_axis(ndarray::Axis(0), ch).to_owned();
        for r in 0..h2 {
            // align centers: map output pixel center to input coordinates
            let y = (r as f64 + 0.5) * sy - 0.5;
            for cc in 0..w2 {
                let x = (cc as f64 + 0.5) * sx - 0.5;
                out[(ch, r, cc)] = bilinear_sample(&plane, x, y);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn bilinear_integer_coords_exact() {
        let g = array![[1.0, 2.0], [3.0, 4.0]];
        assert_eq!(bilinear_sample(&g, 0.0, 0.0), 1.0);
        assert_eq!(bilinear_sample(&g, 1.0, 0.0), 2.0);
        assert_eq!(bilinear_sample(&g, 0.0, 1.0), 3.0);
        assert_eq!(bilinear_sample(&g, 1.0, 1.0), 4.0);
        let mid = bilinear_sample(&g, 0.5, 0.5);
        assert!((mid - 2.5).abs() < 1e-12);
    }

    #[test]
    fn sum_pool_preserves_mass() {
        let g = Array2::from_shape_fn((8, 8), |(r, c)| (r * 8 + c) as f64 * 0.01);
        let p = sum_pool(&g, 4);
        assert_eq!(p.dim(), (2, 2));
        assert!((p.sum() - g.sum()).abs() < 1e-12);
    }
}
