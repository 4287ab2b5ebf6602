//! Deterministic synthetic thermal/depth scene generation.
//!
//! A scene is a thermal image, a ground-truth depth map, a systematically
//! degraded depth estimate and point annotations. Persons render as bright
//! round disks in the thermal channel and as near-depth silhouettes in the
//! depth channel; distractors render person-like thermal blobs with an
//! elongated shape and **no** depth silhouette, so depth is the signal that
//! disambiguates them. All randomness derives from `(config.seed, index)`,
//! making generation a pure function of its inputs.

mod dataset;
mod pgm;

pub use dataset::{
    generate_dataset, load_manifest, load_scene, save_scene, Dataset, Manifest, ManifestEntry,
};
pub use pgm::{read_pgm16, write_pgm16};

use ndarray::Array2;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::grid::bilinear_sample;
use crate::metrics::PointSet;
use crate::rng::{self, tags};

/// Generator parameters for one dataset of scenes.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneGenConfig {
    pub h: usize,
    pub w: usize,
    pub count_min: usize,
    pub count_max: usize,
    /// Peak thermal intensity of a person disk, in `(0, 1]`.
    pub person_intensity: f64,
    /// Expected number of distractor heat sources per scene (Poisson mean).
    pub distractor_rate: f64,
    /// Standard deviation of ambient Gaussian noise added to the thermal grid.
    pub ambient_noise_std: f64,
    /// 0 = flat depth, 1 = full vertical far-to-near gradient.
    pub perspective_strength: f64,
    /// Base apparent radius of a person in pixels; scaled by depth.
    pub base_radius: f64,
    pub seed: u64,
}

impl SceneGenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.h < 32 || self.w < 32 {
            return Err(Error::InvalidParameter(format!(
                "scene size must be at least 32x32, got {}x{}",
                self.h, self.w
            )));
        }
        if self.count_min > self.count_max {
            return Err(Error::InvalidParameter(format!(
                "count range ({}, {}) is inverted",
                self.count_min, self.count_max
            )));
        }
        if !(self.person_intensity > 0.0 && self.person_intensity <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "person_intensity must be in (0, 1], got {}",
                self.person_intensity
            )));
        }
        for (name, v) in [
            ("distractor_rate", self.distractor_rate),
            ("ambient_noise_std", self.ambient_noise_std),
            ("perspective_strength", self.perspective_strength),
            ("base_radius", self.base_radius),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidParameter(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        if self.perspective_strength > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "perspective_strength must be in [0, 1], got {}",
                self.perspective_strength
            )));
        }
        Ok(())
    }

    /// 64x64 desk-scale defaults.
    pub fn default_toy(seed: u64) -> Self {
        Self {
            h: 64,
            w: 64,
            count_min: 2,
            count_max: 18,
            person_intensity: 0.85,
            distractor_rate: 3.0,
            ambient_noise_std: 0.02,
            perspective_strength: 1.0,
            base_radius: 2.6,
            seed,
        }
    }
}

/// One synthetic scene. All grids share `(H, W)` and live in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub thermal: Array2<f64>,
    pub depth_gt: Array2<f64>,
    /// Systematically biased depth estimate (what the counting model sees).
    pub depth_est: Array2<f64>,
    pub points: PointSet,
    /// The derived per-scene seed the generator consumed.
    pub seed: u64,
}

/// The deterministic ambient thermal pattern a scene starts from.
pub fn ambient_base(h: usize, w: usize) -> Array2<f64> {
    Array2::from_shape_fn((h, w), |(r, c)| {
        let fr = r as f64 / (h - 1) as f64;
        let fc = c as f64 / (w - 1) as f64;
        0.08 + 0.04 * (std::f64::consts::PI * fr).sin() * (std::f64::consts::PI * fc).sin()
    })
}

fn depth_background(cfg: &SceneGenConfig, y: f64) -> f64 {
    let grad = 0.1 + 0.8 * y / (cfg.h - 1) as f64;
    cfg.perspective_strength * grad + (1.0 - cfg.perspective_strength) * 0.5
}

fn smoothstep(u: f64) -> f64 {
    let u = u.clamp(0.0, 1.0);
    u * u * (3.0 - 2.0 * u)
}

/// Screen-blend a source contribution into an accumulation grid entry.
fn blend(dst: &mut f64, contrib: f64) {
    *dst = 1.0 - (1.0 - *dst) * (1.0 - contrib);
}

fn poisson(rng: &mut impl Rng, lambda: f64) -> usize {
    if lambda <= 0.0 {
        return 0;
    }
    let threshold = (-lambda).exp();
    let mut k = 0usize;
    let mut p = 1.0;
    loop {
        p *= rng.random::<f64>();
        if p <= threshold {
            return k;
        }
        k += 1;
    }
}

/// The dataset-global systematic depth degradation parameters. Derived from
/// the dataset seed only, never the scene index, so every scene in a dataset
/// shares the same learnable bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthBias {
    pub gain: f64,
    pub offset: f64,
    pub warp_amp: f64,
    pub warp_seed: u64,
}

impl DepthBias {
    pub fn from_dataset_seed(seed: u64) -> Self {
        let mut rng = rng::substream(seed, tags::DEPTH_BIAS, 0);
        let gain = 0.75 + 0.15 * rng.random::<f64>();
        let offset = 0.05 + 0.10 * rng.random::<f64>();
        let warp_amp = 1.0 + rng.random::<f64>();
        DepthBias { gain, offset, warp_amp, warp_seed: rng::derive_seed(seed, tags::DEPTH_BIAS, 1) }
    }
}

/// The smooth, seed-deterministic displacement field used by [`degrade_depth`].
/// Both components are bounded by `amp` pointwise.
pub fn warp_displacement_field(h: usize, w: usize, amp: f64, seed: u64) -> (Array2<f64>, Array2<f64>) {
    use std::f64::consts::TAU;
    let mut rng = rng::stream(seed);
    let fx1 = rng.random_range(1..=2) as f64;
    let fy1 = rng.random_range(1..=2) as f64;
    let fx2 = rng.random_range(1..=2) as f64;
    let fy2 = rng.random_range(1..=2) as f64;
    let p1 = rng.random::<f64>();
    let q1 = rng.random::<f64>();
    let p2 = rng.random::<f64>();
    let q2 = rng.random::<f64>();
    let dx = Array2::from_shape_fn((h, w), |(r, c)| {
        amp * (TAU * (fx1 * c as f64 / w as f64 + p1)).sin() * (TAU * (fy1 * r as f64 / h as f64 + q1)).cos()
    });
    let dy = Array2::from_shape_fn((h, w), |(r, c)| {
        amp * (TAU * (fx2 * c as f64 / w as f64 + p2)).sin() * (TAU * (fy2 * r as f64 / h as f64 + q2)).cos()
    });
    (dx, dy)
}

/// Apply the systematic depth degradation: a smooth seed-deterministic
/// coordinate warp followed by an affine bias, clipped to `[0, 1]`.
/// With `bias_gain = 1`, `bias_offset = 0` and `smooth_warp_amp = 0` the
/// input is returned unchanged.
pub fn degrade_depth(
    depth_gt: &Array2<f64>,
    bias_gain: f64,
    bias_offset: f64,
    smooth_warp_amp: f64,
    seed: u64,
) -> Array2<f64> {
    let (h, w) = depth_gt.dim();
    let (dx, dy) = warp_displacement_field(h, w, smooth_warp_amp, seed);
    Array2::from_shape_fn((h, w), |(r, c)| {
        let x = c as f64 + dx[(r, c)];
        let y = r as f64 + dy[(r, c)];
        let v = bilinear_sample(depth_gt, x, y);
        (bias_gain * v + bias_offset).clamp(0.0, 1.0)
    })
}

/// Generate one scene, deterministically in `(config.seed, index)`.
pub fn generate_scene(cfg: &SceneGenConfig, index: u64) -> Scene {
    let scene_seed = rng::derive_seed(cfg.seed, tags::SCENE, index);
    let mut rng = rng::stream(scene_seed);
    let (h, w) = (cfg.h, cfg.w);

    let mut thermal = ambient_base(h, w);
    let mut depth_gt = Array2::from_shape_fn((h, w), |(r, _)| depth_background(cfg, r as f64));

    // persons: round thermal disk + near-depth silhouette
    let count = rng.random_range(cfg.count_min..=cfg.count_max);
    let mut points = Vec::with_capacity(count);
    for _ in 0..count {
        let x = 1.0 + rng.random::<f64>() * (w as f64 - 3.0);
        let y = 1.0 + rng.random::<f64>() * (h as f64 - 3.0);
        points.push((x, y));
        let d_pos = depth_background(cfg, y);
        let radius = cfg.base_radius * (0.5 + d_pos);
        stamp(&mut thermal, &mut depth_gt, x, y, |dxp, dyp, thermal_px, depth_px| {
            let dist = (dxp * dxp + dyp * dyp).sqrt();
            let edge = smoothstep((radius - dist) / 1.2);
            if edge > 0.0 {
                blend(thermal_px, cfg.person_intensity * edge);
                let sil = (d_pos + 0.3 * edge).clamp(0.0, 1.0);
                if sil > *depth_px {
                    *depth_px = sil;
                }
            }
        }, radius + 2.0);
    }

    // distractors: person-like intensity and apparent size, elongated shape,
    // no depth silhouette
    let n_distractors = poisson(&mut rng, cfg.distractor_rate);
    for _ in 0..n_distractors {
        let x = 1.0 + rng.random::<f64>() * (w as f64 - 3.0);
        let y = 1.0 + rng.random::<f64>() * (h as f64 - 3.0);
        let theta = rng.random::<f64>() * std::f64::consts::PI;
        let elong = 1.5 + 0.7 * rng.random::<f64>();
        let intensity = (cfg.person_intensity * (0.9 + 0.2 * rng.random::<f64>())).min(1.0);
        let r_eff = cfg.base_radius * (0.5 + depth_background(cfg, y));
        let (a, b) = (r_eff * elong, r_eff / elong);
        let (ct, st) = (theta.cos(), theta.sin());
        stamp(&mut thermal, &mut depth_gt, x, y, |dxp, dyp, thermal_px, _| {
            let u = dxp * ct + dyp * st;
            let v = -dxp * st + dyp * ct;
            let d_ell = ((u / a) * (u / a) + (v / b) * (v / b)).sqrt();
            let edge = smoothstep((1.0 - d_ell) * b / 1.2);
            if edge > 0.0 {
                blend(thermal_px, intensity * edge);
            }
        }, a + 2.0);
    }

    // ambient noise, clipped to [0, 1]
    if cfg.ambient_noise_std > 0.0 {
        let normal = Normal::new(0.0, cfg.ambient_noise_std).expect("validated std");
        for v in thermal.iter_mut() {
            *v = (*v + normal.sample(&mut rng)).clamp(0.0, 1.0);
        }
    }

    let bias = DepthBias::from_dataset_seed(cfg.seed);
    let depth_est = degrade_depth(&depth_gt, bias.gain, bias.offset, bias.warp_amp, bias.warp_seed);

    Scene {
        thermal,
        depth_gt,
        depth_est,
        points: PointSet::new(points, h, w).expect("generator keeps points in bounds"),
        seed: scene_seed,
    }
}

/// Visit pixels within `reach` of `(x, y)`, passing local offsets and mutable
/// access to the thermal and depth grids.
fn stamp<F>(thermal: &mut Array2<f64>, depth: &mut Array2<f64>, x: f64, y: f64, mut f: F, reach: f64)
where
    F: FnMut(f64, f64, &mut f64, &mut f64),
{
    let (h, w) = thermal.dim();
    let c0 = (x - reach).floor().max(0.0) as usize;
    let c1 = (x + reach).ceil().min((w - 1) as f64) as usize;
    let r0 = (y - reach).floor().max(0.0) as usize;
    let r1 = (y + reach).ceil().min((h - 1) as f64) as usize;
    for r in r0..=r1 {
        for c in c0..=c1 {
            let dxp = c as f64 - x;
            let dyp = r as f64 - y;
            f(dxp, dyp, &mut thermal[(r, c)], &mut depth[(r, c)]);
        }
    }
}

#[cfg(test)]
mod tests;
