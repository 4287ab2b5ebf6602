//! On-disk dataset layout and the manifest format.
//!
//! A dataset directory holds one subdirectory per scene
//! (`thermal.pgm`, `depth_gt.pgm`, `depth_est.pgm`, `points.csv`, `meta`)
//! plus a `manifest.txt` listing scene ids, split tags, counts and the
//! generating configuration.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::metrics::{read_points_csv, write_points_csv};
use crate::par;

use super::pgm::{read_pgm16, write_pgm16};
use super::{generate_scene, Scene, SceneGenConfig};

pub const MANIFEST_FILE: &str = "manifest.txt";

#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub id: String,
    pub split: String,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub config: SceneGenConfig,
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn split_ids(&self, split: &str) -> Vec<&ManifestEntry> {
        self.entries.iter().filter(|e| e.split == split).collect()
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let c = &self.config;
        let _ = writeln!(s, "format = 1");
        let _ = writeln!(s, "config.h = {}", c.h);
        let _ = writeln!(s, "config.w = {}", c.w);
        let _ = writeln!(s, "config.count_min = {}", c.count_min);
        let _ = writeln!(s, "config.count_max = {}", c.count_max);
        let _ = writeln!(s, "config.person_intensity = {:?}", c.person_intensity);
        let _ = writeln!(s, "config.distractor_rate = {:?}", c.distractor_rate);
        let _ = writeln!(s, "config.ambient_noise_std = {:?}", c.ambient_noise_std);
        let _ = writeln!(s, "config.perspective_strength = {:?}", c.perspective_strength);
        let _ = writeln!(s, "config.base_radius = {:?}", c.base_radius);
        let _ = writeln!(s, "config.seed = {}", c.seed);
        for e in &self.entries {
            let _ = writeln!(s, "scene {} {} {}", e.id, e.split, e.count);
        }
        s
    }

    pub fn parse(text: &str, file: &Path) -> Result<Manifest> {
        let perr = |msg: String| Error::parse(file, msg);
        let mut config = SceneGenConfig::default_toy(0);
        let mut entries = Vec::new();
        let mut saw_format = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("scene ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 {
                    return Err(perr(format!("line {}: malformed scene entry", lineno + 1)));
                }
                let count = parts[2]
                    .parse()
                    .map_err(|e| perr(format!("line {}: bad count: {e}", lineno + 1)))?;
                entries.push(ManifestEntry {
                    id: parts[0].to_string(),
                    split: parts[1].to_string(),
                    count,
                });
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| perr(format!("line {}: expected `key = value`", lineno + 1)))?;
            let pf = |v: &str| -> Result<f64> {
                v.parse().map_err(|e| perr(format!("line {}: bad float: {e}", lineno + 1)))
            };
            let pu = |v: &str| -> Result<usize> {
                v.parse().map_err(|e| perr(format!("line {}: bad integer: {e}", lineno + 1)))
            };
            match key {
                "format" => {
                    if value != "1" {
                        return Err(perr(format!("unsupported manifest format {value}")));
                    }
                    saw_format = true;
                }
                "config.h" => config.h = pu(value)?,
                "config.w" => config.w = pu(value)?,
                "config.count_min" => config.count_min = pu(value)?,
                "config.count_max" => config.count_max = pu(value)?,
                "config.person_intensity" => config.person_intensity = pf(value)?,
                "config.distractor_rate" => config.distractor_rate = pf(value)?,
                "config.ambient_noise_std" => config.ambient_noise_std = pf(value)?,
                "config.perspective_strength" => config.perspective_strength = pf(value)?,
                "config.base_radius" => config.base_radius = pf(value)?,
                "config.seed" => {
                    config.seed = value
                        .parse()
                        .map_err(|e| perr(format!("line {}: bad seed: {e}", lineno + 1)))?;
                }
                other => return Err(perr(format!("line {}: unknown key {other:?}", lineno + 1))),
            }
        }
        if !saw_format {
            return Err(perr("missing `format = 1` line".to_string()));
        }
        Ok(Manifest { config, entries })
    }
}

pub fn save_scene(scene: &Scene, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    write_pgm16(&dir.join("thermal.pgm"), &scene.thermal)?;
    write_pgm16(&dir.join("depth_gt.pgm"), &scene.depth_gt)?;
    write_pgm16(&dir.join("depth_est.pgm"), &scene.depth_est)?;
    write_points_csv(&dir.join("points.csv"), &scene.points)?;
    let (h, w) = scene.thermal.dim();
    let meta = format!(
        "h = {h}\nw = {w}\nseed = {}\ncount = {}\n",
        scene.seed,
        scene.points.count()
    );
    let meta_path = dir.join("meta");
    fs::write(&meta_path, meta).map_err(|e| Error::io(meta_path, e))
}

pub fn load_scene(dir: &Path) -> Result<Scene> {
    let meta_path = dir.join("meta");
    let meta = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let mut h = None;
    let mut w = None;
    let mut seed = None;
    for line in meta.lines() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| Error::parse(&meta_path, format!("expected `key = value`, got {line:?}")))?;
        match key {
            "h" => h = Some(value.parse().map_err(|e| Error::parse(&meta_path, format!("bad h: {e}")))?),
            "w" => w = Some(value.parse().map_err(|e| Error::parse(&meta_path, format!("bad w: {e}")))?),
            "seed" => {
                seed = Some(value.parse().map_err(|e| Error::parse(&meta_path, format!("bad seed: {e}")))?)
            }
            "count" => {}
            other => return Err(Error::parse(&meta_path, format!("unknown key {other:?}"))),
        }
    }
    let (h, w) = match (h, w) {
        (Some(h), Some(w)) => (h, w),
        _ => return Err(Error::parse(&meta_path, "missing h or w")),
    };
    let seed = seed.ok_or_else(|| Error::parse(&meta_path, "missing seed"))?;

    let check = |name: &str, g: &ndarray::Array2<f64>| -> Result<()> {
        if g.dim() != (h, w) {
            return Err(Error::parse(
                dir.join(name),
                format!("grid is {:?}, meta says {h}x{w}", g.dim()),
            ));
        }
        Ok(())
    };
    let thermal = read_pgm16(&dir.join("thermal.pgm"))?;
    check("thermal.pgm", &thermal)?;
    let depth_gt = read_pgm16(&dir.join("depth_gt.pgm"))?;
    check("depth_gt.pgm", &depth_gt)?;
    let depth_est = read_pgm16(&dir.join("depth_est.pgm"))?;
    check("depth_est.pgm", &depth_est)?;
    let points = read_points_csv(&dir.join("points.csv"), h, w)?;
    Ok(Scene { thermal, depth_gt, depth_est, points, seed })
}

pub fn scene_id(index: usize) -> String {
    format!("scene_{index:05}")
}

/// Generate `splits` (name, size) of scenes under `out_dir` and write the
/// manifest. Scene indices run consecutively across splits, so the same
/// config and split sizes always reproduce the same dataset bytes.
pub fn generate_dataset(cfg: &SceneGenConfig, splits: &[(&str, usize)], out_dir: &Path) -> Result<Manifest> {
    cfg.validate()?;
    let total: usize = splits.iter().map(|(_, n)| n).sum();
    if total == 0 {
        return Err(Error::InvalidInput("dataset must contain at least one scene".into()));
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let mut split_of = Vec::with_capacity(total);
    for (name, n) in splits {
        for _ in 0..*n {
            split_of.push(name.to_string());
        }
    }

    let results = par::map_indexed(total, |i| {
        let scene = generate_scene(cfg, i as u64);
        let id = scene_id(i);
        let count = scene.points.count();
        save_scene(&scene, &out_dir.join(&id)).map(|()| (id, count))
    });

    let mut entries = Vec::with_capacity(total);
    for (i, r) in results.into_iter().enumerate() {
        let (id, count) = r?;
        entries.push(ManifestEntry { id, split: split_of[i].clone(), count });
    }

    let manifest = Manifest { config: cfg.clone(), entries };
    let path = out_dir.join(MANIFEST_FILE);
    fs::write(&path, manifest.render()).map_err(|e| Error::io(path, e))?;
    Ok(manifest)
}

pub fn load_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&path).map_err(|_| {
        Error::MissingArtifact(format!("no dataset manifest at {}", path.display()))
    })?;
    Manifest::parse(&text, &path)
}

/// A dataset rooted at a directory, opened through its manifest.
#[derive(Debug, Clone)]
pub struct Dataset {
    pub root: PathBuf,
    pub manifest: Manifest,
}

impl Dataset {
    pub fn open(root: &Path) -> Result<Self> {
        let manifest = load_manifest(root)?;
        Ok(Dataset { root: root.to_path_buf(), manifest })
    }

    /// Load every scene of a split into memory, in manifest order.
    pub fn load_split(&self, split: &str) -> Result<Vec<Scene>> {
        let ids: Vec<String> = self
            .manifest
            .split_ids(split)
            .iter()
            .map(|e| e.id.clone())
            .collect();
        if ids.is_empty() {
            return Err(Error::MissingArtifact(format!(
                "dataset at {} has no `{split}` split",
                self.root.display()
            )));
        }
        let loaded = par::map_indexed(ids.len(), |i| load_scene(&self.root.join(&ids[i])));
        loaded.into_iter().collect()
    }
}
