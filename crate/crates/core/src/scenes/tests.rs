use super::*;
use crate::metrics::rasterize_density;

fn quiet_config(seed: u64) -> SceneGenConfig {
    SceneGenConfig {
        count_min: 0,
        count_max: 0,
        distractor_rate: 0.0,
        ambient_noise_std: 0.0,
        ..SceneGenConfig::default_toy(seed)
    }
}

#[test]
fn empty_scene_is_ambient_base() {
    let scene = generate_scene(&quiet_config(1), 0);
    assert_eq!(scene.thermal, ambient_base(64, 64));
    assert_eq!(scene.points.count(), 0);
}

#[test]
fn generation_is_deterministic() {
    let cfg = SceneGenConfig::default_toy(42);
    let a = generate_scene(&cfg, 3);
    let b = generate_scene(&cfg, 3);
    assert_eq!(a, b);
    let c = generate_scene(&cfg, 4);
    assert_ne!(a.thermal, c.thermal);
}

#[test]
fn degenerate_count_range_is_exact() {
    let cfg = SceneGenConfig { count_min: 10, count_max: 10, ..SceneGenConfig::default_toy(7) };
    for i in 0..5 {
        assert_eq!(generate_scene(&cfg, i).points.count(), 10);
    }
}

#[test]
fn grids_stay_in_unit_interval() {
    let cfg = SceneGenConfig { ambient_noise_std: 0.15, ..SceneGenConfig::default_toy(9) };
    let s = generate_scene(&cfg, 0);
    for g in [&s.thermal, &s.depth_gt, &s.depth_est] {
        assert!(g.iter().all(|&v| (0.0..=1.0).contains(&v) && v.is_finite()));
    }
}

#[test]
fn rasterized_scene_mass_matches_count() {
    let cfg = SceneGenConfig::default_toy(21);
    for i in 0..5 {
        let s = generate_scene(&cfg, i);
        let d = rasterize_density(&s.points, 4.0).unwrap();
        assert!((d.mass() - s.points.count() as f64).abs() <= 1e-6);
    }
}

#[test]
fn depth_discriminates_persons_from_distractors() {
    // Over 100 scenes the generator must make ground-truth depth informative:
    // persons carry a near-depth silhouette, distractors do not.
    let cfg = SceneGenConfig { distractor_rate: 4.0, ..SceneGenConfig::default_toy(33) };
    let mut person_depth = Vec::new();
    let mut background_depth = Vec::new();
    let mut rng = crate::rng::stream(100);
    use rand::Rng;
    for i in 0..100 {
        let s = generate_scene(&cfg, i);
        for &(x, y) in s.points.points() {
            person_depth.push(s.depth_gt[(y.round() as usize, x.round() as usize)]);
        }
        // background probes stand in for distractor centers: distractors leave
        // depth untouched, so any non-person location samples their statistics
        for _ in 0..5 {
            let r = rng.random_range(0..64);
            let c = rng.random_range(0..64);
            let near_person = s
                .points
                .points()
                .iter()
                .any(|&(px, py)| (px - c as f64).powi(2) + (py - r as f64).powi(2) < 49.0);
            if !near_person {
                background_depth.push(s.depth_gt[(r, c)]);
            }
        }
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    assert!(
        mean(&person_depth) > mean(&background_depth) + 0.1,
        "person depth {} vs background {}",
        mean(&person_depth),
        mean(&background_depth)
    );
}

#[test]
fn degrade_depth_identity() {
    let s = generate_scene(&quiet_config(5), 0);
    let out = degrade_depth(&s.depth_gt, 1.0, 0.0, 0.0, 99);
    assert_eq!(out, s.depth_gt);
}

#[test]
fn degrade_depth_affine() {
    let s = generate_scene(&quiet_config(5), 0);
    let out = degrade_depth(&s.depth_gt, 0.8, 0.1, 0.0, 99);
    for (o, d) in out.iter().zip(s.depth_gt.iter()) {
        assert!((o - (0.8 * d + 0.1)).abs() < 1e-12);
    }
}

#[test]
fn warp_displacement_bounded() {
    let (dx, dy) = warp_displacement_field(64, 64, 2.0, 123);
    let mean_abs =
        (dx.iter().map(|v| v.abs()).sum::<f64>() + dy.iter().map(|v| v.abs()).sum::<f64>()) / (2.0 * 4096.0);
    assert!(mean_abs <= 2.0, "mean abs displacement {mean_abs}");
    assert!(dx.iter().chain(dy.iter()).all(|v| v.abs() <= 2.0 + 1e-12));
}

#[test]
fn degrade_depth_seed_contract() {
    let s = generate_scene(&SceneGenConfig::default_toy(11), 0);
    let a = degrade_depth(&s.depth_gt, 0.85, 0.05, 1.5, 7);
    let b = degrade_depth(&s.depth_gt, 0.85, 0.05, 1.5, 7);
    let c = degrade_depth(&s.depth_gt, 0.85, 0.05, 1.5, 8);
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn scene_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SceneGenConfig::default_toy(17);
    let scene = generate_scene(&cfg, 2);
    save_scene(&scene, dir.path()).unwrap();
    let back = load_scene(dir.path()).unwrap();
    assert_eq!(back.points, scene.points);
    assert_eq!(back.seed, scene.seed);
    for (a, b) in [
        (&scene.thermal, &back.thermal),
        (&scene.depth_gt, &back.depth_gt),
        (&scene.depth_est, &back.depth_est),
    ] {
        let max_err = a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0f64, f64::max);
        assert!(max_err <= 1.0 / 65535.0 + 1e-9);
    }
}

#[test]
fn dataset_generation_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SceneGenConfig::default_toy(23);
    let manifest = generate_dataset(&cfg, &[("train", 20), ("test", 5)], dir.path()).unwrap();
    assert_eq!(manifest.entries.len(), 25);
    assert_eq!(manifest.split_ids("train").len(), 20);
    assert_eq!(manifest.split_ids("test").len(), 5);

    // regeneration is idempotent
    let again = generate_dataset(&cfg, &[("train", 20), ("test", 5)], dir.path()).unwrap();
    assert_eq!(manifest, again);

    let ds = Dataset::open(dir.path()).unwrap();
    let test = ds.load_split("test").unwrap();
    assert_eq!(test.len(), 5);
    for (scene, entry) in test.iter().zip(ds.manifest.split_ids("test")) {
        assert_eq!(scene.points.count(), entry.count);
    }
    assert!(ds.load_split("val").is_err());
}

#[test]
fn empty_dataset_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = SceneGenConfig::default_toy(1);
    assert!(generate_dataset(&cfg, &[("train", 0)], dir.path()).is_err());
}
