#![allow(dead_code)]

use std::path::{Path, PathBuf};

use glam::DVec3;
use intrinsic_relight::{Direction, HdrEnvironmentMap, Rgb};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Gaussian bump in direction space, roughly `exp(-angle^2 / (2 width^2))`.
pub fn blob(d: Direction, center: DVec3, width: f64) -> f64 {
    ((d.vec().dot(center.normalize()) - 1.0) / (width * width)).exp()
}

/// Two colored blobs over a constant floor.
pub fn two_blob_sky(width: usize, height: usize) -> HdrEnvironmentMap {
    let a = DVec3::new(1.0, 0.8, -0.6);
    let b = DVec3::new(-0.7, 0.1, 0.9);
    HdrEnvironmentMap::from_fn(width, height, |d| {
        let floor = DVec3::new(0.3, 0.35, 0.4);
        floor
            + 4.0 * blob(d, a, 0.35) * DVec3::new(1.0, 0.9, 0.7)
            + 2.5 * blob(d, b, 0.45) * DVec3::new(0.4, 0.6, 1.0)
    })
    .unwrap()
}

pub fn gray_sky(width: usize, height: usize, value: f64) -> HdrEnvironmentMap {
    HdrEnvironmentMap::constant(width, height, Rgb::splat(value)).unwrap()
}

pub fn random_directions(count: usize, seed: u64) -> Vec<Direction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let z: f64 = rng.gen_range(-1.0..1.0);
            let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let r = (1.0 - z * z).sqrt();
            Direction::from_unit(DVec3::new(r * phi.cos(), z, r * phi.sin()))
        })
        .collect()
}

pub fn sphere_scene_json(envmap: &str, width: usize, n_samples: usize, pattern: f64, jitter: bool) -> String {
    format!(
        r#"{{
  "camera": {{"position": [0, 0.8, 3.9], "look_at": [0, 0, 0], "up": [0, 1, 0],
             "fov_deg": 22, "width": {width}, "height": {width}}},
  "integrator": {{"t_near": 3.2, "t_far": 4.8, "n_samples": {n_samples}, "jitter": {jitter}, "seed": 7}},
  "field": {{"type": "sphere", "center": [0, 0, 0], "radius": 0.6, "sharpness": 60,
            "density_scale": 300, "albedo": [0.8, 0.5, 0.3], "albedo_pattern": {pattern}}},
  "lighting": {{"envmap_path": "{envmap}", "lightmap_width": 32, "lightmap_height": 16}}
}}
"#
    )
}

/// Writes `sky.pfm` and `scene.json` into `dir` and returns the scene path.
pub fn write_sphere_scene(dir: &Path, width: usize, n_samples: usize, pattern: f64, jitter: bool) -> PathBuf {
    two_blob_sky(64, 32).save(dir.join("sky.pfm")).unwrap();
    let path = dir.join("scene.json");
    std::fs::write(
        &path,
        sphere_scene_json("sky.pfm", width, n_samples, pattern, jitter),
    )
    .unwrap();
    path
}

pub fn angle_deg(a: DVec3, b: DVec3) -> f64 {
    a.normalize()
        .dot(b.normalize())
        .clamp(-1.0, 1.0)
        .acos()
        .to_degrees()
}

/// Nearest intersection of a ray with the sphere `|x - c| = r`.
pub fn ray_sphere(origin: DVec3, dir: DVec3, c: DVec3, r: f64) -> Option<f64> {
    let oc = origin - c;
    let b = oc.dot(dir);
    let disc = b * b - (oc.length_squared() - r * r);
    (disc >= 0.0).then(|| -b - disc.sqrt())
}
