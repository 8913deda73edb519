//! Ray marching: stratified quadrature of the transmittance-weighted
//! accumulation of albedo, diffuse, specular and feature along a ray.

use glam::DVec3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::envmap::{yaw, Direction, Rgb};
use crate::error::{Error, Result};
use crate::field::{IntrinsicField, IntrinsicSample, DEFAULT_NORMAL_STEP};
use crate::prefilter::LightMapStack;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ray {
    pub origin: DVec3,
    pub direction: Direction,
}

impl Ray {
    pub fn new(origin: DVec3, direction: Direction) -> Self {
        Ray { origin, direction }
    }

    #[inline]
    pub fn at(&self, t: f64) -> DVec3 {
        self.origin + t * self.direction.vec()
    }

    /// The ray rigidly rotated about the world `+y` axis.
    pub fn yawed(&self, angle: f64) -> Ray {
        Ray {
            origin: yaw(self.origin, angle),
            direction: self.direction.yawed(angle),
        }
    }
}

fn default_normal_step() -> f64 {
    DEFAULT_NORMAL_STEP
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    pub t_near: f64,
    pub t_far: f64,
    pub n_samples: usize,
    #[serde(default)]
    pub jitter: bool,
    #[serde(default)]
    pub seed: u64,
    /// Central-difference step for normals of non-analytic fields.
    #[serde(default = "default_normal_step")]
    pub normal_step: f64,
}

impl IntegratorConfig {
    pub fn new(t_near: f64, t_far: f64, n_samples: usize) -> Self {
        IntegratorConfig {
            t_near,
            t_far,
            n_samples,
            jitter: false,
            seed: 0,
            normal_step: DEFAULT_NORMAL_STEP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t_near >= 0.0 && self.t_near < self.t_far && self.t_far.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "need 0 <= t_near < t_far, got [{}, {}]",
                self.t_near, self.t_far
            )));
        }
        if self.n_samples < 2 {
            return Err(Error::InvalidArgument(format!(
                "n_samples must be >= 2, got {}",
                self.n_samples
            )));
        }
        if self.normal_step.is_nan() || self.normal_step <= 0.0 {
            return Err(Error::InvalidArgument("normal_step must be > 0".into()));
        }
        Ok(())
    }

    /// Per-ray random stream; independent of evaluation order.
    pub fn rng_for(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// Stratified depths and segment lengths `(t_i, delta_i)`.
///
/// Without jitter the samples are bin midpoints. `delta_i = t_{i+1} - t_i` and
/// the last segment is one bin wide.
pub fn sample_ts<R: Rng + ?Sized>(cfg: &IntegratorConfig, rng: &mut R) -> Vec<(f64, f64)> {
    let n = cfg.n_samples;
    let bin = (cfg.t_far - cfg.t_near) / n as f64;
    let ts: Vec<f64> = (0..n)
        .map(|i| {
            let offset = if cfg.jitter { rng.gen::<f64>() } else { 0.5 };
            (cfg.t_near + (i as f64 + offset) * bin).min(cfg.t_far)
        })
        .collect();
    ts.iter()
        .enumerate()
        .map(|(i, &t)| {
            let delta = ts.get(i + 1).map_or(bin, |next| next - t);
            (t, delta)
        })
        .collect()
}

/// Transmittance before each sample plus the final one: `T_0 = 1`,
/// `T_{i+1} = T_i * exp(-sigma_i * delta_i)`.
pub fn transmittance_profile(sigmas: &[f64], deltas: &[f64]) -> Result<Vec<f64>> {
    if sigmas.len() != deltas.len() {
        return Err(Error::InvalidArgument(format!(
            "{} densities for {} segments",
            sigmas.len(),
            deltas.len()
        )));
    }
    let mut out = Vec::with_capacity(sigmas.len() + 1);
    let mut optical_depth = 0.0;
    out.push(1.0);
    for (i, (&s, &d)) in sigmas.iter().zip(deltas).enumerate() {
        if s < 0.0 || !s.is_finite() {
            return Err(Error::NegativeDensity { index: i, value: s });
        }
        if d.is_nan() || d <= 0.0 {
            return Err(Error::InvalidArgument(format!("segment {i} has length {d}")));
        }
        optical_depth += s * d;
        out.push((-optical_depth).exp());
    }
    Ok(out)
}

/// Quadrature weights `w_i = T_i * (1 - exp(-sigma_i * delta_i))` and their
/// sum, the ray opacity.
pub fn transmittance_weights(sigmas: &[f64], deltas: &[f64]) -> Result<(Vec<f64>, f64)> {
    let profile = transmittance_profile(sigmas, deltas)?;
    let weights: Vec<f64> = sigmas
        .iter()
        .zip(deltas)
        .zip(&profile)
        .map(|((&s, &d), &t)| t * -(-s * d).exp_m1())
        .collect();
    let alpha = weights.iter().sum::<f64>().min(1.0);
    Ok((weights, alpha))
}

/// Mirror `v` (pointing away from the surface) about `n`: `2 (n . v) n - v`.
#[inline]
pub fn reflect(v: DVec3, n: DVec3) -> DVec3 {
    2.0 * n.dot(v) * n - v
}

/// One quadrature node along a ray.
#[derive(Debug, Clone, PartialEq)]
pub struct RaySample {
    pub t: f64,
    pub delta: f64,
    pub point: DVec3,
    pub intrinsic: IntrinsicSample,
    pub normal: Option<Direction>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayResult {
    pub albedo: Rgb,
    pub diffuse: Rgb,
    pub specular: Rgb,
    pub feature: Vec<f64>,
    /// Weight-averaged normal, renormalized; zero when no sample had one.
    pub normal: DVec3,
    pub alpha: f64,
    /// Expected termination depth; 0 for an empty ray.
    pub depth: f64,
}

impl RayResult {
    pub fn empty(feature_dim: usize) -> Self {
        RayResult {
            albedo: DVec3::ZERO,
            diffuse: DVec3::ZERO,
            specular: DVec3::ZERO,
            feature: vec![0.0; feature_dim],
            normal: DVec3::ZERO,
            alpha: 0.0,
            depth: 0.0,
        }
    }
}

/// Evaluates the field and its normals at every quadrature node.
pub fn march_ray<F: IntrinsicField + ?Sized>(
    field: &F,
    ray: &Ray,
    cfg: &IntegratorConfig,
    stream: u64,
) -> Result<Vec<RaySample>> {
    cfg.validate()?;
    let mut rng = cfg.rng_for(stream);
    sample_ts(cfg, &mut rng)
        .into_iter()
        .map(|(t, delta)| {
            let point = ray.at(t);
            let intrinsic = field.sample(point)?;
            let normal = field.normal_at(point, cfg.normal_step);
            Ok(RaySample {
                t,
                delta,
                point,
                intrinsic,
                normal,
            })
        })
        .collect()
}

/// Accumulates albedo, diffuse, specular, feature, normal and depth along `ray`.
///
/// Diffuse looks up the first light map at each sample's normal; specular
/// blends all light maps by the sample's weights at the reflection of the view
/// vector `-d`. Samples without a normal add nothing to either.
pub fn integrate_ray<F: IntrinsicField + ?Sized>(
    field: &F,
    stack: &LightMapStack,
    ray: &Ray,
    cfg: &IntegratorConfig,
    stream: u64,
) -> Result<RayResult> {
    if field.blend_count() != stack.len() {
        return Err(Error::ExponentMismatch {
            field: field.blend_count(),
            stack: stack.len(),
        });
    }
    let samples = march_ray(field, ray, cfg, stream)?;
    let sigmas: Vec<f64> = samples.iter().map(|s| s.intrinsic.sigma).collect();
    let deltas: Vec<f64> = samples.iter().map(|s| s.delta).collect();
    let (weights, alpha) = transmittance_weights(&sigmas, &deltas)?;

    let mut out = RayResult::empty(field.feature_dim());
    if alpha == 0.0 {
        return Ok(out);
    }
    let view = -ray.direction.vec();
    let mut normal_sum = DVec3::ZERO;
    let mut depth_sum = 0.0;
    for (s, &w) in samples.iter().zip(&weights) {
        let intrinsic = &s.intrinsic;
        out.albedo += w * intrinsic.albedo;
        for (acc, f) in out.feature.iter_mut().zip(&intrinsic.feature) {
            *acc += w * f;
        }
        depth_sum += w * s.t;
        if let Some(n) = s.normal {
            let n = n.vec();
            normal_sum += w * n;
            out.diffuse += w * stack.diffuse().sample_bilinear(Direction::from_unit(n));
            if let Some(r) = Direction::new(reflect(view, n)) {
                let mut spec = DVec3::ZERO;
                for (map, &omega) in stack.maps().iter().zip(&intrinsic.weights) {
                    if omega != 0.0 {
                        spec += omega * map.sample_bilinear(r);
                    }
                }
                out.specular += w * spec;
            }
        }
    }
    out.alpha = alpha;
    out.depth = depth_sum / alpha;
    out.normal = normal_sum.try_normalize().unwrap_or(DVec3::ZERO);
    Ok(out)
}
