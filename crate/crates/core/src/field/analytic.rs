//! Closed-form fields with analytic density gradients.

use glam::DVec3;

use super::encoding::encode_into;
use super::{sigmoid, validate_feature_dim, validate_weights, IntrinsicField, IntrinsicSample};
use crate::envmap::Rgb;
use crate::error::{Error, Result};

/// One soft ball: `sigma(x) = density_scale * sigmoid(sharpness * (radius - |x - center|))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereLobe {
    pub center: DVec3,
    pub radius: f64,
    pub sharpness: f64,
    pub density_scale: f64,
    pub albedo: Rgb,
}

impl SphereLobe {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0 && self.sharpness > 0.0 && self.density_scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sphere needs radius, sharpness, density_scale > 0 (got {}, {}, {})",
                self.radius, self.sharpness, self.density_scale
            )));
        }
        if !self.center.is_finite() {
            return Err(Error::NonFinite("sphere center".into()));
        }
        if !(self.albedo.cmpge(DVec3::ZERO).all() && self.albedo.cmple(DVec3::ONE).all()) {
            return Err(Error::InvalidArgument(format!(
                "albedo must lie in [0,1]^3, got {}",
                self.albedo
            )));
        }
        Ok(())
    }

    #[inline]
    pub fn density(&self, x: DVec3) -> f64 {
        let r = (x - self.center).length();
        self.density_scale * sigmoid(self.sharpness * (self.radius - r))
    }

    #[inline]
    pub fn gradient(&self, x: DVec3) -> DVec3 {
        let offset = x - self.center;
        let r = offset.length();
        if r == 0.0 {
            return DVec3::ZERO;
        }
        let s = sigmoid(self.sharpness * (self.radius - r));
        -self.density_scale * s * (1.0 - s) * self.sharpness * offset / r
    }
}

/// Deterministic bounded feature: the leading entries of a positional
/// encoding of `local`, zero padded.
fn analytic_feature(local: DVec3, dim: usize) -> Vec<f64> {
    let mut out = Vec::new();
    encode_into(local, dim.div_ceil(6).max(1), &mut out);
    out.truncate(dim);
    out
}

/// A single soft sphere with optional directional albedo variation.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereField {
    lobe: SphereLobe,
    albedo_pattern: f64,
    weights: Vec<f64>,
    feature_dim: usize,
}

impl SphereField {
    /// Sphere with blend weights `[0.5]` and the default feature size.
    pub fn new(center: DVec3, radius: f64, sharpness: f64, density_scale: f64, albedo: Rgb) -> Result<Self> {
        let lobe = SphereLobe {
            center,
            radius,
            sharpness,
            density_scale,
            albedo,
        };
        lobe.validate()?;
        Ok(SphereField {
            lobe,
            albedo_pattern: 0.0,
            weights: vec![0.5],
            feature_dim: super::DEFAULT_FEATURE_DIM,
        })
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        validate_weights(&weights)?;
        self.weights = weights;
        Ok(self)
    }

    pub fn with_feature_dim(mut self, dim: usize) -> Result<Self> {
        validate_feature_dim(dim)?;
        self.feature_dim = dim;
        Ok(self)
    }

    /// Albedo becomes `clamp(albedo * (1 + pattern * n.x))` with `n` the
    /// direction from the center. Breaks rotational symmetry about `y`.
    pub fn with_albedo_pattern(mut self, pattern: f64) -> Result<Self> {
        if !pattern.is_finite() {
            return Err(Error::NonFinite("albedo pattern".into()));
        }
        self.albedo_pattern = pattern;
        Ok(self)
    }

    pub fn lobe(&self) -> &SphereLobe {
        &self.lobe
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Albedo at the surface point in direction `n` from the center.
    pub fn albedo_toward(&self, n: DVec3) -> Rgb {
        (self.lobe.albedo * (1.0 + self.albedo_pattern * n.x)).clamp(DVec3::ZERO, DVec3::ONE)
    }
}

impl IntrinsicField for SphereField {
    fn blend_count(&self) -> usize {
        self.weights.len()
    }

    fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    fn density(&self, x: DVec3) -> f64 {
        self.lobe.density(x)
    }

    fn evaluate(&self, x: DVec3) -> IntrinsicSample {
        let local = x - self.lobe.center;
        let albedo = match local.try_normalize() {
            Some(n) => self.albedo_toward(n),
            None => self.lobe.albedo,
        };
        IntrinsicSample {
            sigma: self.lobe.density(x),
            albedo,
            weights: self.weights.clone(),
            feature: analytic_feature(local / self.lobe.radius, self.feature_dim),
        }
    }

    fn density_gradient(&self, x: DVec3, _h: f64) -> DVec3 {
        self.lobe.gradient(x)
    }
}

/// Additive union of soft spheres; albedo is the density-weighted mean.
#[derive(Debug, Clone, PartialEq)]
pub struct BlendField {
    lobes: Vec<SphereLobe>,
    weights: Vec<f64>,
    feature_dim: usize,
}

impl BlendField {
    pub fn new(lobes: Vec<SphereLobe>, weights: Vec<f64>, feature_dim: usize) -> Result<Self> {
        if lobes.is_empty() {
            return Err(Error::InvalidArgument(
                "blend field needs at least one lobe".into(),
            ));
        }
        for lobe in &lobes {
            lobe.validate()?;
        }
        validate_weights(&weights)?;
        validate_feature_dim(feature_dim)?;
        Ok(BlendField {
            lobes,
            weights,
            feature_dim,
        })
    }
}

impl IntrinsicField for BlendField {
    fn blend_count(&self) -> usize {
        self.weights.len()
    }

    fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    fn density(&self, x: DVec3) -> f64 {
        self.lobes.iter().map(|l| l.density(x)).sum()
    }

    fn evaluate(&self, x: DVec3) -> IntrinsicSample {
        let mut sigma = 0.0;
        let mut albedo = DVec3::ZERO;
        for lobe in &self.lobes {
            let s = lobe.density(x);
            sigma += s;
            albedo += s * lobe.albedo;
        }
        let albedo = if sigma > 0.0 {
            (albedo / sigma).clamp(DVec3::ZERO, DVec3::ONE)
        } else {
            self.lobes[0].albedo
        };
        IntrinsicSample {
            sigma,
            albedo,
            weights: self.weights.clone(),
            feature: analytic_feature(x, self.feature_dim),
        }
    }

    fn density_gradient(&self, x: DVec3, _h: f64) -> DVec3 {
        self.lobes.iter().map(|l| l.gradient(x)).sum()
    }
}

/// Homogeneous medium. Its gradient is zero, so it never has a normal.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformField {
    pub sigma: f64,
    pub albedo: Rgb,
    pub weights: Vec<f64>,
    pub feature_dim: usize,
}

impl UniformField {
    pub fn empty(blend_count: usize) -> Self {
        UniformField {
            sigma: 0.0,
            albedo: DVec3::ZERO,
            weights: vec![0.0; blend_count],
            feature_dim: 0,
        }
    }
}

impl IntrinsicField for UniformField {
    fn blend_count(&self) -> usize {
        self.weights.len()
    }

    fn feature_dim(&self) -> usize {
        self.feature_dim
    }

    fn density(&self, _x: DVec3) -> f64 {
        self.sigma
    }

    fn evaluate(&self, x: DVec3) -> IntrinsicSample {
        IntrinsicSample {
            sigma: self.sigma,
            albedo: self.albedo,
            weights: self.weights.clone(),
            feature: analytic_feature(x, self.feature_dim),
        }
    }

    fn density_gradient(&self, _x: DVec3, _h: f64) -> DVec3 {
        DVec3::ZERO
    }
}
