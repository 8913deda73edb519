//! Intrinsic fields: position -> density, albedo, specular blend weights and
//! a feature vector, plus normals from the density gradient.

mod analytic;
mod encoding;
mod mlp;
mod spec;

pub use analytic::{BlendField, SphereField, SphereLobe, UniformField};
pub use encoding::{positional_encoding, DEFAULT_LEVELS};
pub use mlp::{
    generate_weights, mlp_forward, read_vxw, write_vxw, Layer, MlpField, MlpOutput, MlpWeights,
    DENSITY_TAP_LAYER, WEIGHT_CAP,
};
pub use spec::FieldSpec;

use glam::DVec3;

use crate::envmap::{yaw, Direction, Rgb};
use crate::error::{Error, Result};

/// Gradient magnitudes below this (per unit length) yield no normal.
pub const GRADIENT_FLOOR: f64 = 1e-6;
/// Default central-difference step, in scene units.
pub const DEFAULT_NORMAL_STEP: f64 = 1e-3;
pub const DEFAULT_FEATURE_DIM: usize = 16;
pub const MAX_FEATURE_DIM: usize = 256;

/// Everything a field reports about one point.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicSample {
    /// Density, >= 0, per unit length.
    pub sigma: f64,
    /// Albedo, each channel in [0, 1].
    pub albedo: Rgb,
    /// Specular blend weights, one per Phong exponent; non-negative, sum <= 1.
    pub weights: Vec<f64>,
    pub feature: Vec<f64>,
}

impl IntrinsicSample {
    pub fn is_valid(&self) -> bool {
        self.sigma >= 0.0
            && self.sigma.is_finite()
            && self.albedo.cmpge(DVec3::ZERO).all()
            && self.albedo.cmple(DVec3::ONE).all()
            && self.weights.iter().all(|w| *w >= 0.0 && w.is_finite())
            && self.weights.iter().sum::<f64>() <= 1.0 + 1e-9
            && self.feature.iter().all(|f| f.is_finite())
    }
}

pub trait IntrinsicField: Send + Sync {
    /// Number of specular blend weights (must match the light map stack).
    fn blend_count(&self) -> usize;

    fn feature_dim(&self) -> usize;

    fn density(&self, x: DVec3) -> f64;

    /// Full evaluation; `x` is assumed finite.
    fn evaluate(&self, x: DVec3) -> IntrinsicSample;

    fn density_gradient(&self, x: DVec3, h: f64) -> DVec3 {
        finite_difference_gradient(self, x, h)
    }

    fn sample(&self, x: DVec3) -> Result<IntrinsicSample> {
        if !x.is_finite() {
            return Err(Error::NonFinite(format!("sample position {x}")));
        }
        Ok(self.evaluate(x))
    }

    /// Outward normal `-grad(sigma) / |grad(sigma)|`, or `None` where the
    /// gradient vanishes.
    fn normal_at(&self, x: DVec3, h: f64) -> Option<Direction> {
        normal_from_gradient(self.density_gradient(x, h))
    }
}

pub fn normal_from_gradient(g: DVec3) -> Option<Direction> {
    if !g.is_finite() || g.length() < GRADIENT_FLOOR {
        return None;
    }
    Direction::new(-g)
}

/// Central-difference gradient of the density with step `h`.
pub fn finite_difference_gradient<F: IntrinsicField + ?Sized>(field: &F, x: DVec3, h: f64) -> DVec3 {
    let axis = |e: DVec3| (field.density(x + e * h) - field.density(x - e * h)) / (2.0 * h);
    DVec3::new(axis(DVec3::X), axis(DVec3::Y), axis(DVec3::Z))
}

impl<F: IntrinsicField + ?Sized> IntrinsicField for Box<F> {
    fn blend_count(&self) -> usize {
        (**self).blend_count()
    }
    fn feature_dim(&self) -> usize {
        (**self).feature_dim()
    }
    fn density(&self, x: DVec3) -> f64 {
        (**self).density(x)
    }
    fn evaluate(&self, x: DVec3) -> IntrinsicSample {
        (**self).evaluate(x)
    }
    fn density_gradient(&self, x: DVec3, h: f64) -> DVec3 {
        (**self).density_gradient(x, h)
    }
}

/// A field rigidly rotated about the world `+y` axis by `angle` radians.
pub struct YawedField<F> {
    inner: F,
    angle: f64,
}

impl<F: IntrinsicField> YawedField<F> {
    pub fn new(inner: F, angle: f64) -> Self {
        YawedField { inner, angle }
    }

    fn to_local(&self, x: DVec3) -> DVec3 {
        yaw(x, -self.angle)
    }
}

impl<F: IntrinsicField> IntrinsicField for YawedField<F> {
    fn blend_count(&self) -> usize {
        self.inner.blend_count()
    }
    fn feature_dim(&self) -> usize {
        self.inner.feature_dim()
    }
    fn density(&self, x: DVec3) -> f64 {
        self.inner.density(self.to_local(x))
    }
    fn evaluate(&self, x: DVec3) -> IntrinsicSample {
        self.inner.evaluate(self.to_local(x))
    }
    fn density_gradient(&self, x: DVec3, h: f64) -> DVec3 {
        yaw(self.inner.density_gradient(self.to_local(x), h), self.angle)
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn softplus(z: f64) -> f64 {
    if z > 30.0 {
        z
    } else {
        z.exp().ln_1p()
    }
}

pub(crate) fn validate_weights(weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "blend weights must be finite and >= 0: {weights:?}"
        )));
    }
    if weights.iter().sum::<f64>() > 1.0 + 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "blend weights must sum to <= 1: {weights:?}"
        )));
    }
    Ok(())
}

pub(crate) fn validate_feature_dim(dim: usize) -> Result<()> {
    if dim > MAX_FEATURE_DIM {
        return Err(Error::InvalidArgument(format!(
            "feature_dim {dim} exceeds {MAX_FEATURE_DIM}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn sphere() -> SphereField {
        SphereField::new(
            DVec3::new(0.3, 0.0, -0.2),
            0.5,
            20.0,
            10.0,
            DVec3::new(0.8, 0.2, 0.2),
        )
        .unwrap()
        .with_weights(vec![0.1, 0.2])
        .unwrap()
    }

    #[test]
    fn yawed_field_moves_geometry() {
        let f = YawedField::new(sphere(), PI / 2.0);
        let moved = yaw(DVec3::new(0.3, 0.0, -0.2), PI / 2.0);
        assert!((f.density(moved) - sphere().density(DVec3::new(0.3, 0.0, -0.2))).abs() < 1e-12);
        let p = moved + DVec3::new(0.5, 0.1, 0.0);
        let n = f.normal_at(p, 1e-3).unwrap();
        let fd = normal_from_gradient(finite_difference_gradient(&f, p, 1e-4)).unwrap();
        assert!(n.angle_to(fd) < 1e-5);
    }

    #[test]
    fn non_finite_position_rejected() {
        assert!(sphere().sample(DVec3::new(f64::NAN, 0.0, 0.0)).is_err());
        assert!(sphere().sample(DVec3::new(0.0, f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn activations() {
        assert_eq!(sigmoid(0.0), 0.5);
        assert!((softplus(0.0) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(sigmoid(-800.0) >= 0.0 && sigmoid(800.0) <= 1.0);
        assert_eq!(softplus(100.0), 100.0);
    }
}
