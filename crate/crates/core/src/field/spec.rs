use std::path::{Path, PathBuf};

use glam::DVec3;
use serde::{Deserialize, Serialize};

use super::{BlendField, IntrinsicField, MlpField, SphereField, SphereLobe, DEFAULT_FEATURE_DIM};
use crate::error::{Error, Result};

fn default_feature_dim() -> usize {
    DEFAULT_FEATURE_DIM
}

fn default_levels() -> usize {
    super::DEFAULT_LEVELS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LobeSpec {
    pub center: [f64; 3],
    pub radius: f64,
    pub sharpness: f64,
    pub density_scale: f64,
    pub albedo: [f64; 3],
}

impl From<LobeSpec> for SphereLobe {
    fn from(s: LobeSpec) -> Self {
        SphereLobe {
            center: DVec3::from_array(s.center),
            radius: s.radius,
            sharpness: s.sharpness,
            density_scale: s.density_scale,
            albedo: DVec3::from_array(s.albedo),
        }
    }
}

/// Scene-file description of a field.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldSpec {
    Sphere {
        center: [f64; 3],
        radius: f64,
        sharpness: f64,
        density_scale: f64,
        albedo: [f64; 3],
        #[serde(default)]
        albedo_pattern: f64,
        /// Blend weights; defaults to `0.5 / N` each.
        #[serde(default)]
        weights: Option<Vec<f64>>,
        #[serde(default = "default_feature_dim")]
        feature_dim: usize,
    },
    Blend {
        lobes: Vec<LobeSpec>,
        #[serde(default)]
        weights: Option<Vec<f64>>,
        #[serde(default = "default_feature_dim")]
        feature_dim: usize,
    },
    Mlp {
        weights_path: PathBuf,
        #[serde(default = "default_levels")]
        levels: usize,
    },
}

fn blend_weights(given: &Option<Vec<f64>>, count: usize) -> Result<Vec<f64>> {
    match given {
        Some(w) if w.len() != count => Err(Error::ExponentMismatch {
            field: w.len(),
            stack: count,
        }),
        Some(w) => Ok(w.clone()),
        None => Ok(vec![0.5 / count as f64; count]),
    }
}

impl FieldSpec {
    /// Instantiates the field. Relative weight paths resolve against `base_dir`.
    pub fn build(&self, blend_count: usize, base_dir: &Path) -> Result<Box<dyn IntrinsicField>> {
        match self {
            FieldSpec::Sphere {
                center,
                radius,
                sharpness,
                density_scale,
                albedo,
                albedo_pattern,
                weights,
                feature_dim,
            } => {
                let field = SphereField::new(
                    DVec3::from_array(*center),
                    *radius,
                    *sharpness,
                    *density_scale,
                    DVec3::from_array(*albedo),
                )?
                .with_weights(blend_weights(weights, blend_count)?)?
                .with_albedo_pattern(*albedo_pattern)?
                .with_feature_dim(*feature_dim)?;
                Ok(Box::new(field))
            }
            FieldSpec::Blend {
                lobes,
                weights,
                feature_dim,
            } => Ok(Box::new(BlendField::new(
                lobes.iter().copied().map(SphereLobe::from).collect(),
                blend_weights(weights, blend_count)?,
                *feature_dim,
            )?)),
            FieldSpec::Mlp { weights_path, levels } => {
                let field = MlpField::load(base_dir.join(weights_path), *levels)?;
                if field.blend_count() != blend_count {
                    return Err(Error::ExponentMismatch {
                        field: field.blend_count(),
                        stack: blend_count,
                    });
                }
                Ok(Box::new(field))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_sphere_with_defaults() {
        let spec: FieldSpec = serde_json::from_str(
            r#"{"type":"sphere","center":[0,0,0],"radius":0.5,"sharpness":50,
                "density_scale":100,"albedo":[0.8,0.2,0.2]}"#,
        )
        .unwrap();
        let field = spec.build(4, Path::new(".")).unwrap();
        assert_eq!(field.blend_count(), 4);
        assert_eq!(field.feature_dim(), DEFAULT_FEATURE_DIM);
        let s = field.sample(DVec3::ZERO).unwrap();
        assert_eq!(s.weights, vec![0.125; 4]);
    }

    #[test]
    fn weight_count_must_match() {
        let spec: FieldSpec = serde_json::from_str(
            r#"{"type":"blend","lobes":[{"center":[0,0,0],"radius":0.5,"sharpness":50,
                "density_scale":100,"albedo":[0.5,0.5,0.5]}],"weights":[0.1,0.2]}"#,
        )
        .unwrap();
        assert!(matches!(
            spec.build(4, Path::new(".")),
            Err(Error::ExponentMismatch { field: 2, stack: 4 })
        ));
        assert!(spec.build(2, Path::new(".")).is_ok());
    }

    #[test]
    fn unknown_keys_rejected() {
        let r: std::result::Result<FieldSpec, _> =
            serde_json::from_str(r#"{"type":"mlp","weights_path":"a.vxw","depth":3}"#);
        assert!(r.unwrap_err().to_string().contains("depth"));
        let r: std::result::Result<FieldSpec, _> = serde_json::from_str(r#"{"type":"cube"}"#);
        assert!(r.is_err());
    }

    #[test]
    fn missing_weight_file() {
        let spec = FieldSpec::Mlp {
            weights_path: "does/not/exist.vxw".into(),
            levels: 10,
        };
        let err = spec.build(4, Path::new("/nonexistent")).err().unwrap();
        assert!(err.to_string().contains("exist.vxw"));
    }
}
