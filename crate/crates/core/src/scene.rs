//! JSON scene description shared by the renderer and the command line.
//!
//! ```json
//! {
//!   "camera":     { "position": [0,0,4], "look_at": [0,0,0], "up": [0,1,0],
//!                   "fov_deg": 30, "width": 64, "height": 64 },
//!   "integrator": { "t_near": 2.5, "t_far": 5.5, "n_samples": 128,
//!                   "jitter": false, "seed": 0 },
//!   "field":      { "type": "sphere", ... },
//!   "lighting":   { "envmap_path": "sky.pfm", "exponents": [1,8,32,128],
//!                   "lightmap_width": 64, "lightmap_height": 32, "rotation_deg": 0 }
//! }
//! ```
//!
//! Relative paths resolve against the directory holding the scene file.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::envmap::HdrEnvironmentMap;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, IntrinsicField};
use crate::integrator::IntegratorConfig;
use crate::prefilter::{
    build_stack, ExponentSet, LightMapStack, DEFAULT_EXPONENTS, DEFAULT_LIGHTMAP_HEIGHT,
    DEFAULT_LIGHTMAP_WIDTH,
};
use crate::render::Camera;

fn default_exponents() -> Vec<u32> {
    DEFAULT_EXPONENTS.to_vec()
}
fn default_lightmap_width() -> usize {
    DEFAULT_LIGHTMAP_WIDTH
}
fn default_lightmap_height() -> usize {
    DEFAULT_LIGHTMAP_HEIGHT
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lighting {
    pub envmap_path: PathBuf,
    #[serde(default = "default_exponents")]
    pub exponents: Vec<u32>,
    #[serde(default = "default_lightmap_width")]
    pub lightmap_width: usize,
    #[serde(default = "default_lightmap_height")]
    pub lightmap_height: usize,
    /// Yaw applied to the environment map, in degrees.
    #[serde(default)]
    pub rotation_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scene {
    pub camera: Camera,
    pub integrator: IntegratorConfig,
    pub field: FieldSpec,
    pub lighting: Lighting,
}

/// A scene with its field and light maps instantiated.
pub struct PreparedScene {
    pub camera: Camera,
    pub integrator: IntegratorConfig,
    pub field: Box<dyn IntrinsicField>,
    /// Source map before `rotation_deg` is applied.
    pub envmap: HdrEnvironmentMap,
    pub stack: LightMapStack,
}

impl Scene {
    pub fn from_json(text: &str) -> Result<Scene> {
        let scene: Scene = serde_json::from_str(text).map_err(|e| Error::Scene(e.to_string()))?;
        scene
            .camera
            .validate()
            .map_err(|e| Error::Scene(format!("camera: {e}")))?;
        scene
            .integrator
            .validate()
            .map_err(|e| Error::Scene(format!("integrator: {e}")))?;
        Ok(scene)
    }

    /// Loads a scene file and returns it with the directory paths resolve against.
    pub fn load(path: impl AsRef<Path>) -> Result<(Scene, PathBuf)> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::file(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((Self::from_json(&text)?, base))
    }

    pub fn exponent_set(&self) -> Result<ExponentSet> {
        ExponentSet::new(self.lighting.exponents.clone())
            .map_err(|e| Error::Scene(format!("lighting.exponents: {e}")))
    }

    /// Light maps for the environment map yawed by `rotation_deg + extra_deg`.
    pub fn light_maps(&self, envmap: &HdrEnvironmentMap, extra_deg: f64) -> Result<LightMapStack> {
        let rotated = envmap.rotate_yaw((self.lighting.rotation_deg + extra_deg).to_radians());
        build_stack(
            &rotated,
            &self.exponent_set()?,
            self.lighting.lightmap_width,
            self.lighting.lightmap_height,
        )
    }

    pub fn prepare(&self, base_dir: &Path) -> Result<PreparedScene> {
        let exps = self.exponent_set()?;
        let envmap = HdrEnvironmentMap::load(base_dir.join(&self.lighting.envmap_path))?;
        let stack = self.light_maps(&envmap, 0.0)?;
        let field = self.field.build(exps.len(), base_dir)?;
        Ok(PreparedScene {
            camera: self.camera,
            integrator: self.integrator,
            field,
            envmap,
            stack,
        })
    }
}
