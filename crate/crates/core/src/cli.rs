//! Implementations of the command-line subcommands.
//!
//! Every command writes into an output directory. If a command fails, the
//! files it wrote are removed again, and so is the directory if the command
//! created it.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{generate_weights, write_vxw};
use crate::prefilter::{build_stack, ExponentSet};
use crate::render::{
    phong_composite, render, tonemap_png, Image, RenderTargets, DEFAULT_EXPOSURE, DEFAULT_GAMMA,
};
use crate::scene::{PreparedScene, Scene};
use crate::HdrEnvironmentMap;

/// Files written by a command; rolled back on drop unless committed.
struct Outputs {
    dir: PathBuf,
    created_dir: bool,
    files: Vec<PathBuf>,
    committed: bool,
}

impl Outputs {
    fn create(dir: &Path) -> Result<Self> {
        let created_dir = !dir.exists();
        fs::create_dir_all(dir).map_err(|e| Error::file(dir, e))?;
        Ok(Outputs {
            dir: dir.to_path_buf(),
            created_dir,
            files: Vec::new(),
            committed: false,
        })
    }

    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.dir.join(name);
        self.files.push(path.clone());
        fs::write(&path, bytes).map_err(|e| Error::file(&path, e))?;
        Ok(path)
    }

    fn commit(mut self) -> Vec<PathBuf> {
        self.committed = true;
        std::mem::take(&mut self.files)
    }
}

impl Drop for Outputs {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        if self.created_dir {
            let _ = fs::remove_dir_all(&self.dir);
        } else {
            for f in &self.files {
                let _ = fs::remove_file(f);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct Manifest {
    pub exponents: Vec<u32>,
    pub files: Vec<String>,
    pub source: String,
    pub resolution: [usize; 2],
}

pub fn lightmap_file_name(exponent: u32) -> String {
    format!("lightmap_n{exponent}.pfm")
}

/// Preconvolves `envmap` into one PFM per exponent plus `manifest.json`.
pub fn cmd_prefilter(
    envmap: &Path,
    exponents: &[u32],
    out_dir: &Path,
    resolution: (usize, usize),
) -> Result<Vec<PathBuf>> {
    let exps = ExponentSet::new(exponents.to_vec())?;
    let map = HdrEnvironmentMap::load(envmap)?;
    let stack = build_stack(&map, &exps, resolution.0, resolution.1)?;

    let mut out = Outputs::create(out_dir)?;
    let mut files = Vec::new();
    for (&n, light_map) in exps.as_slice().iter().zip(stack.maps()) {
        let name = lightmap_file_name(n);
        out.write(&name, &light_map.to_pfm())?;
        files.push(name);
    }
    let manifest = Manifest {
        exponents: exps.as_slice().to_vec(),
        files,
        source: envmap.display().to_string(),
        resolution: [resolution.0, resolution.1],
    };
    let mut json = serde_json::to_vec_pretty(&manifest)?;
    json.push(b'\n');
    out.write("manifest.json", &json)?;
    Ok(out.commit())
}

pub const CHANNELS: [&str; 7] = [
    "albedo", "diffuse", "specular", "relit", "normal", "alpha", "depth",
];

fn channel_images(targets: &RenderTargets) -> [(&'static str, Image); 7] {
    [
        ("albedo", targets.albedo.clone()),
        ("diffuse", targets.diffuse.clone()),
        ("specular", targets.specular.clone()),
        ("relit", phong_composite(targets)),
        ("normal", targets.normal_encoded()),
        ("alpha", targets.alpha.clone()),
        ("depth", targets.depth.clone()),
    ]
}

fn load_scene(path: &Path, seed: Option<u64>) -> Result<(Scene, PathBuf)> {
    let (mut scene, base) = Scene::load(path)?;
    if let Some(seed) = seed {
        scene.integrator.seed = seed;
    }
    Ok((scene, base))
}

/// Renders a scene file into per-channel PFMs (and PNG previews).
pub fn cmd_render(
    scene_path: &Path,
    out_dir: &Path,
    threads: usize,
    png: bool,
    seed: Option<u64>,
) -> Result<Vec<PathBuf>> {
    let (scene, base) = load_scene(scene_path, seed)?;
    let prepared = scene.prepare(&base)?;
    let targets = render(
        prepared.field.as_ref(),
        &prepared.stack,
        &prepared.camera,
        &prepared.integrator,
        threads,
    )?;

    let mut out = Outputs::create(out_dir)?;
    for (name, image) in channel_images(&targets) {
        out.write(&format!("{name}.pfm"), &image.to_pfm()?)?;
        if png {
            let exposure = if name == "depth" {
                1.0 / prepared.integrator.t_far
            } else {
                DEFAULT_EXPOSURE
            };
            out.write(
                &format!("{name}.png"),
                &tonemap_png(&image, DEFAULT_GAMMA, exposure)?,
            )?;
        }
    }
    Ok(out.commit())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TurntableMode {
    /// Camera revolves about its look-at point in the horizontal plane.
    CameraOrbit,
    /// Fixed camera; the environment map is yawed.
    LightRotation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TurntableSpec {
    pub mode: TurntableMode,
    pub frames: usize,
    pub sweep_deg: f64,
    pub scene: PathBuf,
    pub out_dir: PathBuf,
    /// Rotate the prefiltered light maps instead of re-prefiltering.
    pub rotate_lightmaps: bool,
}

impl TurntableSpec {
    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 {
            return Err(Error::InvalidArgument("frames must be >= 1".into()));
        }
        if !(self.sweep_deg > 0.0 && self.sweep_deg <= 360.0) {
            return Err(Error::InvalidArgument(format!(
                "sweep must be in (0, 360], got {}",
                self.sweep_deg
            )));
        }
        Ok(())
    }

    /// Angle of frame `index`; frames are spaced `sweep / frames` apart, so
    /// `index == frames` is the end of the sweep.
    pub fn frame_angle_deg(&self, index: usize) -> f64 {
        self.sweep_deg * index as f64 / self.frames as f64
    }
}

/// Relit image of one turntable frame at `angle_deg`.
pub fn render_turntable_frame(
    scene: &Scene,
    prepared: &PreparedScene,
    mode: TurntableMode,
    angle_deg: f64,
    rotate_lightmaps: bool,
    threads: usize,
) -> Result<Image> {
    let targets = match mode {
        TurntableMode::CameraOrbit => render(
            prepared.field.as_ref(),
            &prepared.stack,
            &prepared.camera.orbit(angle_deg.to_radians()),
            &prepared.integrator,
            threads,
        )?,
        TurntableMode::LightRotation => {
            let stack = if angle_deg == 0.0 {
                prepared.stack.clone()
            } else if rotate_lightmaps {
                prepared.stack.rotate_yaw(angle_deg.to_radians())
            } else {
                scene.light_maps(&prepared.envmap, angle_deg)?
            };
            render(
                prepared.field.as_ref(),
                &stack,
                &prepared.camera,
                &prepared.integrator,
                threads,
            )?
        }
    };
    Ok(phong_composite(&targets))
}

/// Writes `frame_%04d.pfm` and `frame_%04d.png` for every frame.
pub fn cmd_turntable(spec: &TurntableSpec, threads: usize, seed: Option<u64>) -> Result<Vec<PathBuf>> {
    spec.validate()?;
    let (scene, base) = load_scene(&spec.scene, seed)?;
    let prepared = scene.prepare(&base)?;
    let mut out = Outputs::create(&spec.out_dir)?;
    for i in 0..spec.frames {
        let relit = render_turntable_frame(
            &scene,
            &prepared,
            spec.mode,
            spec.frame_angle_deg(i),
            spec.rotate_lightmaps,
            threads,
        )?;
        out.write(&format!("frame_{i:04}.pfm"), &relit.to_pfm()?)?;
        out.write(
            &format!("frame_{i:04}.png"),
            &tonemap_png(&relit, DEFAULT_GAMMA, DEFAULT_EXPOSURE)?,
        )?;
    }
    Ok(out.commit())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenWeightsArgs {
    pub seed: u64,
    pub width: usize,
    pub layers: usize,
    pub feature_dim: usize,
    pub blend_count: usize,
    pub levels: usize,
}

/// Writes a seeded `VXW1` weight file.
pub fn cmd_gen_weights(args: &GenWeightsArgs, out: &Path) -> Result<PathBuf> {
    let weights = generate_weights(
        args.seed,
        args.width,
        args.layers,
        args.feature_dim,
        args.blend_count,
        args.levels,
    )?;
    let bytes = write_vxw(&weights);
    if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| Error::file(parent, e))?;
    }
    if let Err(e) = fs::write(out, bytes) {
        let _ = fs::remove_file(out);
        return Err(Error::file(out, e));
    }
    Ok(out.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outputs_roll_back() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path().join("new");
        {
            let mut out = Outputs::create(&dir).unwrap();
            out.write("a.txt", b"x").unwrap();
        }
        assert!(!dir.exists());

        let existing = tmp.path().join("existing");
        fs::create_dir(&existing).unwrap();
        fs::write(existing.join("keep.txt"), b"k").unwrap();
        {
            let mut out = Outputs::create(&existing).unwrap();
            out.write("a.txt", b"x").unwrap();
        }
        assert!(existing.join("keep.txt").exists());
        assert!(!existing.join("a.txt").exists());

        let mut out = Outputs::create(&dir).unwrap();
        out.write("a.txt", b"x").unwrap();
        assert_eq!(out.commit().len(), 1);
        assert!(dir.join("a.txt").exists());
    }

    #[test]
    fn turntable_spec_validation() {
        let spec = TurntableSpec {
            mode: TurntableMode::LightRotation,
            frames: 8,
            sweep_deg: 360.0,
            scene: "s.json".into(),
            out_dir: "out".into(),
            rotate_lightmaps: false,
        };
        assert!(spec.validate().is_ok());
        assert_eq!(spec.frame_angle_deg(2), 90.0);
        assert_eq!(spec.frame_angle_deg(8), 360.0);
        assert!(TurntableSpec {
            frames: 0,
            ..spec.clone()
        }
        .validate()
        .is_err());
        assert!(TurntableSpec {
            sweep_deg: 0.0,
            ..spec.clone()
        }
        .validate()
        .is_err());
        assert!(TurntableSpec {
            sweep_deg: 361.0,
            ..spec
        }
        .validate()
        .is_err());
    }
}
