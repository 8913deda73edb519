//! Whole-image rendering of intrinsic targets and the reference composite.

mod camera;
mod image;
mod tonemap;

pub use camera::Camera;
pub use image::{normalized_rmse, Image};
pub use tonemap::{tonemap_png, tonemap_value, DEFAULT_EXPOSURE, DEFAULT_GAMMA};

use glam::DVec3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::IntrinsicField;
use crate::integrator::{integrate_ray, IntegratorConfig, RayResult};
use crate::prefilter::LightMapStack;

/// Per-pixel accumulated quantities for one camera.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderTargets {
    pub width: usize,
    pub height: usize,
    pub albedo: Image,
    pub diffuse: Image,
    pub specular: Image,
    /// Unit normals in world space, zero where nothing was hit.
    pub normal: Image,
    pub depth: Image,
    pub alpha: Image,
    pub feature: Image,
}

impl RenderTargets {
    fn new(width: usize, height: usize, feature_dim: usize) -> Self {
        RenderTargets {
            width,
            height,
            albedo: Image::new(width, height, 3),
            diffuse: Image::new(width, height, 3),
            specular: Image::new(width, height, 3),
            normal: Image::new(width, height, 3),
            depth: Image::new(width, height, 1),
            alpha: Image::new(width, height, 1),
            feature: Image::new(width, height, feature_dim),
        }
    }

    fn store(&mut self, x: usize, y: usize, r: &RayResult) {
        self.albedo.set_rgb(x, y, r.albedo);
        self.diffuse.set_rgb(x, y, r.diffuse);
        self.specular.set_rgb(x, y, r.specular);
        self.normal.set_rgb(x, y, r.normal);
        self.depth.pixel_mut(x, y)[0] = r.depth;
        self.alpha.pixel_mut(x, y)[0] = r.alpha;
        self.feature.pixel_mut(x, y).copy_from_slice(&r.feature);
    }

    /// Normals remapped from [-1, 1] to [0, 1] for storage.
    pub fn normal_encoded(&self) -> Image {
        let mut out = self.normal.clone();
        for v in &mut out.data {
            *v = 0.5 * (*v + 1.0);
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        [
            &self.albedo,
            &self.diffuse,
            &self.specular,
            &self.normal,
            &self.depth,
            &self.alpha,
            &self.feature,
        ]
        .iter()
        .all(|i| i.is_finite())
    }
}

/// Renders every pixel with [`integrate_ray`] on a pool of `threads` workers.
///
/// Pixel `(x, y)` uses random stream `y * width + x`, so the output does not
/// depend on the thread count.
pub fn render(
    field: &dyn IntrinsicField,
    stack: &LightMapStack,
    camera: &Camera,
    cfg: &IntegratorConfig,
    threads: usize,
) -> Result<RenderTargets> {
    camera.validate()?;
    cfg.validate()?;
    if field.blend_count() != stack.len() {
        return Err(Error::ExponentMismatch {
            field: field.blend_count(),
            stack: stack.len(),
        });
    }
    let (w, h) = (camera.width, camera.height);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let rows: Vec<Vec<RayResult>> = pool.install(|| {
        (0..h)
            .into_par_iter()
            .map(|y| {
                (0..w)
                    .map(|x| {
                        let ray = camera.ray_unchecked(x, y, (0.0, 0.0));
                        integrate_ray(field, stack, &ray, cfg, (y * w + x) as u64)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut targets = RenderTargets::new(w, h, field.feature_dim());
    for (y, row) in rows.iter().enumerate() {
        for (x, r) in row.iter().enumerate() {
            targets.store(x, y, r);
        }
    }
    Ok(targets)
}

/// Phong composite `albedo * diffuse + specular`, per channel.
pub fn phong_composite(targets: &RenderTargets) -> Image {
    let mut out = Image::new(targets.width, targets.height, 3);
    for ((o, (a, d)), s) in out
        .data
        .iter_mut()
        .zip(targets.albedo.data.iter().zip(&targets.diffuse.data))
        .zip(&targets.specular.data)
    {
        *o = a * d + s;
    }
    out
}

/// Mean absolute per-channel difference between `lo` and `hi` box-filtered to
/// `lo`'s resolution.
pub fn path_consistency(hi: &Image, lo: &Image) -> Result<f64> {
    if hi.channels != lo.channels {
        return Err(Error::InvalidArgument(format!(
            "channel count differs ({} vs {})",
            hi.channels, lo.channels
        )));
    }
    let down = hi.downsample_box(lo.width, lo.height)?;
    let total: f64 = down.data.iter().zip(&lo.data).map(|(a, b)| (a - b).abs()).sum();
    Ok(total / lo.data.len().max(1) as f64)
}

/// Weighted mean of an RGB image over pixels where `mask` exceeds `threshold`.
pub fn masked_mean(image: &Image, mask: &Image, threshold: f64) -> Option<DVec3> {
    let mut sum = DVec3::ZERO;
    let mut count = 0usize;
    for y in 0..image.height {
        for x in 0..image.width {
            if mask.value(x, y) > threshold {
                sum += image.rgb(x, y);
                count += 1;
            }
        }
    }
    (count > 0).then(|| sum / count as f64)
}
