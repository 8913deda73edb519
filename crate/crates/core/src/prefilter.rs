//! Phong-lobe preconvolution of environment maps into light maps.
//!
//! For exponent `n` the light map is
//!
//! ```text
//! L_n(d) = (n + 1) / 2pi * sum_texels H(w) * max(0, w . d)^n * dOmega(w)
//! ```
//!
//! with `dOmega = sin(theta) dtheta dphi`. The `(n + 1) / 2pi` factor makes a
//! constant map a fixed point. `n = 1` is the diffuse (cosine) lobe.

use std::f64::consts::PI;

use glam::DVec3;
use rayon::prelude::*;

use crate::envmap::{Direction, HdrEnvironmentMap, Rgb};
use crate::error::{Error, Result};

pub const DEFAULT_EXPONENTS: [u32; 4] = [1, 8, 32, 128];
pub const DEFAULT_LIGHTMAP_WIDTH: usize = 64;
pub const DEFAULT_LIGHTMAP_HEIGHT: usize = 32;

/// Strictly increasing Phong exponents starting at 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentSet(Vec<u32>);

impl ExponentSet {
    pub fn new(exponents: Vec<u32>) -> Result<Self> {
        match exponents.first() {
            None => return Err(Error::InvalidArgument("exponent list is empty".into())),
            Some(&first) if first != 1 => {
                return Err(Error::InvalidArgument(format!(
                    "first exponent must be 1 (diffuse lobe), got {first}"
                )))
            }
            _ => {}
        }
        if let Some(w) = exponents.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(format!(
                "exponents must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(ExponentSet(exponents))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl Default for ExponentSet {
    fn default() -> Self {
        ExponentSet(DEFAULT_EXPONENTS.to_vec())
    }
}

#[inline]
fn lobe_normalization(n: u32) -> f64 {
    (n as f64 + 1.0) / (2.0 * PI)
}

fn check_exponent(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("Phong exponent must be >= 1".into()));
    }
    Ok(())
}

/// Source texels flattened into (direction, radiance * solid angle).
fn weighted_texels(map: &HdrEnvironmentMap) -> Vec<(DVec3, Rgb)> {
    let mut out = Vec::with_capacity(map.width() * map.height());
    for y in 0..map.height() {
        let solid_angle = map.texel_solid_angle(y);
        for x in 0..map.width() {
            let radiance = map.texel(x, y);
            if radiance != DVec3::ZERO {
                out.push((map.texel_direction(x, y).vec(), radiance * solid_angle));
            }
        }
    }
    out
}

/// Convolves `map` with a normalized `max(0, cos)^n` lobe, evaluated at the
/// texel centers of an `out_width x out_height` equirectangular grid.
pub fn preconvolve(
    map: &HdrEnvironmentMap,
    n: u32,
    out_width: usize,
    out_height: usize,
) -> Result<HdrEnvironmentMap> {
    check_exponent(n)?;
    if out_width < 4 || out_height < 2 {
        return Err(Error::InvalidArgument(format!(
            "light map must be at least 4x2, got {out_width}x{out_height}"
        )));
    }
    if map.pixels().iter().any(|p| p.iter().any(|c| !c.is_finite())) {
        return Err(Error::NonFinite("environment map radiance".into()));
    }
    let texels = weighted_texels(map);
    let norm = lobe_normalization(n);
    let grid = HdrEnvironmentMap::constant(out_width, out_height, DVec3::ZERO)?;

    let pixels: Vec<[f32; 3]> = (0..out_width * out_height)
        .into_par_iter()
        .map(|i| {
            let d = grid.texel_direction(i % out_width, i / out_width).vec();
            let mut sum = DVec3::ZERO;
            for &(w, weighted) in &texels {
                let c = w.dot(d);
                if c > 0.0 {
                    sum += weighted * c.powi(n as i32);
                }
            }
            (sum * norm).as_vec3().to_array()
        })
        .collect();
    HdrEnvironmentMap::new(out_width, out_height, pixels)
}

/// Brute-force lobe integral at a single direction over every source texel.
///
/// Shares no tables with [`preconvolve`]; used as its ground truth.
pub fn oracle_shade(map: &HdrEnvironmentMap, d: Direction, n: u32) -> Rgb {
    let (w, h) = (map.width(), map.height());
    let dtheta = PI / h as f64;
    let dphi = 2.0 * PI / w as f64;
    let d = d.vec();
    let mut sum = DVec3::ZERO;
    for y in 0..h {
        let theta = (y as f64 + 0.5) * dtheta;
        let (st, ct) = theta.sin_cos();
        for x in 0..w {
            let phi = (x as f64 + 0.5) * dphi - PI;
            let omega = DVec3::new(st * phi.sin(), ct, -st * phi.cos());
            let c = omega.dot(d).max(0.0);
            sum += map.texel(x, y) * c.powf(n as f64) * st * dtheta * dphi;
        }
    }
    sum * (n as f64 + 1.0) / (2.0 * PI)
}

/// Preconvolved light maps, one per exponent; index 0 is the diffuse map.
#[derive(Debug, Clone, PartialEq)]
pub struct LightMapStack {
    exponents: ExponentSet,
    maps: Vec<HdrEnvironmentMap>,
}

impl LightMapStack {
    pub fn new(exponents: ExponentSet, maps: Vec<HdrEnvironmentMap>) -> Result<Self> {
        if maps.len() != exponents.len() {
            return Err(Error::InvalidArgument(format!(
                "{} light maps for {} exponents",
                maps.len(),
                exponents.len()
            )));
        }
        Ok(LightMapStack { exponents, maps })
    }

    pub fn exponents(&self) -> &ExponentSet {
        &self.exponents
    }

    pub fn maps(&self) -> &[HdrEnvironmentMap] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn diffuse(&self) -> &HdrEnvironmentMap {
        &self.maps[0]
    }

    /// Rotates every light map directly. Valid because yaw rotation commutes
    /// with the isotropic lobe convolution (up to resampling).
    pub fn rotate_yaw(&self, angle: f64) -> LightMapStack {
        LightMapStack {
            exponents: self.exponents.clone(),
            maps: self.maps.iter().map(|m| m.rotate_yaw(angle)).collect(),
        }
    }
}

pub fn build_stack(
    map: &HdrEnvironmentMap,
    exponents: &ExponentSet,
    out_width: usize,
    out_height: usize,
) -> Result<LightMapStack> {
    let maps = exponents
        .as_slice()
        .iter()
        .map(|&n| preconvolve(map, n, out_width, out_height))
        .collect::<Result<Vec<_>>>()?;
    LightMapStack::new(exponents.clone(), maps)
}
