//! Equirectangular HDR environment maps.
//!
//! World frame: right-handed, `+y` up, `-z` forward. The horizontal texture
//! coordinate `u = 0.5` faces `-z`; `v = 0` is the north pole (`+y`).
//! Texel `(x, y)` has its center at `((x + 0.5) / W, (y + 0.5) / H)`.

use std::f64::consts::PI;
use std::path::Path;

use glam::DVec3;

use crate::error::{Error, Result};
use crate::pfm::{self, PfmImage};

/// Linear RGB radiance.
pub type Rgb = DVec3;

/// A unit-length 3-vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction(DVec3);

impl Direction {
    pub const UP: Direction = Direction(DVec3::Y);
    pub const FORWARD: Direction = Direction(DVec3::NEG_Z);

    /// Normalizes `v`; `None` for zero-length or non-finite input.
    pub fn new(v: DVec3) -> Option<Self> {
        let len = v.length();
        if len.is_finite() && len > 0.0 {
            Some(Direction(v / len))
        } else {
            None
        }
    }

    /// Wraps a vector the caller guarantees is already unit length.
    pub fn from_unit(v: DVec3) -> Self {
        debug_assert!((v.length() - 1.0).abs() < 1e-6, "not unit length: {v}");
        Direction(v)
    }

    #[inline]
    pub fn vec(self) -> DVec3 {
        self.0
    }

    pub fn x(self) -> f64 {
        self.0.x
    }
    pub fn y(self) -> f64 {
        self.0.y
    }
    pub fn z(self) -> f64 {
        self.0.z
    }

    pub fn yawed(self, angle: f64) -> Direction {
        Direction(yaw(self.0, angle))
    }

    /// Angle to `other` in radians, stable for nearly parallel vectors.
    pub fn angle_to(self, other: Direction) -> f64 {
        let cross = self.0.cross(other.0).length();
        cross.atan2(self.0.dot(other.0))
    }
}

impl From<Direction> for DVec3 {
    fn from(d: Direction) -> DVec3 {
        d.0
    }
}

/// Rotation about the world `+y` axis by `angle` radians (right-handed).
#[inline]
pub fn yaw(v: DVec3, angle: f64) -> DVec3 {
    let (s, c) = angle.sin_cos();
    DVec3::new(c * v.x + s * v.z, v.y, -s * v.x + c * v.z)
}

/// Maps a direction to equirectangular texture coordinates in `[0,1) x [0,1]`.
pub fn direction_to_uv(d: Direction) -> (f64, f64) {
    let v = d.vec();
    let mut u = (v.x.atan2(-v.z) + PI) / (2.0 * PI);
    if u >= 1.0 {
        u -= 1.0;
    }
    let v = v.y.clamp(-1.0, 1.0).acos() / PI;
    (u, v)
}

pub fn uv_to_direction(u: f64, v: f64) -> Direction {
    let phi = 2.0 * PI * u - PI;
    let theta = PI * v;
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    Direction::from_unit(DVec3::new(st * sp, ct, -st * cp))
}

/// Equirectangular float RGB radiance map, `width == 2 * height`.
#[derive(Debug, Clone, PartialEq)]
pub struct HdrEnvironmentMap {
    width: usize,
    height: usize,
    pixels: Vec<[f32; 3]>,
}

impl HdrEnvironmentMap {
    pub fn new(width: usize, height: usize, pixels: Vec<[f32; 3]>) -> Result<Self> {
        if height == 0 || width != 2 * height {
            return Err(Error::InvalidMap(format!(
                "equirectangular map must be 2:1, got {width}x{height}"
            )));
        }
        if pixels.len() != width * height {
            return Err(Error::InvalidMap(format!(
                "expected {} pixels, got {}",
                width * height,
                pixels.len()
            )));
        }
        if let Some(i) = pixels
            .iter()
            .position(|p| p.iter().any(|c| !c.is_finite() || *c < 0.0))
        {
            return Err(Error::InvalidMap(format!(
                "texel ({}, {}) has non-finite or negative radiance {:?}",
                i % width,
                i / width,
                pixels[i]
            )));
        }
        Ok(HdrEnvironmentMap {
            width,
            height,
            pixels,
        })
    }

    pub fn constant(width: usize, height: usize, value: Rgb) -> Result<Self> {
        Self::new(width, height, vec![value.as_vec3().to_array(); width * height])
    }

    /// Evaluates `f` at every texel center.
    pub fn from_fn(width: usize, height: usize, f: impl Fn(Direction) -> Rgb) -> Result<Self> {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                let d = texel_center(width, height, x, y);
                pixels.push(f(d).as_vec3().to_array());
            }
        }
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[[f32; 3]] {
        &self.pixels
    }

    #[inline]
    pub fn texel(&self, x: usize, y: usize) -> Rgb {
        let p = self.pixels[y * self.width + x];
        DVec3::new(p[0] as f64, p[1] as f64, p[2] as f64)
    }

    pub fn texel_direction(&self, x: usize, y: usize) -> Direction {
        texel_center(self.width, self.height, x, y)
    }

    /// Solid angle `sin(theta) * dtheta * dphi` of a texel in row `y`.
    pub fn texel_solid_angle(&self, y: usize) -> f64 {
        let dtheta = PI / self.height as f64;
        let dphi = 2.0 * PI / self.width as f64;
        let theta = (y as f64 + 0.5) * dtheta;
        theta.sin() * dtheta * dphi
    }

    /// Bilinear lookup; wraps horizontally and clamps at the poles.
    pub fn sample_bilinear(&self, d: Direction) -> Rgb {
        let (u, v) = direction_to_uv(d);
        self.sample_uv(u, v)
    }

    pub fn sample_uv(&self, u: f64, v: f64) -> Rgb {
        let (w, h) = (self.width, self.height);
        let u = u - u.floor();
        let x = u * w as f64 - 0.5;
        let x0f = x.floor();
        let fx = x - x0f;
        let x0 = (x0f as i64).rem_euclid(w as i64) as usize;
        let x1 = (x0 + 1) % w;

        let y = (v * h as f64 - 0.5).clamp(0.0, (h - 1) as f64);
        let y0 = y.floor() as usize;
        let y1 = (y0 + 1).min(h - 1);
        let fy = y - y0 as f64;

        let top = self.texel(x0, y0) * (1.0 - fx) + self.texel(x1, y0) * fx;
        let bottom = self.texel(x0, y1) * (1.0 - fx) + self.texel(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    /// Resamples so that `output(d) = input(R_y(-angle) d)`.
    pub fn rotate_yaw(&self, angle: f64) -> HdrEnvironmentMap {
        if angle == 0.0 {
            return self.clone();
        }
        let mut pixels = Vec::with_capacity(self.pixels.len());
        for y in 0..self.height {
            for x in 0..self.width {
                let d = self.texel_direction(x, y).yawed(-angle);
                pixels.push(self.sample_bilinear(d).as_vec3().to_array());
            }
        }
        HdrEnvironmentMap {
            width: self.width,
            height: self.height,
            pixels,
        }
    }

    /// Per-texel linear combination `a * self + b * other`.
    pub fn combine(&self, a: f32, other: &HdrEnvironmentMap, b: f32) -> Result<Self> {
        if self.width != other.width || self.height != other.height {
            return Err(Error::InvalidMap("dimension mismatch in combine".into()));
        }
        let pixels = self
            .pixels
            .iter()
            .zip(&other.pixels)
            .map(|(p, q)| std::array::from_fn(|c| a * p[c] + b * q[c]))
            .collect();
        Self::new(self.width, self.height, pixels)
    }

    pub fn max_abs_diff(&self, other: &HdrEnvironmentMap) -> f32 {
        self.pixels
            .iter()
            .zip(&other.pixels)
            .flat_map(|(p, q)| (0..3).map(move |c| (p[c] - q[c]).abs()))
            .fold(0.0, f32::max)
    }

    pub fn from_pfm(bytes: &[u8]) -> Result<Self> {
        let img = pfm::read_pfm(bytes)?;
        Self::new(img.width, img.height, img.pixels)
    }

    pub fn to_pfm(&self) -> Vec<u8> {
        pfm::write_pfm(&PfmImage::new(self.width, self.height, self.pixels.clone()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::file(path, e))?;
        Self::from_pfm(&bytes)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_pfm()).map_err(|e| Error::file(path, e))
    }
}

fn texel_center(width: usize, height: usize, x: usize, y: usize) -> Direction {
    uv_to_direction((x as f64 + 0.5) / width as f64, (y as f64 + 0.5) / height as f64)
}
