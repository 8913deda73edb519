use glam::DVec3;
use serde::{Deserialize, Serialize};

use crate::envmap::{yaw, Direction};
use crate::error::{Error, Result};
use crate::integrator::Ray;

/// Pinhole camera.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Camera {
    pub position: DVec3,
    pub look_at: DVec3,
    pub up: DVec3,
    /// Vertical field of view in degrees.
    #[serde(rename = "fov_deg")]
    pub vertical_fov: f64,
    pub width: usize,
    pub height: usize,
}

struct Basis {
    forward: DVec3,
    right: DVec3,
    up: DVec3,
}

impl Camera {
    pub fn new(position: DVec3, look_at: DVec3, vertical_fov: f64, width: usize, height: usize) -> Self {
        Camera {
            position,
            look_at,
            up: DVec3::Y,
            vertical_fov,
            width,
            height,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.vertical_fov > 0.0 && self.vertical_fov < 180.0) {
            return Err(Error::InvalidArgument(format!(
                "fov_deg must be in (0, 180), got {}",
                self.vertical_fov
            )));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::InvalidArgument(
                "camera resolution must be positive".into(),
            ));
        }
        let forward = (self.look_at - self.position)
            .try_normalize()
            .ok_or_else(|| Error::InvalidArgument("look_at coincides with position".into()))?;
        if forward.cross(self.up).length() < 1e-9 {
            return Err(Error::InvalidArgument("up is parallel to the view axis".into()));
        }
        Ok(())
    }

    fn basis(&self) -> Basis {
        let forward = (self.look_at - self.position).normalize();
        let right = forward.cross(self.up).normalize();
        Basis {
            forward,
            right,
            up: right.cross(forward),
        }
    }

    /// Ray through the center of pixel `(px, py)` shifted by `offset` pixels.
    /// Pixel rows run top to bottom.
    pub fn generate_ray(&self, px: usize, py: usize, offset: (f64, f64)) -> Result<Ray> {
        if px >= self.width || py >= self.height {
            return Err(Error::InvalidArgument(format!(
                "pixel ({px}, {py}) outside {}x{}",
                self.width, self.height
            )));
        }
        Ok(self.ray_unchecked(px, py, offset))
    }

    pub(crate) fn ray_unchecked(&self, px: usize, py: usize, offset: (f64, f64)) -> Ray {
        let b = self.basis();
        let half_h = (self.vertical_fov.to_radians() * 0.5).tan();
        let half_w = half_h * self.width as f64 / self.height as f64;
        let sx = ((px as f64 + 0.5 + offset.0) / self.width as f64) * 2.0 - 1.0;
        let sy = 1.0 - ((py as f64 + 0.5 + offset.1) / self.height as f64) * 2.0;
        let d = b.forward + sx * half_w * b.right + sy * half_h * b.up;
        Ray::new(self.position, Direction::new(d).expect("finite camera basis"))
    }

    /// Revolves the camera about its look-at point around the world `+y` axis.
    pub fn orbit(&self, angle: f64) -> Camera {
        Camera {
            position: self.look_at + yaw(self.position - self.look_at, angle),
            up: yaw(self.up, angle),
            ..*self
        }
    }

    /// Rigid rotation of the whole camera about the world `+y` axis through
    /// the origin.
    pub fn yawed(&self, angle: f64) -> Camera {
        Camera {
            position: yaw(self.position, angle),
            look_at: yaw(self.look_at, angle),
            up: yaw(self.up, angle),
            ..*self
        }
    }

    pub fn with_resolution(&self, width: usize, height: usize) -> Camera {
        Camera {
            width,
            height,
            ..*self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn origin_cam(w: usize, h: usize, fov: f64) -> Camera {
        Camera::new(DVec3::ZERO, DVec3::NEG_Z, fov, w, h)
    }

    #[test]
    fn center_pixel_looks_along_axis() {
        let cam = origin_cam(5, 5, 40.0);
        let r = cam.generate_ray(2, 2, (0.0, 0.0)).unwrap();
        assert!((r.direction.vec() - DVec3::NEG_Z).length() < 1e-6);
        assert_eq!(r.origin, DVec3::ZERO);
    }

    #[test]
    fn mirrored_columns() {
        let cam = origin_cam(8, 6, 50.0);
        for py in 0..6 {
            for px in 0..8 {
                let a = cam.generate_ray(px, py, (0.0, 0.0)).unwrap().direction.vec();
                let b = cam.generate_ray(7 - px, py, (0.0, 0.0)).unwrap().direction.vec();
                assert!((a.x + b.x).abs() < 1e-12 && (a.y - b.y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn top_center_ray_at_half_fov() {
        let n = 33;
        let cam = origin_cam(n, n, 90.0);
        let r = cam.generate_ray(n / 2, 0, (0.0, 0.0)).unwrap();
        let angle = r.direction.angle_to(Direction::FORWARD);
        // pixel center sits half a pixel below the top edge
        let expected = (1.0 - 1.0 / n as f64).atan();
        assert!((angle - expected).abs() < 1e-12);
        let half_pixel = 45f64.to_radians() - expected;
        assert!((angle - 45f64.to_radians()).abs() <= half_pixel + 1e-12);
        assert!(r.direction.y() > 0.0);
    }

    #[test]
    fn rejects_bad_cameras() {
        assert!(origin_cam(4, 4, 0.0).validate().is_err());
        assert!(origin_cam(4, 4, 180.0).validate().is_err());
        assert!(Camera::new(DVec3::ONE, DVec3::ONE, 40.0, 4, 4)
            .validate()
            .is_err());
        let mut c = origin_cam(4, 4, 40.0);
        c.up = DVec3::Z;
        assert!(c.validate().is_err());
        assert!(origin_cam(4, 4, 40.0).generate_ray(4, 0, (0.0, 0.0)).is_err());
    }

    #[test]
    fn orbit_keeps_distance() {
        let cam = Camera::new(DVec3::new(0.0, 1.0, 4.0), DVec3::ZERO, 30.0, 8, 8);
        let o = cam.orbit(1.0);
        assert!((o.position.length() - cam.position.length()).abs() < 1e-12);
        assert_eq!(o.position.y, 1.0);
    }
}
