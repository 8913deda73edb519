use std::path::Path;

use glam::DVec3;

use crate::error::{Error, Result};
use crate::pfm::{self, PfmImage};

/// Row-major float image with interleaved channels.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub channels: usize,
    pub data: Vec<f64>,
}

impl Image {
    pub fn new(width: usize, height: usize, channels: usize) -> Self {
        Image {
            width,
            height,
            channels,
            data: vec![0.0; width * height * channels],
        }
    }

    pub fn from_fn(width: usize, height: usize, f: impl Fn(usize, usize) -> DVec3) -> Self {
        let mut img = Image::new(width, height, 3);
        for y in 0..height {
            for x in 0..width {
                img.set_rgb(x, y, f(x, y));
            }
        }
        img
    }

    #[inline]
    pub fn pixel(&self, x: usize, y: usize) -> &[f64] {
        let i = (y * self.width + x) * self.channels;
        &self.data[i..i + self.channels]
    }

    #[inline]
    pub fn pixel_mut(&mut self, x: usize, y: usize) -> &mut [f64] {
        let i = (y * self.width + x) * self.channels;
        &mut self.data[i..i + self.channels]
    }

    pub fn rgb(&self, x: usize, y: usize) -> DVec3 {
        let p = self.pixel(x, y);
        DVec3::new(p[0], p[1], p[2])
    }

    pub fn set_rgb(&mut self, x: usize, y: usize, v: DVec3) {
        self.pixel_mut(x, y).copy_from_slice(&v.to_array());
    }

    pub fn value(&self, x: usize, y: usize) -> f64 {
        self.pixel(x, y)[0]
    }

    pub fn mean(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    /// Box filter down to `width x height`; both factors must be integers.
    pub fn downsample_box(&self, width: usize, height: usize) -> Result<Image> {
        if width == 0
            || height == 0
            || !self.width.is_multiple_of(width)
            || !self.height.is_multiple_of(height)
        {
            return Err(Error::InvalidArgument(format!(
                "{}x{} is not an integer multiple of {width}x{height}",
                self.width, self.height
            )));
        }
        let (fx, fy) = (self.width / width, self.height / height);
        let norm = 1.0 / (fx * fy) as f64;
        let mut out = Image::new(width, height, self.channels);
        for y in 0..height {
            for x in 0..width {
                for sy in 0..fy {
                    for sx in 0..fx {
                        let src = self.pixel(x * fx + sx, y * fy + sy);
                        for (o, s) in out.pixel_mut(x, y).iter_mut().zip(src) {
                            *o += s * norm;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Pixel replication by integer factors.
    pub fn upsample_nearest(&self, fx: usize, fy: usize) -> Image {
        let mut out = Image::new(self.width * fx, self.height * fy, self.channels);
        for y in 0..out.height {
            for x in 0..out.width {
                let src = self.pixel(x / fx, y / fy).to_vec();
                out.pixel_mut(x, y).copy_from_slice(&src);
            }
        }
        out
    }

    /// Three-channel PFM; single-channel images are replicated to gray.
    pub fn to_pfm(&self) -> Result<Vec<u8>> {
        let pixels = match self.channels {
            3 => self
                .data
                .chunks_exact(3)
                .map(|p| [p[0] as f32, p[1] as f32, p[2] as f32])
                .collect(),
            1 => self.data.iter().map(|&v| [v as f32; 3]).collect(),
            c => {
                return Err(Error::InvalidArgument(format!(
                    "cannot store a {c}-channel image as PFM"
                )))
            }
        };
        Ok(pfm::write_pfm(&PfmImage::new(self.width, self.height, pixels)))
    }

    pub fn from_pfm(bytes: &[u8]) -> Result<Image> {
        let p = pfm::read_pfm(bytes)?;
        Ok(Image {
            width: p.width,
            height: p.height,
            channels: 3,
            data: p.pixels.iter().flatten().map(|&v| v as f64).collect(),
        })
    }

    pub fn save_pfm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_pfm()?).map_err(|e| Error::file(path, e))
    }

    pub fn load_pfm(path: impl AsRef<Path>) -> Result<Image> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::file(path, e))?;
        Image::from_pfm(&bytes)
    }
}

/// Root-mean-square difference divided by the mean of `reference`.
pub fn normalized_rmse(image: &Image, reference: &Image) -> f64 {
    assert_eq!(image.data.len(), reference.data.len(), "image sizes differ");
    let mse = image
        .data
        .iter()
        .zip(&reference.data)
        .map(|(a, b)| (a - b).powi(2))
        .sum::<f64>()
        / image.data.len() as f64;
    mse.sqrt() / reference.mean().abs().max(f64::MIN_POSITIVE)
}
