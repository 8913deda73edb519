use crate::error::{Error, Result};
use crate::render::Image;

pub const DEFAULT_GAMMA: f64 = 2.2;
pub const DEFAULT_EXPOSURE: f64 = 1.0;

/// `round(255 * clamp(exposure * v, 0, 1)^(1 / gamma))`.
#[inline]
pub fn tonemap_value(v: f64, gamma: f64, exposure: f64) -> u8 {
    let x = (exposure * v).clamp(0.0, 1.0);
    let x = if x.is_nan() { 0.0 } else { x };
    (x.powf(1.0 / gamma) * 255.0).round() as u8
}

/// Encodes a one- or three-channel HDR image as an 8-bit RGB PNG.
pub fn tonemap_png(hdr: &Image, gamma: f64, exposure: f64) -> Result<Vec<u8>> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(Error::InvalidArgument(format!("gamma must be > 0, got {gamma}")));
    }
    let rgb: Vec<u8> = match hdr.channels {
        3 => hdr
            .data
            .iter()
            .map(|&v| tonemap_value(v, gamma, exposure))
            .collect(),
        1 => hdr
            .data
            .iter()
            .flat_map(|&v| [tonemap_value(v, gamma, exposure); 3])
            .collect(),
        c => {
            return Err(Error::InvalidArgument(format!(
                "cannot tone map a {c}-channel image"
            )))
        }
    };
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, hdr.width as u32, hdr.height as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        let mut writer = enc.write_header()?;
        writer.write_image_data(&rgb)?;
    }
    Ok(out)
}
