//! Portable float map (PFM) codec for three-channel images.
//!
//! Layout: `PF\n<width> <height>\n<scale>\n` followed by `width * height * 3`
//! float32 values. A negative scale marks little-endian data. Rows are stored
//! bottom-to-top; in memory we keep them top-to-bottom. The writer always emits
//! little-endian with scale `-1.0`.

use crate::error::PfmError;

/// Row-major (top row first) RGB float image as stored in a PFM file.
#[derive(Debug, Clone, PartialEq)]
pub struct PfmImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[f32; 3]>,
}

impl PfmImage {
    pub fn new(width: usize, height: usize, pixels: Vec<[f32; 3]>) -> Self {
        assert_eq!(
            pixels.len(),
            width * height,
            "pixel count does not match dimensions"
        );
        PfmImage {
            width,
            height,
            pixels,
        }
    }
}

struct HeaderCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderCursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn token(&mut self, what: &str) -> Result<&'a str, PfmError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(PfmError::Header {
                offset: start,
                reason: format!("missing {what}"),
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| PfmError::Header {
            offset: start,
            reason: format!("{what} is not ASCII"),
        })
    }
}

pub fn read_pfm(bytes: &[u8]) -> Result<PfmImage, PfmError> {
    let mut cur = HeaderCursor { bytes, pos: 0 };
    match cur.token("magic")? {
        "PF" => {}
        "Pf" => return Err(PfmError::Grayscale),
        other => {
            return Err(PfmError::Header {
                offset: 0,
                reason: format!("unknown magic {other:?}"),
            })
        }
    }

    let mut dim = |what: &str| -> Result<usize, PfmError> {
        let offset = cur.pos;
        let tok = cur.token(what)?;
        match tok.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(PfmError::Header {
                offset,
                reason: format!("invalid {what} {tok:?}"),
            }),
        }
    };
    let width = dim("width")?;
    let height = dim("height")?;

    let scale_offset = cur.pos;
    let scale_tok = cur.token("scale")?;
    let scale: f32 = scale_tok.parse().map_err(|_| PfmError::Header {
        offset: scale_offset,
        reason: format!("invalid scale {scale_tok:?}"),
    })?;
    if scale == 0.0 || !scale.is_finite() {
        return Err(PfmError::Header {
            offset: scale_offset,
            reason: format!("scale must be finite and non-zero, got {scale_tok}"),
        });
    }
    // exactly one whitespace byte separates the header from the payload
    if cur.pos >= bytes.len() || !bytes[cur.pos].is_ascii_whitespace() {
        return Err(PfmError::Header {
            offset: cur.pos,
            reason: "missing newline after scale".into(),
        });
    }
    let payload = &bytes[cur.pos + 1..];

    let expected = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(12))
        .ok_or_else(|| PfmError::Header {
            offset: 0,
            reason: "dimensions overflow".into(),
        })?;
    if payload.len() != expected {
        return Err(PfmError::PayloadSize {
            width,
            height,
            expected,
            actual: payload.len(),
        });
    }

    let little = scale < 0.0;
    let mut pixels = vec![[0f32; 3]; width * height];
    for (i, chunk) in payload.chunks_exact(4).enumerate() {
        let raw = [chunk[0], chunk[1], chunk[2], chunk[3]];
        let value = if little {
            f32::from_le_bytes(raw)
        } else {
            f32::from_be_bytes(raw)
        };
        let channel = i % 3;
        let px = i / 3;
        let x = px % width;
        let y = height - 1 - px / width;
        if value.is_nan() {
            return Err(PfmError::NaN { x, y, channel });
        }
        pixels[y * width + x][channel] = value;
    }
    Ok(PfmImage {
        width,
        height,
        pixels,
    })
}

pub fn write_pfm(image: &PfmImage) -> Vec<u8> {
    let header = format!("PF\n{} {}\n-1.0\n", image.width, image.height);
    let mut out = Vec::with_capacity(header.len() + image.pixels.len() * 12);
    out.extend_from_slice(header.as_bytes());
    for row in image.pixels.chunks_exact(image.width).rev() {
        for px in row {
            for c in px {
                out.extend_from_slice(&c.to_le_bytes());
            }
        }
    }
    out
}
