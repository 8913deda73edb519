use std::f64::consts::PI;

use glam::DVec3;

/// Fourier feature levels used by the MLP field.
pub const DEFAULT_LEVELS: usize = 10;

/// Sinusoidal positional encoding of length `6 * levels`.
///
/// For each frequency `2^k * pi` (k = 0..levels) and each axis, emits
/// `sin` followed by `cos`.
pub fn positional_encoding(x: DVec3, levels: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(6 * levels);
    encode_into(x, levels, &mut out);
    out
}

pub(crate) fn encode_into(x: DVec3, levels: usize, out: &mut Vec<f64>) {
    out.clear();
    let mut freq = PI;
    for _ in 0..levels {
        for axis in x.to_array() {
            let (s, c) = (freq * axis).sin_cos();
            out.push(s);
            out.push(c);
        }
        freq *= 2.0;
    }
}
