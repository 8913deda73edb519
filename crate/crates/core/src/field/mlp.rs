//! Inference-only MLP intrinsic field and its `VXW1` weight format.
//!
//! Network: a trunk of `depth` affine + leaky-ReLU layers on the positional
//! encoding. Density is a linear head on the output of trunk layer
//! [`DENSITY_TAP_LAYER`] (clamped to the depth); albedo and blend weights come
//! from a two-layer head on the last trunk layer; the feature vector is a
//! linear projection of the last trunk layer.
//!
//! `VXW1` file: magic `b"VXW1"`, `u32` layer count, then per layer `u32 rows`,
//! `u32 cols`, `rows * cols` row-major `f32`, `rows` `f32` bias. Little-endian.
//! Layer order: trunk 1..=depth, density head, intrinsic hidden, intrinsic
//! output, feature projection.

use std::path::Path;

use glam::DVec3;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::encoding::encode_into;
use super::{sigmoid, softplus, IntrinsicField, IntrinsicSample};
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"VXW1";
const LEAKY_SLOPE: f32 = 0.2;
/// 1-based trunk layer feeding the density head.
pub const DENSITY_TAP_LAYER: usize = 4;
/// Blend weights are `WEIGHT_CAP * softmax(raw)`, so they sum to this value.
pub const WEIGHT_CAP: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `rows x cols`.
    pub matrix: Vec<f32>,
    pub bias: Vec<f32>,
}

impl Layer {
    pub fn new(rows: usize, cols: usize, matrix: Vec<f32>, bias: Vec<f32>) -> Result<Self> {
        if rows == 0 || cols == 0 || matrix.len() != rows * cols || bias.len() != rows {
            return Err(Error::Weights(format!(
                "layer {rows}x{cols} has {} matrix and {} bias entries",
                matrix.len(),
                bias.len()
            )));
        }
        if matrix.iter().chain(&bias).any(|v| !v.is_finite()) {
            return Err(Error::Weights("non-finite weight".into()));
        }
        Ok(Layer {
            rows,
            cols,
            matrix,
            bias,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Layer {
            rows,
            cols,
            matrix: vec![0.0; rows * cols],
            bias: vec![0.0; rows],
        }
    }

    fn affine(&self, input: &[f32], out: &mut Vec<f32>) {
        out.clear();
        out.extend(
            self.matrix
                .chunks_exact(self.cols)
                .zip(&self.bias)
                .map(|(row, b)| b + row.iter().zip(input).map(|(w, x)| w * x).sum::<f32>()),
        );
    }
}

fn leaky_relu(v: &mut [f32]) {
    for x in v {
        if *x < 0.0 {
            *x *= LEAKY_SLOPE;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MlpWeights {
    trunk: Vec<Layer>,
    density: Layer,
    intrinsic_hidden: Layer,
    intrinsic_out: Layer,
    feature: Layer,
}

/// Raw (pre-activation) head outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpOutput {
    pub sigma_raw: f64,
    pub albedo_raw: [f64; 3],
    pub weights_raw: Vec<f64>,
    pub feature: Vec<f64>,
}

impl MlpWeights {
    /// Assembles weights from layers in file order, checking every shape.
    pub fn from_layers(mut layers: Vec<Layer>) -> Result<Self> {
        if layers.len() < 5 {
            return Err(Error::Weights(format!(
                "expected at least 5 layers (1 trunk + 4 heads), got {}",
                layers.len()
            )));
        }
        let heads = layers.split_off(layers.len() - 4);
        let trunk = layers;
        let [density, intrinsic_hidden, intrinsic_out, feature]: [Layer; 4] =
            heads.try_into().expect("four heads");

        let mismatch = |name: String, expected: usize, actual: usize| Error::LayerMismatch {
            layer: name,
            expected,
            actual,
        };
        if !trunk[0].cols.is_multiple_of(6) {
            return Err(Error::Weights(format!(
                "trunk.1 input width {} is not a positional encoding length (6 * levels)",
                trunk[0].cols
            )));
        }
        for i in 1..trunk.len() {
            if trunk[i].cols != trunk[i - 1].rows {
                return Err(mismatch(
                    format!("trunk.{}", i + 1),
                    trunk[i - 1].rows,
                    trunk[i].cols,
                ));
            }
        }
        let tap = DENSITY_TAP_LAYER.min(trunk.len());
        let last = trunk[trunk.len() - 1].rows;
        if density.rows != 1 {
            return Err(Error::Weights(format!(
                "density head has {} outputs, expected 1",
                density.rows
            )));
        }
        if density.cols != trunk[tap - 1].rows {
            return Err(mismatch("density".into(), trunk[tap - 1].rows, density.cols));
        }
        if intrinsic_hidden.cols != last {
            return Err(mismatch("intrinsic.hidden".into(), last, intrinsic_hidden.cols));
        }
        if intrinsic_out.cols != intrinsic_hidden.rows {
            return Err(mismatch(
                "intrinsic.out".into(),
                intrinsic_hidden.rows,
                intrinsic_out.cols,
            ));
        }
        if intrinsic_out.rows < 4 {
            return Err(Error::Weights(format!(
                "intrinsic head needs 3 albedo + at least 1 blend output, has {}",
                intrinsic_out.rows
            )));
        }
        if feature.cols != last {
            return Err(mismatch("feature".into(), last, feature.cols));
        }
        Ok(MlpWeights {
            trunk,
            density,
            intrinsic_hidden,
            intrinsic_out,
            feature,
        })
    }

    /// Layers in file order.
    pub fn layers(&self) -> impl Iterator<Item = &Layer> {
        self.trunk.iter().chain([
            &self.density,
            &self.intrinsic_hidden,
            &self.intrinsic_out,
            &self.feature,
        ])
    }

    pub fn input_dim(&self) -> usize {
        self.trunk[0].cols
    }

    pub fn levels(&self) -> usize {
        self.input_dim() / 6
    }

    pub fn depth(&self) -> usize {
        self.trunk.len()
    }

    pub fn width(&self) -> usize {
        self.trunk[0].rows
    }

    pub fn blend_count(&self) -> usize {
        self.intrinsic_out.rows - 3
    }

    pub fn feature_dim(&self) -> usize {
        self.feature.rows
    }

    fn density_tap(&self) -> usize {
        DENSITY_TAP_LAYER.min(self.trunk.len())
    }

    fn check_input(&self, len: usize) -> Result<()> {
        if len != self.input_dim() {
            return Err(Error::LayerMismatch {
                layer: "trunk.1".into(),
                expected: self.input_dim(),
                actual: len,
            });
        }
        Ok(())
    }

    /// Runs the trunk up to the density tap only.
    fn sigma_raw(&self, input: &[f32]) -> f64 {
        let (mut a, mut b) = (input.to_vec(), Vec::new());
        for layer in &self.trunk[..self.density_tap()] {
            layer.affine(&a, &mut b);
            leaky_relu(&mut b);
            std::mem::swap(&mut a, &mut b);
        }
        self.density.affine(&a, &mut b);
        b[0] as f64
    }

    fn forward(&self, input: &[f32]) -> MlpOutput {
        let tap = self.density_tap();
        let (mut a, mut b) = (input.to_vec(), Vec::new());
        let mut sigma_raw = 0.0;
        for (i, layer) in self.trunk.iter().enumerate() {
            layer.affine(&a, &mut b);
            leaky_relu(&mut b);
            std::mem::swap(&mut a, &mut b);
            if i + 1 == tap {
                self.density.affine(&a, &mut b);
                sigma_raw = b[0] as f64;
            }
        }
        let mut feature = Vec::new();
        self.feature.affine(&a, &mut feature);
        self.intrinsic_hidden.affine(&a, &mut b);
        leaky_relu(&mut b);
        self.intrinsic_out.affine(&b, &mut a);
        MlpOutput {
            sigma_raw,
            albedo_raw: [a[0] as f64, a[1] as f64, a[2] as f64],
            weights_raw: a[3..].iter().map(|&v| v as f64).collect(),
            feature: feature.into_iter().map(|v| v as f64).collect(),
        }
    }
}

pub fn mlp_forward(weights: &MlpWeights, encoded: &[f64]) -> Result<MlpOutput> {
    weights.check_input(encoded.len())?;
    let input: Vec<f32> = encoded.iter().map(|&v| v as f32).collect();
    Ok(weights.forward(&input))
}

pub fn write_vxw(weights: &MlpWeights) -> Vec<u8> {
    let mut out = MAGIC.to_vec();
    let layers: Vec<&Layer> = weights.layers().collect();
    out.extend_from_slice(&(layers.len() as u32).to_le_bytes());
    for layer in layers {
        out.extend_from_slice(&(layer.rows as u32).to_le_bytes());
        out.extend_from_slice(&(layer.cols as u32).to_le_bytes());
        for v in layer.matrix.iter().chain(&layer.bias) {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn read_vxw(bytes: &[u8]) -> Result<MlpWeights> {
    let mut pos = 0usize;
    let mut take = |n: usize, what: &str| -> Result<&[u8]> {
        let end = pos
            .checked_add(n)
            .filter(|&e| e <= bytes.len())
            .ok_or_else(|| Error::Weights(format!("truncated file reading {what} at byte {pos}")))?;
        let s = &bytes[pos..end];
        pos = end;
        Ok(s)
    };
    if take(4, "magic")? != MAGIC {
        return Err(Error::Weights("bad magic, expected VXW1".into()));
    }
    let u32_at = |b: &[u8]| u32::from_le_bytes(b.try_into().unwrap()) as usize;
    let count = u32_at(take(4, "layer count")?);
    let mut layers = Vec::with_capacity(count.min(64));
    for i in 0..count {
        let rows = u32_at(take(4, "rows")?);
        let cols = u32_at(take(4, "cols")?);
        let n = rows
            .checked_mul(cols)
            .and_then(|n| n.checked_add(rows))
            .and_then(|n| n.checked_mul(4))
            .ok_or_else(|| Error::Weights(format!("layer {i} dimensions overflow")))?;
        let floats: Vec<f32> = take(n, "layer data")?
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let (matrix, bias) = floats.split_at(rows * cols);
        layers.push(
            Layer::new(rows, cols, matrix.to_vec(), bias.to_vec())
                .map_err(|e| Error::Weights(format!("layer {i}: {e}")))?,
        );
    }
    if pos != bytes.len() {
        return Err(Error::Weights(format!(
            "{} trailing bytes after {count} layers",
            bytes.len() - pos
        )));
    }
    MlpWeights::from_layers(layers)
}

/// Seeded Gaussian initialization, `std = 0.2 / sqrt(fan_in)` for matrices and
/// biases alike. The intrinsic hidden layer is half the trunk width.
pub fn generate_weights(
    seed: u64,
    width: usize,
    depth: usize,
    feature_dim: usize,
    blend_count: usize,
    levels: usize,
) -> Result<MlpWeights> {
    if width == 0 || depth == 0 || feature_dim == 0 || blend_count == 0 || levels == 0 {
        return Err(Error::InvalidArgument(
            "width, layers, feature_dim, blend count and levels must be positive".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut layer = |rows: usize, cols: usize| {
        let normal = Normal::new(0.0f32, 0.2 / (cols as f32).sqrt()).expect("valid std");
        let matrix = (0..rows * cols).map(|_| normal.sample(&mut rng)).collect();
        let bias = (0..rows).map(|_| normal.sample(&mut rng)).collect();
        Layer {
            rows,
            cols,
            matrix,
            bias,
        }
    };
    let hidden = (width / 2).max(1);
    let mut layers = Vec::with_capacity(depth + 4);
    layers.push(layer(width, 6 * levels));
    for _ in 1..depth {
        layers.push(layer(width, width));
    }
    layers.push(layer(1, width));
    layers.push(layer(hidden, width));
    layers.push(layer(3 + blend_count, hidden));
    layers.push(layer(feature_dim, width));
    MlpWeights::from_layers(layers)
}

/// Field backed by an MLP evaluated on the positional encoding of `x`.
#[derive(Debug, Clone)]
pub struct MlpField {
    weights: MlpWeights,
    levels: usize,
}

impl MlpField {
    pub fn new(weights: MlpWeights, levels: usize) -> Result<Self> {
        if levels == 0 {
            return Err(Error::InvalidArgument("encoding levels must be >= 1".into()));
        }
        if weights.input_dim() != 6 * levels {
            return Err(Error::LayerMismatch {
                layer: "trunk.1".into(),
                expected: 6 * levels,
                actual: weights.input_dim(),
            });
        }
        if weights.feature_dim() > super::MAX_FEATURE_DIM {
            return Err(Error::InvalidArgument(format!(
                "feature_dim {} exceeds {}",
                weights.feature_dim(),
                super::MAX_FEATURE_DIM
            )));
        }
        Ok(MlpField { weights, levels })
    }

    pub fn load(path: impl AsRef<Path>, levels: usize) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::file(path, e))?;
        Self::new(read_vxw(&bytes)?, levels)
    }

    pub fn weights(&self) -> &MlpWeights {
        &self.weights
    }

    fn encode(&self, x: DVec3) -> Vec<f32> {
        let mut enc = Vec::with_capacity(6 * self.levels);
        encode_into(x, self.levels, &mut enc);
        enc.into_iter().map(|v| v as f32).collect()
    }
}

impl IntrinsicField for MlpField {
    fn blend_count(&self) -> usize {
        self.weights.blend_count()
    }

    fn feature_dim(&self) -> usize {
        self.weights.feature_dim()
    }

    fn density(&self, x: DVec3) -> f64 {
        softplus(self.weights.sigma_raw(&self.encode(x)))
    }

    fn evaluate(&self, x: DVec3) -> IntrinsicSample {
        let out = self.weights.forward(&self.encode(x));
        let max = out.weights_raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let exp: Vec<f64> = out.weights_raw.iter().map(|w| (w - max).exp()).collect();
        let total: f64 = exp.iter().sum();
        IntrinsicSample {
            sigma: softplus(out.sigma_raw),
            albedo: DVec3::from_array(out.albedo_raw.map(sigmoid)),
            weights: exp.into_iter().map(|e| WEIGHT_CAP * e / total).collect(),
            feature: out.feature,
        }
    }
}
