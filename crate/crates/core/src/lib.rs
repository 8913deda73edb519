//! Volumetric intrinsic-field rendering under HDR environment lighting.
//!
//! A field maps 3D points to density, albedo, specular blend weights and a
//! feature vector. Rays are marched through it and the transmittance-weighted
//! albedo, diffuse shading, specular shading and features are accumulated.
//! Shading comes from light maps: the environment map preconvolved with
//! normalized Phong lobes, looked up at the density-gradient normal (diffuse)
//! or at the reflected view vector (specular).
//!
//! Modules, bottom up:
//!
//! - [`pfm`], [`envmap`]: equirectangular HDR maps and their file format.
//! - [`prefilter`]: Phong-lobe light maps and a brute-force oracle.
//! - [`field`]: analytic and MLP-backed intrinsic fields.
//! - [`integrator`]: quadrature along one ray.
//! - [`render`]: cameras, whole images, compositing, tone mapping.
//! - [`scene`], [`cli`]: the JSON scene format and the command implementations.

pub mod cli;
pub mod envmap;
pub mod error;
pub mod field;
pub mod integrator;
pub mod pfm;
pub mod prefilter;
pub mod render;
pub mod scene;

pub use envmap::{direction_to_uv, uv_to_direction, Direction, HdrEnvironmentMap, Rgb};
pub use error::{Error, Result};
pub use field::{FieldSpec, IntrinsicField, IntrinsicSample};
pub use integrator::{integrate_ray, IntegratorConfig, Ray, RayResult};
pub use prefilter::{build_stack, oracle_shade, preconvolve, ExponentSet, LightMapStack};
pub use render::{phong_composite, render, Camera, Image, RenderTargets};
