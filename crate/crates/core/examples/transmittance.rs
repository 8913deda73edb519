//! Opacity of a homogeneous slab against the closed form `1 - exp(-sigma L)`,
//! and the per-sample weights along one ray.

use glam::DVec3;
use intrinsic_relight::field::UniformField;
use intrinsic_relight::integrator::{sample_ts, transmittance_weights};
use intrinsic_relight::{
    build_stack, integrate_ray, Direction, ExponentSet, HdrEnvironmentMap, IntegratorConfig, Ray, Rgb,
};

fn main() -> intrinsic_relight::Result<()> {
    let sigma = 2.0;
    let field = UniformField {
        sigma,
        albedo: Rgb::splat(0.5),
        weights: vec![0.0; 4],
        feature_dim: 0,
    };
    let stack = build_stack(
        &HdrEnvironmentMap::constant(16, 8, Rgb::ONE)?,
        &ExponentSet::default(),
        8,
        4,
    )?;
    let ray = Ray::new(DVec3::ZERO, Direction::from_unit(DVec3::X));
    let exact = 1.0 - (-sigma).exp();
    for n in [4, 32, 256] {
        let r = integrate_ray(&field, &stack, &ray, &IntegratorConfig::new(0.0, 1.0, n), 0)?;
        println!("{n:>4} samples: alpha {:.6} (exact {exact:.6})", r.alpha);
    }

    let cfg = IntegratorConfig::new(0.0, 1.0, 8);
    let ts = sample_ts(&cfg, &mut cfg.rng_for(0));
    let deltas: Vec<f64> = ts.iter().map(|&(_, d)| d).collect();
    let (weights, alpha) = transmittance_weights(&vec![sigma; ts.len()], &deltas)?;
    for ((t, _), w) in ts.iter().zip(&weights) {
        println!("t = {t:.4}  w = {w:.4}");
    }
    println!("sum of weights {alpha:.6}");
    Ok(())
}
