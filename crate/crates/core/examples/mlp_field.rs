//! Generates a full-size random MLP field, stores it as a VXW1 file, reads
//! it back and renders a small preview.

use std::env;

use glam::DVec3;
use intrinsic_relight::field::{generate_weights, read_vxw, write_vxw, MlpField};
use intrinsic_relight::{
    build_stack, phong_composite, render, Camera, ExponentSet, HdrEnvironmentMap, IntegratorConfig,
    IntrinsicField,
};

fn main() -> intrinsic_relight::Result<()> {
    let weights = generate_weights(7, 256, 6, 256, 4, 10)?;
    let bytes = write_vxw(&weights);
    for (i, layer) in read_vxw(&bytes)?.layers().enumerate() {
        println!("layer {i}: {} x {}", layer.rows, layer.cols);
    }
    let path = env::temp_dir().join("field.vxw");
    std::fs::write(&path, &bytes).map_err(|e| intrinsic_relight::Error::file(&path, e))?;
    let field = MlpField::load(&path, 10)?;

    let s = field.sample(DVec3::new(0.1, 0.2, 0.3))?;
    println!(
        "sigma {:.4}, albedo {:.3?}, weights {:.3?}",
        s.sigma,
        s.albedo.to_array(),
        s.weights
    );

    let sky = HdrEnvironmentMap::load(concat!(env!("CARGO_MANIFEST_DIR"), "/scenes/sky.pfm"))?;
    let stack = build_stack(&sky, &ExponentSet::default(), 32, 16)?;
    let cam = Camera::new(DVec3::new(0.0, 0.0, 3.0), DVec3::ZERO, 40.0, 16, 16);
    let targets = render(&field, &stack, &cam, &IntegratorConfig::new(2.0, 4.0, 8), 1)?;
    let relit = phong_composite(&targets);
    println!(
        "16x16 preview: mean alpha {:.3}, mean relit {:.3}",
        targets.alpha.mean(),
        relit.mean()
    );
    Ok(())
}
