//! Yawing the lights is the same as yawing the camera and the field the
//! other way.

use glam::DVec3;
use intrinsic_relight::field::{SphereField, YawedField};
use intrinsic_relight::render::normalized_rmse;
use intrinsic_relight::{
    build_stack, phong_composite, render, Camera, ExponentSet, HdrEnvironmentMap, IntegratorConfig, Rgb,
};

fn main() -> intrinsic_relight::Result<()> {
    let sky = HdrEnvironmentMap::load(concat!(env!("CARGO_MANIFEST_DIR"), "/scenes/sky.pfm"))?;
    let field = SphereField::new(DVec3::ZERO, 0.6, 60.0, 300.0, Rgb::new(0.8, 0.5, 0.3))?
        .with_weights(vec![0.2, 0.15, 0.1, 0.05])?
        .with_albedo_pattern(0.4)?;
    let cam = Camera::new(DVec3::new(0.0, 0.8, 3.9), DVec3::ZERO, 22.0, 48, 48);
    let cfg = IntegratorConfig::new(3.2, 4.8, 64);
    let exps = ExponentSet::default();
    let stack = build_stack(&sky, &exps, 64, 32)?;

    for deg in [20.0f64, 45.0, 130.0] {
        let theta = deg.to_radians();
        let lit = phong_composite(&render(
            &field,
            &build_stack(&sky.rotate_yaw(theta), &exps, 64, 32)?,
            &cam,
            &cfg,
            1,
        )?);
        let moved = phong_composite(&render(
            &YawedField::new(field.clone(), -theta),
            &stack,
            &cam.yawed(-theta),
            &cfg,
            1,
        )?);
        println!(
            "{deg:>5} deg: normalized RMSE {:.4}",
            normalized_rmse(&moved, &lit)
        );
    }
    Ok(())
}
