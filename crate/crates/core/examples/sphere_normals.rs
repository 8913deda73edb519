//! Normals of the soft sphere field: analytic gradient against central
//! differences at a few heights around the surface.

use glam::DVec3;
use intrinsic_relight::field::{finite_difference_gradient, normal_from_gradient, SphereField};
use intrinsic_relight::{IntrinsicField, Rgb};

fn main() -> intrinsic_relight::Result<()> {
    let field = SphereField::new(
        DVec3::new(0.1, 0.0, -0.2),
        0.5,
        80.0,
        200.0,
        Rgb::new(0.8, 0.3, 0.2),
    )?;
    let dir = DVec3::new(0.3, 0.8, 0.5).normalize();
    for offset in [-0.05, -0.01, 0.0, 0.01, 0.05] {
        let x = field.lobe().center + dir * (0.5 + offset);
        let analytic = normal_from_gradient(field.lobe().gradient(x)).expect("gradient");
        let fd = normal_from_gradient(finite_difference_gradient(&field, x, 1e-3)).expect("gradient");
        println!(
            "r - R = {offset:+.2}: sigma {:8.3}, angle between normals {:.2e} deg",
            field.density(x),
            analytic.angle_to(fd).to_degrees()
        );
    }
    Ok(())
}
