//! Renders the bundled sphere at two resolutions and compares the
//! box-filtered high-resolution channels with the native low-resolution ones.

use std::path::PathBuf;

use intrinsic_relight::render::path_consistency;
use intrinsic_relight::scene::Scene;
use intrinsic_relight::{phong_composite, render};

fn main() -> intrinsic_relight::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes/sphere.json");
    let (scene, base) = Scene::load(&path)?;
    let p = scene.prepare(&base)?;
    let lo = render(
        p.field.as_ref(),
        &p.stack,
        &p.camera.with_resolution(32, 32),
        &p.integrator,
        1,
    )?;
    let hi = render(
        p.field.as_ref(),
        &p.stack,
        &p.camera.with_resolution(64, 64),
        &p.integrator,
        1,
    )?;
    println!("albedo   {:.5}", path_consistency(&hi.albedo, &lo.albedo)?);
    println!("diffuse  {:.5}", path_consistency(&hi.diffuse, &lo.diffuse)?);
    println!("specular {:.5}", path_consistency(&hi.specular, &lo.specular)?);
    println!(
        "relit    {:.5}",
        path_consistency(&phong_composite(&hi), &phong_composite(&lo))?
    );
    Ok(())
}
