//! Light-rotation turntable of the bundled sphere: re-prefiltered frames
//! against the rotated-light-map shortcut.

use std::path::PathBuf;

use intrinsic_relight::cli::{render_turntable_frame, TurntableMode};
use intrinsic_relight::render::normalized_rmse;
use intrinsic_relight::scene::Scene;

fn main() -> intrinsic_relight::Result<()> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes/sphere.json");
    let (mut scene, base) = Scene::load(&path)?;
    scene.camera = scene.camera.with_resolution(32, 32);
    let prepared = scene.prepare(&base)?;

    let first = render_turntable_frame(&scene, &prepared, TurntableMode::LightRotation, 0.0, false, 1)?;
    for deg in [45.0, 90.0, 180.0, 360.0] {
        let exact = render_turntable_frame(&scene, &prepared, TurntableMode::LightRotation, deg, false, 1)?;
        let quick = render_turntable_frame(&scene, &prepared, TurntableMode::LightRotation, deg, true, 1)?;
        println!(
            "{deg:>5} deg: mean {:.4}, vs frame 0 {:.4}, shortcut error {:.4}",
            exact.mean(),
            normalized_rmse(&exact, &first),
            normalized_rmse(&quick, &exact)
        );
    }
    Ok(())
}
