mod common;

use glam::DVec3;
use intrinsic_relight::field::SphereField;
use intrinsic_relight::render::masked_mean;
use intrinsic_relight::{
    build_stack, integrate_ray, phong_composite, render, Camera, ExponentSet, IntegratorConfig, Rgb,
};

fn sphere(albedo: Rgb) -> SphereField {
    SphereField::new(DVec3::ZERO, 0.6, 60.0, 300.0, albedo)
        .and_then(|s| s.with_weights(vec![0.125; 4]))
        .unwrap()
}

fn front_camera(width: usize) -> Camera {
    Camera::new(DVec3::new(0.0, 0.0, 4.0), DVec3::ZERO, 24.0, width, width)
}

#[test]
fn one_pixel_image_is_one_ray() {
    let field = sphere(Rgb::new(0.7, 0.4, 0.2));
    let stack = build_stack(&common::two_blob_sky(64, 32), &ExponentSet::default(), 16, 8).unwrap();
    let cam = front_camera(1);
    let mut cfg = IntegratorConfig::new(3.0, 5.0, 48);
    cfg.jitter = true;
    cfg.seed = 4;
    let image = render(&field, &stack, &cam, &cfg, 1).unwrap();
    let ray = cam.generate_ray(0, 0, (0.0, 0.0)).unwrap();
    let r = integrate_ray(&field, &stack, &ray, &cfg, 0).unwrap();
    assert_eq!(image.albedo.rgb(0, 0), r.albedo);
    assert_eq!(image.diffuse.rgb(0, 0), r.diffuse);
    assert_eq!(image.specular.rgb(0, 0), r.specular);
    assert_eq!(image.alpha.value(0, 0), r.alpha);
    assert_eq!(image.depth.value(0, 0), r.depth);
}

#[test]
fn constant_unit_light_composite() {
    let albedo = Rgb::new(0.7, 0.4, 0.2);
    let field = sphere(albedo);
    let stack = build_stack(&common::gray_sky(128, 64, 1.0), &ExponentSet::default(), 16, 8).unwrap();
    let targets = render(
        &field,
        &stack,
        &front_camera(32),
        &IntegratorConfig::new(3.0, 5.0, 96),
        1,
    )
    .unwrap();
    let relit = phong_composite(&targets);
    let mut checked = 0;
    for y in 0..32 {
        for x in 0..32 {
            let a = targets.alpha.value(x, y);
            if a <= 0.99 {
                continue;
            }
            let expected = albedo * a + Rgb::splat(0.5 * a);
            let got = relit.rgb(x, y);
            let err = ((got - expected).abs() / expected).max_element();
            assert!(err < 0.05, "({x},{y}) {got} vs {expected}");
            checked += 1;
        }
    }
    assert!(checked > 50);
}

#[test]
fn light_rotation_conserves_mean_intensity() {
    // Looking straight down the y axis, a yaw of the lights rotates the image
    // in its own plane.
    let cam = Camera {
        up: DVec3::new(0.0, 0.0, -1.0),
        ..Camera::new(DVec3::new(0.0, 4.0, 0.0), DVec3::ZERO, 24.0, 48, 48)
    };
    let field = sphere(Rgb::new(0.6, 0.6, 0.6));
    let sky = common::two_blob_sky(128, 64);
    let cfg = IntegratorConfig::new(3.0, 5.0, 64);
    let exps = ExponentSet::default();
    let base =
        phong_composite(&render(&field, &build_stack(&sky, &exps, 32, 16).unwrap(), &cam, &cfg, 1).unwrap());
    for deg in [30.0f64, 90.0, 200.0] {
        let stack = build_stack(&sky.rotate_yaw(deg.to_radians()), &exps, 32, 16).unwrap();
        let turned = phong_composite(&render(&field, &stack, &cam, &cfg, 1).unwrap());
        let drift = (turned.mean() - base.mean()).abs() / base.mean();
        assert!(drift < 0.03, "{deg} deg: mean drifted {drift}");
        assert!(turned.data != base.data);
    }
}

#[test]
fn albedo_ignores_lighting() {
    let field = sphere(Rgb::new(0.3, 0.5, 0.7));
    let cam = front_camera(24);
    let cfg = IntegratorConfig::new(3.0, 5.0, 48);
    let exps = ExponentSet::default();
    let sky = common::two_blob_sky(64, 32);
    let a = render(&field, &build_stack(&sky, &exps, 16, 8).unwrap(), &cam, &cfg, 1).unwrap();
    let b = render(
        &field,
        &build_stack(&common::gray_sky(64, 32, 3.0), &exps, 16, 8).unwrap(),
        &cam,
        &cfg,
        1,
    )
    .unwrap();
    assert_eq!(a.albedo, b.albedo);
    assert_ne!(a.diffuse, b.diffuse);
    let mean = masked_mean(&a.albedo, &a.alpha, 0.99).unwrap();
    assert!(
        (mean - Rgb::new(0.3, 0.5, 0.7)).abs().max_element() < 0.01,
        "{mean}"
    );
}

#[test]
fn outputs_are_bounded() {
    let field = sphere(Rgb::new(0.9, 0.9, 0.9));
    let stack = build_stack(&common::two_blob_sky(64, 32), &ExponentSet::default(), 16, 8).unwrap();
    let t = render(
        &field,
        &stack,
        &front_camera(32),
        &IntegratorConfig::new(3.0, 5.0, 48),
        1,
    )
    .unwrap();
    assert!(t.is_finite());
    assert!(t.alpha.data.iter().all(|&a| (0.0..=1.0).contains(&a)));
    assert!(t.albedo.data.iter().all(|&a| (0.0..=1.0).contains(&a)));
    for y in 0..32 {
        for x in 0..32 {
            let n = t.normal.rgb(x, y);
            assert!(n == DVec3::ZERO || (n.length() - 1.0).abs() < 1e-9);
            let d = t.depth.value(x, y);
            assert!(t.alpha.value(x, y) == 0.0 || (3.0..=5.0).contains(&d));
        }
    }
}
