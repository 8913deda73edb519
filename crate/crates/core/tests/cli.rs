mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use intrinsic_relight::cli::Manifest;
use intrinsic_relight::field::{read_vxw, MlpField};
use intrinsic_relight::render::{normalized_rmse, Image};
use intrinsic_relight::{build_stack, render, Camera, ExponentSet, HdrEnvironmentMap, IntegratorConfig};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_intrinsic-relight"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn binary")
}

fn ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn scenes() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn small_scene(dir: &Path) -> PathBuf {
    common::write_sphere_scene(dir, 24, 24, 0.0, true)
}

#[test]
fn prefilter_constant_gray() {
    let tmp = tempfile::tempdir().unwrap();
    let env = tmp.path().join("gray.pfm");
    common::gray_sky(256, 128, 0.5).save(&env).unwrap();
    let out = tmp.path().join("maps");
    ok(&[
        "prefilter",
        s(&env),
        "--exponents",
        "1,8,32,128",
        "-o",
        s(&out),
        "--resolution",
        "16x8",
    ]);

    let manifest: Manifest = serde_json::from_slice(&fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest.exponents, vec![1, 8, 32, 128]);
    assert_eq!(manifest.resolution, [16, 8]);
    assert_eq!(manifest.files.len(), 4);
    for file in &manifest.files {
        let map = HdrEnvironmentMap::load(out.join(file)).unwrap();
        assert_eq!((map.width(), map.height()), (16, 8));
        for p in map.pixels() {
            for &c in p {
                assert!(((c - 0.5) / 0.5).abs() < 1e-3, "{file}: {c}");
            }
        }
    }
}

#[test]
fn prefilter_rejects_exponent_zero() {
    let tmp = tempfile::tempdir().unwrap();
    let env = tmp.path().join("gray.pfm");
    common::gray_sky(16, 8, 1.0).save(&env).unwrap();
    let out = tmp.path().join("maps");
    let res = run(&["prefilter", s(&env), "--exponents", "0,8", "-o", s(&out)]);
    assert!(!res.status.success());
    assert!(!res.stderr.is_empty());
    assert!(!out.exists());
}

#[test]
fn prefilter_missing_input_fails_cleanly() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("maps");
    let res = run(&["prefilter", s(&tmp.path().join("nope.pfm")), "-o", s(&out)]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("nope.pfm"));
    assert!(!out.exists());
}

#[test]
fn prefilter_is_byte_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let env = tmp.path().join("sky.pfm");
    common::two_blob_sky(64, 32).save(&env).unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for out in [&a, &b] {
        ok(&["prefilter", s(&env), "-o", s(out), "--resolution", "16x8"]);
    }
    for name in [
        "manifest.json",
        "lightmap_n1.pfm",
        "lightmap_n8.pfm",
        "lightmap_n32.pfm",
        "lightmap_n128.pfm",
    ] {
        assert_eq!(
            fs::read(a.join(name)).unwrap(),
            fs::read(b.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn render_bundled_sphere_scene() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("render");
    ok(&["render", s(&scenes().join("sphere.json")), "-o", s(&out), "--png"]);
    for channel in [
        "albedo", "diffuse", "specular", "relit", "normal", "alpha", "depth",
    ] {
        assert!(out.join(format!("{channel}.pfm")).exists(), "{channel}.pfm");
        assert!(out.join(format!("{channel}.png")).exists(), "{channel}.png");
    }
    // Projected radius of a 0.7 sphere seen from distance 4 through a 30 degree fov.
    let alpha = Image::load_pfm(out.join("alpha.pfm")).unwrap();
    let disc = (0.7f64 / 4.0).asin().tan() / 15f64.to_radians().tan() * 32.0;
    for y in 0..64 {
        for x in 0..64 {
            let r = ((x as f64 + 0.5 - 32.0).powi(2) + (y as f64 + 0.5 - 32.0).powi(2)).sqrt();
            let a = alpha.value(x, y);
            if r < disc - 2.0 {
                assert!(a > 0.99, "interior ({x},{y}) alpha {a}");
            } else if r > disc + 6.0 {
                assert!(a < 0.01, "exterior ({x},{y}) alpha {a}");
            }
        }
    }
}

#[test]
fn render_names_missing_camera_key() {
    let tmp = tempfile::tempdir().unwrap();
    let scene = small_scene(tmp.path());
    let mut json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&scene).unwrap()).unwrap();
    json.as_object_mut().unwrap().remove("camera");
    fs::write(&scene, json.to_string()).unwrap();
    let out = tmp.path().join("render");
    let res = run(&["render", s(&scene), "-o", s(&out)]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("camera"));
    assert!(!out.exists());
}

#[test]
fn render_names_unknown_key() {
    let tmp = tempfile::tempdir().unwrap();
    let scene = small_scene(tmp.path());
    let text = fs::read_to_string(&scene)
        .unwrap()
        .replace("\"jitter\"", "\"jiter\"");
    fs::write(&scene, text).unwrap();
    let res = run(&["render", s(&scene), "-o", s(&tmp.path().join("render"))]);
    assert!(!res.status.success());
    assert!(String::from_utf8_lossy(&res.stderr).contains("jiter"));
}

#[test]
fn render_is_thread_count_independent() {
    let tmp = tempfile::tempdir().unwrap();
    let scene = small_scene(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    ok(&["--threads", "1", "--seed", "5", "render", s(&scene), "-o", s(&a)]);
    ok(&["render", s(&scene), "-o", s(&b), "--threads", "8", "--seed", "5"]);
    for channel in [
        "albedo", "diffuse", "specular", "relit", "normal", "alpha", "depth",
    ] {
        let name = format!("{channel}.pfm");
        assert_eq!(
            fs::read(a.join(&name)).unwrap(),
            fs::read(b.join(&name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn seed_changes_jittered_render() {
    let tmp = tempfile::tempdir().unwrap();
    let scene = small_scene(tmp.path());
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    ok(&["--seed", "1", "render", s(&scene), "-o", s(&a)]);
    ok(&["--seed", "2", "render", s(&scene), "-o", s(&b)]);
    assert_ne!(
        fs::read(a.join("alpha.pfm")).unwrap(),
        fs::read(b.join("alpha.pfm")).unwrap()
    );
}

#[test]
fn single_frame_turntable_matches_render() {
    let tmp = tempfile::tempdir().unwrap();
    let scene = small_scene(tmp.path());
    let (frames, still) = (tmp.path().join("frames"), tmp.path().join("still"));
    ok(&[
        "turntable",
        s(&scene),
        "-o",
        s(&frames),
        "--frames",
        "1",
        "--mode",
        "camera-orbit",
    ]);
    ok(&["render", s(&scene), "-o", s(&still)]);
    assert_eq!(
        fs::read(frames.join("frame_0000.pfm")).unwrap(),
        fs::read(still.join("relit.pfm")).unwrap()
    );
    assert!(frames.join("frame_0000.png").exists());
}

#[test]
fn light_rotation_full_turn_is_periodic() {
    let tmp = tempfile::tempdir().unwrap();
    let scene = common::write_sphere_scene(tmp.path(), 24, 24, 0.0, false);
    let turn = tmp.path().join("turn");
    ok(&[
        "turntable",
        s(&scene),
        "-o",
        s(&turn),
        "--frames",
        "8",
        "--sweep",
        "360",
    ]);
    for i in 0..8 {
        assert!(turn.join(format!("frame_{i:04}.pfm")).exists());
    }
    assert!(!turn.join("frame_0008.pfm").exists());

    // The frame one step past the end of the sweep, rendered as a still.
    let text = fs::read_to_string(&scene).unwrap();
    let wrapped = tmp.path().join("wrapped.json");
    fs::write(
        &wrapped,
        text.replace("\"envmap_path\"", "\"rotation_deg\": 360, \"envmap_path\""),
    )
    .unwrap();
    let still = tmp.path().join("still");
    ok(&["render", s(&wrapped), "-o", s(&still)]);

    let first = Image::load_pfm(turn.join("frame_0000.pfm")).unwrap();
    let again = Image::load_pfm(still.join("relit.pfm")).unwrap();
    assert!(normalized_rmse(&again, &first) < 0.02);
    let half = Image::load_pfm(turn.join("frame_0004.pfm")).unwrap();
    assert!(normalized_rmse(&half, &first) > 1e-3, "lighting should move");
}

#[test]
fn camera_orbit_keeps_silhouette_area() {
    let tmp = tempfile::tempdir().unwrap();
    let (scene, base) = intrinsic_relight::scene::Scene::load(scenes().join("sphere.json")).unwrap();
    let prepared = scene.prepare(&base).unwrap();
    let counts: Vec<usize> = (0..6)
        .map(|i| {
            let cam = prepared
                .camera
                .orbit((60.0 * i as f64).to_radians())
                .with_resolution(32, 32);
            let t = render(
                prepared.field.as_ref(),
                &prepared.stack,
                &cam,
                &prepared.integrator,
                1,
            )
            .unwrap();
            t.alpha.data.iter().filter(|&&a| a > 0.5).count()
        })
        .collect();
    let reference = counts[0] as f64;
    for c in &counts {
        assert!((*c as f64 - reference).abs() / reference < 0.02, "{counts:?}");
    }
    // Also exercise the command end to end.
    ok(&[
        "turntable",
        s(&scenes().join("sphere.json")),
        "-o",
        s(&tmp.path().join("orbit")),
        "--mode",
        "camera-orbit",
        "--frames",
        "2",
    ]);
}

#[test]
fn turntable_rejects_bad_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let scene = small_scene(tmp.path());
    let out = tmp.path().join("frames");
    let res = run(&["turntable", s(&scene), "-o", s(&out), "--sweep", "400"]);
    assert!(!res.status.success());
    assert!(!out.exists());
}

#[test]
fn gen_weights_reproducible_and_full_size() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b, c) = (
        tmp.path().join("a.vxw"),
        tmp.path().join("b.vxw"),
        tmp.path().join("c.vxw"),
    );
    ok(&["--seed", "9", "gen-weights", "-o", s(&a)]);
    ok(&["gen-weights", "-o", s(&b), "--seed", "9"]);
    ok(&["gen-weights", "-o", s(&c), "--seed", "10"]);
    let bytes = fs::read(&a).unwrap();
    assert_eq!(bytes, fs::read(&b).unwrap());
    assert_ne!(bytes, fs::read(&c).unwrap());

    let weights = read_vxw(&bytes).unwrap();
    let first = weights.layers().next().unwrap();
    assert_eq!((first.rows, first.cols), (256, 60));

    let field = MlpField::new(weights, 10).unwrap();
    let stack = build_stack(&common::two_blob_sky(32, 16), &ExponentSet::default(), 16, 8).unwrap();
    let cam = Camera::new(glam::DVec3::new(0.0, 0.0, 3.0), glam::DVec3::ZERO, 40.0, 32, 32);
    let t = render(&field, &stack, &cam, &IntegratorConfig::new(2.0, 4.0, 4), 1).unwrap();
    assert!(t.is_finite());
}

#[test]
fn gen_weights_rejects_zero_width() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("w.vxw");
    let res = run(&["gen-weights", "-o", s(&out), "--width", "0"]);
    assert!(!res.status.success());
    assert!(!out.exists());
}
