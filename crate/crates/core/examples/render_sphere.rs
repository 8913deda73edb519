//! Loads a scene file, renders every channel and writes PFMs and PNG
//! previews.
//!
//! ```text
//! cargo run --release --example render_sphere -- [scene.json] [out_dir] [threads]
//! ```

use std::env;
use std::path::PathBuf;
use std::time::Instant;

use intrinsic_relight::cli::cmd_render;
use intrinsic_relight::render::Image;

fn main() -> intrinsic_relight::Result<()> {
    let mut args = env::args().skip(1);
    let scene = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes/sphere.json"));
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| env::temp_dir().join("sphere"));
    let threads = args.next().map_or(1, |t| t.parse().expect("thread count"));

    let start = Instant::now();
    let files = cmd_render(&scene, &out, threads, true, None)?;
    println!("{} files in {:.2?}", files.len(), start.elapsed());

    let alpha = Image::load_pfm(out.join("alpha.pfm"))?;
    let covered = alpha.data.iter().filter(|&&a| a > 0.5).count() / alpha.channels;
    println!(
        "{covered} of {} pixels covered; outputs in {}",
        alpha.width * alpha.height,
        out.display()
    );
    Ok(())
}
