//! Writes a synthetic HDR sky: a warm sun, a cool fill lobe and a ground
//! gradient.
//!
//! ```text
//! cargo run --example make_sky -- crates/core/scenes/sky.pfm 128
//! ```

use std::env;

use intrinsic_relight::{HdrEnvironmentMap, Rgb};

fn lobe(d: Rgb, center: Rgb, width: f64) -> f64 {
    ((d.dot(center.normalize()) - 1.0) / (width * width)).exp()
}

fn main() -> intrinsic_relight::Result<()> {
    let mut args = env::args().skip(1);
    let out = args.next().unwrap_or_else(|| "sky.pfm".into());
    let width: usize = args.next().map_or(128, |w| w.parse().expect("width"));

    let sun = Rgb::new(0.6, 0.7, -0.4);
    let fill = Rgb::new(-0.8, 0.2, 0.5);
    let sky = HdrEnvironmentMap::from_fn(width, width / 2, |d| {
        let d = d.vec();
        let up = d.y.max(0.0);
        let base = Rgb::new(0.25, 0.3, 0.4) * (0.6 + 0.4 * up) + Rgb::new(0.12, 0.1, 0.08) * (-d.y).max(0.0);
        base + 6.0 * lobe(d, sun, 0.25) * Rgb::new(1.0, 0.9, 0.7)
            + 1.5 * lobe(d, fill, 0.5) * Rgb::new(0.4, 0.55, 1.0)
    })?;
    sky.save(&out)?;
    println!("wrote {out} ({}x{})", sky.width(), sky.height());
    Ok(())
}
