//! Preconvolves the bundled sky into Phong-lobe light maps, checks a few
//! lookups against brute-force summation and writes the stack as PFMs.
//!
//! ```text
//! cargo run --example prefilter_lightmaps -- [sky.pfm] [out_dir]
//! ```

use std::env;
use std::path::PathBuf;

use intrinsic_relight::cli::lightmap_file_name;
use intrinsic_relight::{build_stack, oracle_shade, uv_to_direction, ExponentSet, HdrEnvironmentMap};

fn main() -> intrinsic_relight::Result<()> {
    let mut args = env::args().skip(1);
    let sky = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenes/sky.pfm"));
    let out = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| env::temp_dir().join("lightmaps"));

    let map = HdrEnvironmentMap::load(&sky)?;
    let exps = ExponentSet::default();
    let stack = build_stack(&map, &exps, 64, 32)?;

    let probes = [(0.1, 0.3), (0.45, 0.5), (0.8, 0.7)];
    for (&n, lm) in exps.as_slice().iter().zip(stack.maps()) {
        let worst = probes
            .iter()
            .map(|&(u, v)| {
                let d = uv_to_direction(u, v);
                let exact = oracle_shade(&map, d, n);
                ((lm.sample_bilinear(d) - exact).abs() / exact).max_element()
            })
            .fold(0.0, f64::max);
        println!("n = {n:>3}: worst relative lookup error {:.3}%", 100.0 * worst);
    }

    std::fs::create_dir_all(&out).map_err(|e| intrinsic_relight::Error::file(&out, e))?;
    for (&n, lm) in exps.as_slice().iter().zip(stack.maps()) {
        lm.save(out.join(lightmap_file_name(n)))?;
    }
    println!("wrote {} light maps to {}", stack.len(), out.display());
    Ok(())
}
