use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use intrinsic_relight::cli::{self, GenWeightsArgs, TurntableMode, TurntableSpec};
use intrinsic_relight::field::DEFAULT_LEVELS;
use intrinsic_relight::prefilter::DEFAULT_EXPONENTS;

#[derive(Parser)]
#[command(
    version,
    about = "Volumetric intrinsic-field renderer with HDR environment relighting"
)]
struct Args {
    /// Worker threads for rendering.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Overrides the scene's integrator seed (render, turntable) or the weight seed (gen-weights).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

const DEFAULT_RESOLUTION: &str = "64x32";

fn parse_resolution(s: &str) -> Result<(usize, usize), String> {
    let (w, h) = s
        .split_once('x')
        .ok_or_else(|| format!("expected WIDTHxHEIGHT, got {s:?}"))?;
    let w = w.parse().map_err(|_| format!("bad width in {s:?}"))?;
    let h = h.parse().map_err(|_| format!("bad height in {s:?}"))?;
    Ok((w, h))
}

#[derive(Subcommand)]
enum Command {
    /// Preconvolve an equirectangular PFM into Phong-lobe light maps.
    Prefilter {
        envmap: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = clap::value_parser!(u32).range(1..),
              default_values_t = DEFAULT_EXPONENTS)]
        exponents: Vec<u32>,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, value_parser = parse_resolution,
              default_value = DEFAULT_RESOLUTION)]
        resolution: (usize, usize),
    },
    /// Render a scene into albedo/diffuse/specular/relit/normal/alpha/depth maps.
    Render {
        scene: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        /// Also write tone-mapped PNG previews.
        #[arg(long)]
        png: bool,
    },
    /// Render a rotating-camera or rotating-light frame sequence.
    Turntable {
        scene: PathBuf,
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = TurntableMode::LightRotation)]
        mode: TurntableMode,
        #[arg(long, default_value_t = 8)]
        frames: usize,
        /// Sweep in degrees, in (0, 360].
        #[arg(long, default_value_t = 90.0)]
        sweep: f64,
        /// Rotate prefiltered light maps instead of re-prefiltering each frame.
        #[arg(long)]
        rotate_lightmaps: bool,
    },
    /// Write a seeded VXW1 weight file for the MLP field.
    GenWeights {
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value_t = 256)]
        width: usize,
        #[arg(long, default_value_t = 6)]
        layers: usize,
        #[arg(long, default_value_t = 16)]
        feature_dim: usize,
        /// Number of specular blend weights (light map count).
        #[arg(long, default_value_t = DEFAULT_EXPONENTS.len())]
        blend: usize,
        /// Positional-encoding levels.
        #[arg(long, default_value_t = DEFAULT_LEVELS)]
        levels: usize,
    },
}

fn main() -> ExitCode {
    let args = Args::parse();
    let result = match args.command {
        Command::Prefilter {
            envmap,
            exponents,
            out,
            resolution,
        } => cli::cmd_prefilter(&envmap, &exponents, &out, resolution).map(|_| ()),
        Command::Render { scene, out, png } => {
            cli::cmd_render(&scene, &out, args.threads, png, args.seed).map(|_| ())
        }
        Command::Turntable {
            scene,
            out,
            mode,
            frames,
            sweep,
            rotate_lightmaps,
        } => {
            let spec = TurntableSpec {
                mode,
                frames,
                sweep_deg: sweep,
                scene,
                out_dir: out,
                rotate_lightmaps,
            };
            cli::cmd_turntable(&spec, args.threads, args.seed).map(|_| ())
        }
        Command::GenWeights {
            out,
            width,
            layers,
            feature_dim,
            blend,
            levels,
        } => {
            let gen = GenWeightsArgs {
                seed: args.seed.unwrap_or(0),
                width,
                layers,
                feature_dim,
                blend_count: blend,
                levels,
            };
            cli::cmd_gen_weights(&gen, &out).map(|_| ())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
