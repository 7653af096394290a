use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use clumpdem::forge::bench::{bench_csv, convergence_benchmark};
use clumpdem::forge::{forge_template, load_pebbles, load_stl, InertiaMethod};
use clumpdem::scenario::{self, RunReport, ScenarioConfig, ScenarioKind};
use clumpdem::{Error, Result};

#[derive(Parser)]
#[command(name = "clumpdem", version, about = "Rigid multi-sphere clump DEM")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a clump template from a pebble file.
    Forge(ForgeCmd),
    /// Run a scenario config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare grid depths on the config's bench scene.
    Bench {
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Args)]
#[command(args_conflicts_with_subcommands = true)]
struct ForgeCmd {
    #[command(subcommand)]
    bench: Option<ForgeSub>,
    #[command(flatten)]
    args: ForgeArgs,
}

#[derive(Subcommand)]
enum ForgeSub {
    /// Convergence of the mesh and voxel methods on two touching spheres.
    Bench {
        #[arg(long, default_value_t = 128)]
        max_n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ForgeArgs {
    /// Pebble file: one `x,y,z,r` line per pebble.
    #[arg(long)]
    pebbles: Option<PathBuf>,
    /// Surface mesh for the mesh method.
    #[arg(long)]
    stl: Option<PathBuf>,
    #[arg(long, default_value_t = 1.0)]
    density: f64,
    #[arg(long, value_enum, default_value_t = Method::Pebbles)]
    method: Method,
    /// Voxels per side of the bounding cube.
    #[arg(long, default_value_t = 256)]
    voxels: usize,
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Pebbles,
    Voxels,
    Mesh,
}

fn threads() -> Result<()> {
    let Ok(v) = std::env::var("CLUMPDEM_THREADS") else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::Config(format!("CLUMPDEM_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Config(e.to_string()))
}

fn print_report(r: &RunReport) {
    println!("scenario = {}", r.scenario.name());
    println!("steps = {}", r.steps);
    println!("wall_time = {:.3}", r.wall_time);
    for (k, v) in &r.summary {
        println!("{k} = {v}");
    }
    println!("energy = {}", r.energy_csv.display());
    println!("summary = {}", r.summary_csv.display());
}

fn forge(cmd: ForgeCmd) -> Result<()> {
    if let Some(ForgeSub::Bench { max_n, out }) = cmd.bench {
        let csv = bench_csv(&convergence_benchmark(max_n)?);
        match out {
            Some(p) => std::fs::write(p, csv)?,
            None => print!("{csv}"),
        }
        return Ok(());
    }
    let a = cmd.args;
    let path = a.pebbles.ok_or_else(|| Error::InvalidInput("forge needs --pebbles".into()))?;
    let pebbles = load_pebbles(&path)?;
    let mesh = a.stl.map(load_stl).transpose()?;
    let method = match a.method {
        Method::Pebbles => InertiaMethod::Pebbles,
        Method::Voxels => InertiaMethod::Voxels { n: a.voxels },
        Method::Mesh => InertiaMethod::Mesh,
    };
    let name = a.name.unwrap_or_else(|| path.file_stem().map_or("clump".into(), |s| s.to_string_lossy().into_owned()));
    let t = forge_template(&name, &pebbles, mesh.as_ref(), a.density, method)?;
    match a.out {
        Some(p) => {
            t.save(&p)?;
            let l = t.principal_moments;
            eprintln!("{}: mass {} moments {} {} {} -> {}", t.name, t.mass, l.x, l.y, l.z, p.display());
        }
        None => print!("{}", t.to_text()),
    }
    Ok(())
}

fn main_inner() -> Result<()> {
    threads()?;
    match Cli::parse().command {
        Command::Forge(cmd) => forge(cmd),
        Command::Run { config, seed, out } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            print_report(&scenario::run(&cfg)?);
            Ok(())
        }
        Command::Bench { config } => {
            let mut cfg = ScenarioConfig::load(&config)?;
            cfg.scenario = ScenarioKind::BenchGrid;
            print_report(&scenario::bench_grid(&cfg)?);
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
