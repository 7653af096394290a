//! Mesh and voxel inertia of two touching unit spheres against the exact
//! values, for N = 8 … 256.

use std::time::Instant;

use clumpdem::forge::bench::{bench_csv, log_log_slope, BenchMethod};
use clumpdem::forge::convergence_benchmark;

fn main() -> clumpdem::Result<()> {
    let max_n = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(128);
    let t = Instant::now();
    let rows = convergence_benchmark(max_n)?;
    print!("{}", bench_csv(&rows));
    for m in [BenchMethod::Mesh, BenchMethod::Voxels] {
        let pts = |f: fn(&clumpdem::forge::BenchRow) -> f64| -> Vec<(f64, f64)> {
            rows.iter().filter(|r| r.method == m).map(|r| (r.n as f64, f(r))).collect()
        };
        println!(
            "{m}: slope dM {:.3}, dI1 {:.3}, dI3 {:.3}",
            log_log_slope(&pts(|r| r.mass_error)),
            log_log_slope(&pts(|r| r.major_error)),
            log_log_slope(&pts(|r| r.minor_error)),
        );
    }
    eprintln!("{:.1} s", t.elapsed().as_secs_f64());
    Ok(())
}
