//! Step time with one grid level against three, for a polydisperse and a
//! monodisperse scene.

use clumpdem::scenario::{bench_grid, BenchConfig, ScenarioConfig, ScenarioKind};

fn main() -> clumpdem::Result<()> {
    for (ratio, shell) in [(30.0, 190), (1.0, 30)] {
        let mut cfg = ScenarioConfig::new(ScenarioKind::BenchGrid, 1.0);
        cfg.seed = 3;
        cfg.output_dir = std::env::temp_dir().join("clumpdem_bench");
        cfg.bench = Some(BenchConfig { radius_ratio: ratio, surface_pebbles: shell, steps: 50, ..Default::default() });
        let r = bench_grid(&cfg)?;
        println!(
            "{} pebbles, radius ratio {ratio}: {:.2} ms vs {:.2} ms per step (×{:.2}), same contacts: {}",
            r.get("pebbles").unwrap(),
            1e3 * r.get("step_time_a").unwrap(),
            1e3 * r.get("step_time_b").unwrap(),
            r.get("speedup").unwrap(),
            r.get("contacts_identical").unwrap() == 1.0
        );
    }
    Ok(())
}
