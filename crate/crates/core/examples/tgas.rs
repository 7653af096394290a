//! Sixty T-shaped clumps in a periodic box, launched without spin. The
//! rotational energy climbs until it matches the translational energy.

use clumpdem::scenario::{read_energy_csv, run_tgas, ScenarioConfig, ScenarioKind, TgasConfig};

fn main() -> clumpdem::Result<()> {
    let mut cfg = ScenarioConfig::new(ScenarioKind::Tgas, 3.0);
    cfg.seed = 1;
    cfg.output_interval = 0.1;
    cfg.output_dir = std::env::temp_dir().join("clumpdem_tgas");
    cfg.tgas = Some(TgasConfig::default());
    let r = run_tgas(&cfg)?;
    println!("{:>6} {:>10} {:>10} {:>8}", "t", "E_trans", "E_rot", "ratio");
    for e in read_energy_csv(&r.energy_csv)? {
        println!("{:6.2} {:10.3} {:10.3} {:8.3}", e.time, e.translational, e.rotational, e.rotational / e.translational);
    }
    for (k, v) in &r.summary {
        println!("{k} = {v}");
    }
    Ok(())
}
