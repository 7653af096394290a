//! A row of twenty dominoes knocked over at two cue speeds. Once the wave
//! is running, the potential energy falls at the same rate either way.

use clumpdem::scenario::{run_domino, ContactConfig, DominoConfig, ScenarioConfig, ScenarioKind};

fn main() -> clumpdem::Result<()> {
    for speed in [0.5, 1.0] {
        let mut cfg = ScenarioConfig::new(ScenarioKind::Domino, 4.0);
        cfg.output_interval = 0.002;
        cfg.output_dir = std::env::temp_dir().join(format!("clumpdem_domino_{speed}"));
        cfg.contact = ContactConfig { kn: 500.0, gamma_n: 0.1, kt: 150.0, gamma_t: 0.0, mu: 0.5 };
        cfg.integrator.gravity = [0.0, 0.0, -9.81];
        cfg.domino = Some(DominoConfig { cue_speed: speed, ..Default::default() });
        let r = run_domino(&cfg)?;
        println!(
            "cue {speed} m/s: {} toppled, dE/dt = {:.4} W (R² {:.4}), wave {:.3} m/s",
            r.get("toppled").unwrap(),
            r.get("slope").unwrap(),
            r.get("r2").unwrap(),
            r.get("wave_speed").unwrap()
        );
    }
    Ok(())
}
