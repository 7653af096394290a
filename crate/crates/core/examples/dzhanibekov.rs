//! A T-bar spun about its intermediate axis keeps flipping over; spun about
//! the other two it does not.

use clumpdem::scenario::{run_tbar, ScenarioConfig, ScenarioKind, TbarConfig};

fn main() -> clumpdem::Result<()> {
    let out = std::env::temp_dir().join("clumpdem_tbar");
    for axis in [1, 2, 3] {
        let mut cfg = ScenarioConfig::new(ScenarioKind::Tbar, 60.0);
        cfg.output_dir = out.join(format!("axis{axis}"));
        cfg.integrator.dt = Some(1e-3);
        cfg.tbar = Some(TbarConfig { axis, ..Default::default() });
        let r = run_tbar(&cfg)?;
        println!(
            "axis {axis}: {} flips, every {:.2} s, E_rot drift {:.1e}, {:.2} s wall",
            r.get("flips").unwrap(),
            r.get("flip_interval").unwrap(),
            r.get("max_rot_energy_drift").unwrap(),
            r.wall_time
        );
    }
    println!("orientation traces in {}", out.display());
    Ok(())
}
