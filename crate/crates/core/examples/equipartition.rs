//! A rod bouncing between elastic walls shares its energy evenly between
//! its degrees of freedom: E_rot/E_trans tends to 1 when it can only move
//! along one axis and to 1/2 when it moves in a plane.

use clumpdem::scenario::{run_single_bounce, BounceConfig, ScenarioConfig, ScenarioKind};

fn main() -> clumpdem::Result<()> {
    let duration: f64 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(500.0);
    for dof in [1, 2] {
        let mut cfg = ScenarioConfig::new(ScenarioKind::Bounce, duration);
        cfg.output_dir = std::env::temp_dir().join(format!("clumpdem_bounce_{dof}"));
        cfg.bounce = Some(BounceConfig { translational_dof: dof, ..Default::default() });
        let r = run_single_bounce(&cfg)?;
        println!(
            "{dof} translational + 1 rotational: E_rot/E_trans = {:.3} after {} collisions ({:.1} s wall)",
            r.get("ratio").unwrap(),
            r.get("collisions").unwrap(),
            r.wall_time
        );
    }
    Ok(())
}
