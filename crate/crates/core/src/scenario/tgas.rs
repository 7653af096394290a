use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{apply_box, late_mean, make_world, need, pebble_mass, section, step_count, summary_line, template, BoxConfig, Recorder, RunReport, ScenarioConfig};
use crate::boundary::{place_clumps, PeriodicBox, PlacementRequest};
use crate::error::Result;
use crate::forge::shapes::tbar_pebbles;
use crate::math::Vec3;

/// Elastic, frictionless gas of T-shaped clumps in a triply periodic box.
///
/// Clumps are placed without overlap at random orientations, with zero spin
/// and random velocities (uniform per component with RMS `speed`, total
/// momentum removed). Without a configured box the cube is sized for
/// `packing_fraction`. Reports late-time energy ratio and the largest
/// relative drifts of total momentum (against Σ M|v|) and total energy.
pub fn run_tgas(cfg: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    let g = section(&cfg.tgas);
    need(g.count >= 2, || "tgas.count must be at least 2".into())?;
    let pebbles = tbar_pebbles(g.bar, g.stem, g.radius);
    let solid = pebbles.len() as f64 * pebble_mass(g.radius, 1.0) * g.count as f64;
    let domain = cfg.domain.unwrap_or_else(|| {
        let side = (solid / g.packing_fraction).cbrt();
        BoxConfig { min: [0.0; 3], max: [side; 3], periodic: [true; 3] }
    });
    need(domain.periodic == [true; 3], || "the tgas box must be periodic on every axis".into())?;
    let t = template("tee", &pebbles, g.density)?;

    let mut w = make_world(cfg, pebble_mass(g.radius, g.density))?;
    apply_box(&mut w, &domain)?;
    let boundary = PeriodicBox::new(domain.min(), domain.max(), domain.periodic);
    let req = PlacementRequest {
        template: &t,
        template_index: 0,
        count: g.count,
        domain: (domain.min(), domain.max()),
        seed: cfg.seed,
        max_attempts: 100_000,
    };
    let mut clumps = place_clumps(&req, &boundary)?;
    w.add_template(t);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7e57_ca5e);
    let a = g.speed * 3f64.sqrt();
    for c in &mut clumps {
        c.velocity = Vec3::new(rng.gen_range(-a..a), rng.gen_range(-a..a), rng.gen_range(-a..a));
    }
    let mean = clumps.iter().map(|c| c.velocity).sum::<Vec3>() / clumps.len() as f64;
    for c in clumps {
        let mut c = c;
        c.velocity -= mean;
        w.add_instance(c)?;
    }
    w.initialize()?;

    let dt = w.settings.dt;
    let n = step_count(cfg.duration, dt);
    let mut rec = Recorder::create(cfg, dt)?;
    let p0 = w.linear_momentum();
    let scale: f64 = w.clumps().iter().map(|c| c.mass * c.velocity.norm()).sum();
    let e0 = w.energy()?.total();
    rec.sample(&w)?;
    let (mut p_drift, mut e_drift): (f64, f64) = (0.0, 0.0);
    for _ in 0..n {
        w.step()?;
        p_drift = p_drift.max((w.linear_momentum() - p0).norm() / scale);
        if let Some(e) = rec.sample(&w)? {
            e_drift = e_drift.max((e.total() - e0).abs() / e0);
        }
    }
    let rot = late_mean(&rec.rows, |e| e.rotational);
    let trans = late_mean(&rec.rows, |e| e.translational);
    let summary = vec![
        summary_line("clumps", g.count as f64),
        summary_line("box_side", domain.max[0] - domain.min[0]),
        summary_line("dt", dt),
        summary_line("late_rot", rot),
        summary_line("late_trans", trans),
        summary_line("ratio", rot / trans),
        summary_line("momentum_drift", p_drift),
        summary_line("energy_drift", e_drift),
    ];
    rec.finish(cfg, started, w.steps(), summary)
}
