use std::time::Instant;

use super::{apply_box, make_world, need, pebble_mass, section, step_count, summary_line, template, BoxConfig, Recorder, RunReport, ScenarioConfig};
use crate::error::Result;
use crate::forge::shapes::rod_pebbles;
use crate::math::{rotation_from_axes, Vec3};

/// A rigid rod of touching pebbles bouncing between elastic walls.
///
/// The rod lies in the z = 0 plane and starts at the box centre, tilted by
/// `tilt` against x. With one translational degree of freedom it moves
/// along y only and the box must be wide enough in x for the rod to spin
/// freely; with two it moves in the xy plane. Reports the ratio of the
/// rotational to the translational energy averaged over every step of the
/// second half of the run, and the number of wall collisions.
pub fn run_single_bounce(cfg: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    let b = section(&cfg.bounce);
    need(matches!(b.translational_dof, 1 | 2), || "bounce.translational_dof must be 1 or 2".into())?;
    need(b.pebbles >= 2, || "bounce.pebbles must be at least 2".into())?;
    let rod = template("rod", &rod_pebbles(b.pebbles, b.radius), b.density)?;
    let half_length = rod.bounding_radius();
    let domain = cfg.domain.unwrap_or(BoxConfig::cube(1.6 * half_length, false));
    need(domain.periodic == [false; 3], || "the bounce box must not be periodic".into())?;
    if b.translational_dof == 1 {
        need(domain.min[0] + half_length < 0.0 && domain.max[0] - half_length > 0.0, || {
            "the bounce box must leave room in x for the rod to spin".into()
        })?;
    }

    let mut w = make_world(cfg, pebble_mass(b.radius, b.density))?;
    apply_box(&mut w, &domain)?;
    let t = w.add_template(rod);
    let d = Vec3::new(b.tilt.cos(), b.tilt.sin(), 0.0);
    let q = rotation_from_axes(Vec3::Z.cross(d), Vec3::Z, d)?;
    let v = match b.translational_dof {
        1 => Vec3::new(0.0, b.speed, 0.0),
        _ => Vec3::new(b.heading.sin(), b.heading.cos(), 0.0) * b.speed,
    };
    let centre = (domain.min() + domain.max()) * 0.5;
    w.add_clump(t, Vec3::new(centre.x, centre.y, 0.0), q, v, Vec3::ZERO)?;
    w.initialize()?;

    let dt = w.settings.dt;
    let n = step_count(cfg.duration, dt);
    let mut rec = Recorder::create(cfg, dt)?;
    rec.sample(&w)?;
    let (mut rot, mut trans, mut samples) = (0.0, 0.0, 0u64);
    let (mut collisions, mut late_collisions, mut touching) = (0u64, 0u64, false);
    let e0 = w.energy()?.total();
    let mut max_drift: f64 = 0.0;
    for k in 0..n {
        w.step()?;
        rec.sample(&w)?;
        let now = !w.contacts().is_empty();
        if now && !touching {
            collisions += 1;
            if k >= n / 2 {
                late_collisions += 1;
            }
        }
        touching = now;
        if k >= n / 2 {
            let e = w.energy()?;
            rot += e.rotational;
            trans += e.translational;
            samples += 1;
            if !touching && e0 > 0.0 {
                max_drift = max_drift.max((e.total() - e0).abs() / e0);
            }
        }
    }
    let ratio = if trans > 0.0 { rot / trans } else { 0.0 };
    let final_e = w.energy()?;
    let summary = vec![
        summary_line("translational_dof", b.translational_dof as f64),
        summary_line("dt", dt),
        summary_line("collisions", collisions as f64),
        summary_line("late_collisions", late_collisions as f64),
        summary_line("mean_rot", rot / samples.max(1) as f64),
        summary_line("mean_trans", trans / samples.max(1) as f64),
        summary_line("ratio", ratio),
        summary_line("initial_energy", e0),
        summary_line("final_energy", final_e.total()),
        summary_line("max_energy_drift", max_drift),
    ];
    rec.finish(cfg, started, w.steps(), summary)
}
