use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{make_world, need, section, summary_line, template, Recorder, RunReport, ScenarioConfig};
use crate::contact::Wall;
use crate::error::Result;
use crate::forge::PebbleSpec;
use crate::math::{Mat3, Vec3};
use crate::world::World;

/// A core pebble of radius `core` at the origin with `n` pebbles of radius
/// `small` centred on its surface at Fibonacci-sphere points.
pub fn core_shell_pebbles(core: f64, n: usize, small: f64) -> Vec<PebbleSpec> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    let mut out = vec![PebbleSpec::new(Vec3::ZERO, core)];
    for i in 0..n {
        let z = 1.0 - (2 * i + 1) as f64 / n as f64;
        let rho = (1.0 - z * z).sqrt();
        let phi = i as f64 * golden;
        out.push(PebbleSpec::new(Vec3::new(rho * phi.cos(), rho * phi.sin(), z) * core, small));
    }
    out
}

/// Steps the same scene once per grid depth in `bench.levels`, timing each
/// and comparing contact pairs every `sample_every` steps.
///
/// Clumps are core-shell bodies on a cubic lattice inside a walled box,
/// spaced so neighbouring shells start slightly overlapped, with random
/// velocities. The energy file belongs to the first depth.
pub fn bench_grid(cfg: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    let b = section(&cfg.bench);
    need(b.per_side >= 1 && b.steps >= 1 && b.sample_every >= 1, || "bench needs per_side, steps and sample_every ≥ 1".into())?;
    need(b.radius_ratio >= 1.0, || "bench.radius_ratio must be at least 1".into())?;
    let small = b.core_radius / b.radius_ratio;
    let pebbles = core_shell_pebbles(b.core_radius, b.surface_pebbles, small);
    let t = template("core_shell", &pebbles, 1.0)?;
    let reach = b.core_radius + small;
    let pitch = 2.0 * reach - 0.5 * small;
    let lo = -reach - 0.5 * pitch;
    let hi = lo + pitch * b.per_side as f64 + pitch;

    let build = |levels: usize| -> Result<World> {
        let mut cfg = cfg.clone();
        cfg.grid.max_levels = levels;
        let m_small = super::pebble_mass(small, 1.0);
        let mut w = make_world(&cfg, m_small)?;
        w.add_wall(Wall::boxed(Vec3::splat(lo), Vec3::splat(hi))?);
        let ti = w.add_template(t.clone());
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        for i in 0..b.per_side {
            for j in 0..b.per_side {
                for k in 0..b.per_side {
                    let pos = Vec3::new(i as f64, j as f64, k as f64) * pitch;
                    let v = Vec3::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * b.speed;
                    w.add_clump(ti, pos, Mat3::IDENTITY, v, Vec3::ZERO)?;
                }
            }
        }
        w.initialize()?;
        Ok(w)
    };

    let mut rec = None;
    let mut timings = Vec::new();
    let mut samples: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    let mut positions = Vec::new();
    for (run, &levels) in b.levels.iter().enumerate() {
        let mut w = build(levels)?;
        if run == 0 {
            let mut r = Recorder::create(cfg, w.settings.dt)?;
            r.sample(&w)?;
            rec = Some(r);
        }
        let mut seen = vec![w.contact_pairs()];
        let clock = Instant::now();
        for s in 1..=b.steps {
            w.step()?;
            if s % b.sample_every == 0 {
                seen.push(w.contact_pairs());
            }
            if run == 0 {
                if let Some(r) = rec.as_mut() {
                    r.sample(&w)?;
                }
            }
        }
        timings.push(clock.elapsed().as_secs_f64() / b.steps as f64);
        samples.push(seen);
        positions.push(w.clumps().iter().map(|c| c.position).collect::<Vec<_>>());
    }
    let identical = samples.windows(2).all(|p| p[0] == p[1]) && positions.windows(2).all(|p| p[0] == p[1]);
    let mean_contacts = samples[0].iter().map(|s| s.len()).sum::<usize>() as f64 / samples[0].len() as f64;
    let summary = vec![
        summary_line("pebbles", (b.per_side.pow(3) * pebbles.len()) as f64),
        summary_line("radius_ratio", b.radius_ratio),
        summary_line("steps_per_depth", b.steps as f64),
        summary_line("levels_a", b.levels[0] as f64),
        summary_line("levels_b", b.levels[1] as f64),
        summary_line("step_time_a", timings[0]),
        summary_line("step_time_b", timings[1]),
        summary_line("speedup", timings[0] / timings[1]),
        summary_line("contacts_identical", if identical { 1.0 } else { 0.0 }),
        summary_line("mean_contacts", mean_contacts),
    ];
    let rec = rec.expect("at least one run");
    rec.finish(cfg, started, 2 * b.steps as u64, summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shell_points_sit_on_the_core() {
        let p = core_shell_pebbles(2.0, 50, 0.1);
        assert_eq!(p.len(), 51);
        for s in &p[1..] {
            assert!((s.center.norm() - 2.0).abs() < 1e-12);
        }
        let c: Vec3 = p[1..].iter().map(|s| s.center).sum();
        assert!(c.norm() < 0.5);
    }
}
