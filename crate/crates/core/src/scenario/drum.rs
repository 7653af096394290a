use std::time::Instant;

use super::{make_world, need, section, step_count, summary_line, Recorder, RunReport, ScenarioConfig};
use crate::boundary::{place_clumps, PeriodicBox, PlacementRequest};
use crate::contact::Wall;
use crate::error::Result;
use crate::forge::ClumpTemplate;
use crate::math::Vec3;

/// Counts peaks of `signal` that rise and then fall by at least `threshold`.
pub fn count_peaks(signal: &[f64], threshold: f64) -> usize {
    let Some(&first) = signal.first() else { return 0 };
    let (mut lo, mut hi, mut rising, mut peaks) = (first, first, true, 0);
    for &v in signal {
        if rising {
            hi = hi.max(v);
            if hi - v >= threshold {
                peaks += 1;
                rising = false;
                lo = v;
            }
        } else {
            lo = lo.min(v);
            if v - lo >= threshold {
                rising = true;
                hi = v;
            }
        }
    }
    peaks
}

/// Clumps of the first template file tumbling in a horizontal drum.
///
/// The drum is a cylinder of `radius` along x, closed by two planes
/// `length` apart, spinning at `omega`. Clumps start at random in the
/// square inscribed in the cross-section and fall under the configured
/// gravity. The potential energy is normalised by `M g R`; avalanches are
/// counted as peaks in the second half that rise and fall by a tenth of its
/// range.
pub fn run_drum(cfg: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    let dr = section(&cfg.drum);
    need(!cfg.templates.is_empty(), || "the drum scenario needs a template file".into())?;
    let t = ClumpTemplate::load(&cfg.templates[0])?;
    let lightest = t.pebbles.iter().map(|p| super::pebble_mass(p.radius, t.density)).fold(f64::INFINITY, f64::min);
    let mut w = make_world(cfg, lightest)?;
    let g = w.settings.gravity;
    need(g.norm() > 0.0, || "the drum scenario needs gravity".into())?;

    let half = 0.5 * dr.length;
    w.add_wall(Wall::cylinder(Vec3::ZERO, Vec3::X, dr.radius, dr.omega)?);
    w.add_wall(Wall::plane(Vec3::new(-half, 0.0, 0.0), Vec3::X)?);
    w.add_wall(Wall::plane(Vec3::new(half, 0.0, 0.0), -Vec3::X)?);
    let s = dr.radius / 2f64.sqrt();
    let region = PeriodicBox::new(Vec3::new(-half, -s, -s), Vec3::new(half, s, s), [false; 3]);
    let req = PlacementRequest {
        template: &t,
        template_index: 0,
        count: dr.count,
        domain: (region.min, region.max),
        seed: cfg.seed,
        max_attempts: 100_000,
    };
    let clumps = place_clumps(&req, &region)?;
    w.add_template(t);
    for c in clumps {
        w.add_instance(c)?;
    }
    w.initialize()?;

    let dt = w.settings.dt;
    let n = step_count(cfg.duration, dt);
    let scale = w.clumps().iter().map(|c| c.mass).sum::<f64>() * g.norm() * dr.radius;
    let mut rec = Recorder::create(cfg, dt)?;
    rec.sample(&w)?;
    for _ in 0..n {
        w.step()?;
        rec.sample(&w)?;
    }
    let late: Vec<f64> = rec.rows[rec.rows.len() / 2..].iter().map(|e| e.gravitational / scale).collect();
    let range = late.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - late.iter().cloned().fold(f64::INFINITY, f64::min);
    let events = count_peaks(&late, 0.1 * range);
    let revolutions = dr.omega.abs() * 0.5 * cfg.duration / std::f64::consts::TAU;
    let summary = vec![
        summary_line("clumps", dr.count as f64),
        summary_line("dt", dt),
        summary_line("events", events as f64),
        summary_line("revolutions", revolutions),
        summary_line("events_per_revolution", if revolutions > 0.0 { events as f64 / revolutions } else { 0.0 }),
        summary_line("late_e_grav_range", range),
    ];
    rec.finish(cfg, started, w.steps(), summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peak_counting_uses_hysteresis() {
        let s: Vec<f64> = (0..420).map(|i| (i as f64 * 0.1).sin()).collect();
        assert_eq!(count_peaks(&s, 0.5), 7);
        let wiggle: Vec<f64> = (0..100).map(|i| 0.01 * (i as f64).sin()).collect();
        assert_eq!(count_peaks(&wiggle, 0.1), 0);
        assert_eq!(count_peaks(&[], 0.1), 0);
    }
}
