use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use super::{make_world, need, pebble_mass, section, step_count, summary_line, template_in_place, Recorder, RunReport, ScenarioConfig};
use crate::contact::Wall;
use crate::dynamics::gravitational_energy;
use crate::error::Result;
use crate::forge::shapes::brick_pebbles;
use crate::forge::ClumpTemplate;
use crate::math::{Mat3, Vec3};

/// Least-squares line `y = slope·x + intercept` with its coefficient of
/// determination.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn linear_fit(x: &[f64], y: &[f64]) -> Option<LinearFit> {
    let n = x.len().min(y.len());
    if n < 2 {
        return None;
    }
    let (x, y) = (&x[..n], &y[..n]);
    let mx = x.iter().sum::<f64>() / n as f64;
    let my = y.iter().sum::<f64>() / n as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Some(LinearFit { slope, intercept: my - slope * mx, r2 })
}

/// A line of brick-shaped dominoes on a frictional floor, knocked over by a
/// spherical cue.
///
/// Domino `i` stands with its base on z = 0, centred at `x = i·spacing`,
/// with its thin side along x. The cue starts just in front of the first
/// domino at 80% of its height, moving along +x. A domino counts as toppled
/// once its tilt exceeds `topple_angle`. The steady window runs from the
/// third toppled domino to the third from last; the potential energy of the
/// dominoes (cue excluded) is fitted linearly over it. `dominoes.csv`
/// holds that potential energy and the toppled count over time.
pub fn run_domino(cfg: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    let d = section(&cfg.domino);
    need(d.count >= 6, || "domino.count must be at least 6".into())?;
    need(d.nx >= 1 && d.ny >= 1 && d.nz >= 2, || "domino bricks need nx, ny ≥ 1 and nz ≥ 2".into())?;
    let thick = 2.0 * d.radius * d.nx as f64;
    let width = 2.0 * d.radius * d.ny as f64;
    let height = 2.0 * d.radius * d.nz as f64;
    need(d.spacing > thick, || "domino.spacing must exceed the domino thickness".into())?;

    let brick = brick_pebbles(d.nx, d.ny, d.nz, d.radius);
    let (t, com, q) = template_in_place("domino", &brick, d.density)?;
    let up_body = q.transpose() * Vec3::Z;
    let mut w = make_world(cfg, pebble_mass(d.radius, d.density).min(pebble_mass(d.cue_radius, d.cue_density)))?;
    let ti = w.add_template(t);
    let cue = w.add_template(ClumpTemplate::sphere("cue", d.cue_radius, d.cue_density));
    w.add_wall(Wall::plane(Vec3::ZERO, Vec3::Z)?);
    let shift = Vec3::new(-0.5 * thick, -0.5 * width, 0.0);
    for i in 0..d.count {
        let pos = com + shift + Vec3::new(i as f64 * d.spacing, 0.0, 0.0);
        w.add_clump(ti, pos, q, Vec3::ZERO, Vec3::ZERO)?;
    }
    let cue_pos = Vec3::new(-0.5 * thick - 1.1 * d.cue_radius, 0.0, 0.8 * height);
    let cue_index = w.add_clump(cue, cue_pos, Mat3::IDENTITY, Vec3::new(d.cue_speed, 0.0, 0.0), Vec3::ZERO)?;
    w.initialize()?;

    let g = w.settings.gravity;
    let dt = w.settings.dt;
    let n = step_count(cfg.duration, dt);
    let domino_pe = |w: &crate::World| -> f64 {
        w.clumps().iter().enumerate().filter(|&(i, _)| i != cue_index).map(|(_, c)| gravitational_energy(c, g)).sum()
    };
    let mut rec = Recorder::create(cfg, dt)?;
    let mut log = BufWriter::new(File::create(cfg.output_dir.join("dominoes.csv"))?);
    writeln!(log, "time,E_grav_dominoes,toppled")?;
    let mut toppled: Vec<Option<f64>> = vec![None; d.count];
    let (mut ts, mut pe) = (vec![0.0], vec![domino_pe(&w)]);
    rec.sample(&w)?;
    writeln!(log, "{:e},{:e},0", 0.0, pe[0])?;
    let mut settle_after: Option<u64> = None;
    for k in 0..n {
        w.step()?;
        for (i, c) in w.clumps().iter().take(d.count).enumerate() {
            if toppled[i].is_none() && (c.orientation * up_body).z < d.topple_angle.cos() {
                toppled[i] = Some(w.time());
            }
        }
        if rec.sample(&w)?.is_some() {
            let e = domino_pe(&w);
            let count = toppled.iter().filter(|t| t.is_some()).count();
            writeln!(log, "{:e},{:e},{count}", w.time(), e)?;
            ts.push(w.time());
            pe.push(e);
        }
        // Stop a little after the last domino went over.
        match settle_after {
            None if toppled[d.count - 1].is_some() => settle_after = Some(k + n / 20),
            Some(end) if k >= end => break,
            _ => {}
        }
    }
    log.flush()?;

    let n_toppled = toppled.iter().filter(|t| t.is_some()).count();
    let window = match (toppled[2], toppled[d.count - 3]) {
        (Some(a), Some(b)) if b > a => Some((a, b)),
        _ => None,
    };
    let fit = window.and_then(|(a, b)| {
        let (x, y): (Vec<f64>, Vec<f64>) = ts.iter().zip(&pe).filter(|(t, _)| **t >= a && **t <= b).map(|(t, e)| (*t, *e)).unzip();
        linear_fit(&x, &y)
    });
    let pe_range = pe.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - pe.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut summary = vec![
        summary_line("cue_speed", d.cue_speed),
        summary_line("dt", dt),
        summary_line("toppled", n_toppled as f64),
        summary_line("window_start", window.map_or(f64::NAN, |w| w.0)),
        summary_line("window_end", window.map_or(f64::NAN, |w| w.1)),
        summary_line("slope", fit.map_or(f64::NAN, |f| f.slope)),
        summary_line("r2", fit.map_or(f64::NAN, |f| f.r2)),
        summary_line("wave_speed", window.map_or(f64::NAN, |(a, b)| (d.count - 5) as f64 * d.spacing / (b - a))),
        summary_line("e_grav_range", pe_range),
    ];
    for (i, t) in toppled.iter().enumerate() {
        summary.push(summary_line(&format!("topple_time_{i}"), t.unwrap_or(f64::NAN)));
    }
    rec.finish(cfg, started, w.steps(), summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fit_recovers_line() {
        let x: Vec<f64> = (0..20).map(|i| i as f64 * 0.1).collect();
        let y: Vec<f64> = x.iter().map(|x| -2.0 * x + 1.0).collect();
        let f = linear_fit(&x, &y).unwrap();
        assert!((f.slope + 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
        let noisy: Vec<f64> = y.iter().enumerate().map(|(i, y)| y + if i % 2 == 0 { 0.5 } else { -0.5 }).collect();
        assert!(linear_fit(&x, &noisy).unwrap().r2 < 0.9);
        assert!(linear_fit(&[1.0], &[1.0]).is_none());
        assert!(linear_fit(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }
}
