use std::fs::File;
use std::io::{BufWriter, Write};
use std::time::Instant;

use super::{make_world, need, pebble_mass, section, step_count, summary_line, template, Recorder, RunReport, ScenarioConfig};
use crate::error::Result;
use crate::forge::shapes::tbar_pebbles;
use crate::math::{Mat3, Vec3};

/// Torque-free rotation of a T-shaped clump.
///
/// The clump starts with its principal axes on the world axes, spinning at
/// `spin` about principal axis `axis` plus `perturbation · spin` about each
/// of the other two. A flip is a sign change of the projection of the spin
/// axis onto its initial world direction. Also writes `orientation.csv`
/// with the three body-axis projections over time.
pub fn run_tbar(cfg: &ScenarioConfig) -> Result<RunReport> {
    let started = Instant::now();
    let tb = section(&cfg.tbar);
    need((1..=3).contains(&tb.axis), || "tbar.axis must be 1, 2 or 3".into())?;
    need(tb.bar >= 2 && tb.stem >= 1, || "tbar needs bar ≥ 2 and stem ≥ 1".into())?;
    let t = template("tbar", &tbar_pebbles(tb.bar, tb.stem, tb.radius), tb.density)?;
    let mut w = make_world(cfg, pebble_mass(tb.radius, tb.density))?;
    let ti = w.add_template(t);
    let a = tb.axis - 1;
    let mut omega = Vec3::axis(a) * tb.spin;
    for i in (0..3).filter(|&i| i != a) {
        omega[i] = tb.perturbation * tb.spin;
    }
    w.add_clump(ti, Vec3::ZERO, Mat3::IDENTITY, Vec3::ZERO, omega)?;
    w.initialize()?;

    let dt = w.settings.dt;
    let n = step_count(cfg.duration, dt);
    let mut rec = Recorder::create(cfg, dt)?;
    let mut orient = BufWriter::new(File::create(cfg.output_dir.join("orientation.csv"))?);
    writeln!(orient, "time,p1,p2,p3")?;
    let stride = ((cfg.output_interval / dt).round() as u64).max(1);
    let write_orient = |f: &mut BufWriter<File>, time: f64, q: &Mat3| writeln!(f, "{},{},{},{}", time, q.m[0][0], q.m[1][1], q.m[2][2]);
    rec.sample(&w)?;
    write_orient(&mut orient, 0.0, &w.clumps()[0].orientation)?;

    let e0 = w.energy()?.rotational;
    let l0 = w.angular_momentum()?;
    let mut sign = 1.0;
    let mut flips: Vec<f64> = Vec::new();
    let (mut max_drift, mut max_l_drift): (f64, f64) = (0.0, 0.0);
    for _ in 0..n {
        w.step()?;
        rec.sample(&w)?;
        let q = w.clumps()[0].orientation;
        if w.steps() % stride == 0 {
            write_orient(&mut orient, w.time(), &q)?;
        }
        let p = q.m[a][a];
        if p * sign < 0.0 {
            sign = -sign;
            flips.push(w.time());
        }
        let e = w.energy()?.rotational;
        max_drift = max_drift.max((e - e0).abs() / e0);
        max_l_drift = max_l_drift.max((w.angular_momentum()? - l0).norm() / l0.norm());
    }
    orient.flush()?;
    let period = if flips.len() >= 2 {
        (flips[flips.len() - 1] - flips[0]) / (flips.len() - 1) as f64
    } else {
        0.0
    };
    let summary = vec![
        summary_line("axis", tb.axis as f64),
        summary_line("dt", dt),
        summary_line("flips", flips.len() as f64),
        summary_line("first_flip", flips.first().copied().unwrap_or(f64::NAN)),
        summary_line("flip_interval", period),
        summary_line("max_rot_energy_drift", max_drift),
        summary_line("max_angular_momentum_drift", max_l_drift),
    ];
    rec.finish(cfg, started, w.steps(), summary)
}
