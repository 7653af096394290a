//! Scenario drivers for the validation runs, their configuration and the
//! files they write.
//!
//! Every run writes `energy.csv` (one row per output interval) and
//! `summary.csv` (`key,value`) into the configured output directory,
//! truncating earlier results.

mod bench;
mod bounce;
pub mod config;
mod domino;
mod drum;
mod tbar;
mod tgas;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

pub use bench::{bench_grid, core_shell_pebbles};
pub use bounce::run_single_bounce;
pub use config::{
    BenchConfig, BounceConfig, BoxConfig, ContactConfig, DominoConfig, DrumConfig, GridConfig, IntegratorConfig,
    ScenarioConfig, ScenarioKind, TbarConfig, TgasConfig,
};
pub use domino::{linear_fit, run_domino, LinearFit};
pub use drum::run_drum;
pub use tbar::run_tbar;
pub use tgas::run_tgas;

use crate::boundary::PeriodicBox;
use crate::contact::Wall;
use crate::dynamics::{EnergyReport, IntegratorSettings};
use crate::error::{Error, Result};
use crate::forge::{align_principal, forge_template, inertia_from_pebbles, ClumpTemplate, InertiaMethod, PebbleSpec};
use crate::math::{eig_sym3, rotation_from_axes, Mat3, Vec3};
use crate::world::World;

/// Outcome of a scenario run.
#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub scenario: ScenarioKind,
    /// Wall-clock seconds.
    pub wall_time: f64,
    pub steps: u64,
    pub energy_csv: PathBuf,
    pub summary_csv: PathBuf,
    pub summary: Vec<(String, f64)>,
}

impl RunReport {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.summary.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
    }
}

/// Runs the driver selected by `cfg.scenario`.
pub fn run(cfg: &ScenarioConfig) -> Result<RunReport> {
    cfg.validate()?;
    match cfg.scenario {
        ScenarioKind::Bounce => run_single_bounce(cfg),
        ScenarioKind::Tbar => run_tbar(cfg),
        ScenarioKind::Tgas => run_tgas(cfg),
        ScenarioKind::Domino => run_domino(cfg),
        ScenarioKind::Drum => run_drum(cfg),
        ScenarioKind::BenchGrid => bench_grid(cfg),
    }
}

pub(crate) fn template(name: &str, pebbles: &[PebbleSpec], density: f64) -> Result<ClumpTemplate> {
    forge_template(name, pebbles, None, density, InertiaMethod::Pebbles)
}

/// Template for `pebbles` plus the pose that puts it back where the pebbles
/// were given: `(template, centre of mass, orientation)`.
pub(crate) fn template_in_place(name: &str, pebbles: &[PebbleSpec], density: f64) -> Result<(ClumpTemplate, Vec3, Mat3)> {
    let props = inertia_from_pebbles(pebbles, density)?;
    let eig = eig_sym3(&props.inertia.symmetrized())?;
    let q = rotation_from_axes(eig.axes[0], eig.axes[1], eig.axes[2])?;
    Ok((align_principal(name, density, &props, pebbles)?, props.com, q))
}

pub(crate) fn pebble_mass(radius: f64, density: f64) -> f64 {
    density * 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3)
}

/// An empty world with the config's contact model, grid and integrator.
/// Without an explicit step, `dt` is the contact time of the lightest pebble
/// divided by `steps_per_contact`.
pub(crate) fn make_world(cfg: &ScenarioConfig, lightest_pebble: f64) -> Result<World> {
    let model = cfg.contact.model();
    let dt = match cfg.integrator.dt {
        Some(dt) => dt,
        None => model.contact_time(lightest_pebble) / cfg.integrator.steps_per_contact,
    };
    let settings = IntegratorSettings {
        dt,
        omega_iterations: cfg.integrator.omega_iterations,
        gravity: Vec3::from_array(cfg.integrator.gravity),
    };
    let mut w = World::new(model, settings)?;
    w.max_levels = cfg.grid.max_levels;
    w.base_cell = cfg.grid.base_cell;
    w.ghost_margin = cfg.grid.ghost_margin;
    Ok(w)
}

/// Applies a box: periodic axes wrap, the others get a pair of walls.
pub(crate) fn apply_box(w: &mut World, b: &BoxConfig) -> Result<()> {
    let (lo, hi) = (b.min(), b.max());
    if b.periodic.iter().all(|p| !p) {
        w.add_wall(Wall::boxed(lo, hi)?);
        return Ok(());
    }
    w.set_periodic(PeriodicBox::new(lo, hi, b.periodic))?;
    for i in (0..3).filter(|&i| !b.periodic[i]) {
        let e = Vec3::axis(i);
        w.add_wall(Wall::plane(lo, e)?);
        w.add_wall(Wall::plane(hi, -e)?);
    }
    Ok(())
}

/// Writes energy rows and snapshots at fixed step strides.
pub(crate) struct Recorder {
    energy: BufWriter<File>,
    energy_path: PathBuf,
    energy_stride: u64,
    snapshot_dir: Option<PathBuf>,
    snapshot_stride: u64,
    pub rows: Vec<EnergyReport>,
}

fn stride(interval: f64, dt: f64) -> u64 {
    ((interval / dt).round() as u64).max(1)
}

impl Recorder {
    pub fn create(cfg: &ScenarioConfig, dt: f64) -> Result<Self> {
        let dir = &cfg.output_dir;
        std::fs::create_dir_all(dir)?;
        let energy_path = dir.join("energy.csv");
        let mut energy = BufWriter::new(File::create(&energy_path)?);
        writeln!(energy, "{}", EnergyReport::CSV_HEADER)?;
        let snapshot_dir = match cfg.snapshot_interval {
            Some(_) => {
                let d = dir.join("snapshots");
                if d.exists() {
                    std::fs::remove_dir_all(&d)?;
                }
                std::fs::create_dir_all(&d)?;
                Some(d)
            }
            None => None,
        };
        Ok(Recorder {
            energy,
            energy_path,
            energy_stride: stride(cfg.output_interval, dt),
            snapshot_dir,
            snapshot_stride: cfg.snapshot_interval.map_or(u64::MAX, |s| stride(s, dt)),
            rows: Vec::new(),
        })
    }

    /// Records the current state if this step is on an output stride.
    /// Returns the energy row when one was written.
    pub fn sample(&mut self, w: &World) -> Result<Option<EnergyReport>> {
        let n = w.steps();
        if let Some(d) = &self.snapshot_dir {
            if n % self.snapshot_stride == 0 {
                w.write_snapshot(&d.join(format!("snap_{:06}.csv", n / self.snapshot_stride)))?;
            }
        }
        if n % self.energy_stride != 0 {
            return Ok(None);
        }
        let e = w.energy()?;
        writeln!(self.energy, "{}", e.csv_row())?;
        self.rows.push(e);
        Ok(Some(e))
    }

    /// Flushes the energy file and writes the summary, closing the run.
    pub fn finish(
        mut self,
        cfg: &ScenarioConfig,
        started: Instant,
        steps: u64,
        summary: Vec<(String, f64)>,
    ) -> Result<RunReport> {
        self.energy.flush()?;
        let summary_csv = cfg.output_dir.join("summary.csv");
        let mut f = BufWriter::new(File::create(&summary_csv)?);
        writeln!(f, "key,value")?;
        for (k, v) in &summary {
            writeln!(f, "{k},{v}")?;
        }
        f.flush()?;
        Ok(RunReport {
            scenario: cfg.scenario,
            wall_time: started.elapsed().as_secs_f64(),
            steps,
            energy_csv: self.energy_path,
            summary_csv,
            summary,
        })
    }
}

/// Number of steps covering `duration`.
pub(crate) fn step_count(duration: f64, dt: f64) -> u64 {
    (duration / dt).round().max(1.0) as u64
}

/// Mean of `f` over the second half of `rows`.
pub(crate) fn late_mean(rows: &[EnergyReport], f: impl Fn(&EnergyReport) -> f64) -> f64 {
    let tail = &rows[rows.len() / 2..];
    tail.iter().map(f).sum::<f64>() / tail.len().max(1) as f64
}

pub(crate) fn summary_line(k: &str, v: f64) -> (String, f64) {
    (k.to_string(), v)
}

pub(crate) fn section<T: Default + Copy>(s: &Option<T>) -> T {
    s.unwrap_or_default()
}

pub(crate) fn need(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Config(msg()))
    }
}

/// Reads `path` rows back, mainly for tests and examples.
pub fn read_energy_csv(path: &Path) -> Result<Vec<EnergyReport>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate().skip(1) {
        let v: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::Parse { path: path.to_path_buf(), line: i + 1, message: e.to_string() })?;
        if v.len() != 5 {
            return Err(Error::Parse { path: path.to_path_buf(), line: i + 1, message: "expected 5 columns".into() });
        }
        out.push(EnergyReport { time: v[0], translational: v[1], rotational: v[2], gravitational: v[3], elastic: v[4] });
    }
    Ok(out)
}
