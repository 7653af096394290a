use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::contact::ContactModel;
use crate::error::{Error, Result};
use crate::math::Vec3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Bounce,
    Tbar,
    Tgas,
    Domino,
    Drum,
    BenchGrid,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::Bounce => "bounce",
            ScenarioKind::Tbar => "tbar",
            ScenarioKind::Tgas => "tgas",
            ScenarioKind::Domino => "domino",
            ScenarioKind::Drum => "drum",
            ScenarioKind::BenchGrid => "bench_grid",
        }
    }
}

/// A scenario run description, read from TOML.
///
/// Top-level keys come first, then one table per concern. Tables that are
/// left out take their defaults; unknown keys anywhere are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    #[serde(default)]
    pub seed: u64,
    /// Simulated time in seconds.
    pub duration: f64,
    #[serde(default = "default_output_interval")]
    pub output_interval: f64,
    /// Pebble snapshots are written at this interval when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snapshot_interval: Option<f64>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Clump template files, for drivers that take user shapes.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub templates: Vec<PathBuf>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub domain: Option<BoxConfig>,
    #[serde(default)]
    pub contact: ContactConfig,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bounce: Option<BounceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tbar: Option<TbarConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tgas: Option<TgasConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domino: Option<DominoConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drum: Option<DrumConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bench: Option<BenchConfig>,
}

fn default_output_interval() -> f64 {
    0.01
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxConfig {
    pub min: [f64; 3],
    pub max: [f64; 3],
    #[serde(default)]
    pub periodic: [bool; 3],
}

impl BoxConfig {
    pub fn cube(half: f64, periodic: bool) -> Self {
        BoxConfig { min: [-half; 3], max: [half; 3], periodic: [periodic; 3] }
    }

    pub fn min(&self) -> Vec3 {
        Vec3::from_array(self.min)
    }

    pub fn max(&self) -> Vec3 {
        Vec3::from_array(self.max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ContactConfig {
    pub kn: f64,
    pub gamma_n: f64,
    pub kt: f64,
    pub gamma_t: f64,
    pub mu: f64,
}

impl Default for ContactConfig {
    fn default() -> Self {
        ContactConfig { kn: 1e5, gamma_n: 0.0, kt: 0.0, gamma_t: 0.0, mu: 0.0 }
    }
}

impl ContactConfig {
    pub fn model(&self) -> ContactModel {
        ContactModel { kn: self.kn, gamma_n: self.gamma_n, kt: self.kt, gamma_t: self.gamma_t, mu: self.mu }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorConfig {
    /// Fixed step; when absent the driver picks a fraction of the shortest
    /// pebble contact time.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    /// Steps per shortest contact time when `dt` is absent.
    pub steps_per_contact: f64,
    pub omega_iterations: usize,
    pub gravity: [f64; 3],
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        IntegratorConfig { dt: None, steps_per_contact: 50.0, omega_iterations: 3, gravity: [0.0; 3] }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub max_levels: usize,
    pub base_cell: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ghost_margin: Option<f64>,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { max_levels: 3, base_cell: 0.0, ghost_margin: None }
    }
}

/// Rod between elastic walls. `translational_dof` is 1 (motion along y
/// only) or 2 (in the xy plane); rotation is always about z.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BounceConfig {
    pub translational_dof: u8,
    pub pebbles: usize,
    pub radius: f64,
    pub density: f64,
    pub speed: f64,
    /// Initial angle of the rod against the x axis, in radians.
    pub tilt: f64,
    /// Direction of the initial velocity against the y axis, in radians,
    /// for the two-dimensional case.
    pub heading: f64,
}

impl Default for BounceConfig {
    fn default() -> Self {
        BounceConfig { translational_dof: 1, pebbles: 5, radius: 0.05, density: 1000.0, speed: 1.0, tilt: 0.1, heading: 0.6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TbarConfig {
    pub bar: usize,
    pub stem: usize,
    pub radius: f64,
    pub density: f64,
    /// Principal axis (1, 2 or 3) to spin about.
    pub axis: usize,
    /// Spin rate in rad/s.
    pub spin: f64,
    /// Relative angular velocity added along the other two axes.
    pub perturbation: f64,
}

impl Default for TbarConfig {
    fn default() -> Self {
        TbarConfig { bar: 5, stem: 4, radius: 0.05, density: 1000.0, axis: 2, spin: 5.0, perturbation: 1e-3 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TgasConfig {
    pub count: usize,
    pub bar: usize,
    pub stem: usize,
    pub radius: f64,
    pub density: f64,
    /// RMS speed per velocity component.
    pub speed: f64,
    /// Used to size the periodic cube when no box is given.
    pub packing_fraction: f64,
}

impl Default for TgasConfig {
    fn default() -> Self {
        TgasConfig { count: 60, bar: 3, stem: 2, radius: 0.05, density: 1000.0, speed: 1.0, packing_fraction: 0.15 }
    }
}

/// Dominoes are `nx × ny × nz` pebble bricks standing on the z = 0 floor,
/// spaced along x; a spherical cue hits the first one near its top.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DominoConfig {
    pub count: usize,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    pub radius: f64,
    pub density: f64,
    /// Distance between neighbouring domino centres.
    pub spacing: f64,
    pub cue_speed: f64,
    pub cue_radius: f64,
    pub cue_density: f64,
    /// Tilt in radians at which a domino counts as toppled.
    pub topple_angle: f64,
}

impl Default for DominoConfig {
    fn default() -> Self {
        DominoConfig {
            count: 20,
            nx: 2,
            ny: 4,
            nz: 10,
            radius: 0.005,
            density: 1000.0,
            spacing: 0.05,
            cue_speed: 0.5,
            cue_radius: 0.008,
            cue_density: 4000.0,
            topple_angle: 0.5,
        }
    }
}

/// Horizontal drum along x, rotating about its axis, filled with clumps of
/// the first template file.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DrumConfig {
    pub radius: f64,
    pub length: f64,
    /// Angular velocity in rad/s.
    pub omega: f64,
    pub count: usize,
}

impl Default for DrumConfig {
    fn default() -> Self {
        DrumConfig { radius: 0.1, length: 0.05, omega: 1.0, count: 27 }
    }
}

/// Clumps of one large core pebble covered by small surface pebbles,
/// arranged on a lattice and stepped once per grid depth.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchConfig {
    pub per_side: usize,
    pub core_radius: f64,
    pub surface_pebbles: usize,
    /// Core radius over surface pebble radius; 1 gives a monodisperse scene.
    pub radius_ratio: f64,
    pub speed: f64,
    pub steps: usize,
    pub sample_every: usize,
    /// Grid depths to compare.
    pub levels: [usize; 2],
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            per_side: 3,
            core_radius: 1.0,
            surface_pebbles: 190,
            radius_ratio: 30.0,
            speed: 1.0,
            steps: 200,
            sample_every: 20,
            levels: [1, 3],
        }
    }
}

impl ScenarioConfig {
    /// Bare config for `kind` with every table at its defaults.
    pub fn new(kind: ScenarioKind, duration: f64) -> Self {
        ScenarioConfig {
            scenario: kind,
            seed: 0,
            duration,
            output_interval: default_output_interval(),
            snapshot_interval: None,
            output_dir: default_output_dir(),
            templates: Vec::new(),
            domain: None,
            contact: ContactConfig::default(),
            integrator: IntegratorConfig::default(),
            grid: GridConfig::default(),
            bounce: None,
            tbar: None,
            tgas: None,
            domino: None,
            drum: None,
            bench: None,
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }

    /// Reads and validates a config. Relative template paths resolve
    /// against the config file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::parse(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            e => e,
        })?;
        let base = path.parent().unwrap_or(Path::new(""));
        for t in &mut cfg.templates {
            if t.is_relative() {
                *t = base.join(&*t);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn dump(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.duration > 0.0) {
            return bad(format!("duration must be positive, got {}", self.duration));
        }
        if !(self.output_interval > 0.0) {
            return bad(format!("output_interval must be positive, got {}", self.output_interval));
        }
        if let Some(s) = self.snapshot_interval {
            if !(s > 0.0) {
                return bad(format!("snapshot_interval must be positive, got {s}"));
            }
        }
        for t in &self.templates {
            if !t.is_file() {
                return bad(format!("template file {} does not exist", t.display()));
            }
        }
        if let Some(b) = &self.domain {
            if (0..3).any(|i| !(b.max[i] > b.min[i])) {
                return bad("box needs max > min on every axis".into());
            }
        }
        self.contact.model().validate().map_err(|e| Error::Config(e.to_string()))?;
        if let Some(dt) = self.integrator.dt {
            if !(dt > 0.0) {
                return bad(format!("integrator.dt must be positive, got {dt}"));
            }
        }
        if !(self.integrator.steps_per_contact >= 1.0) {
            return bad("integrator.steps_per_contact must be at least 1".into());
        }
        if !(1..=10).contains(&self.integrator.omega_iterations) {
            return bad("integrator.omega_iterations must be in 1..=10".into());
        }
        if self.grid.max_levels == 0 {
            return bad("grid.max_levels must be at least 1".into());
        }
        if self.scenario == ScenarioKind::Drum && self.templates.is_empty() {
            return bad("the drum scenario needs a template file".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = ScenarioConfig::parse("scenario = \"tbar\"\nduration = 10.0\n").unwrap();
        assert_eq!(c.scenario, ScenarioKind::Tbar);
        assert_eq!(c.integrator.omega_iterations, 3);
        assert_eq!(c.grid.max_levels, 3);
        assert_eq!(c.output_interval, 0.01);
        assert!(c.tbar.is_none());
        c.validate().unwrap();
    }

    #[test]
    fn misspelled_key_is_named() {
        let e = ScenarioConfig::parse("scenario = \"tbar\"\nduration = 1.0\n[contact]\nkn = 1.0\nmuu = 0.5\n").unwrap_err();
        assert!(e.to_string().contains("muu"), "{e}");
        let e = ScenarioConfig::parse("scenario = \"tbar\"\nduraton = 1.0\n").unwrap_err();
        assert!(e.to_string().contains("duraton"), "{e}");
    }

    #[test]
    fn type_mismatch_and_bad_values() {
        assert!(ScenarioConfig::parse("scenario = \"tbar\"\nduration = \"long\"\n").is_err());
        assert!(ScenarioConfig::parse("scenario = \"pinball\"\nduration = 1.0\n").is_err());
        let c = ScenarioConfig::parse("scenario = \"tbar\"\nduration = -1.0\n").unwrap();
        assert!(c.validate().is_err());
        let mut c = ScenarioConfig::new(ScenarioKind::Drum, 1.0);
        assert!(c.validate().is_err());
        c.templates.push("no/such/file.clump".into());
        assert!(c.validate().is_err());
    }

    #[test]
    fn dump_load_round_trip() {
        let mut c = ScenarioConfig::new(ScenarioKind::Domino, 3.0);
        c.seed = 7;
        c.domain = Some(BoxConfig::cube(1.0, true));
        c.integrator.dt = Some(1e-5);
        c.integrator.gravity = [0.0, 0.0, -9.81];
        c.contact.mu = 0.5;
        c.domino = Some(DominoConfig { cue_speed: 2.0, ..Default::default() });
        c.tbar = Some(TbarConfig::default());
        let text = c.dump().unwrap();
        assert_eq!(ScenarioConfig::parse(&text).unwrap(), c);
    }

    #[test]
    fn load_reports_missing_file() {
        let e = ScenarioConfig::load("does/not/exist.toml").unwrap_err();
        assert!(e.to_string().contains("exist.toml"));
    }
}
