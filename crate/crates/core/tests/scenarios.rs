use std::path::{Path, PathBuf};

use clumpdem::scenario::{self, read_energy_csv, ScenarioConfig, ScenarioKind};

fn shipped(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn config(name: &str, out: &Path) -> ScenarioConfig {
    let mut c = ScenarioConfig::load(shipped(name)).unwrap();
    c.output_dir = out.to_path_buf();
    c
}

#[test]
fn shipped_configs_load_and_round_trip() {
    let dir = shipped("");
    let mut seen = 0;
    for entry in std::fs::read_dir(&dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let c = ScenarioConfig::load(&path).unwrap();
            assert_eq!(ScenarioConfig::parse(&c.dump().unwrap()).unwrap(), c, "{}", path.display());
            seen += 1;
        }
    }
    assert_eq!(seen, 7);
}

#[test]
fn same_seed_same_bytes_and_files_truncate() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |seed: u64, dir: &str| {
        let mut c = config("tgas.toml", &tmp.path().join(dir));
        c.seed = seed;
        c.duration = 0.3;
        c.tgas.as_mut().unwrap().count = 20;
        scenario::run(&c).unwrap();
        std::fs::read(tmp.path().join(dir).join("energy.csv")).unwrap()
    };
    let a = run(4, "a");
    let b = run(4, "b");
    assert_eq!(a, b);
    assert_ne!(a, run(5, "c"));
    assert_eq!(run(4, "a"), a);
}

#[test]
fn resting_rod_stays_put() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = config("bounce_1t1r.toml", tmp.path());
    c.duration = 1.0;
    c.bounce.as_mut().unwrap().speed = 0.0;
    let r = scenario::run(&c).unwrap();
    assert_eq!(r.get("collisions"), Some(0.0));
    for e in read_energy_csv(&r.energy_csv).unwrap() {
        assert_eq!(e.total(), 0.0);
    }
}

#[test]
fn extreme_axes_do_not_flip_and_flips_survive_a_finer_step() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |axis: usize, dt: f64| {
        let mut c = config("tbar.toml", &tmp.path().join(format!("{axis}_{dt}")));
        c.duration = 40.0;
        c.integrator.dt = Some(dt);
        c.tbar.as_mut().unwrap().axis = axis;
        scenario::run(&c).unwrap().get("flips").unwrap()
    };
    assert_eq!(run(1, 1e-3), 0.0);
    assert_eq!(run(3, 1e-3), 0.0);
    let coarse = run(2, 1e-3);
    assert!(coarse >= 2.0);
    assert_eq!(run(2, 5e-4), coarse);
}

#[test]
fn dominoes_stand_without_a_cue() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = config("domino.toml", tmp.path());
    c.duration = 0.5;
    let d = c.domino.as_mut().unwrap();
    d.cue_speed = 0.0;
    d.count = 8;
    let r = scenario::run(&c).unwrap();
    assert_eq!(r.get("toppled"), Some(0.0));
    let rows = std::fs::read_to_string(tmp.path().join("dominoes.csv")).unwrap();
    let pe: Vec<f64> = rows.lines().skip(1).map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
    let spread = pe.iter().cloned().fold(f64::MIN, f64::max) - pe.iter().cloned().fold(f64::MAX, f64::min);
    assert!(spread < 1e-2 * pe[0].abs(), "potential energy moved by {spread} of {}", pe[0]);
}

#[test]
fn monodisperse_grid_depth_changes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = config("bench_grid.toml", tmp.path());
    let b = c.bench.as_mut().unwrap();
    b.radius_ratio = 1.0;
    b.surface_pebbles = 30;
    b.steps = 50;
    let r = scenario::run(&c).unwrap();
    assert_eq!(r.get("contacts_identical"), Some(1.0));
    assert!(r.get("mean_contacts").unwrap() > 0.0);
    let s = r.get("speedup").unwrap();
    assert!((0.5..2.0).contains(&s), "speedup {s}");
}

#[test]
fn still_drum_settles() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = config("drum.toml", tmp.path());
    c.duration = 1.5;
    let d = c.drum.as_mut().unwrap();
    d.omega = 0.0;
    d.count = 15;
    let r = scenario::run(&c).unwrap();
    assert_eq!(r.scenario, ScenarioKind::Drum);
    let rows = read_energy_csv(&r.energy_csv).unwrap();
    let peak = rows.iter().map(|e| e.kinetic()).fold(0.0, f64::max);
    let last = rows.last().unwrap();
    assert!(last.kinetic() < 1e-2 * peak, "kinetic {} of peak {peak}", last.kinetic());
    assert!(last.gravitational < rows[0].gravitational);
}

#[test]
fn summary_file_matches_report() {
    let tmp = tempfile::tempdir().unwrap();
    let mut c = config("tbar.toml", tmp.path());
    c.duration = 1.0;
    let r = scenario::run(&c).unwrap();
    let text = std::fs::read_to_string(&r.summary_csv).unwrap();
    assert!(text.starts_with("key,value\n"));
    assert_eq!(text.lines().count(), r.summary.len() + 1);
    assert_eq!(read_energy_csv(&r.energy_csv).unwrap().len(), 101);
}
