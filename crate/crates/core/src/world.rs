//! The simulated system: clumps, their pebbles, walls and an optional
//! periodic box, advanced by a fixed-step pipeline.
//!
//! Each step rotates every clump with the torque of the previous force
//! evaluation, half-kicks and drifts the centres of mass, re-derives pebble
//! positions, evaluates contacts and closes with the second half kick.
//! Contacts are processed in a canonical order so results do not depend on
//! how the broad phase enumerates pairs.

use std::io::Write;
use std::ops::Range;
use std::path::Path;

use rustc_hash::FxHashMap;

use crate::boundary::{ghost_pebbles, PeriodicBox};
use crate::contact::{contact_force, narrow_phase_pair, Contact, ContactKey, ContactKind, ContactModel, HGrid, Pebble, Wall};
use crate::dynamics::{
    gravitational_energy, integrate_rotation, rotational_energy, stagger_omega, synchronized_omega,
    translational_energy, verlet_first_half, verlet_second_half, ClumpInstance, EnergyReport, IntegratorSettings,
};
use crate::error::{Error, Result};
use crate::forge::ClumpTemplate;
use crate::math::{Mat3, Vec3};

#[derive(Clone, Debug)]
pub struct World {
    pub model: ContactModel,
    pub settings: IntegratorSettings,
    pub max_levels: usize,
    /// Lower bound on the coarsest grid cell.
    pub base_cell: f64,
    /// Extra ghost distance beyond `r + r_max`; `None` uses a tenth of the
    /// largest pebble radius.
    pub ghost_margin: Option<f64>,
    templates: Vec<ClumpTemplate>,
    clumps: Vec<ClumpInstance>,
    clump_pebbles: Vec<Range<usize>>,
    pebbles: Vec<Pebble>,
    offsets: Vec<Vec3>,
    levers: Vec<Vec3>,
    walls: Vec<Wall>,
    boundary: Option<PeriodicBox>,
    time: f64,
    steps: u64,
    started: bool,
    grid: HGrid,
    detect: Vec<Pebble>,
    contacts: Vec<Contact>,
    history: FxHashMap<ContactKey, Vec3>,
}

impl World {
    pub fn new(model: ContactModel, settings: IntegratorSettings) -> Result<Self> {
        model.validate()?;
        settings.validate()?;
        Ok(World {
            model,
            settings,
            max_levels: 3,
            base_cell: 0.0,
            ghost_margin: None,
            templates: Vec::new(),
            clumps: Vec::new(),
            clump_pebbles: Vec::new(),
            pebbles: Vec::new(),
            offsets: Vec::new(),
            levers: Vec::new(),
            walls: Vec::new(),
            boundary: None,
            time: 0.0,
            steps: 0,
            started: false,
            grid: HGrid::default(),
            detect: Vec::new(),
            contacts: Vec::new(),
            history: FxHashMap::default(),
        })
    }

    pub fn add_template(&mut self, t: ClumpTemplate) -> usize {
        self.templates.push(t);
        self.templates.len() - 1
    }

    pub fn templates(&self) -> &[ClumpTemplate] {
        &self.templates
    }

    pub fn add_clump(&mut self, template: usize, position: Vec3, orientation: Mat3, velocity: Vec3, omega: Vec3) -> Result<usize> {
        let t = self
            .templates
            .get(template)
            .ok_or_else(|| Error::InvalidInput(format!("no template with index {template}")))?;
        let mut c = ClumpInstance::new(template, t, position, orientation);
        c.velocity = velocity;
        c.omega = omega;
        self.add_instance(c)
    }

    /// Adds a clump built elsewhere, e.g. by random placement.
    pub fn add_instance(&mut self, c: ClumpInstance) -> Result<usize> {
        if self.started {
            return Err(Error::InvalidInput("clumps must be added before the first step".into()));
        }
        let t = self
            .templates
            .get(c.template)
            .ok_or_else(|| Error::InvalidInput(format!("no template with index {}", c.template)))?;
        if c.orientation.orthonormality_error() > 1e-8 || c.orientation.determinant() < 0.0 {
            return Err(Error::InvalidInput("clump orientation must be a proper rotation".into()));
        }
        let ci = self.clumps.len();
        let start = self.pebbles.len();
        for p in &t.pebbles {
            let id = self.pebbles.len();
            self.pebbles.push(Pebble::new(id, Some(ci), Vec3::ZERO, p.radius));
            self.offsets.push(p.center);
            self.levers.push(Vec3::ZERO);
        }
        self.clump_pebbles.push(start..self.pebbles.len());
        self.clumps.push(c);
        self.update_pebbles();
        Ok(ci)
    }

    pub fn add_wall(&mut self, w: Wall) {
        self.walls.push(w);
    }

    pub fn walls(&self) -> &[Wall] {
        &self.walls
    }

    pub fn set_periodic(&mut self, boundary: PeriodicBox) -> Result<()> {
        boundary.validate()?;
        self.boundary = Some(boundary);
        for c in &mut self.clumps {
            c.position = boundary.wrap(c.position);
        }
        self.update_pebbles();
        Ok(())
    }

    pub fn boundary(&self) -> Option<&PeriodicBox> {
        self.boundary.as_ref()
    }

    pub fn clumps(&self) -> &[ClumpInstance] {
        &self.clumps
    }

    /// Direct access to clump state. Changing positions or velocities after
    /// the first step is allowed; pebbles follow on the next step.
    pub fn clumps_mut(&mut self) -> &mut [ClumpInstance] {
        &mut self.clumps
    }

    pub fn pebbles(&self) -> &[Pebble] {
        &self.pebbles
    }

    pub fn pebble_range(&self, clump: usize) -> Range<usize> {
        self.clump_pebbles[clump].clone()
    }

    /// Contacts of the last force evaluation, sorted by key.
    pub fn contacts(&self) -> &[Contact] {
        &self.contacts
    }

    /// Pebble pairs in contact at the last force evaluation.
    pub fn contact_pairs(&self) -> Vec<(usize, usize)> {
        self.contacts
            .iter()
            .filter(|c| c.key.kind == ContactKind::Pebble)
            .map(|c| (c.key.a, c.key.b))
            .collect()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn min_pebble_mass(&self) -> f64 {
        self.clumps
            .iter()
            .map(|c| {
                let t = &self.templates[c.template];
                t.density * 4.0 / 3.0 * std::f64::consts::PI * t.min_radius().powi(3)
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Recomputes pebble centres and velocities from clump states.
    pub fn update_pebbles(&mut self) {
        for (ci, c) in self.clumps.iter().enumerate() {
            for k in self.clump_pebbles[ci].clone() {
                let lever = c.orientation * self.offsets[k];
                let x = c.position + lever;
                self.pebbles[k].center = match &self.boundary {
                    Some(b) => b.wrap(x),
                    None => x,
                };
                self.pebbles[k].velocity = c.point_velocity(lever);
                self.levers[k] = lever;
            }
        }
    }

    fn detect_contacts(&mut self) -> Result<()> {
        self.detect.clear();
        self.detect.extend_from_slice(&self.pebbles);
        if let Some(b) = &self.boundary {
            let r_max = self.pebbles.iter().map(|p| p.radius).fold(0.0, f64::max);
            let margin = self.ghost_margin.unwrap_or(0.1 * r_max);
            self.detect.extend(ghost_pebbles(&self.pebbles, b, margin));
        }
        self.grid.rebuild(&self.detect, self.max_levels, self.base_cell);

        self.contacts.clear();
        let mut failure = None;
        let (pebbles, boundary, contacts) = (&self.pebbles, &self.boundary, &mut self.contacts);
        self.grid.for_each_candidate(&self.detect, |i, j| {
            let (pa, pb) = (self.detect[i].primary(), self.detect[j].primary());
            if pa == pb {
                return;
            }
            let (a, b) = (&pebbles[pa], &pebbles[pb]);
            let delta = match boundary {
                Some(bx) => bx.min_image(a.center - b.center),
                None => a.center - b.center,
            };
            match narrow_phase_pair(a, b, delta) {
                Ok(Some(c)) => contacts.push(c),
                Ok(None) => {}
                Err(e) => failure = Some(e),
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        for p in &self.pebbles {
            for (w, wall) in self.walls.iter().enumerate() {
                wall.contacts(w, p, &mut self.contacts);
            }
        }
        self.contacts.sort_unstable_by_key(|c| c.key);
        self.contacts.dedup_by_key(|c| c.key);
        Ok(())
    }

    /// Evaluates all contact forces and gravity at the current state.
    pub fn compute_forces(&mut self) -> Result<()> {
        let g = self.settings.gravity;
        for c in &mut self.clumps {
            c.force = g * c.mass;
            c.torque = Vec3::ZERO;
        }
        self.detect_contacts()?;

        let dt = self.settings.dt;
        let mut history = FxHashMap::with_capacity_and_hasher(self.contacts.len(), Default::default());
        for c in &mut self.contacts {
            c.spring = self.history.get(&c.key).copied().unwrap_or(Vec3::ZERO);
            let a = &self.pebbles[c.key.a];
            let ca = a.clump.expect("world pebbles belong to clumps");
            let n = c.normal;
            let spring = match c.key.kind {
                ContactKind::Pebble => {
                    let b = &self.pebbles[c.key.b];
                    let cb = b.clump.expect("world pebbles belong to clumps");
                    let la = self.levers[c.key.a] - n * (a.radius - 0.5 * c.overlap);
                    let lb = self.levers[c.key.b] + n * (b.radius - 0.5 * c.overlap);
                    let rel = self.clumps[ca].point_velocity(la) - self.clumps[cb].point_velocity(lb);
                    let (f, s) = contact_force(c, &self.model, rel, dt);
                    self.clumps[ca].apply(la, f);
                    self.clumps[cb].apply(lb, -f);
                    s
                }
                ContactKind::Wall { .. } => {
                    let la = self.levers[c.key.a] - n * (a.radius - c.overlap);
                    let rel = self.clumps[ca].point_velocity(la) - self.walls[c.key.b].velocity_at(c.point);
                    let (f, s) = contact_force(c, &self.model, rel, dt);
                    self.clumps[ca].apply(la, f);
                    s
                }
            };
            c.spring = spring;
            if spring != Vec3::ZERO {
                history.insert(c.key, spring);
            }
        }
        self.history = history;
        Ok(())
    }

    /// Evaluates initial forces and staggers angular velocities. Called by
    /// the first [`World::step`]; call it earlier to report initial energies.
    pub fn initialize(&mut self) -> Result<()> {
        if self.started {
            return Ok(());
        }
        self.update_pebbles();
        self.compute_forces()?;
        for c in &mut self.clumps {
            stagger_omega(c, self.settings.dt)?;
        }
        self.started = true;
        Ok(())
    }

    pub fn step(&mut self) -> Result<()> {
        self.initialize()?;
        let dt = self.settings.dt;
        for c in &mut self.clumps {
            integrate_rotation(c, dt, self.settings.omega_iterations)?;
            verlet_first_half(c, dt);
            if let Some(b) = &self.boundary {
                c.position = b.wrap(c.position);
            }
        }
        self.update_pebbles();
        self.compute_forces()?;
        for c in &mut self.clumps {
            verlet_second_half(c, dt);
        }
        self.time += dt;
        self.steps += 1;
        Ok(())
    }

    /// Angular velocity of clump `i` at the current time.
    pub fn omega_now(&self, i: usize) -> Result<Vec3> {
        let c = &self.clumps[i];
        if self.started {
            synchronized_omega(c, self.settings.dt, self.settings.omega_iterations)
        } else {
            Ok(c.omega)
        }
    }

    pub fn energy(&self) -> Result<EnergyReport> {
        let mut e = EnergyReport { time: self.time, ..Default::default() };
        for (i, c) in self.clumps.iter().enumerate() {
            e.translational += translational_energy(c);
            e.rotational += rotational_energy(c, self.omega_now(i)?);
            e.gravitational += gravitational_energy(c, self.settings.gravity);
        }
        e.elastic = self.contacts.iter().map(|c| self.model.elastic_energy(c)).fold(0.0, |s, e| s + e);
        Ok(e)
    }

    pub fn linear_momentum(&self) -> Vec3 {
        self.clumps.iter().map(|c| c.velocity * c.mass).sum()
    }

    /// Angular momentum about the origin (spin part only in periodic boxes).
    pub fn angular_momentum(&self) -> Result<Vec3> {
        let mut l = Vec3::ZERO;
        for (i, c) in self.clumps.iter().enumerate() {
            l += c.inertia_world() * self.omega_now(i)?;
            if self.boundary.is_none() {
                l += c.position.cross(c.velocity * c.mass);
            }
        }
        Ok(l)
    }

    /// Writes the pebble snapshot `id,clump,x,y,z,r`.
    pub fn write_snapshot(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "id,clump,x,y,z,r")?;
        for p in &self.pebbles {
            writeln!(f, "{},{},{},{},{},{}", p.id, p.clump.unwrap_or(usize::MAX), p.center.x, p.center.y, p.center.z, p.radius)?;
        }
        f.flush()?;
        Ok(())
    }
}
