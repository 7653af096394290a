//! Principal-axis alignment and the clump template file format.
//!
//! Template files are plain text with two sections:
//!
//! ```text
//! # comment
//! [properties]
//! name = rod
//! density = 1000
//! mass = 2.617993877991494
//! inertia_xx = ...
//! inertia_yy = ...
//! inertia_zz = ...
//! inertia_xy = 0
//! inertia_xz = 0
//! inertia_yz = 0
//! [pebbles]
//! x,y,z,r
//! ...
//! ```
//!
//! Inertia entries are about the centre of mass in the body frame. A
//! template produced by [`align_principal`] has zero products of inertia;
//! files with non-zero products are rejected on load.

use std::fs;
use std::path::Path;

use super::mass::MassProperties;
use super::pebbles::{parse_pebbles, PebbleSpec};
use crate::error::{Error, Result};
use crate::math::{eig_sym3, rotation_from_axes, Mat3, Vec3};

/// Immutable clump recipe in its principal body frame.
#[derive(Clone, Debug, PartialEq)]
pub struct ClumpTemplate {
    pub name: String,
    pub density: f64,
    pub mass: f64,
    /// Principal moments about the centre of mass, descending.
    pub principal_moments: Vec3,
    /// Pebbles relative to the centre of mass, in the principal frame.
    pub pebbles: Vec<PebbleSpec>,
}

impl ClumpTemplate {
    pub fn inertia_body(&self) -> Mat3 {
        Mat3::diag(self.principal_moments)
    }

    pub fn max_radius(&self) -> f64 {
        self.pebbles.iter().map(|p| p.radius).fold(0.0, f64::max)
    }

    pub fn min_radius(&self) -> f64 {
        self.pebbles.iter().map(|p| p.radius).fold(f64::INFINITY, f64::min)
    }

    /// Largest distance from the centre of mass to a pebble surface.
    pub fn bounding_radius(&self) -> f64 {
        self.pebbles.iter().map(|p| p.center.norm() + p.radius).fold(0.0, f64::max)
    }

    /// A single sphere as a one-pebble template.
    pub fn sphere(name: &str, radius: f64, density: f64) -> Self {
        let mass = density * 4.0 / 3.0 * std::f64::consts::PI * radius.powi(3);
        ClumpTemplate {
            name: name.into(),
            density,
            mass,
            principal_moments: Vec3::splat(0.4 * mass * radius * radius),
            pebbles: vec![PebbleSpec::new(Vec3::ZERO, radius)],
        }
    }

    pub fn to_text(&self) -> String {
        let i = self.principal_moments;
        let mut s = String::from("# clump template: inertia about the centre of mass, principal frame\n");
        s.push_str("[properties]\n");
        s.push_str(&format!("name = {}\n", self.name));
        s.push_str(&format!("density = {}\n", self.density));
        s.push_str(&format!("mass = {}\n", self.mass));
        s.push_str(&format!("inertia_xx = {}\ninertia_yy = {}\ninertia_zz = {}\n", i.x, i.y, i.z));
        s.push_str("inertia_xy = 0\ninertia_xz = 0\ninertia_yz = 0\n");
        s.push_str("[pebbles]\n");
        for p in &self.pebbles {
            s.push_str(&format!("{},{},{},{}\n", p.center.x, p.center.y, p.center.z, p.radius));
        }
        s
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&fs::read_to_string(path)?, path)
    }

    pub fn parse(text: &str, source: &Path) -> Result<Self> {
        let err = |line: usize, message: String| Error::Parse { path: source.to_path_buf(), line, message };
        let mut section = "";
        let mut props: Vec<(String, String, usize)> = Vec::new();
        let mut pebble_lines = String::new();
        let mut pebble_first_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.starts_with('[') {
                section = match line {
                    "[properties]" => "properties",
                    "[pebbles]" => {
                        pebble_first_line = idx + 1;
                        "pebbles"
                    }
                    other => return Err(err(idx + 1, format!("unknown section {other}"))),
                };
                continue;
            }
            match section {
                "properties" => {
                    if line.is_empty() || line.starts_with('#') {
                        continue;
                    }
                    let (k, v) = line
                        .split_once('=')
                        .ok_or_else(|| err(idx + 1, "expected key = value".into()))?;
                    props.push((k.trim().to_string(), v.trim().to_string(), idx + 1));
                }
                "pebbles" => {
                    pebble_lines.push_str(raw);
                    pebble_lines.push('\n');
                }
                _ => {
                    if !(line.is_empty() || line.starts_with('#')) {
                        return Err(err(idx + 1, "content outside a section".into()));
                    }
                }
            }
        }

        let mut name = None;
        let mut num = std::collections::BTreeMap::new();
        for (k, v, line) in props {
            match k.as_str() {
                "name" => name = Some(v),
                "density" | "mass" | "inertia_xx" | "inertia_yy" | "inertia_zz" | "inertia_xy"
                | "inertia_xz" | "inertia_yz" => {
                    let x: f64 = v.parse().map_err(|e| err(line, format!("bad value for {k}: {e}")))?;
                    num.insert(k, x);
                }
                other => return Err(err(line, format!("unknown property {other}"))),
            }
        }
        let get = |k: &str| num.get(k).copied().ok_or_else(|| err(0, format!("missing property {k}")));
        for k in ["inertia_xy", "inertia_xz", "inertia_yz"] {
            if num.get(k).copied().unwrap_or(0.0) != 0.0 {
                return Err(Error::Validation(format!(
                    "{}: template is not in its principal frame ({k} != 0)",
                    source.display()
                )));
            }
        }
        // Pebble rows are numbered relative to the [pebbles] header.
        let pebbles = parse_pebbles(&pebble_lines, source).map_err(|e| match e {
            Error::Parse { path, line, message } => Error::Parse { path, line: line + pebble_first_line, message },
            other => other,
        })?;
        if pebbles.is_empty() {
            return Err(Error::Validation(format!("{}: template has no pebbles", source.display())));
        }
        let t = ClumpTemplate {
            name: name.unwrap_or_else(|| "clump".into()),
            density: get("density")?,
            mass: get("mass")?,
            principal_moments: Vec3::new(get("inertia_xx")?, get("inertia_yy")?, get("inertia_zz")?),
            pebbles,
        };
        if !(t.mass > 0.0) || !(t.density > 0.0) || t.principal_moments.min(Vec3::ZERO) != Vec3::ZERO {
            return Err(Error::Validation(format!("{}: mass, density and inertia must be positive", source.display())));
        }
        Ok(t)
    }
}

/// Shifts the pebbles to the centre of mass and rotates everything so the
/// principal directions coincide with the Cartesian axes, largest moment
/// first.
///
/// With `Q` holding the principal directions as columns, pebble positions map
/// as `x ↦ Qᵀ (x − x_c)` and the tensor as `I ↦ Qᵀ I Q`.
pub fn align_principal(name: &str, density: f64, props: &MassProperties, pebbles: &[PebbleSpec]) -> Result<ClumpTemplate> {
    let eig = eig_sym3(&props.inertia.symmetrized())?;
    let q = rotation_from_axes(eig.axes[0], eig.axes[1], eig.axes[2])?;
    let qt = q.transpose();
    let rotated = qt * props.inertia * q;
    let aligned = pebbles
        .iter()
        .map(|p| PebbleSpec::new(qt * (p.center - props.com), p.radius))
        .collect();
    Ok(ClumpTemplate {
        name: name.into(),
        density,
        mass: props.mass,
        principal_moments: rotated.diagonal(),
        pebbles: aligned,
    })
}
