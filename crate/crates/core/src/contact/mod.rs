//! Contact detection and the linear spring–dashpot–Coulomb force law.

mod hgrid;
mod wall;

pub use hgrid::{brute_force_pairs, brute_force_pairs_periodic, hgrid_build, hgrid_candidates, overlapping, periodic_overlaps, HGrid};
pub use wall::Wall;

use crate::error::{Error, Result};
use crate::math::Vec3;

/// A sphere taking part in contact detection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pebble {
    /// Index of the pebble in the slice it lives in.
    pub id: usize,
    pub clump: Option<usize>,
    pub center: Vec3,
    pub radius: f64,
    pub velocity: Vec3,
    /// For a periodic image, the id of the primary it mirrors.
    pub ghost_of: Option<usize>,
}

impl Pebble {
    pub fn new(id: usize, clump: Option<usize>, center: Vec3, radius: f64) -> Self {
        Pebble { id, clump, center, radius, velocity: Vec3::ZERO, ghost_of: None }
    }

    pub fn is_ghost(&self) -> bool {
        self.ghost_of.is_some()
    }

    pub fn primary(&self) -> usize {
        self.ghost_of.unwrap_or(self.id)
    }
}

/// Whether two pebbles may interact at all: not parts of the same clump and
/// not both periodic images.
#[inline]
pub fn may_interact(a: &Pebble, b: &Pebble) -> bool {
    if a.is_ghost() && b.is_ghost() {
        return false;
    }
    !matches!((a.clump, b.clump), (Some(x), Some(y)) if x == y)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ContactKind {
    /// Pebble `a` against pebble `b`, `a < b`.
    Pebble,
    /// Pebble `a` against wall `b`, face `face` (0 except for boxes).
    Wall { face: u8 },
}

/// Identity of a contact across steps, used to key tangential history.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContactKey {
    pub a: usize,
    pub b: usize,
    pub kind: ContactKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contact {
    pub key: ContactKey,
    /// Unit normal pointing from the second partner towards pebble `a`.
    pub normal: Vec3,
    pub overlap: f64,
    pub point: Vec3,
    pub spring: Vec3,
}

/// Sphere–sphere overlap. `delta` is the separation `c_a − c_b`, already
/// reduced to its minimum image when periodic.
pub fn narrow_phase_pair(a: &Pebble, b: &Pebble, delta: Vec3) -> Result<Option<Contact>> {
    let d2 = delta.norm_squared();
    let reach = a.radius + b.radius;
    if d2 >= reach * reach {
        return Ok(None);
    }
    let d = d2.sqrt();
    if d == 0.0 {
        return Err(Error::CoincidentCenters(a.primary(), b.primary()));
    }
    let normal = delta / d;
    let overlap = reach - d;
    let (lo, hi) = if a.primary() < b.primary() { (a.primary(), b.primary()) } else { (b.primary(), a.primary()) };
    // Keep the normal pointing towards the lower id.
    let (normal, first) = if lo == a.primary() { (normal, a) } else { (-normal, b) };
    Ok(Some(Contact {
        key: ContactKey { a: lo, b: hi, kind: ContactKind::Pebble },
        normal,
        overlap,
        point: first.center - normal * (first.radius - 0.5 * overlap),
        spring: Vec3::ZERO,
    }))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContactModel {
    pub kn: f64,
    pub gamma_n: f64,
    pub kt: f64,
    pub gamma_t: f64,
    pub mu: f64,
}

impl ContactModel {
    pub fn elastic(kn: f64) -> Self {
        ContactModel { kn, gamma_n: 0.0, kt: 0.0, gamma_t: 0.0, mu: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.kn > 0.0
            && [self.gamma_n, self.kt, self.gamma_t, self.mu].iter().all(|v| v.is_finite() && *v >= 0.0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("contact model needs kn > 0 and non-negative coefficients: {self:?}")))
        }
    }

    /// Duration of an undamped head-on contact between bodies of reduced mass `m`.
    pub fn contact_time(&self, m: f64) -> f64 {
        std::f64::consts::PI * (m / self.kn).sqrt()
    }

    pub fn elastic_energy(&self, c: &Contact) -> f64 {
        0.5 * self.kn * c.overlap * c.overlap + 0.5 * self.kt * c.spring.norm_squared()
    }
}

/// Force on the first partner of `contact` and the updated tangential spring.
///
/// `rel_vel` is the velocity of the first partner relative to the second at
/// the contact point.
pub fn contact_force(contact: &Contact, model: &ContactModel, rel_vel: Vec3, dt: f64) -> (Vec3, Vec3) {
    let n = contact.normal;
    let vn = rel_vel.dot(n);
    let fn_mag = (model.kn * contact.overlap - model.gamma_n * vn).max(0.0);
    let vt = rel_vel - n * vn;

    if model.kt == 0.0 && model.gamma_t == 0.0 {
        return (n * fn_mag, Vec3::ZERO);
    }

    // Keep the spring in the current tangent plane before extending it.
    let mut s = contact.spring - n * contact.spring.dot(n) + vt * dt;
    let mut ft = -(s * model.kt) - vt * model.gamma_t;
    let cap = model.mu * fn_mag;
    let ft_mag = ft.norm();
    if ft_mag > cap {
        ft = if ft_mag > 0.0 { ft * (cap / ft_mag) } else { Vec3::ZERO };
        s = if model.kt > 0.0 { -(ft + vt * model.gamma_t) / model.kt } else { Vec3::ZERO };
    }
    (n * fn_mag + ft, s)
}
