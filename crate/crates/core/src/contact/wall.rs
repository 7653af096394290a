use super::{Contact, ContactKey, ContactKind, Pebble};
use crate::error::{Error, Result};
use crate::math::Vec3;

/// Static or rotating boundary surfaces. Normals point into the region the
/// pebbles occupy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Wall {
    /// Infinite plane through `point`; pebbles live on the `normal` side.
    Plane { point: Vec3, normal: Vec3 },
    /// Inside of an axis-aligned box, as six planes.
    Box { min: Vec3, max: Vec3 },
    /// Inside of a cylinder spinning about its axis at `omega` rad/s.
    Cylinder { point: Vec3, axis: Vec3, radius: f64, omega: f64 },
}

impl Wall {
    pub fn plane(point: Vec3, normal: Vec3) -> Result<Self> {
        let normal = normal
            .normalized()
            .ok_or_else(|| Error::InvalidInput("plane normal must be non-zero".into()))?;
        Ok(Wall::Plane { point, normal })
    }

    pub fn boxed(min: Vec3, max: Vec3) -> Result<Self> {
        if (0..3).any(|i| !(max[i] > min[i])) {
            return Err(Error::InvalidInput(format!("box needs max > min, got {min} and {max}")));
        }
        Ok(Wall::Box { min, max })
    }

    pub fn cylinder(point: Vec3, axis: Vec3, radius: f64, omega: f64) -> Result<Self> {
        let axis = axis
            .normalized()
            .ok_or_else(|| Error::InvalidInput("cylinder axis must be non-zero".into()))?;
        if !(radius > 0.0) {
            return Err(Error::InvalidInput(format!("cylinder radius must be positive, got {radius}")));
        }
        Ok(Wall::Cylinder { point, axis, radius, omega })
    }

    /// Velocity of the wall surface at `x`.
    pub fn velocity_at(&self, x: Vec3) -> Vec3 {
        match *self {
            Wall::Cylinder { point, axis, omega, .. } => (axis * omega).cross(x - point),
            _ => Vec3::ZERO,
        }
    }

    /// Appends the contacts of pebble `p` with this wall (index `wall`).
    pub fn contacts(&self, wall: usize, p: &Pebble, out: &mut Vec<Contact>) {
        let mut push = |face: u8, normal: Vec3, gap: f64| {
            let overlap = p.radius - gap;
            if overlap > 0.0 {
                out.push(Contact {
                    key: ContactKey { a: p.primary(), b: wall, kind: ContactKind::Wall { face } },
                    normal,
                    overlap,
                    point: p.center - normal * gap,
                    spring: Vec3::ZERO,
                });
            }
        };
        match *self {
            Wall::Plane { point, normal } => push(0, normal, (p.center - point).dot(normal)),
            Wall::Box { min, max } => {
                for i in 0..3 {
                    let e = Vec3::axis(i);
                    push(2 * i as u8, e, p.center[i] - min[i]);
                    push(2 * i as u8 + 1, -e, max[i] - p.center[i]);
                }
            }
            Wall::Cylinder { point, axis, radius, .. } => {
                let d = p.center - point;
                let radial = d - axis * d.dot(axis);
                let rho = radial.norm();
                if rho > 0.0 {
                    push(0, -(radial / rho), radius - rho);
                }
            }
        }
    }
}
