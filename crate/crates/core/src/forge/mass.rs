//! Mass, centre of mass and inertia tensor by summation over pebbles and
//! over surface tetrahedra.

use rayon::prelude::*;

use super::pebbles::PebbleSpec;
use super::stl::TriMesh;
use crate::error::{Error, Result};
use crate::math::{eig_sym3, Mat3, Vec3};

/// Mass, centre of mass and inertia tensor about the centre of mass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MassProperties {
    pub mass: f64,
    pub com: Vec3,
    pub inertia: Mat3,
}

impl MassProperties {
    /// Principal moments, descending.
    pub fn principal_moments(&self) -> Vec3 {
        eig_sym3(&self.inertia.symmetrized())
            .map(|e| e.eigenvalues)
            .unwrap_or(Vec3::splat(f64::NAN))
    }

    /// Checks `λ_i + λ_j ≥ λ_k` with a relative slack.
    pub fn satisfies_triangle_inequality(&self, rel_tol: f64) -> bool {
        let l = self.principal_moments();
        let slack = rel_tol * (l.x + l.y + l.z).abs();
        l.z >= -slack && l.y + l.z >= l.x - slack
    }
}

/// Inertia of a point mass distribution term `m (|x|² 1 − x ⊗ x)`.
#[inline]
pub(crate) fn point_inertia(m: f64, x: Vec3) -> Mat3 {
    (Mat3::scalar(x.norm_squared()) - x.outer(x)) * m
}

/// Direct summation over pebbles with Steiner's theorem. Overlapping volume
/// is counted once per pebble.
pub fn inertia_from_pebbles(pebbles: &[PebbleSpec], density: f64) -> Result<MassProperties> {
    if pebbles.is_empty() {
        return Err(Error::InvalidInput("no pebbles".into()));
    }
    if !(density > 0.0) {
        return Err(Error::InvalidInput(format!("density must be positive, got {density}")));
    }
    let masses: Vec<f64> = pebbles.iter().map(|p| p.volume() * density).collect();
    let mass: f64 = masses.iter().sum();
    let com = pebbles.iter().zip(&masses).map(|(p, &m)| p.center * m).sum::<Vec3>() / mass;

    let mut inertia = Mat3::ZERO;
    for (p, &m) in pebbles.iter().zip(&masses) {
        let x = p.center - com;
        inertia += point_inertia(m, x) + Mat3::scalar(0.4 * m * p.radius * p.radius);
    }
    Ok(MassProperties { mass, com, inertia })
}

/// Signed tetrahedron volume as the 4×4 determinant with a column of ones,
/// divided by six. Positive when `a1` lies on the side of the face
/// `(a2, a3, a4)` that its normal `(a3 − a2) × (a4 − a2)` points to.
pub fn signed_tetra_volume(a1: Vec3, a2: Vec3, a3: Vec3, a4: Vec3) -> f64 {
    -(a2 - a1).dot((a3 - a1).cross(a4 - a1)) / 6.0
}

#[derive(Clone, Copy, Default)]
struct TetraSums {
    volume: f64,
    first_moment: Vec3,
    // a, b, c, a', b', c' integrals
    second: [f64; 6],
}

impl std::ops::Add for TetraSums {
    type Output = TetraSums;
    fn add(self, o: TetraSums) -> TetraSums {
        let mut second = self.second;
        for (s, t) in second.iter_mut().zip(o.second) {
            *s += t;
        }
        TetraSums {
            volume: self.volume + o.volume,
            first_moment: self.first_moment + o.first_moment,
            second,
        }
    }
}

/// `∫ u v dV` over a tetrahedron for coordinates `u`, `v` of its four
/// vertices.
#[inline]
fn mixed_integral(vol: f64, u: [f64; 4], v: [f64; 4]) -> f64 {
    let mut diag = 0.0;
    let mut su = 0.0;
    let mut sv = 0.0;
    for k in 0..4 {
        diag += u[k] * v[k];
        su += u[k];
        sv += v[k];
    }
    vol * (diag + su * sv) / 20.0
}

#[inline]
fn square_integral(vol: f64, u: [f64; 4]) -> f64 {
    let mut s = 0.0;
    for i in 0..4 {
        for j in i..4 {
            s += u[i] * u[j];
        }
    }
    vol * s / 10.0
}

fn tetra_moments(verts: [Vec3; 4]) -> TetraSums {
    let vol = signed_tetra_volume(verts[0], verts[1], verts[2], verts[3]);
    let centroid = (verts[0] + verts[1] + verts[2] + verts[3]) * 0.25;
    let xs = verts.map(|v| v.x);
    let ys = verts.map(|v| v.y);
    let zs = verts.map(|v| v.z);
    let (ixx, iyy, izz) = (square_integral(vol, xs), square_integral(vol, ys), square_integral(vol, zs));
    TetraSums {
        volume: vol,
        first_moment: centroid * vol,
        second: [
            iyy + izz,
            ixx + izz,
            ixx + iyy,
            mixed_integral(vol, ys, zs),
            mixed_integral(vol, xs, zs),
            mixed_integral(vol, xs, ys),
        ],
    }
}

const FACE_CHUNK: usize = 4096;

/// Exact mass properties of the solid bounded by a closed triangulated
/// surface, summed over signed tetrahedra joining each face to a common apex
/// (the vertex centroid). A globally inward winding is corrected by sign.
pub fn inertia_from_mesh(mesh: &TriMesh, density: f64) -> Result<MassProperties> {
    mesh.validate()?;
    let apex = mesh.vertices.iter().copied().sum::<Vec3>() / mesh.vertices.len() as f64;
    inertia_from_mesh_with_apex(mesh, density, apex)
}

/// Same as [`inertia_from_mesh`] with an explicit tetrahedron apex. For a
/// closed surface the result does not depend on the apex beyond rounding.
pub fn inertia_from_mesh_with_apex(mesh: &TriMesh, density: f64, apex: Vec3) -> Result<MassProperties> {
    mesh.validate()?;
    if !(density > 0.0) {
        return Err(Error::InvalidInput(format!("density must be positive, got {density}")));
    }

    let sum_over = |origin: Vec3| -> TetraSums {
        // Fixed-size chunks summed in order keep the result independent of
        // the worker count.
        let partial: Vec<TetraSums> = mesh
            .faces
            .par_chunks(FACE_CHUNK)
            .map(|chunk| {
                chunk.iter().fold(TetraSums::default(), |acc, f| {
                    let [s1, s2, s3] = [mesh.vertices[f[0]], mesh.vertices[f[1]], mesh.vertices[f[2]]];
                    acc + tetra_moments([apex - origin, s1 - origin, s2 - origin, s3 - origin])
                })
            })
            .collect();
        partial.into_iter().fold(TetraSums::default(), |a, b| a + b)
    };

    // Centre of mass from volume-weighted tetra centroids, shifted back
    // relative to the apex to limit cancellation.
    let first = sum_over(apex);
    let (lo, hi) = mesh.bounding_box();
    let scale = (hi - lo).max_element().powi(3);
    if first.volume.abs() <= 1e-12 * scale {
        return Err(Error::Validation(
            "mesh encloses zero volume (degenerate or not closed)".into(),
        ));
    }
    let com = apex + first.first_moment / first.volume;

    // Second pass about the centre of mass.
    let about_com = sum_over(com);
    let sign = about_com.volume.signum();
    let [a, b, c, ap, bp, cp] = about_com.second.map(|v| v * density * sign);
    let inertia = Mat3::from_rows([[a, -cp, -bp], [-cp, b, -ap], [-bp, -ap, c]]);
    Ok(MassProperties { mass: density * about_com.volume.abs(), com, inertia })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::shapes::{box_mesh, icosphere, two_sphere_pebbles};
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    /// Laplace expansion of the 4×4 determinant with a trailing column of ones.
    fn det4_volume(a: [Vec3; 4]) -> f64 {
        let rows: Vec<[f64; 4]> = a.iter().map(|v| [v.x, v.y, v.z, 1.0]).collect();
        fn det3(m: [[f64; 3]; 3]) -> f64 {
            Mat3::from_rows(m).determinant()
        }
        let mut det = 0.0;
        for col in 0..4 {
            let minor = |r: usize| {
                let mut out = [0.0; 3];
                let mut k = 0;
                for c in 0..4 {
                    if c != col {
                        out[k] = rows[r][c];
                        k += 1;
                    }
                }
                out
            };
            let sign = if col % 2 == 0 { 1.0 } else { -1.0 };
            det += sign * rows[0][col] * det3([minor(1), minor(2), minor(3)]);
        }
        det / 6.0
    }

    #[test]
    fn unit_tetra_volume() {
        let v = [Vec3::ZERO, Vec3::X, Vec3::Y, Vec3::Z];
        let vol = signed_tetra_volume(v[0], v[1], v[2], v[3]);
        assert!((vol.abs() - 1.0 / 6.0).abs() < 1e-15);
        assert!((vol - det4_volume(v)).abs() < 1e-15);
        let w = [Vec3::new(0.3, -1.0, 2.0), Vec3::new(1.5, 0.2, 0.1), Vec3::new(-0.4, 2.0, 0.7), Vec3::new(0.9, 0.8, -1.2)];
        assert!((signed_tetra_volume(w[0], w[1], w[2], w[3]) - det4_volume(w)).abs() < 1e-14);
    }

    #[test]
    fn single_sphere_pebble() {
        let p = inertia_from_pebbles(&[PebbleSpec::new(Vec3::ZERO, 1.0)], 3.0 / (4.0 * PI)).unwrap();
        assert!((p.mass - 1.0).abs() < 1e-15);
        assert!((p.inertia - Mat3::scalar(0.4)).norm() < 1e-15);
    }

    #[test]
    fn two_sphere_analytic() {
        let p = inertia_from_pebbles(&two_sphere_pebbles(), 1.0).unwrap();
        // Analytic: each sphere m = 4π/3, I_axis = 2/5 m, I_perp = 2/5 m + m·1².
        let m = 4.0 * PI / 3.0;
        assert!(rel(p.mass, 2.0 * m) < 1e-14);
        assert!(rel(p.inertia.m[0][0], 2.0 * 0.4 * m) < 1e-14);
        assert!(rel(p.inertia.m[1][1], 2.0 * (0.4 * m + m)) < 1e-14);
        assert!(rel(p.inertia.m[2][2], 56.0 * PI / 15.0) < 1e-14);
        assert!(p.com.norm() < 1e-15);
    }

    #[test]
    fn com_of_offset_pair() {
        let p = inertia_from_pebbles(
            &[PebbleSpec::new(Vec3::ZERO, 0.5), PebbleSpec::new(Vec3::new(2.0, 0.0, 0.0), 0.5)],
            2.0,
        )
        .unwrap();
        assert!((p.com - Vec3::X).norm() < 1e-15);
    }

    #[test]
    fn unit_cube_mesh() {
        let p = inertia_from_mesh(&box_mesh(Vec3::ZERO, Vec3::splat(1.0)), 1.0).unwrap();
        assert!((p.mass - 1.0).abs() < 1e-14);
        assert!((p.com - Vec3::splat(0.5)).norm() < 1e-14);
        assert!((p.inertia - Mat3::scalar(1.0 / 6.0)).norm() < 1e-14);
    }

    #[test]
    fn inward_winding_is_corrected() {
        let mut m = box_mesh(Vec3::new(-1.0, 0.0, 2.0), Vec3::new(1.0, 3.0, 2.5));
        let outward = inertia_from_mesh(&m, 2.0).unwrap();
        for f in m.faces.iter_mut() {
            f.swap(1, 2);
        }
        let inward = inertia_from_mesh(&m, 2.0).unwrap();
        assert!(rel(inward.mass, outward.mass) < 1e-14);
        assert!((inward.inertia - outward.inertia).norm() < 1e-12);
        // Analytic cuboid 2 × 3 × 0.5, mass 6.
        let expected = Vec3::new(3.0 * 3.0 + 0.25, 4.0 + 0.25, 4.0 + 9.0) * (6.0 / 12.0);
        assert!((outward.inertia.diagonal() - expected).norm() < 1e-12);
    }

    #[test]
    fn icosphere_close_to_sphere() {
        let p = inertia_from_mesh(&icosphere(Vec3::ZERO, 1.0, 3), 1.0).unwrap();
        let m = 4.0 * PI / 3.0;
        assert!(rel(p.mass, m) < 0.01);
        for i in 0..3 {
            assert!(rel(p.inertia.m[i][i], 8.0 * PI / 15.0) < 0.015);
        }
    }

    #[test]
    fn apex_does_not_matter_for_closed_mesh() {
        let m = icosphere(Vec3::new(0.3, -0.2, 1.0), 1.0, 2);
        let a = inertia_from_mesh(&m, 1.0).unwrap();
        let b = inertia_from_mesh_with_apex(&m, 1.0, Vec3::new(5.0, 4.0, -3.0)).unwrap();
        assert!(rel(a.mass, b.mass) < 1e-12);
        assert!((a.com - b.com).norm() < 1e-12);
        assert!((a.inertia - b.inertia).norm() < 1e-11 * a.inertia.norm());
    }

    #[test]
    fn open_mesh_rejected() {
        let tri = TriMesh::new(vec![Vec3::ZERO, Vec3::X, Vec3::Y], vec![[0, 1, 2], [0, 2, 1]]).unwrap();
        assert!(matches!(inertia_from_mesh(&tri, 1.0), Err(Error::Validation(_))));
    }

    #[test]
    fn split_face_invariance() {
        let mesh = box_mesh(Vec3::new(0.2, -0.3, 0.1), Vec3::new(1.7, 0.9, 2.0));
        let base = inertia_from_mesh(&mesh, 1.3).unwrap();
        // Split face 0 through the midpoint of one edge.
        let mut split = mesh.clone();
        let [a, b, c] = split.faces[0];
        let mid = (split.vertices[b] + split.vertices[c]) * 0.5;
        split.vertices.push(mid);
        let m = split.vertices.len() - 1;
        split.faces[0] = [a, b, m];
        split.faces.push([a, m, c]);
        // The neighbouring face sharing edge b–c must be split too to keep the
        // surface closed.
        let shared = split
            .faces
            .iter()
            .position(|f| f.contains(&b) && f.contains(&c))
            .unwrap();
        let f = split.faces[shared];
        let other = *f.iter().find(|&&v| v != b && v != c).unwrap();
        let rot = f.iter().position(|&v| v == other).unwrap();
        let (p, q) = (f[(rot + 1) % 3], f[(rot + 2) % 3]);
        split.faces[shared] = [other, p, m];
        split.faces.push([other, m, q]);
        let s = inertia_from_mesh(&split, 1.3).unwrap();
        assert!(rel(s.mass, base.mass) < 1e-10);
        assert!((s.com - base.com).norm() < 1e-10);
        assert!((s.inertia - base.inertia).norm() / base.inertia.norm() < 1e-10);
    }
}
