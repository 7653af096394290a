//! Mesh and pebble-packing generators for test shapes and scenario templates.

use std::f64::consts::PI;

use rustc_hash::FxHashMap;

use super::pebbles::PebbleSpec;
use super::stl::TriMesh;
use crate::math::Vec3;

/// Axis-aligned box with outward-wound faces.
pub fn box_mesh(lo: Vec3, hi: Vec3) -> TriMesh {
    let v = |i: usize| {
        Vec3::new(
            if i & 1 == 0 { lo.x } else { hi.x },
            if i & 2 == 0 { lo.y } else { hi.y },
            if i & 4 == 0 { lo.z } else { hi.z },
        )
    };
    let vertices = (0..8).map(v).collect();
    let faces = vec![
        [0, 2, 1], [1, 2, 3], // z = lo
        [4, 5, 6], [5, 7, 6], // z = hi
        [0, 1, 4], [1, 5, 4], // y = lo
        [2, 6, 3], [3, 6, 7], // y = hi
        [0, 4, 2], [2, 4, 6], // x = lo
        [1, 3, 5], [3, 7, 5], // x = hi
    ];
    TriMesh { vertices, faces }
}

/// Latitude/longitude sphere: `n_lat` equal segments of the polar angle and
/// `n_az` of the azimuth. Pole caps become triangle fans.
pub fn uv_sphere(center: Vec3, radius: f64, n_lat: usize, n_az: usize) -> TriMesh {
    assert!(n_lat >= 2 && n_az >= 3);
    let mut vertices = vec![center + Vec3::Z * radius];
    for i in 1..n_lat {
        let theta = PI * i as f64 / n_lat as f64;
        for j in 0..n_az {
            let phi = 2.0 * PI * j as f64 / n_az as f64;
            let dir = Vec3::new(theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos());
            vertices.push(center + dir * radius);
        }
    }
    let south = vertices.len();
    vertices.push(center - Vec3::Z * radius);

    let ring = |i: usize, j: usize| 1 + (i - 1) * n_az + (j % n_az);
    let mut faces = Vec::with_capacity(2 * n_lat * n_az);
    for j in 0..n_az {
        faces.push([0, ring(1, j), ring(1, j + 1)]);
    }
    for i in 1..n_lat - 1 {
        for j in 0..n_az {
            let (a, b, c, d) = (ring(i, j), ring(i + 1, j), ring(i + 1, j + 1), ring(i, j + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    for j in 0..n_az {
        faces.push([south, ring(n_lat - 1, j + 1), ring(n_lat - 1, j)]);
    }
    TriMesh { vertices, faces }
}

/// Subdivided icosahedron with vertices projected onto the sphere.
pub fn icosphere(center: Vec3, radius: f64, subdivisions: usize) -> TriMesh {
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let mut verts: Vec<Vec3> = [
        (-1.0, t, 0.0), (1.0, t, 0.0), (-1.0, -t, 0.0), (1.0, -t, 0.0),
        (0.0, -1.0, t), (0.0, 1.0, t), (0.0, -1.0, -t), (0.0, 1.0, -t),
        (t, 0.0, -1.0), (t, 0.0, 1.0), (-t, 0.0, -1.0), (-t, 0.0, 1.0),
    ]
    .iter()
    .map(|&(x, y, z)| Vec3::new(x, y, z).normalized().unwrap())
    .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5], [0, 5, 1], [0, 1, 7], [0, 7, 10], [0, 10, 11],
        [1, 5, 9], [5, 11, 4], [11, 10, 2], [10, 7, 6], [7, 1, 8],
        [3, 9, 4], [3, 4, 2], [3, 2, 6], [3, 6, 8], [3, 8, 9],
        [4, 9, 5], [2, 4, 11], [6, 2, 10], [8, 6, 7], [9, 8, 1],
    ];
    for _ in 0..subdivisions {
        let mut mid: FxHashMap<(usize, usize), usize> = FxHashMap::default();
        let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Vec3>| {
            let key = (a.min(b), a.max(b));
            *mid.entry(key).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalized().unwrap());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for [a, b, c] in faces {
            let ab = midpoint(a, b, &mut verts);
            let bc = midpoint(b, c, &mut verts);
            let ca = midpoint(c, a, &mut verts);
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    TriMesh { vertices: verts.into_iter().map(|v| center + v * radius).collect(), faces }
}

/// Combines meshes into one without welding.
pub fn merge_meshes(parts: &[TriMesh]) -> TriMesh {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for p in parts {
        let off = vertices.len();
        vertices.extend_from_slice(&p.vertices);
        faces.extend(p.faces.iter().map(|f| [f[0] + off, f[1] + off, f[2] + off]));
    }
    TriMesh { vertices, faces }
}

/// The two touching unit spheres used for inertia cross-checks.
pub fn two_sphere_pebbles() -> Vec<PebbleSpec> {
    vec![
        PebbleSpec::new(Vec3::new(-1.0, 0.0, 0.0), 1.0),
        PebbleSpec::new(Vec3::new(1.0, 0.0, 0.0), 1.0),
    ]
}

/// Straight chain of `n` touching pebbles along x, centred at the origin.
pub fn rod_pebbles(n: usize, radius: f64) -> Vec<PebbleSpec> {
    let half = (n as f64 - 1.0) / 2.0;
    (0..n)
        .map(|i| PebbleSpec::new(Vec3::new(2.0 * radius * (i as f64 - half), 0.0, 0.0), radius))
        .collect()
}

/// T-shaped packing of touching pebbles: a bar of `bar` pebbles along x and a
/// stem of `stem` pebbles hanging below its middle along −y.
pub fn tbar_pebbles(bar: usize, stem: usize, radius: f64) -> Vec<PebbleSpec> {
    let mut out = rod_pebbles(bar, radius);
    let x_mid = if bar % 2 == 1 { 0.0 } else { -radius };
    for k in 1..=stem {
        out.push(PebbleSpec::new(Vec3::new(x_mid, -2.0 * radius * k as f64, 0.0), radius));
    }
    out
}

/// Rectangular regular packing of `nx × ny × nz` touching pebbles with its
/// lowest corner pebble tangent to the coordinate planes.
pub fn brick_pebbles(nx: usize, ny: usize, nz: usize, radius: f64) -> Vec<PebbleSpec> {
    let mut out = Vec::with_capacity(nx * ny * nz);
    for i in 0..nx {
        for j in 0..ny {
            for k in 0..nz {
                let c = Vec3::new(
                    radius * (2 * i + 1) as f64,
                    radius * (2 * j + 1) as f64,
                    radius * (2 * k + 1) as f64,
                );
                out.push(PebbleSpec::new(c, radius));
            }
        }
    }
    out
}
