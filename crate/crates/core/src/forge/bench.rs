//! Convergence of the mesh and voxel inertia methods on the two touching
//! unit spheres, against the exact values.

use std::f64::consts::PI;
use std::fmt;

use super::mass::{inertia_from_mesh_with_apex, MassProperties};
use crate::math::Vec3;
use super::shapes::{merge_meshes, two_sphere_pebbles, uv_sphere};
use super::voxel::{inertia_from_voxels, voxelize};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BenchMethod {
    Mesh,
    Voxels,
}

impl fmt::Display for BenchMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchMethod::Mesh => "mesh",
            BenchMethod::Voxels => "voxels",
        })
    }
}

#[derive(Clone, Copy, Debug)]
pub struct BenchRow {
    pub method: BenchMethod,
    pub n: usize,
    /// Relative mass error.
    pub mass_error: f64,
    /// Relative error of the largest principal moment.
    pub major_error: f64,
    /// Relative error of the smallest principal moment.
    pub minor_error: f64,
}

/// Exact mass and (major, minor) principal moments of two touching unit
/// spheres of unit density.
pub fn two_sphere_exact() -> (f64, f64, f64) {
    (8.0 * PI / 3.0, 56.0 * PI / 15.0, 16.0 * PI / 15.0)
}

fn row(method: BenchMethod, n: usize, props: &MassProperties) -> BenchRow {
    let (m, major, minor) = two_sphere_exact();
    let l = props.principal_moments();
    BenchRow {
        method,
        n,
        mass_error: (props.mass - m).abs() / m,
        major_error: (l.x - major).abs() / major,
        minor_error: (l.z - minor).abs() / minor,
    }
}

/// Mesh of the two spheres, each split into `n` polar and `2n` azimuthal
/// segments.
pub fn two_sphere_mesh(n: usize) -> super::stl::TriMesh {
    let parts: Vec<_> = two_sphere_pebbles()
        .iter()
        .map(|p| uv_sphere(p.center, p.radius, n, 2 * n))
        .collect();
    merge_meshes(&parts)
}

/// Tetrahedra share the origin as their apex.
pub fn mesh_row(n: usize) -> Result<BenchRow> {
    Ok(row(BenchMethod::Mesh, n, &inertia_from_mesh_with_apex(&two_sphere_mesh(n), 1.0, Vec3::ZERO)?))
}

/// `n` counts voxels per pebble diameter; the clump spans two diameters.
pub fn voxel_row(n: usize) -> Result<BenchRow> {
    let grid = voxelize(&two_sphere_pebbles(), 2 * n)?;
    Ok(row(BenchMethod::Voxels, n, &inertia_from_voxels(&grid, 1.0)?))
}

/// Runs both methods at `N = 8, 16, …` up to `max_n`.
pub fn convergence_benchmark(max_n: usize) -> Result<Vec<BenchRow>> {
    if max_n < 8 {
        return Err(Error::InvalidInput(format!("max N must be at least 8, got {max_n}")));
    }
    let ns: Vec<usize> = std::iter::successors(Some(8usize), |n| Some(n * 2))
        .take_while(|&n| n <= max_n)
        .collect();
    let mut out = Vec::with_capacity(2 * ns.len());
    for &n in &ns {
        out.push(mesh_row(n)?);
    }
    for &n in &ns {
        out.push(voxel_row(n)?);
    }
    Ok(out)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("method,N,dM,dI1,dI3\n");
    for r in rows {
        s.push_str(&format!("{},{},{:e},{:e},{:e}\n", r.method, r.n, r.mass_error, r.major_error, r.minor_error));
    }
    s
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let (lx, ly): (Vec<f64>, Vec<f64>) = points.iter().map(|&(x, y)| (x.ln(), y.ln())).unzip();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}
