//! Clump template preprocessing: pebble and mesh ingestion, mass properties
//! by three independent methods, and principal-axis alignment.

pub mod bench;
pub mod mass;
pub mod pebbles;
pub mod shapes;
pub mod stl;
pub mod template;
pub mod voxel;

pub use bench::{convergence_benchmark, BenchMethod, BenchRow};
pub use mass::{inertia_from_mesh, inertia_from_mesh_with_apex, inertia_from_pebbles, signed_tetra_volume, MassProperties};
pub use pebbles::{load_pebbles, PebbleSpec};
pub use stl::{load_stl, TriMesh};
pub use template::{align_principal, ClumpTemplate};
pub use voxel::{inertia_from_voxels, voxelize, VoxelGrid};

use crate::error::{Error, Result};

/// Which algorithm computes a template's mass properties.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InertiaMethod {
    Pebbles,
    Voxels { n: usize },
    Mesh,
}

/// Builds an aligned template from pebbles (and a surface mesh for
/// [`InertiaMethod::Mesh`]).
pub fn forge_template(
    name: &str,
    pebbles: &[PebbleSpec],
    mesh: Option<&TriMesh>,
    density: f64,
    method: InertiaMethod,
) -> Result<ClumpTemplate> {
    let props = match method {
        InertiaMethod::Pebbles => inertia_from_pebbles(pebbles, density)?,
        InertiaMethod::Voxels { n } => inertia_from_voxels(&voxelize(pebbles, n)?, density)?,
        InertiaMethod::Mesh => {
            let mesh = mesh.ok_or_else(|| Error::InvalidInput("mesh method needs an STL surface".into()))?;
            inertia_from_mesh(mesh, density)?
        }
    };
    align_principal(name, density, &props, pebbles)
}
