//! Discrete-element simulation of rigid clumps of spherical pebbles.
//!
//! - [`forge`] builds clump templates: mass, centre of mass and inertia by
//!   pebble, voxel or tetrahedron summation, then principal-axis alignment.
//! - [`contact`] finds overlapping pebbles with a hierarchical grid and
//!   evaluates a linear spring–dashpot–Coulomb contact law.
//! - [`dynamics`] integrates clump motion; [`world`] ties everything into a
//!   stepping simulation.
//! - [`boundary`] handles periodic boxes, random orientations and placement.
//! - [`scenario`] holds configuration and drivers for the validation runs.

pub mod boundary;
pub mod contact;
pub mod dynamics;
pub mod error;
pub mod forge;
pub mod math;
pub mod scenario;
pub mod world;

pub use error::{Error, Result};
pub use math::{Mat3, Vec3};
pub use world::World;
