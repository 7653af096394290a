//! Voxel discretization of a pebble union and mass properties summed over
//! occupied voxels.

use rayon::prelude::*;

use super::mass::MassProperties;
use super::pebbles::PebbleSpec;
use crate::error::{Error, Result};
use crate::math::{Mat3, Vec3};

/// Cubic grid of `n³` voxels of side `side` starting at `origin`, with an
/// occupancy bit per voxel. Rows along k are padded to whole words.
#[derive(Clone, Debug, PartialEq)]
pub struct VoxelGrid {
    pub origin: Vec3,
    pub side: f64,
    pub n: usize,
    words_per_row: usize,
    mask: Vec<u64>,
}

impl VoxelGrid {
    pub fn empty(origin: Vec3, side: f64, n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        VoxelGrid { origin, side, n, words_per_row, mask: vec![0; n * n * words_per_row] }
    }

    #[inline]
    fn row(&self, m: usize, n: usize) -> usize {
        (m * self.n + n) * self.words_per_row
    }

    pub fn get(&self, m: usize, n: usize, k: usize) -> bool {
        self.mask[self.row(m, n) + k / 64] >> (k % 64) & 1 == 1
    }

    pub fn set(&mut self, m: usize, n: usize, k: usize, value: bool) {
        let idx = self.row(m, n) + k / 64;
        if value {
            self.mask[idx] |= 1 << (k % 64);
        } else {
            self.mask[idx] &= !(1 << (k % 64));
        }
    }

    /// Centre of voxel `(m, n, k)`.
    #[inline]
    pub fn center(&self, m: usize, n: usize, k: usize) -> Vec3 {
        self.origin + Vec3::new(m as f64 + 0.5, n as f64 + 0.5, k as f64 + 0.5) * self.side
    }

    pub fn count(&self) -> usize {
        self.mask.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn slab_bits(&self, m: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |n| {
            let base = self.row(m, n);
            (0..self.words_per_row).flat_map(move |w| {
                let mut word = self.mask[base + w];
                std::iter::from_fn(move || {
                    if word == 0 {
                        return None;
                    }
                    let bit = word.trailing_zeros() as usize;
                    word &= word - 1;
                    Some((n, w * 64 + bit))
                })
            })
        })
    }
}

/// Minimal cube around all pebbles, centred on their bounding box, split
/// into `n` voxels per side.
pub fn voxelize(pebbles: &[PebbleSpec], n: usize) -> Result<VoxelGrid> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("voxel resolution must be at least 2, got {n}")));
    }
    if pebbles.is_empty() {
        return Err(Error::InvalidInput("no pebbles".into()));
    }
    let mut lo = Vec3::splat(f64::INFINITY);
    let mut hi = Vec3::splat(f64::NEG_INFINITY);
    for p in pebbles {
        lo = lo.min(p.center - Vec3::splat(p.radius));
        hi = hi.max(p.center + Vec3::splat(p.radius));
    }
    let edge = (hi - lo).max_element();
    let origin = (lo + hi) * 0.5 - Vec3::splat(edge * 0.5);
    Ok(voxelize_in(pebbles, origin, edge / n as f64, n))
}

/// Voxelizes onto an explicit grid. A voxel is occupied when its centre lies
/// strictly inside at least one pebble.
pub fn voxelize_in(pebbles: &[PebbleSpec], origin: Vec3, side: f64, n: usize) -> VoxelGrid {
    let mut grid = VoxelGrid::empty(origin, side, n);
    let slab_len = n * grid.words_per_row;
    let wpr = grid.words_per_row;
    let index_range = |c: f64, r: f64, o: f64| -> (usize, usize) {
        let lo = ((c - r - o) / side - 0.5).floor().max(0.0) as usize;
        let hi = (((c + r - o) / side - 0.5).ceil().max(-1.0) + 1.0).min(n as f64) as usize;
        (lo.min(n), hi)
    };
    let center = |m: usize, j: usize, k: usize| {
        origin + Vec3::new(m as f64 + 0.5, j as f64 + 0.5, k as f64 + 0.5) * side
    };
    grid.mask.par_chunks_mut(slab_len).enumerate().for_each(|(m, slab)| {
        let x = origin.x + (m as f64 + 0.5) * side;
        for p in pebbles {
            let dx = x - p.center.x;
            if dx * dx >= p.radius * p.radius {
                continue;
            }
            let (n0, n1) = index_range(p.center.y, p.radius, origin.y);
            let (k0, k1) = index_range(p.center.z, p.radius, origin.z);
            for j in n0..n1 {
                let row = &mut slab[j * wpr..(j + 1) * wpr];
                for k in k0..k1 {
                    if p.contains(center(m, j, k)) {
                        row[k / 64] |= 1 << (k % 64);
                    }
                }
            }
        }
    });
    grid
}

#[derive(Clone, Copy, Default)]
struct SlabSums {
    first: Vec3,
    // xx, yy, zz, xy, xz, yz
    second: [f64; 6],
}

/// Mass properties of the occupied voxels, each treated as a point mass
/// `ρ d³` at its centre.
pub fn inertia_from_voxels(grid: &VoxelGrid, density: f64) -> Result<MassProperties> {
    if !(density > 0.0) {
        return Err(Error::InvalidInput(format!("density must be positive, got {density}")));
    }
    let total = grid.count();
    if total == 0 {
        return Err(Error::Validation("voxel mask is empty".into()));
    }
    let cell_mass = density * grid.side.powi(3);
    let mass = cell_mass * total as f64;

    let slabs = |reference: Vec3| -> Vec<SlabSums> {
        (0..grid.n)
            .into_par_iter()
            .map(|m| {
                let mut s = SlabSums::default();
                for (n, k) in grid.slab_bits(m) {
                    let x = grid.center(m, n, k) - reference;
                    s.first += x;
                    s.second[0] += x.x * x.x;
                    s.second[1] += x.y * x.y;
                    s.second[2] += x.z * x.z;
                    s.second[3] += x.x * x.y;
                    s.second[4] += x.x * x.z;
                    s.second[5] += x.y * x.z;
                }
                s
            })
            .collect()
    };

    let centre = grid.origin + Vec3::splat(0.5 * grid.side * grid.n as f64);
    let first: Vec3 = slabs(centre).iter().map(|s| s.first).sum();
    let com = centre + first / total as f64;

    let mut sec = [0.0; 6];
    for s in slabs(com) {
        for (a, b) in sec.iter_mut().zip(s.second) {
            *a += b;
        }
    }
    let [xx, yy, zz, xy, xz, yz] = sec.map(|v| v * cell_mass);
    let inertia = Mat3::from_rows([
        [yy + zz, -xy, -xz],
        [-xy, xx + zz, -yz],
        [-xz, -yz, xx + yy],
    ]);
    Ok(MassProperties { mass, com, inertia })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::inertia_from_pebbles;
    use crate::forge::shapes::two_sphere_pebbles;
    use std::f64::consts::PI;

    fn brute_count(pebbles: &[PebbleSpec], grid: &VoxelGrid) -> usize {
        let mut c = 0;
        for m in 0..grid.n {
            for n in 0..grid.n {
                for k in 0..grid.n {
                    let x = grid.center(m, n, k);
                    if pebbles.iter().any(|p| (x - p.center).norm_squared() < p.radius * p.radius) {
                        c += 1;
                    }
                }
            }
        }
        c
    }

    #[test]
    fn coarse_grid_matches_point_test() {
        let p = [PebbleSpec::new(Vec3::new(0.3, -0.2, 0.1), 1.0)];
        let g = voxelize(&p, 2).unwrap();
        assert_eq!(g.count(), brute_count(&p, &g));
        // With two voxels per side every centre sits at distance √3/2 from
        // the sphere centre, inside the unit sphere.
        assert_eq!(g.count(), 8);
    }

    #[test]
    fn masks_match_point_test() {
        let pebbles = vec![
            PebbleSpec::new(Vec3::new(0.0, 0.0, 0.0), 1.0),
            PebbleSpec::new(Vec3::new(1.2, 0.3, -0.4), 0.6),
            PebbleSpec::new(Vec3::new(-0.7, 0.9, 0.5), 0.35),
        ];
        for n in [3, 17, 64, 70] {
            let g = voxelize(&pebbles, n).unwrap();
            assert_eq!(g.count(), brute_count(&pebbles, &g), "n = {n}");
        }
    }

    #[test]
    fn unit_sphere_volume_at_64() {
        let g = voxelize(&[PebbleSpec::new(Vec3::ZERO, 1.0)], 64).unwrap();
        let vol = g.count() as f64 * g.side.powi(3);
        assert!((vol / (4.0 * PI / 3.0) - 1.0).abs() < 0.02);
        assert!(g.count() > 0);
    }

    #[test]
    fn single_voxel() {
        let mut g = VoxelGrid::empty(Vec3::ZERO, 0.5, 4);
        g.set(1, 2, 3, true);
        let p = inertia_from_voxels(&g, 3.0).unwrap();
        assert!((p.mass - 3.0 * 0.125).abs() < 1e-15);
        assert_eq!(p.inertia, Mat3::ZERO);
        assert_eq!(p.com, g.center(1, 2, 3));
    }

    #[test]
    fn empty_mask_rejected() {
        let g = VoxelGrid::empty(Vec3::ZERO, 1.0, 4);
        assert!(matches!(inertia_from_voxels(&g, 1.0), Err(Error::Validation(_))));
    }

    #[test]
    fn overlap_counted_once() {
        let p = [
            PebbleSpec::new(Vec3::new(-0.5, 0.0, 0.0), 1.0),
            PebbleSpec::new(Vec3::new(0.5, 0.0, 0.0), 1.0),
        ];
        let vox = inertia_from_voxels(&voxelize(&p, 96).unwrap(), 1.0).unwrap();
        let peb = inertia_from_pebbles(&p, 1.0).unwrap();
        assert!(vox.mass < peb.mass);
    }

    #[test]
    fn two_sphere_clump_at_256() {
        let v = inertia_from_voxels(&voxelize(&two_sphere_pebbles(), 256).unwrap(), 1.0).unwrap();
        let m = 8.0 * PI / 3.0;
        assert!((v.mass / m - 1.0).abs() < 0.02);
        let l = v.principal_moments();
        assert!((l.x / (56.0 * PI / 15.0) - 1.0).abs() < 0.02);
        assert!((l.z / (16.0 * PI / 15.0) - 1.0).abs() < 0.02);
    }

    #[test]
    fn mass_monotone_in_radius_on_fixed_grid() {
        let origin = Vec3::splat(-2.0);
        let mut last = 0;
        for i in 0..40 {
            let r = 0.5 + 0.03 * i as f64;
            let p = [PebbleSpec::new(Vec3::new(0.1, 0.0, 0.0), r), PebbleSpec::new(Vec3::new(-0.6, 0.2, 0.0), 0.7)];
            let c = voxelize_in(&p, origin, 4.0 / 48.0, 48).count();
            assert!(c >= last);
            last = c;
        }
    }
}
