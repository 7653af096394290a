//! Hierarchical grid broad phase.
//!
//! Level 0 is the coarsest, sized to the largest pebble diameter; each
//! finer level halves the cell. A pebble lives on the finest level whose
//! cell still holds its diameter. Pairs are searched from the finer pebble's
//! side: its own level (partners with a larger id only) and every coarser
//! occupied level, always over the 27 surrounding cells.

use rustc_hash::FxHashMap;

use super::{may_interact, Pebble};
use crate::boundary::{ghost_pebbles, PeriodicBox};

type CellKey = [i64; 3];

#[derive(Clone, Debug, Default)]
struct Level {
    cell: f64,
    /// Pebble ids grouped by cell.
    members: Vec<u32>,
    /// Cell → range into `members`.
    table: FxHashMap<CellKey, (u32, u32)>,
}

impl Level {
    #[inline]
    fn key(&self, c: crate::math::Vec3) -> CellKey {
        let inv = 1.0 / self.cell;
        [(c.x * inv).floor() as i64, (c.y * inv).floor() as i64, (c.z * inv).floor() as i64]
    }
}

#[derive(Clone, Debug, Default)]
pub struct HGrid {
    levels: Vec<Level>,
    level_of: Vec<u8>,
    scratch: Vec<(u8, CellKey, u32)>,
}

impl HGrid {
    pub fn max_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn cell_sizes(&self) -> Vec<f64> {
        self.levels.iter().map(|l| l.cell).collect()
    }

    pub fn level_of(&self, pebble: usize) -> usize {
        self.level_of[pebble] as usize
    }

    /// Number of pebbles hashed into each level.
    pub fn occupancy(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.members.len()).collect()
    }

    /// Rehashes `pebbles`, reusing allocations from the previous build.
    pub fn rebuild(&mut self, pebbles: &[Pebble], max_levels: usize, base_cell: f64) {
        assert!(max_levels >= 1, "hierarchical grid needs at least one level");
        let r_max = pebbles.iter().map(|p| p.radius).fold(0.0, f64::max);
        let coarsest = (2.0 * r_max).max(base_cell).max(f64::MIN_POSITIVE);
        self.levels.resize_with(max_levels, Level::default);
        for (l, level) in self.levels.iter_mut().enumerate() {
            level.cell = coarsest / (1u64 << l) as f64;
            level.members.clear();
            level.table.clear();
        }
        self.level_of.clear();
        self.level_of.extend(pebbles.iter().map(|p| {
            let d = 2.0 * p.radius;
            let mut l = 0;
            while l + 1 < max_levels && self.levels[l + 1].cell >= d {
                l += 1;
            }
            l as u8
        }));

        self.scratch.clear();
        for (i, p) in pebbles.iter().enumerate() {
            let l = self.level_of[i];
            self.scratch.push((l, self.levels[l as usize].key(p.center), i as u32));
        }
        self.scratch.sort_unstable();
        let mut start = 0;
        while start < self.scratch.len() {
            let (l, key, _) = self.scratch[start];
            let level = &mut self.levels[l as usize];
            let first = level.members.len() as u32;
            let mut end = start;
            while end < self.scratch.len() && self.scratch[end].0 == l && self.scratch[end].1 == key {
                level.members.push(self.scratch[end].2);
                end += 1;
            }
            level.table.insert(key, (first, level.members.len() as u32));
            start = end;
        }
    }

    /// Calls `f(i, j)` once for every candidate pair. The candidate set
    /// contains every interacting pair closer than the sum of radii.
    pub fn for_each_candidate(&self, pebbles: &[Pebble], mut f: impl FnMut(usize, usize)) {
        let occupied: Vec<usize> =
            (0..self.levels.len()).filter(|&l| !self.levels[l].members.is_empty()).collect();
        for (i, p) in pebbles.iter().enumerate() {
            let own = self.level_of[i] as usize;
            for &l in occupied.iter().take_while(|&&l| l <= own) {
                let level = &self.levels[l];
                let k = level.key(p.center);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        for dz in -1..=1 {
                            let Some(&(s, e)) = level.table.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) else {
                                continue;
                            };
                            for &j in &level.members[s as usize..e as usize] {
                                let j = j as usize;
                                if (l == own && j <= i) || !may_interact(p, &pebbles[j]) {
                                    continue;
                                }
                                f(i, j);
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Builds a grid with `max_levels` levels whose coarsest cell is the larger
/// of `base_cell` and the largest pebble diameter.
pub fn hgrid_build(pebbles: &[Pebble], max_levels: usize, base_cell: f64) -> HGrid {
    let mut g = HGrid::default();
    g.rebuild(pebbles, max_levels, base_cell);
    g
}

/// Candidate pairs `(i, j)` with `i < j`, sorted.
pub fn hgrid_candidates(grid: &HGrid, pebbles: &[Pebble]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    grid.for_each_candidate(pebbles, |i, j| out.push((i.min(j), i.max(j))));
    out.sort_unstable();
    out
}

/// Strict overlap test shared by the grid and the brute-force oracle.
#[inline]
pub fn overlapping(a: &Pebble, b: &Pebble, delta: crate::math::Vec3) -> bool {
    let reach = a.radius + b.radius;
    delta.norm_squared() < reach * reach
}

/// Exact overlap set by exhaustive search, `(i, j)` with `i < j`, sorted.
pub fn brute_force_pairs(pebbles: &[Pebble]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..pebbles.len() {
        for j in i + 1..pebbles.len() {
            let (a, b) = (&pebbles[i], &pebbles[j]);
            if may_interact(a, b) && overlapping(a, b, a.center - b.center) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Exhaustive overlap search under the minimum-image convention.
pub fn brute_force_pairs_periodic(pebbles: &[Pebble], boundary: &PeriodicBox) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..pebbles.len() {
        for j in i + 1..pebbles.len() {
            let (a, b) = (&pebbles[i], &pebbles[j]);
            if may_interact(a, b) && overlapping(a, b, boundary.min_image(a.center - b.center)) {
                out.push((i, j));
            }
        }
    }
    out
}

/// Overlapping primary pairs in a periodic box found through ghost images
/// and the grid. `pebbles` must be primaries with centres inside the box.
pub fn periodic_overlaps(
    pebbles: &[Pebble],
    boundary: &PeriodicBox,
    max_levels: usize,
    base_cell: f64,
    margin: f64,
) -> Vec<(usize, usize)> {
    let mut all = pebbles.to_vec();
    all.extend(ghost_pebbles(pebbles, boundary, margin));
    let grid = hgrid_build(&all, max_levels, base_cell);
    let mut out = Vec::new();
    grid.for_each_candidate(&all, |i, j| {
        let (a, b) = (&all[i], &all[j]);
        let (pa, pb) = (a.primary(), b.primary());
        if pa != pb && overlapping(a, b, boundary.min_image(a.center - b.center)) {
            out.push((pa.min(pb), pa.max(pb)));
        }
    });
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn overlaps_via_grid(pebbles: &[Pebble], levels: usize) -> Vec<(usize, usize)> {
        let g = hgrid_build(pebbles, levels, 0.0);
        let mut v: Vec<_> = hgrid_candidates(&g, pebbles)
            .into_iter()
            .filter(|&(i, j)| overlapping(&pebbles[i], &pebbles[j], pebbles[i].center - pebbles[j].center))
            .collect();
        v.dedup();
        v
    }

    fn cloud(seed: u64, n: usize, ratio: f64, side: f64) -> Vec<Pebble> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r_max = 1.0;
        (0..n)
            .map(|i| {
                // Log-uniform radii spanning the requested ratio.
                let r = r_max * (-(rng.gen::<f64>()) * ratio.ln()).exp();
                let c = Vec3::new(rng.gen::<f64>(), rng.gen::<f64>(), rng.gen::<f64>()) * side;
                let clump = if rng.gen::<f64>() < 0.3 { Some(rng.gen_range(0..n / 4 + 1)) } else { None };
                Pebble::new(i, clump, c, r)
            })
            .collect()
    }

    #[test]
    fn single_level_holds_everything() {
        let p = cloud(1, 100, 40.0, 10.0);
        let g = hgrid_build(&p, 1, 0.0);
        assert_eq!(g.occupancy(), vec![100]);
    }

    #[test]
    fn monodisperse_uses_one_level() {
        let p: Vec<_> = (0..50).map(|i| Pebble::new(i, None, Vec3::new(i as f64, 0.0, 0.0), 0.4)).collect();
        let g = hgrid_build(&p, 3, 0.0);
        assert_eq!(g.occupancy().iter().filter(|&&n| n > 0).count(), 1);
    }

    #[test]
    fn polydisperse_spreads_levels() {
        let mut p = vec![Pebble::new(0, None, Vec3::ZERO, 53.36)];
        p.extend((1..20).map(|i| Pebble::new(i, None, Vec3::new(200.0 + i as f64 * 3.0, 0.0, 0.0), 1.0)));
        let g = hgrid_build(&p, 3, 0.0);
        assert!(g.occupancy().iter().filter(|&&n| n > 0).count() >= 2);
        assert_eq!(g.level_of(0), 0);
        assert_eq!(g.level_of(1), 2);
    }

    #[test]
    fn level_assignment_rule() {
        let p = vec![
            Pebble::new(0, None, Vec3::ZERO, 1.0),
            Pebble::new(1, None, Vec3::X * 5.0, 0.5),
            Pebble::new(2, None, Vec3::X * 10.0, 0.49),
            Pebble::new(3, None, Vec3::X * 15.0, 0.26),
        ];
        let g = hgrid_build(&p, 4, 0.0);
        assert_eq!(g.cell_sizes(), vec![2.0, 1.0, 0.5, 0.25]);
        assert_eq!((0..4).map(|i| g.level_of(i)).collect::<Vec<_>>(), vec![0, 1, 1, 1]);
    }

    #[test]
    fn exclusions() {
        let p = vec![
            Pebble::new(0, Some(3), Vec3::ZERO, 1.0),
            Pebble::new(1, Some(3), Vec3::X, 1.0),
            Pebble::new(2, None, Vec3::new(100.0, 0.0, 0.0), 1.0),
        ];
        let g = hgrid_build(&p, 2, 0.0);
        assert!(hgrid_candidates(&g, &p).is_empty());
        assert!(brute_force_pairs(&p).is_empty());
        assert!(brute_force_pairs(&p[..0]).is_empty());
        assert!(brute_force_pairs(&p[..1]).is_empty());

        let mut ghosts = p.clone();
        ghosts[0].clump = None;
        ghosts[1].clump = None;
        ghosts[0].ghost_of = Some(7);
        ghosts[1].ghost_of = Some(8);
        assert!(brute_force_pairs(&ghosts).is_empty());
    }

    #[test]
    fn candidates_have_no_duplicates() {
        let p = cloud(5, 300, 60.0, 8.0);
        for levels in 1..=4 {
            let g = hgrid_build(&p, levels, 0.0);
            let c = hgrid_candidates(&g, &p);
            let mut d = c.clone();
            d.dedup();
            assert_eq!(c.len(), d.len());
        }
    }

    #[test]
    fn matches_brute_force_on_random_clouds() {
        for seed in 0..40 {
            let p = cloud(seed, 200, 60.0, 6.0 + seed as f64 * 0.2);
            let want = brute_force_pairs(&p);
            for levels in 1..=4 {
                assert_eq!(overlaps_via_grid(&p, levels), want, "seed {seed} levels {levels}");
            }
        }
    }

    #[test]
    fn periodic_matches_brute_force() {
        for seed in 0..20 {
            let side = 9.0;
            let b = PeriodicBox::new(Vec3::ZERO, Vec3::splat(side), [true, seed % 2 == 0, true]);
            let p = cloud(100 + seed, 150, 30.0, side);
            let want = brute_force_pairs_periodic(&p, &b);
            for levels in 1..=4 {
                assert_eq!(periodic_overlaps(&p, &b, levels, 0.0, 0.1), want, "seed {seed}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn grid_equals_oracle(seed in any::<u64>(), n in 0usize..250, ratio in 1.0f64..60.0, side in 2.0f64..20.0, levels in 1usize..=4) {
            let p = cloud(seed, n, ratio, side);
            prop_assert_eq!(overlaps_via_grid(&p, levels), brute_force_pairs(&p));
        }
    }
}
