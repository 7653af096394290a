//! Periodic boxes, uniformly random orientations and non-overlapping
//! random placement of clumps.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::contact::Pebble;
use crate::dynamics::ClumpInstance;
use crate::error::{Error, Result};
use crate::forge::ClumpTemplate;
use crate::math::{axis_angle, Mat3, Vec3};

/// Axis-aligned box, periodic along the flagged axes.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodicBox {
    pub min: Vec3,
    pub max: Vec3,
    pub periodic: [bool; 3],
}

impl PeriodicBox {
    pub fn new(min: Vec3, max: Vec3, periodic: [bool; 3]) -> Self {
        PeriodicBox { min, max, periodic }
    }

    pub fn validate(&self) -> Result<()> {
        for i in 0..3 {
            if self.periodic[i] && !(self.max[i] > self.min[i]) {
                return Err(Error::InvalidInput(format!("periodic axis {i} needs max > min")));
            }
        }
        Ok(())
    }

    pub fn lengths(&self) -> Vec3 {
        self.max - self.min
    }

    /// Maps every periodic component of `d` into `[−L/2, L/2)`.
    #[inline]
    pub fn min_image(&self, mut d: Vec3) -> Vec3 {
        for i in 0..3 {
            if self.periodic[i] {
                let l = self.max[i] - self.min[i];
                d[i] -= l * (d[i] / l + 0.5).floor();
            }
        }
        d
    }

    /// Translates `x` by whole periods into `[min, max)` along periodic axes.
    #[inline]
    pub fn wrap(&self, mut x: Vec3) -> Vec3 {
        for i in 0..3 {
            if self.periodic[i] {
                let l = self.max[i] - self.min[i];
                let mut v = x[i] - l * ((x[i] - self.min[i]) / l).floor();
                if v >= self.max[i] {
                    v -= l;
                }
                if v < self.min[i] {
                    v = self.min[i];
                }
                x[i] = v;
            }
        }
        x
    }
}

/// Moves a clump's centre of mass back into the box. Only the position
/// changes; pebbles must be re-derived afterwards.
pub fn wrap_clump(clump: &mut ClumpInstance, boundary: &PeriodicBox) {
    clump.position = boundary.wrap(clump.position);
}

/// Periodic images of the primaries that lie within interaction range of a
/// periodic face: `r + r_max + margin`. Faces, edges and corners give up to
/// seven images per pebble. Ghost ids continue after the primaries.
pub fn ghost_pebbles(primaries: &[Pebble], boundary: &PeriodicBox, margin: f64) -> Vec<Pebble> {
    let r_max = primaries.iter().map(|p| p.radius).fold(0.0, f64::max);
    let len = boundary.lengths();
    let mut out = Vec::new();
    for p in primaries {
        let range = p.radius + r_max + margin;
        let mut shifts: [[f64; 3]; 3] = [[0.0; 3]; 3];
        let mut counts = [1usize; 3];
        for i in 0..3 {
            if !boundary.periodic[i] {
                continue;
            }
            if p.center[i] - boundary.min[i] < range {
                shifts[i][counts[i]] = len[i];
                counts[i] += 1;
            }
            if boundary.max[i] - p.center[i] < range {
                shifts[i][counts[i]] = -len[i];
                counts[i] += 1;
            }
        }
        for a in 0..counts[0] {
            for b in 0..counts[1] {
                for c in 0..counts[2] {
                    if a == 0 && b == 0 && c == 0 {
                        continue;
                    }
                    let shift = Vec3::new(shifts[0][a], shifts[1][b], shifts[2][c]);
                    out.push(Pebble {
                        id: primaries.len() + out.len(),
                        center: p.center + shift,
                        ghost_of: Some(p.id),
                        ..*p
                    });
                }
            }
        }
    }
    out
}

/// Uniformly distributed rotation: a turn by `α` about the third axis, then
/// the rotation taking the third axis to `(sinθ cosφ, sinθ sinφ, cosθ)` with
/// `θ = arccos p`, `p ~ U(−1, 1)`.
pub fn random_orientation(rng: &mut impl Rng) -> Mat3 {
    let alpha = rng.gen_range(0.0..2.0 * PI);
    let phi = rng.gen_range(0.0..2.0 * PI);
    let theta = rng.gen_range(-1.0f64..1.0).acos();
    axis_angle(Vec3::Z, phi) * axis_angle(Vec3::Y, theta) * axis_angle(Vec3::Z, alpha)
}

/// Kolmogorov–Smirnov distance between a sample and `U(lo, hi)`.
pub fn ks_statistic_uniform(samples: &[f64], lo: f64, hi: f64) -> f64 {
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = ((x - lo) / (hi - lo)).clamp(0.0, 1.0);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug)]
pub struct PlacementRequest<'a> {
    pub template: &'a ClumpTemplate,
    pub template_index: usize,
    pub count: usize,
    /// Region sampled for centres of mass.
    pub domain: (Vec3, Vec3),
    pub seed: u64,
    pub max_attempts: usize,
}

/// Places `count` randomly oriented clumps without pebble overlaps (minimum
/// image along periodic axes). Along non-periodic axes every pebble must also
/// lie inside the box. Same seed, same configuration.
pub fn place_clumps(req: &PlacementRequest, boundary: &PeriodicBox) -> Result<Vec<ClumpInstance>> {
    if req.count == 0 || req.max_attempts == 0 {
        return Err(Error::InvalidInput("placement needs count ≥ 1 and max_attempts ≥ 1".into()));
    }
    let (lo, hi) = req.domain;
    if (0..3).any(|i| hi[i] < lo[i]) {
        return Err(Error::InvalidInput("placement domain needs max ≥ min".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(req.seed);
    let mut placed = Vec::with_capacity(req.count);
    let mut occupied: Vec<(Vec3, f64)> = Vec::new();
    let mut candidate = Vec::with_capacity(req.template.pebbles.len());

    'clumps: for _ in 0..req.count {
        for _ in 0..req.max_attempts {
            let com = Vec3::new(
                rng.gen_range(lo.x..=hi.x),
                rng.gen_range(lo.y..=hi.y),
                rng.gen_range(lo.z..=hi.z),
            );
            let q = random_orientation(&mut rng);
            candidate.clear();
            candidate.extend(req.template.pebbles.iter().map(|p| (boundary.wrap(com + q * p.center), p.radius)));
            let inside = candidate.iter().all(|&(c, r)| {
                (0..3).all(|i| boundary.periodic[i] || (c[i] - r >= boundary.min[i] && c[i] + r <= boundary.max[i]))
            });
            let free = inside
                && candidate.iter().all(|&(c, r)| {
                    occupied.iter().all(|&(o, ro)| boundary.min_image(c - o).norm_squared() > (r + ro) * (r + ro))
                });
            if free {
                occupied.extend_from_slice(&candidate);
                placed.push(ClumpInstance::new(req.template_index, req.template, boundary.wrap(com), q));
                continue 'clumps;
            }
        }
        return Err(Error::Placement { placed: placed.len(), requested: req.count });
    }
    Ok(placed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::brute_force_pairs_periodic;
    use crate::forge::shapes::tbar_pebbles;
    use crate::forge::{align_principal, inertia_from_pebbles};
    use proptest::prelude::*;
    use rand::Rng;

    fn cube(l: f64) -> PeriodicBox {
        PeriodicBox::new(Vec3::ZERO, Vec3::splat(l), [true; 3])
    }

    #[test]
    fn min_image_examples() {
        let b = cube(10.0);
        assert_eq!(b.min_image(Vec3::new(1.0, -2.0, 4.9)), Vec3::new(1.0, -2.0, 4.9));
        assert_eq!(b.min_image(Vec3::new(9.0, 0.0, 0.0)).x, -1.0);
        assert_eq!(b.min_image(Vec3::new(5.0, -5.0, 0.0)), Vec3::new(-5.0, -5.0, 0.0));
        let open = PeriodicBox::new(Vec3::ZERO, Vec3::splat(10.0), [false; 3]);
        assert_eq!(open.min_image(Vec3::splat(9.0)), Vec3::splat(9.0));
    }

    #[test]
    fn wrap_examples() {
        let b = cube(10.0);
        assert_eq!(b.wrap(Vec3::new(3.0, 4.0, 5.0)), Vec3::new(3.0, 4.0, 5.0));
        assert!((b.wrap(Vec3::new(10.1, 0.0, 0.0)).x - 0.1).abs() < 1e-12);
        assert!((b.wrap(Vec3::new(-0.5, 25.0, 0.0)) - Vec3::new(9.5, 5.0, 0.0)).norm() < 1e-12);
        let w = b.wrap(Vec3::new(-1e-17, 0.0, 0.0));
        assert!(w.x >= 0.0 && w.x < 10.0);
    }

    #[test]
    fn ghost_counts() {
        let b = cube(10.0);
        let mk = |c: Vec3| vec![Pebble::new(0, Some(0), c, 0.5), Pebble::new(1, Some(1), Vec3::splat(5.0), 0.5)];
        assert!(ghost_pebbles(&mk(Vec3::splat(5.0)), &b, 0.1).is_empty());
        let face = ghost_pebbles(&mk(Vec3::new(0.3, 5.0, 5.0)), &b, 0.1);
        assert_eq!(face.len(), 1);
        assert_eq!(face[0].center, Vec3::new(10.3, 5.0, 5.0));
        assert_eq!(face[0].ghost_of, Some(0));
        assert_eq!(face[0].id, 2);
        assert_eq!(ghost_pebbles(&mk(Vec3::new(0.3, 9.8, 0.5)), &b, 0.1).len(), 7);
        let slab = PeriodicBox::new(Vec3::ZERO, Vec3::splat(10.0), [true, false, false]);
        assert_eq!(ghost_pebbles(&mk(Vec3::new(0.3, 9.8, 0.5)), &slab, 0.1).len(), 1);
    }

    #[test]
    fn orientation_is_uniform() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let (mut cos_t, mut phi) = (Vec::new(), Vec::new());
        for _ in 0..10_000 {
            let q = random_orientation(&mut rng);
            assert!((q.determinant() - 1.0).abs() < 1e-12);
            let n3 = q * Vec3::Z;
            cos_t.push(n3.z);
            phi.push(n3.y.atan2(n3.x).rem_euclid(2.0 * PI));
        }
        assert!(ks_statistic_uniform(&cos_t, -1.0, 1.0) < 0.02);
        assert!(ks_statistic_uniform(&phi, 0.0, 2.0 * PI) < 0.02);
    }

    #[test]
    fn ks_detects_skew() {
        let s: Vec<f64> = (0..1000).map(|i| (i as f64 / 1000.0).powi(2)).collect();
        assert!(ks_statistic_uniform(&s, 0.0, 1.0) > 0.2);
    }

    fn tbar() -> ClumpTemplate {
        let p = tbar_pebbles(3, 2, 0.5);
        align_principal("t", 1.0, &inertia_from_pebbles(&p, 1.0).unwrap(), &p).unwrap()
    }

    fn pebbles_of(t: &ClumpTemplate, clumps: &[ClumpInstance], b: &PeriodicBox) -> Vec<Pebble> {
        let mut out = Vec::new();
        for (ci, c) in clumps.iter().enumerate() {
            for p in &t.pebbles {
                out.push(Pebble::new(out.len(), Some(ci), b.wrap(c.position + c.orientation * p.center), p.radius));
            }
        }
        out
    }

    #[test]
    fn placement_is_overlap_free_and_seeded() {
        let t = tbar();
        let b = cube(12.0);
        let req = PlacementRequest {
            template: &t,
            template_index: 0,
            count: 40,
            domain: (Vec3::ZERO, Vec3::splat(12.0)),
            seed: 3,
            max_attempts: 1000,
        };
        let a = place_clumps(&req, &b).unwrap();
        assert_eq!(a.len(), 40);
        assert!(brute_force_pairs_periodic(&pebbles_of(&t, &a, &b), &b).is_empty());
        let again = place_clumps(&req, &b).unwrap();
        assert!(a.iter().zip(&again).all(|(x, y)| x.position == y.position && x.orientation == y.orientation));
    }

    #[test]
    fn single_clump_always_fits() {
        let t = tbar();
        let b = PeriodicBox::new(Vec3::splat(-1e3), Vec3::splat(1e3), [false; 3]);
        let req = PlacementRequest { template: &t, template_index: 0, count: 1, domain: (Vec3::ZERO, Vec3::ZERO), seed: 0, max_attempts: 1 };
        assert_eq!(place_clumps(&req, &b).unwrap().len(), 1);
    }

    #[test]
    fn infeasible_packing_fails() {
        let t = tbar();
        let b = cube(4.0);
        let req = PlacementRequest { template: &t, template_index: 0, count: 100, domain: (Vec3::ZERO, Vec3::splat(4.0)), seed: 1, max_attempts: 200 };
        match place_clumps(&req, &b) {
            Err(Error::Placement { placed, requested }) => {
                assert!(placed < 100);
                assert_eq!(requested, 100);
            }
            other => panic!("expected placement failure, got {other:?}"),
        }
    }

    proptest! {
        #[test]
        fn min_image_range(d in -1e3f64..1e3, l in 0.1f64..50.0) {
            let b = PeriodicBox::new(Vec3::ZERO, Vec3::splat(l), [true; 3]);
            let m = b.min_image(Vec3::new(d, 0.0, 0.0)).x;
            prop_assert!(m >= -0.5 * l - 1e-9 && m < 0.5 * l + 1e-9);
            let k = ((d - m) / l).round();
            prop_assert!((d - m - k * l).abs() < 1e-9 * (1.0 + d.abs()));
        }

        #[test]
        fn wrap_lands_inside(x in -1e3f64..1e3, l in 0.1f64..50.0) {
            let b = PeriodicBox::new(Vec3::splat(-1.0), Vec3::splat(l - 1.0), [true; 3]);
            let w = b.wrap(Vec3::splat(x));
            prop_assert!(w.x >= -1.0 && w.x < l - 1.0);
        }

        #[test]
        fn ghosts_are_pure(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = cube(10.0);
            let p: Vec<_> = (0..30).map(|i| Pebble::new(i, Some(i), Vec3::new(rng.gen(), rng.gen(), rng.gen()) * 10.0, rng.gen_range(0.1..1.0))).collect();
            prop_assert_eq!(ghost_pebbles(&p, &b, 0.1), ghost_pebbles(&p, &b, 0.1));
        }
    }
}
