//! Minimum-image distances, wrapping and ghost images in a periodic box,
//! checked against brute force on a random cloud.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clumpdem::boundary::{ghost_pebbles, PeriodicBox};
use clumpdem::contact::{brute_force_pairs_periodic, periodic_overlaps, Pebble};
use clumpdem::Vec3;

fn main() {
    let b = PeriodicBox::new(Vec3::ZERO, Vec3::splat(10.0), [true, true, false]);
    let d = Vec3::new(9.0, -6.0, 9.0);
    println!("min image of {d}: {}", b.min_image(d));
    println!("wrap of (12, -0.5, 3): {}", b.wrap(Vec3::new(12.0, -0.5, 3.0)));

    let corner = Pebble::new(0, Some(0), Vec3::new(0.2, 9.9, 5.0), 0.5);
    for g in ghost_pebbles(&[corner], &b, 0.1) {
        println!("ghost {} of pebble {} at {}", g.id, g.primary(), g.center);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cloud: Vec<Pebble> = (0..400)
        .map(|i| {
            let c = Vec3::new(rng.gen(), rng.gen(), rng.gen()) * 10.0;
            Pebble::new(i, Some(i), c, rng.gen_range(0.05..0.8))
        })
        .collect();
    let truth = brute_force_pairs_periodic(&cloud, &b);
    for levels in 1..=4 {
        let found = periodic_overlaps(&cloud, &b, levels, 0.0, 0.08);
        println!("{levels} grid levels: {} pairs, matches brute force: {}", found.len(), found == truth);
    }
}
