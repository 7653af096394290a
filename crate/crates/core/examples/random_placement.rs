//! Uniform random orientations and overlap-free random placement of
//! T-shaped clumps.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use clumpdem::boundary::{ks_statistic_uniform, place_clumps, random_orientation, PeriodicBox, PlacementRequest};
use clumpdem::forge::shapes::tbar_pebbles;
use clumpdem::forge::{forge_template, InertiaMethod};
use clumpdem::Vec3;

fn main() -> clumpdem::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut cos_t, mut phi) = (Vec::new(), Vec::new());
    for _ in 0..10_000 {
        let e3 = random_orientation(&mut rng).col(2);
        cos_t.push(e3.z);
        phi.push(e3.y.atan2(e3.x));
    }
    println!(
        "KS distance from uniform over 10^4 samples: cos θ {:.4}, φ {:.4}",
        ks_statistic_uniform(&cos_t, -1.0, 1.0),
        ks_statistic_uniform(&phi, -PI, PI)
    );

    let t = forge_template("tee", &tbar_pebbles(3, 2, 0.05), None, 1000.0, InertiaMethod::Pebbles)?;
    let b = PeriodicBox::new(Vec3::ZERO, Vec3::splat(1.0), [true, true, false]);
    let req = PlacementRequest {
        template: &t,
        template_index: 0,
        count: 50,
        domain: (b.min, b.max),
        seed: 7,
        max_attempts: 10_000,
    };
    let clumps = place_clumps(&req, &b)?;
    let lowest = clumps.iter().map(|c| c.position.z).fold(f64::INFINITY, f64::min);
    println!("placed {} clumps, lowest centre of mass at z = {lowest:.3}", clumps.len());
    Ok(())
}
