//! Force history of one oblique frictional contact: the tangential spring
//! sticks, then slides once it reaches the Coulomb limit.

use clumpdem::contact::{contact_force, narrow_phase_pair, ContactModel, Pebble};
use clumpdem::Vec3;

fn main() -> clumpdem::Result<()> {
    let model = ContactModel { kn: 1e4, gamma_n: 0.0, kt: 4e3, gamma_t: 0.0, mu: 0.3 };
    let dt = 1e-4;
    let a = Pebble::new(0, None, Vec3::ZERO, 0.1);
    let mut spring = Vec3::ZERO;
    println!("{:>6} {:>10} {:>10} {:>8}", "step", "|F_n|", "|F_t|", "sliding");
    for k in 0..=200 {
        // Pebble b sits at a fixed overlap and slides past a along y.
        let b = Pebble::new(1, None, Vec3::new(0.19, 0.0, 0.0), 0.1);
        let mut c = narrow_phase_pair(&a, &b, a.center - b.center)?.expect("overlapping");
        c.spring = spring;
        let (f, s) = contact_force(&c, &model, Vec3::new(0.0, -0.5, 0.0), dt);
        spring = s;
        let fn_ = f.dot(c.normal).abs();
        let ft = (f - c.normal * f.dot(c.normal)).norm();
        if k % 20 == 0 {
            println!("{k:6} {fn_:10.3} {ft:10.3} {:>8}", ft >= model.mu * fn_ - 1e-12);
        }
    }
    Ok(())
}
