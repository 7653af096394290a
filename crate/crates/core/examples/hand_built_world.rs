//! Assembling a world by hand: a few clumps dropped into a box under
//! gravity, with energies printed and pebble snapshots written on the way.

use clumpdem::contact::{ContactModel, Wall};
use clumpdem::dynamics::IntegratorSettings;
use clumpdem::forge::shapes::{rod_pebbles, tbar_pebbles};
use clumpdem::forge::{forge_template, ClumpTemplate, InertiaMethod};
use clumpdem::math::axis_angle;
use clumpdem::{Vec3, World};

fn main() -> clumpdem::Result<()> {
    let model = ContactModel { kn: 2e4, gamma_n: 2.0, kt: 5e3, gamma_t: 0.5, mu: 0.5 };
    let ball = ClumpTemplate::sphere("ball", 0.05, 1000.0);
    let dt = model.contact_time(ball.mass) / 50.0;
    let settings = IntegratorSettings { dt, gravity: Vec3::new(0.0, 0.0, -9.81), ..Default::default() };
    let mut w = World::new(model, settings)?;
    let ball = w.add_template(ball);
    let rod = w.add_template(forge_template("rod", &rod_pebbles(4, 0.05), None, 1000.0, InertiaMethod::Pebbles)?);
    let tee = w.add_template(forge_template("tee", &tbar_pebbles(3, 2, 0.05), None, 1000.0, InertiaMethod::Pebbles)?);
    w.add_wall(Wall::boxed(Vec3::new(-0.5, -0.5, 0.0), Vec3::new(0.5, 0.5, 2.0))?);

    for (i, &t) in [ball, rod, tee, rod, ball, tee].iter().enumerate() {
        let h = 0.3 + 0.3 * i as f64;
        let q = axis_angle(Vec3::new(1.0, 2.0, 3.0), 0.7 * i as f64);
        w.add_clump(t, Vec3::new(0.1 * (i % 3) as f64 - 0.1, 0.05 * (i % 2) as f64, h), q, Vec3::ZERO, Vec3::ZERO)?;
    }
    w.initialize()?;

    let dir = std::env::temp_dir().join("clumpdem_pile");
    std::fs::create_dir_all(&dir)?;
    let every = (0.25 / dt).round() as u64;
    println!("{:>5} {:>10} {:>10} {:>10} {:>9}", "t", "kinetic", "potential", "elastic", "contacts");
    for frame in 0..=12 {
        let e = w.energy()?;
        println!("{:5.2} {:10.4} {:10.4} {:10.5} {:9}", e.time, e.kinetic(), e.gravitational, e.elastic, w.contacts().len());
        w.write_snapshot(&dir.join(format!("frame_{frame:02}.csv")))?;
        for _ in 0..every {
            w.step()?;
        }
    }
    println!("snapshots in {}", dir.display());
    Ok(())
}
