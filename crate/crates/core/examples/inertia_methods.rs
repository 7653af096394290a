//! One T-shaped clump, three ways to get its mass properties: exact pebble
//! sums, voxels, and a triangulated surface. Writes the template to the
//! path given as the first argument, if any.

use clumpdem::forge::shapes::{merge_meshes, tbar_pebbles, uv_sphere};
use clumpdem::forge::{forge_template, InertiaMethod};

fn main() -> clumpdem::Result<()> {
    let pebbles = tbar_pebbles(5, 4, 0.5);
    let parts: Vec<_> = pebbles.iter().map(|p| uv_sphere(p.center, p.radius, 48, 96)).collect();
    // Touching spheres: the merged surfaces enclose the union exactly.
    let mesh = merge_meshes(&parts);

    let exact = forge_template("tbar", &pebbles, None, 2500.0, InertiaMethod::Pebbles)?;
    let rows = [
        ("pebbles", exact.clone()),
        ("voxels", forge_template("tbar", &pebbles, None, 2500.0, InertiaMethod::Voxels { n: 256 })?),
        ("mesh", forge_template("tbar", &pebbles, Some(&mesh), 2500.0, InertiaMethod::Mesh)?),
    ];
    println!("{:8} {:>12} {:>12} {:>12} {:>12}", "method", "mass", "I1", "I2", "I3");
    for (name, t) in &rows {
        let l = t.principal_moments;
        println!("{name:8} {:12.6} {:12.6} {:12.6} {:12.6}", t.mass, l.x, l.y, l.z);
    }
    for (name, t) in &rows[1..] {
        let d = (t.principal_moments - exact.principal_moments).norm() / exact.principal_moments.norm();
        println!("{name}: mass off by {:.2e}, moments by {d:.2e}", (t.mass - exact.mass).abs() / exact.mass);
    }
    if let Some(path) = std::env::args().nth(1) {
        exact.save(&path)?;
        println!("wrote {path}");
    }
    Ok(())
}
