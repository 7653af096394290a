//! Writes a box as ASCII and binary STL, reads both back and compares the
//! tetrahedron-sum inertia with the closed form.

use clumpdem::forge::shapes::box_mesh;
use clumpdem::forge::stl::{parse_stl, write_ascii_stl, write_binary_stl};
use clumpdem::forge::inertia_from_mesh;
use clumpdem::Vec3;

fn main() -> clumpdem::Result<()> {
    let (a, b, c) = (2.0, 1.0, 0.5);
    let mesh = box_mesh(Vec3::new(1.0, 1.0, 1.0), Vec3::new(1.0 + a, 1.0 + b, 1.0 + c));
    let dir = std::env::temp_dir();
    let ascii = dir.join("clumpdem_box_ascii.stl");
    let binary = dir.join("clumpdem_box_binary.stl");
    std::fs::write(&ascii, write_ascii_stl(&mesh, "box"))?;
    std::fs::write(&binary, write_binary_stl(&mesh))?;

    let m = a * b * c;
    let exact = Vec3::new(b * b + c * c, a * a + c * c, a * a + b * b) * (m / 12.0);
    for path in [&ascii, &binary] {
        let back = parse_stl(&std::fs::read(path)?, path)?;
        let p = inertia_from_mesh(&back, 1.0)?;
        println!(
            "{}: {} triangles, mass {:.12}, com {}, inertia diagonal {}",
            path.display(),
            back.faces.len(),
            p.mass,
            p.com,
            p.inertia.diagonal()
        );
    }
    println!("exact: mass {m}, inertia diagonal {exact}");
    Ok(())
}
