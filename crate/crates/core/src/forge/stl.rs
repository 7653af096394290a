//! ASCII and binary STL ingestion with vertex welding.

use std::fs;
use std::path::Path;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::math::Vec3;

/// Indexed triangle mesh. Faces are expected to wind counter-clockwise seen
/// from outside, although mass computations tolerate a globally inverted
/// winding.
#[derive(Clone, Debug, PartialEq)]
pub struct TriMesh {
    pub vertices: Vec<Vec3>,
    pub faces: Vec<[usize; 3]>,
}

impl TriMesh {
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let mesh = TriMesh { vertices, faces };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn validate(&self) -> Result<()> {
        if self.faces.is_empty() {
            return Err(Error::Validation("mesh has no faces".into()));
        }
        for (i, f) in self.faces.iter().enumerate() {
            if f.iter().any(|&v| v >= self.vertices.len()) {
                return Err(Error::Validation(format!("face {i} references a missing vertex")));
            }
            if self.face_area(i) <= 0.0 {
                return Err(Error::Validation(format!("face {i} is degenerate")));
            }
        }
        Ok(())
    }

    pub fn triangle(&self, i: usize) -> [Vec3; 3] {
        let f = self.faces[i];
        [self.vertices[f[0]], self.vertices[f[1]], self.vertices[f[2]]]
    }

    pub fn face_area(&self, i: usize) -> f64 {
        let [a, b, c] = self.triangle(i);
        0.5 * (b - a).cross(c - a).norm()
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::splat(f64::INFINITY);
        let mut hi = Vec3::splat(f64::NEG_INFINITY);
        for &v in &self.vertices {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Builds a mesh from a triangle soup, merging vertices closer than
    /// `1e-9` times the bounding-box diagonal.
    pub fn from_triangles(tris: &[[Vec3; 3]]) -> Result<Self> {
        if tris.is_empty() {
            return Err(Error::Validation("mesh has no faces".into()));
        }
        let mut lo = Vec3::splat(f64::INFINITY);
        let mut hi = Vec3::splat(f64::NEG_INFINITY);
        for v in tris.iter().flatten() {
            lo = lo.min(*v);
            hi = hi.max(*v);
        }
        let tol = 1e-9 * (hi - lo).norm();
        let mut welder = Welder::new(tol);
        let faces = tris
            .iter()
            .map(|t| [welder.insert(t[0]), welder.insert(t[1]), welder.insert(t[2])])
            .collect();
        TriMesh::new(welder.vertices, faces)
    }
}

struct Welder {
    tol: f64,
    cell: f64,
    buckets: FxHashMap<(i64, i64, i64), Vec<usize>>,
    vertices: Vec<Vec3>,
}

impl Welder {
    fn new(tol: f64) -> Self {
        let cell = if tol > 0.0 { 4.0 * tol } else { 1.0 };
        Welder { tol, cell, buckets: FxHashMap::default(), vertices: Vec::new() }
    }

    fn key(&self, v: Vec3) -> (i64, i64, i64) {
        (
            (v.x / self.cell).floor() as i64,
            (v.y / self.cell).floor() as i64,
            (v.z / self.cell).floor() as i64,
        )
    }

    fn insert(&mut self, v: Vec3) -> usize {
        let (kx, ky, kz) = self.key(v);
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    if let Some(list) = self.buckets.get(&(kx + dx, ky + dy, kz + dz)) {
                        for &i in list {
                            if (self.vertices[i] - v).norm() <= self.tol {
                                return i;
                            }
                        }
                    }
                }
            }
        }
        let idx = self.vertices.len();
        self.vertices.push(v);
        self.buckets.entry((kx, ky, kz)).or_default().push(idx);
        idx
    }
}

pub fn load_stl(path: impl AsRef<Path>) -> Result<TriMesh> {
    let path = path.as_ref();
    let bytes = fs::read(path)?;
    parse_stl(&bytes, path)
}

pub fn parse_stl(bytes: &[u8], source: &Path) -> Result<TriMesh> {
    let tris = if is_binary_stl(bytes) {
        parse_binary(bytes, source)?
    } else if bytes.trim_ascii_start().starts_with(b"solid") {
        parse_ascii(bytes, source)?
    } else {
        return Err(Error::Parse {
            path: source.to_path_buf(),
            line: 0,
            message: "unrecognized STL format".into(),
        });
    };
    TriMesh::from_triangles(&tris)
}

fn is_binary_stl(bytes: &[u8]) -> bool {
    if bytes.len() < 84 {
        return false;
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    bytes.len() == 84 + 50 * count
}

fn parse_binary(bytes: &[u8], source: &Path) -> Result<Vec<[Vec3; 3]>> {
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    let read_f32 = |off: usize| f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as f64;
    let mut tris = Vec::with_capacity(count);
    for i in 0..count {
        let base = 84 + 50 * i + 12;
        let mut t = [Vec3::ZERO; 3];
        for (k, v) in t.iter_mut().enumerate() {
            let o = base + 12 * k;
            *v = Vec3::new(read_f32(o), read_f32(o + 4), read_f32(o + 8));
            if !v.is_finite() {
                return Err(Error::Parse {
                    path: source.to_path_buf(),
                    line: 0,
                    message: format!("facet {i} has non-finite coordinates"),
                });
            }
        }
        tris.push(t);
    }
    Ok(tris)
}

fn parse_ascii(bytes: &[u8], source: &Path) -> Result<Vec<[Vec3; 3]>> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse {
        path: source.to_path_buf(),
        line: 0,
        message: format!("not valid UTF-8: {e}"),
    })?;
    let mut tris = Vec::new();
    let mut current: Vec<Vec3> = Vec::with_capacity(3);
    for (idx, line) in text.lines().enumerate() {
        let mut words = line.split_whitespace();
        let err = |message: String| Error::Parse { path: source.to_path_buf(), line: idx + 1, message };
        match words.next() {
            Some("vertex") => {
                let coords: Vec<f64> = words
                    .map(|w| w.parse::<f64>().map_err(|e| err(format!("bad coordinate {w:?}: {e}"))))
                    .collect::<Result<_>>()?;
                if coords.len() != 3 {
                    return Err(err("vertex needs three coordinates".into()));
                }
                current.push(Vec3::new(coords[0], coords[1], coords[2]));
            }
            Some("endfacet") => {
                if current.len() != 3 {
                    return Err(err(format!("facet has {} vertices", current.len())));
                }
                tris.push([current[0], current[1], current[2]]);
                current.clear();
            }
            Some("facet") => current.clear(),
            _ => {}
        }
    }
    Ok(tris)
}

fn facet_normal(t: &[Vec3; 3]) -> Vec3 {
    (t[1] - t[0]).cross(t[2] - t[0]).normalized().unwrap_or(Vec3::ZERO)
}

pub fn write_ascii_stl(mesh: &TriMesh, name: &str) -> String {
    let mut s = format!("solid {name}\n");
    for i in 0..mesh.faces.len() {
        let t = mesh.triangle(i);
        let n = facet_normal(&t);
        s.push_str(&format!("  facet normal {} {} {}\n    outer loop\n", n.x, n.y, n.z));
        for v in t {
            s.push_str(&format!("      vertex {} {} {}\n", v.x, v.y, v.z));
        }
        s.push_str("    endloop\n  endfacet\n");
    }
    s.push_str(&format!("endsolid {name}\n"));
    s
}

pub fn write_binary_stl(mesh: &TriMesh) -> Vec<u8> {
    let mut out = vec![0u8; 80];
    out.extend_from_slice(&(mesh.faces.len() as u32).to_le_bytes());
    for i in 0..mesh.faces.len() {
        let t = mesh.triangle(i);
        for v in std::iter::once(facet_normal(&t)).chain(t) {
            for c in v.to_array() {
                out.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&[0, 0]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forge::shapes::box_mesh;

    fn unit_cube_soup() -> Vec<[Vec3; 3]> {
        let m = box_mesh(Vec3::ZERO, Vec3::splat(1.0));
        (0..m.faces.len()).map(|i| m.triangle(i)).collect()
    }

    #[test]
    fn ascii_cube_welds_to_eight_vertices() {
        let soup = TriMesh { vertices: unit_cube_soup().into_iter().flatten().collect(), faces: (0..12).map(|i| [3 * i, 3 * i + 1, 3 * i + 2]).collect() };
        assert_eq!(soup.vertices.len(), 36);
        let text = write_ascii_stl(&soup, "cube");
        let mesh = parse_stl(text.as_bytes(), Path::new("cube.stl")).unwrap();
        assert_eq!(mesh.vertices.len(), 8);
        assert_eq!(mesh.faces.len(), 12);
    }

    #[test]
    fn binary_and_ascii_agree() {
        let mesh = TriMesh::from_triangles(&unit_cube_soup()).unwrap();
        let a = parse_stl(write_ascii_stl(&mesh, "c").as_bytes(), Path::new("a")).unwrap();
        let b = parse_stl(&write_binary_stl(&mesh), Path::new("b")).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, mesh);
    }

    #[test]
    fn empty_facet_list_rejected() {
        let r = parse_stl(b"solid empty\nendsolid empty\n", Path::new("e"));
        assert!(matches!(r, Err(Error::Validation(_))));
        let mut bin = vec![0u8; 80];
        bin.extend_from_slice(&0u32.to_le_bytes());
        assert!(matches!(parse_stl(&bin, Path::new("e")), Err(Error::Validation(_))));
    }

    #[test]
    fn garbage_rejected() {
        let r = parse_stl(b"hello world, this is not a mesh", Path::new("g"));
        assert!(matches!(r, Err(Error::Parse { .. })));
    }

    #[test]
    fn degenerate_face_rejected() {
        let v = vec![Vec3::ZERO, Vec3::X, Vec3::X * 2.0];
        assert!(TriMesh::new(v, vec![[0, 1, 2]]).is_err());
    }
}
