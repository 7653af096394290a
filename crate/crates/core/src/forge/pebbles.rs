use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::math::Vec3;

/// A sphere of a clump recipe.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PebbleSpec {
    pub center: Vec3,
    pub radius: f64,
}

impl PebbleSpec {
    pub fn new(center: Vec3, radius: f64) -> Self {
        PebbleSpec { center, radius }
    }

    pub fn volume(&self) -> f64 {
        4.0 / 3.0 * std::f64::consts::PI * self.radius.powi(3)
    }

    pub fn contains(&self, p: Vec3) -> bool {
        (p - self.center).norm_squared() < self.radius * self.radius
    }
}

/// Reads a pebble CSV file: one `x,y,z,r` row per pebble, `#` comments and
/// blank lines ignored.
pub fn load_pebbles(path: impl AsRef<Path>) -> Result<Vec<PebbleSpec>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    parse_pebbles(&text, path)
}

pub fn parse_pebbles(text: &str, source: &Path) -> Result<Vec<PebbleSpec>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |message: String| Error::Parse {
            path: source.to_path_buf(),
            line: idx + 1,
            message,
        };
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 4 {
            return Err(parse_err(format!("expected 4 fields x,y,z,r, found {}", fields.len())));
        }
        let mut vals = [0.0; 4];
        for (v, f) in vals.iter_mut().zip(&fields) {
            *v = f
                .parse::<f64>()
                .map_err(|e| parse_err(format!("bad number {f:?}: {e}")))?;
            if !v.is_finite() {
                return Err(parse_err(format!("non-finite value {f:?}")));
            }
        }
        if vals[3] <= 0.0 {
            return Err(Error::Validation(format!(
                "{}:{}: pebble radius must be positive, got {}",
                source.display(),
                idx + 1,
                vals[3]
            )));
        }
        out.push(PebbleSpec::new(Vec3::new(vals[0], vals[1], vals[2]), vals[3]));
    }
    Ok(out)
}

pub fn write_pebbles(pebbles: &[PebbleSpec]) -> String {
    let mut s = String::from("# x,y,z,r\n");
    for p in pebbles {
        s.push_str(&format!("{},{},{},{}\n", p.center.x, p.center.y, p.center.z, p.radius));
    }
    s
}
