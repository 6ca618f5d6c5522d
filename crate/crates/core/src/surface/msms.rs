//! MSMS `.vert` / `.face` reader and writer.
//!
//! Lines starting with `#` are comments. The first remaining line is taken as
//! the count header when it cannot be a data record: too few fields, or a
//! non-numeric field where a record needs a number. Data records may carry
//! trailing fields.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::TriangleMesh;
use crate::{Error, Result, Vec3};

const VERT_FIELDS: usize = 6;
const FACE_FIELDS: usize = 3;

pub fn load_msms_mesh(vert: impl BufRead, face: impl BufRead) -> Result<TriangleMesh> {
    let mut vertices = Vec::new();
    let mut normals = Vec::new();
    for (lineno, fields) in records(vert, VERT_FIELDS, |f| f.iter().all(|s| s.parse::<f64>().is_ok()))? {
        let mut nums = [0.0; VERT_FIELDS];
        for (k, s) in fields.iter().take(VERT_FIELDS).enumerate() {
            nums[k] = s.parse::<f64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("non-numeric vertex field {:?}", s),
            })?;
        }
        vertices.push(Vec3::new(nums[0], nums[1], nums[2]));
        let n = Vec3::new(nums[3], nums[4], nums[5]);
        let len = n.norm();
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::Parse {
                line: lineno,
                msg: "vertex normal has zero length".into(),
            });
        }
        normals.push(n / len);
    }

    let nv = vertices.len();
    let mut faces = Vec::new();
    for (lineno, fields) in records(face, FACE_FIELDS, |f| {
        f.iter().take(FACE_FIELDS).all(|s| s.parse::<usize>().is_ok())
    })? {
        let mut tri = [0usize; 3];
        for (k, s) in fields.iter().take(FACE_FIELDS).enumerate() {
            let idx: i64 = s.parse().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("non-integer face index {:?}", s),
            })?;
            if idx < 1 || idx as usize > nv {
                return Err(Error::MalformedFace {
                    face: faces.len(),
                    msg: format!("line {lineno}: index {idx} outside 1..={nv}"),
                });
            }
            tri[k] = idx as usize - 1;
        }
        faces.push(tri);
    }
    TriangleMesh::new(vertices, faces, Some(normals))
}

pub fn load_msms_files(vert: impl AsRef<Path>, face: impl AsRef<Path>) -> Result<TriangleMesh> {
    let v = BufReader::new(File::open(vert)?);
    let f = BufReader::new(File::open(face)?);
    load_msms_mesh(v, f)
}

/// Serialize to MSMS-style text: `(vert, face)` contents with 1-based indices.
pub fn write_msms_mesh(mesh: &TriangleMesh) -> (String, String) {
    let mut vert = String::from("# MSMS-format vertex file\n# x y z nx ny nz\n");
    let _ = writeln!(vert, "{}", mesh.num_vertices());
    let fallback;
    let normals = match mesh.normals() {
        Some(n) => n,
        None => {
            fallback = super::vertex_quadrature(mesh)
                .map(|pc| pc.normals().to_vec())
                .unwrap_or_else(|_| vec![Vec3::ZERO; mesh.num_vertices()]);
            &fallback
        }
    };
    for (v, n) in mesh.vertices().iter().zip(normals) {
        let _ = writeln!(
            vert,
            "{:12.6} {:12.6} {:12.6} {:9.6} {:9.6} {:9.6}",
            v.x(),
            v.y(),
            v.z(),
            n.x(),
            n.y(),
            n.z()
        );
    }
    let mut face = String::from("# MSMS-format face file\n# v1 v2 v3 (1-based)\n");
    let _ = writeln!(face, "{}", mesh.num_faces());
    for &[a, b, c] in mesh.faces() {
        let _ = writeln!(face, "{:7} {:7} {:7}", a + 1, b + 1, c + 1);
    }
    (vert, face)
}

/// Data records as `(1-based line number, fields)`, with comments and the
/// optional count header removed.
fn records(
    input: impl BufRead,
    min_fields: usize,
    looks_like_record: impl Fn(&[&str]) -> bool,
) -> Result<Vec<(usize, Vec<String>)>> {
    let mut out = Vec::new();
    let mut seen_first = false;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if !seen_first {
            seen_first = true;
            if fields.len() < min_fields || !looks_like_record(&fields) {
                continue;
            }
        }
        if fields.len() < min_fields {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected at least {min_fields} fields, found {}", fields.len()),
            });
        }
        out.push((lineno, fields.into_iter().map(str::to_owned).collect()));
    }
    Ok(out)
}
