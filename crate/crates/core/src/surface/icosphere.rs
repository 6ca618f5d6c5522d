use std::collections::HashMap;

use super::TriangleMesh;
use crate::{Error, Result, Vec3};

/// Subdivided icosahedron with every vertex projected onto `|v| = radius`.
///
/// The base icosahedron is rotated so that one vertex lies on `+z`; each
/// level splits every face into four through edge midpoints. Per-vertex
/// normals are the radial directions.
pub fn generate_icosphere(radius: f64, level: u32) -> Result<TriangleMesh> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "icosphere radius must be positive, got {radius}"
        )));
    }
    let t = (1.0 + 5f64.sqrt()) / 2.0;
    let base = [
        [-1.0, t, 0.0],
        [1.0, t, 0.0],
        [-1.0, -t, 0.0],
        [1.0, -t, 0.0],
        [0.0, -1.0, t],
        [0.0, 1.0, t],
        [0.0, -1.0, -t],
        [0.0, 1.0, -t],
        [t, 0.0, -1.0],
        [t, 0.0, 1.0],
        [-t, 0.0, -1.0],
        [-t, 0.0, 1.0],
    ];
    // Rotation about x taking (0, 1, t) onto the +z axis.
    let s = (1.0 + t * t).sqrt();
    let (c, sn) = (t / s, 1.0 / s);
    let mut vertices: Vec<Vec3> = base
        .iter()
        .map(|&[x, y, z]| Vec3::new(x, c * y - sn * z, sn * y + c * z).normalized())
        .collect();
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut split = |a: usize, b: usize, verts: &mut Vec<Vec3>| -> usize {
            let key = if a < b { (a, b) } else { (b, a) };
            *midpoint.entry(key).or_insert_with(|| {
                verts.push(((verts[a] + verts[b]) * 0.5).normalized());
                verts.len() - 1
            })
        };
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let ab = split(a, b, &mut vertices);
            let bc = split(b, c, &mut vertices);
            let ca = split(c, a, &mut vertices);
            next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }

    let normals = vertices.clone();
    let vertices = vertices.into_iter().map(|u| u * radius).collect();
    TriangleMesh::new(vertices, faces, Some(normals))
}
