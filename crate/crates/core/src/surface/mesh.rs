use std::collections::HashMap;
use std::fmt::Write as _;

use crate::{Error, Result, Vec3};

/// Closed, outward-oriented triangulated surface.
///
/// Construction through [`TriangleMesh::new`] checks that every face index is
/// in range, every vertex is used, every face has positive area, and every
/// undirected edge is shared by exactly two faces traversing it in opposite
/// directions. Meshes with a negative enclosed volume (inward winding) are
/// rejected as well.
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    vertices: Vec<Vec3>,
    faces: Vec<[usize; 3]>,
    normals: Option<Vec<Vec3>>,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Vec3>, faces: Vec<[usize; 3]>, normals: Option<Vec<Vec3>>) -> Result<Self> {
        let mesh = TriangleMesh {
            vertices,
            faces,
            normals,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    /// Per-vertex unit normals, when the source provided them.
    pub fn normals(&self) -> Option<&[Vec3]> {
        self.normals.as_deref()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn face_vertices(&self, f: usize) -> [Vec3; 3] {
        let [a, b, c] = self.faces[f];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Twice-area vector `(b − a) × (c − a)` of face `f`.
    pub fn face_cross(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.face_vertices(f);
        (b - a).cross(c - a)
    }

    pub fn surface_area(&self) -> f64 {
        (0..self.faces.len()).map(|f| 0.5 * self.face_cross(f).norm()).sum()
    }

    /// Shortest distance from `p` to any face.
    pub fn distance_to(&self, p: Vec3) -> f64 {
        (0..self.faces.len())
            .map(|f| crate::kernels::Panel::new(self.face_vertices(f)).distance(p))
            .fold(f64::INFINITY, f64::min)
    }

    /// Enclosed volume by the divergence theorem; positive for outward winding.
    pub fn signed_volume(&self) -> f64 {
        self.faces
            .iter()
            .map(|&[a, b, c]| self.vertices[a].dot(self.vertices[b].cross(self.vertices[c])) / 6.0)
            .sum()
    }

    /// Mean of the vertex positions.
    pub fn vertex_centroid(&self) -> Vec3 {
        let sum = self.vertices.iter().fold(Vec3::ZERO, |acc, &v| acc + v);
        sum / self.vertices.len() as f64
    }

    fn validate(&self) -> Result<()> {
        let nv = self.vertices.len();
        if self.faces.len() < 4 {
            return Err(Error::Orientation(format!(
                "{} faces cannot enclose a volume",
                self.faces.len()
            )));
        }
        if let Some((i, _)) = self.vertices.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Geometry(format!("vertex {i} is not finite")));
        }
        if let Some(n) = &self.normals {
            if n.len() != nv {
                return Err(Error::Dimension(format!("{} normals for {} vertices", n.len(), nv)));
            }
        }

        let mut used = vec![false; nv];
        for (f, face) in self.faces.iter().enumerate() {
            for &v in face {
                if v >= nv {
                    return Err(Error::MalformedFace {
                        face: f,
                        msg: format!("vertex index {v} out of range (mesh has {nv} vertices)"),
                    });
                }
                used[v] = true;
            }
            if face[0] == face[1] || face[1] == face[2] || face[0] == face[2] {
                return Err(Error::MalformedFace {
                    face: f,
                    msg: "repeated vertex index".into(),
                });
            }
            let area = 0.5 * self.face_cross(f).norm();
            if !(area > 0.0) {
                return Err(Error::DegeneratePanel { face: f, area });
            }
        }
        if let Some(v) = used.iter().position(|&u| !u) {
            return Err(Error::IsolatedVertex(v));
        }

        let mut directed: HashMap<(usize, usize), usize> = HashMap::with_capacity(3 * self.faces.len());
        for (f, &[a, b, c]) in self.faces.iter().enumerate() {
            for e in [(a, b), (b, c), (c, a)] {
                if let Some(prev) = directed.insert(e, f) {
                    return Err(Error::Orientation(format!(
                        "directed edge ({}, {}) appears in faces {prev} and {f}",
                        e.0, e.1
                    )));
                }
            }
        }
        for &(a, b) in directed.keys() {
            if !directed.contains_key(&(b, a)) {
                let mut msg = String::new();
                let _ = write!(msg, "edge ({a}, {b}) has no oppositely traversed partner");
                return Err(Error::Orientation(msg));
            }
        }

        if self.signed_volume() <= 0.0 {
            return Err(Error::Orientation(
                "faces are wound inward (non-positive enclosed volume)".into(),
            ));
        }
        Ok(())
    }

    /// Vertices as CSV records `x,y,z`.
    pub fn vertices_csv(&self) -> String {
        let mut out = String::from("x,y,z\n");
        for v in &self.vertices {
            let _ = writeln!(out, "{},{},{}", v.x(), v.y(), v.z());
        }
        out
    }
}
