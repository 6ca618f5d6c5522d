use super::TriangleMesh;
use crate::kernels::Panel;
use crate::{Error, Result, Vec3};

/// Flat constant-density panels, one per mesh face.
#[derive(Debug, Clone)]
pub struct PanelSet {
    panels: Vec<Panel>,
}

impl PanelSet {
    pub fn panels(&self) -> &[Panel] {
        &self.panels
    }

    pub fn len(&self) -> usize {
        self.panels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.panels.is_empty()
    }

    pub fn areas(&self) -> Vec<f64> {
        self.panels.iter().map(|p| p.area()).collect()
    }

    pub fn centroids(&self) -> Vec<Vec3> {
        self.panels.iter().map(|p| p.centroid()).collect()
    }

    pub fn total_area(&self) -> f64 {
        self.panels.iter().map(|p| p.area()).sum()
    }

    /// `Σ a_j n_j`, which vanishes for a closed surface.
    pub fn vector_area(&self) -> Vec3 {
        self.panels
            .iter()
            .fold(Vec3::ZERO, |acc, p| acc + p.normal() * p.area())
    }
}

/// Nyström points at mesh vertices with one-third-area weights.
#[derive(Debug, Clone)]
pub struct PointCloud {
    positions: Vec<Vec3>,
    normals: Vec<Vec3>,
    weights: Vec<f64>,
}

impl PointCloud {
    /// Points with explicit normals and weights; normals are normalized.
    pub fn new(positions: Vec<Vec3>, normals: Vec<Vec3>, weights: Vec<f64>) -> Result<Self> {
        if positions.len() != normals.len() || positions.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} points, {} normals, {} weights",
                positions.len(),
                normals.len(),
                weights.len()
            )));
        }
        if let Some(i) = weights.iter().position(|&w| !(w > 0.0)) {
            return Err(Error::InvalidArgument(format!("weight {i} is not positive")));
        }
        let normals = normals
            .into_iter()
            .enumerate()
            .map(|(i, n)| {
                let len = n.norm();
                if len > 0.0 && len.is_finite() {
                    Ok(n / len)
                } else {
                    Err(Error::DegenerateNormal(i))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointCloud {
            positions,
            normals,
            weights,
        })
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }
}

pub fn panel_geometry(mesh: &TriangleMesh) -> Result<PanelSet> {
    let panels = (0..mesh.num_faces())
        .map(|f| {
            let p = Panel::new(mesh.face_vertices(f));
            if p.area() > 0.0 && p.normal().is_finite() {
                Ok(p)
            } else {
                Err(Error::DegeneratePanel {
                    face: f,
                    area: p.area(),
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PanelSet { panels })
}

/// Vertex weights `w_i = ⅓ Σ (areas of incident faces)`. Normals come from
/// the mesh when present, otherwise from the area-weighted mean of the
/// incident face normals.
pub fn vertex_quadrature(mesh: &TriangleMesh) -> Result<PointCloud> {
    let nv = mesh.num_vertices();
    let mut weights = vec![0.0; nv];
    let mut accum = vec![Vec3::ZERO; nv];
    let mut incident = vec![0usize; nv];
    for (f, face) in mesh.faces().iter().enumerate() {
        let cross = mesh.face_cross(f);
        let third = 0.5 * cross.norm() / 3.0;
        for &v in face {
            weights[v] += third;
            // |cross| = 2·area, so this is area-weighting of the unit normals.
            accum[v] += cross;
            incident[v] += 1;
        }
    }
    if let Some(v) = incident.iter().position(|&c| c == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let normals = match mesh.normals() {
        Some(n) => n.iter().map(|v| v.normalized()).collect(),
        None => accum
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let len = a.norm();
                if len > 0.0 && len.is_finite() {
                    Ok(*a / len)
                } else {
                    Err(Error::DegenerateNormal(i))
                }
            })
            .collect::<Result<Vec<_>>>()?,
    };
    Ok(PointCloud {
        positions: mesh.vertices().to_vec(),
        normals,
        weights,
    })
}
