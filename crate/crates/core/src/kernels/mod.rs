//! Laplace kernels, closed-form flat-triangle integrals, a quadrature oracle,
//! and the flop ledger used for work accounting.
//!
//! All kernels use the Green's function `G(r, r') = 1/(4π|r − r'|)`.

mod ledger;
mod quadrature;
mod single_layer;

pub use ledger::{FlopLedger, Ops};
pub use quadrature::{adaptive_triangle_quadrature, DEFAULT_MAX_DEPTH};
pub use single_layer::{single_layer_panel_potential, single_layer_quadrature};

use std::f64::consts::PI;

use crate::{Error, Result, Vec3};

pub(crate) const FOUR_PI: f64 = 4.0 * PI;

/// Relative size (in panel diameters) of the zone treated as "on the panel".
pub const NEAR_SINGULAR_REL: f64 = 1e-12;

pub const COULOMB_OPS: Ops = Ops::new(5, 4, 1, 1, 0);
pub const NORMAL_FIELD_OPS: Ops = Ops::new(7, 8, 1, 1, 0);
pub const SOLID_ANGLE_OPS: Ops = Ops::new(29, 33, 0, 3, 1);
pub const PANEL_FLUX_OPS: Ops = Ops::new(29, 33, 1, 3, 1);

/// Flat triangular boundary element with its derived geometry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    vertices: [Vec3; 3],
    normal: Vec3,
    area: f64,
    centroid: Vec3,
    diameter: f64,
    // Unit edge directions v_i → v_{i+1} and in-plane outward edge normals.
    edge_dirs: [Vec3; 3],
    edge_normals: [Vec3; 3],
}

impl Panel {
    /// Geometry of the triangle `v0, v1, v2`; the normal follows the winding.
    pub fn new(vertices: [Vec3; 3]) -> Self {
        let [a, b, c] = vertices;
        let cross = (b - a).cross(c - a);
        let twice_area = cross.norm();
        let normal = cross / twice_area;
        let edges = [b - a, c - b, a - c];
        let diameter = edges.iter().map(|e| e.norm()).fold(0.0, f64::max);
        let edge_dirs = edges.map(|e| e.normalized());
        let edge_normals = edge_dirs.map(|t| t.cross(normal));
        Panel {
            vertices,
            normal,
            area: 0.5 * twice_area,
            centroid: (a + b + c) / 3.0,
            diameter,
            edge_dirs,
            edge_normals,
        }
    }

    pub fn vertices(&self) -> [Vec3; 3] {
        self.vertices
    }

    pub fn normal(&self) -> Vec3 {
        self.normal
    }

    pub fn area(&self) -> f64 {
        self.area
    }

    pub fn centroid(&self) -> Vec3 {
        self.centroid
    }

    /// Longest edge length.
    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub(crate) fn edge_dirs(&self) -> &[Vec3; 3] {
        &self.edge_dirs
    }

    pub(crate) fn edge_normals(&self) -> &[Vec3; 3] {
        &self.edge_normals
    }

    /// Signed distance from the panel plane, positive on the normal side.
    pub fn plane_distance(&self, p: Vec3) -> f64 {
        (p - self.vertices[0]).dot(self.normal)
    }

    /// Largest signed in-plane distance of the projection of `p` outside an
    /// edge line; `≤ 0` when the projection lies in the closed triangle.
    pub fn outside_distance(&self, p: Vec3) -> f64 {
        (0..3)
            .map(|i| -(self.vertices[i] - p).dot(self.edge_normals[i]))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Euclidean distance from `p` to the closed triangle.
    pub fn distance(&self, p: Vec3) -> f64 {
        let h = self.plane_distance(p);
        if self.outside_distance(p) <= 0.0 {
            return h.abs();
        }
        // Outside the triangle's prism: nearest point is on an edge.
        let v = self.vertices;
        (0..3)
            .map(|i| {
                let (a, b) = (v[i], v[(i + 1) % 3]);
                let ab = b - a;
                let t = ((p - a).dot(ab) / ab.norm_squared()).clamp(0.0, 1.0);
                (a + ab * t).distance(p)
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn is_near_singular(&self, p: Vec3) -> bool {
        let tol = NEAR_SINGULAR_REL * self.diameter;
        self.plane_distance(p).abs() <= tol && self.outside_distance(p) <= tol
    }
}

/// `1/(4π|target − source|)`.
pub fn coulomb_kernel(source: Vec3, target: Vec3, ledger: &mut FlopLedger) -> Result<f64> {
    let d = target - source;
    let r2 = d.norm_squared();
    if r2 == 0.0 {
        return Err(Error::Singularity("coincident source and target".into()));
    }
    ledger.charge(COULOMB_OPS);
    Ok(1.0 / (FOUR_PI * r2.sqrt()))
}

/// Normal derivative at `target` of the Green's function centred at `source`:
/// `−((target − source)·n)/(4π|target − source|³)`.
pub fn normal_field_kernel(source: Vec3, target: Vec3, normal_at_target: Vec3, ledger: &mut FlopLedger) -> Result<f64> {
    let d = target - source;
    let r2 = d.norm_squared();
    if r2 == 0.0 {
        return Err(Error::Singularity("coincident source and target".into()));
    }
    let r = r2.sqrt();
    ledger.charge(NORMAL_FIELD_OPS);
    Ok(-d.dot(normal_at_target) / (FOUR_PI * r2 * r))
}

/// Signed solid angle `Ω = ∫ (r − p)·n/|r − p|³ dA` of a flat triangle seen
/// from `viewpoint` (Van Oosterom–Strackee closed form).
///
/// `Ω > 0` when the viewpoint is behind the panel, i.e. on the side opposite
/// its normal, so an interior point of a closed outward mesh sees `+4π` in
/// total. Points within [`NEAR_SINGULAR_REL`] diameters of the closed
/// triangle are rejected.
pub fn triangle_solid_angle(panel: &Panel, viewpoint: Vec3, ledger: &mut FlopLedger) -> Result<f64> {
    let [a, b, c] = panel.vertices;
    let r1 = a - viewpoint;
    let r2 = b - viewpoint;
    let r3 = c - viewpoint;
    let numerator = r1.dot(r2.cross(r3));
    // |numerator| = 2·area·|height|, so a cheap height check comes first.
    if numerator.abs() <= 2.0 * panel.area * NEAR_SINGULAR_REL * panel.diameter && panel.is_near_singular(viewpoint) {
        return Err(Error::NearSingular);
    }
    let l1 = r1.norm();
    let l2 = r2.norm();
    let l3 = r3.norm();
    let denominator = l1 * l2 * l3 + r1.dot(r2) * l3 + r1.dot(r3) * l2 + r2.dot(r3) * l1;
    ledger.charge(SOLID_ANGLE_OPS);
    Ok(2.0 * numerator.atan2(denominator))
}

/// `∫_panel ∂/∂n(r) G(r, source) dA(r) = −Ω/(4π)`.
///
/// A source placed exactly at the panel centroid is the self term, whose
/// flat-panel principal value is zero.
pub fn panel_flux(panel: &Panel, source: Vec3, ledger: &mut FlopLedger) -> Result<f64> {
    if source == panel.centroid {
        return Ok(0.0);
    }
    let omega = triangle_solid_angle(panel, source, ledger)?;
    ledger.charge(Ops::new(0, 0, 1, 0, 0));
    Ok(-omega / FOUR_PI)
}
