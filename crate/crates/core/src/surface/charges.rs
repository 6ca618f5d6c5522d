use std::fmt::Write as _;

use super::TriangleMesh;
use crate::kernels::{triangle_solid_angle, FlopLedger, Panel};
use crate::{Error, Result, Vec3};

/// Solute point charges: positions in Å, magnitudes in `e`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ChargeSet {
    positions: Vec<Vec3>,
    charges: Vec<f64>,
    radii: Option<Vec<f64>>,
}

impl ChargeSet {
    pub fn new(positions: Vec<Vec3>, charges: Vec<f64>) -> Self {
        assert_eq!(positions.len(), charges.len(), "one magnitude per position");
        ChargeSet {
            positions,
            charges,
            radii: None,
        }
    }

    /// Charges with atomic radii attached (kept for diagnostics only).
    pub fn with_radii(positions: Vec<Vec3>, charges: Vec<f64>, radii: Vec<f64>) -> Self {
        assert_eq!(positions.len(), charges.len());
        assert_eq!(positions.len(), radii.len());
        ChargeSet {
            positions,
            charges,
            radii: Some(radii),
        }
    }

    pub fn single(position: Vec3, q: f64) -> Self {
        ChargeSet::new(vec![position], vec![q])
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn charges(&self) -> &[f64] {
        &self.charges
    }

    pub fn radii(&self) -> Option<&[f64]> {
        self.radii.as_deref()
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn total_charge(&self) -> f64 {
        self.charges.iter().sum()
    }

    /// Apply `f` to every position, keeping magnitudes.
    pub fn map_positions(&self, f: impl Fn(Vec3) -> Vec3) -> ChargeSet {
        ChargeSet {
            positions: self.positions.iter().map(|&p| f(p)).collect(),
            charges: self.charges.clone(),
            radii: self.radii.clone(),
        }
    }

    /// Winding-number containment test: every charge must see a total solid
    /// angle of 4π from the mesh. Costs `O(Q·N_faces)`.
    pub fn check_inside(&self, mesh: &TriangleMesh) -> Result<()> {
        let panels: Vec<Panel> = (0..mesh.num_faces())
            .map(|f| Panel::new(mesh.face_vertices(f)))
            .collect();
        let mut scratch = FlopLedger::default();
        for (k, &p) in self.positions.iter().enumerate() {
            let mut omega = 0.0;
            for panel in &panels {
                omega += triangle_solid_angle(panel, p, &mut scratch)?;
            }
            let winding = omega / (4.0 * std::f64::consts::PI);
            if (winding - 1.0).abs() > 1e-6 {
                return Err(Error::Geometry(format!(
                    "charge {k} at {:?} is not inside the surface (winding number {winding:.6})",
                    p.0
                )));
            }
        }
        Ok(())
    }

    /// Records `x,y,z,q`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,z,q\n");
        for (p, q) in self.positions.iter().zip(&self.charges) {
            let _ = writeln!(out, "{},{},{},{}", p.x(), p.y(), p.z(), q);
        }
        out
    }
}

/// The splitmix64 generator; tiny and identical in every language.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

/// Draw `count` distinct grid vertices `(i, j, k)·h` with `|·| ≤ radius − h`.
///
/// Candidates are listed in lexicographic `(i, j, k)` order and permuted by a
/// partial Fisher–Yates shuffle driven by [`SplitMix64`]: draw `d` swaps slot
/// `d` with slot `d + next % (n − d)`. Draw `d` gets charge `+1` when `d` is
/// even and `−1` when odd.
pub fn sample_grid_charges(radius: f64, spacing: f64, count: usize, seed: u64) -> Result<ChargeSet> {
    if !(spacing > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "grid spacing must be positive, got {spacing}"
        )));
    }
    let reach = radius - spacing;
    let mut candidates = Vec::new();
    if reach >= 0.0 {
        let m = (reach / spacing).floor() as i64;
        let limit = reach * reach * (1.0 + 1e-12);
        for i in -m..=m {
            for j in -m..=m {
                for k in -m..=m {
                    let p = Vec3::new(i as f64, j as f64, k as f64) * spacing;
                    if p.norm_squared() <= limit {
                        candidates.push(p);
                    }
                }
            }
        }
    }
    if candidates.len() < count {
        return Err(Error::Capacity {
            requested: count,
            available: candidates.len(),
        });
    }
    let mut rng = SplitMix64::new(seed);
    let n = candidates.len();
    for d in 0..count {
        let j = d + (rng.next_u64() % (n - d) as u64) as usize;
        candidates.swap(d, j);
    }
    candidates.truncate(count);
    let charges = (0..count).map(|d| if d % 2 == 0 { 1.0 } else { -1.0 }).collect();
    Ok(ChargeSet::new(candidates, charges))
}
