//! Discrete `A`, `B`, `C` operators for the panel and point discretizations.
//!
//! Conventions: `σ` solves `(I + ε̂K*)σ = −(ε̂/ε_III)·∂G/∂n·q` with
//! `ε̂ = 2(ε_III − ε_I)/(ε_III + ε_I)`, and the reaction potential is
//! `ψ = ∫ σ G dA` with no further dielectric factor. For a unit charge at the
//! centre of a sphere of radius `R` this gives a total induced charge of
//! `1/ε_I − 1/ε_III` and `ψ = (1/ε_I − 1/ε_III)/(4πR)`.

mod matrix;

pub use matrix::DenseMatrix;

use crate::kernels::{coulomb_kernel, normal_field_kernel, panel_flux, single_layer_panel_potential, FlopLedger, Ops};
use crate::surface::{ChargeSet, PanelSet, PointCloud, TriangleMesh};
use crate::{Error, Result, Vec3};

/// Minimum distance (Å) between a charge or evaluation point and the surface.
pub const SURFACE_CLEARANCE: f64 = 1e-10;

/// Permittivities of the solvent (`ε_I`) and the solute interior (`ε_III`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DielectricConfig {
    eps_solvent: f64,
    eps_solute: f64,
}

impl Default for DielectricConfig {
    fn default() -> Self {
        DielectricConfig {
            eps_solvent: 80.0,
            eps_solute: 4.0,
        }
    }
}

impl DielectricConfig {
    pub fn new(eps_solvent: f64, eps_solute: f64) -> Result<Self> {
        if !(eps_solvent > 0.0 && eps_solute > 0.0) || !eps_solvent.is_finite() || !eps_solute.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "permittivities must be positive, got ε_I = {eps_solvent}, ε_III = {eps_solute}"
            )));
        }
        Ok(DielectricConfig {
            eps_solvent,
            eps_solute,
        })
    }

    /// `ε_I`.
    pub fn eps_solvent(&self) -> f64 {
        self.eps_solvent
    }

    /// `ε_III`.
    pub fn eps_solute(&self) -> f64 {
        self.eps_solute
    }

    /// `ε̂ = 2(ε_III − ε_I)/(ε_III + ε_I)`; always inside `(−2, 2)`.
    pub fn eps_hat(&self) -> f64 {
        2.0 * (self.eps_solute - self.eps_solvent) / (self.eps_solute + self.eps_solvent)
    }

    /// Total induced charge per unit enclosed charge, `1/ε_I − 1/ε_III`.
    pub fn induced_charge_factor(&self) -> f64 {
        1.0 / self.eps_solvent - 1.0 / self.eps_solute
    }
}

/// Either of the two discretizations of the boundary.
#[derive(Debug, Clone)]
pub enum Discretization {
    Panels(PanelSet),
    Points(PointCloud),
}

impl Discretization {
    pub fn panels(mesh: &TriangleMesh) -> Result<Self> {
        Ok(Discretization::Panels(crate::surface::panel_geometry(mesh)?))
    }

    pub fn points(mesh: &TriangleMesh) -> Result<Self> {
        Ok(Discretization::Points(crate::surface::vertex_quadrature(mesh)?))
    }

    /// Number of unknowns.
    pub fn len(&self) -> usize {
        match self {
            Discretization::Panels(p) => p.len(),
            Discretization::Points(p) => p.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Area carried by each unknown: panel areas or vertex weights.
    pub fn weights(&self) -> Vec<f64> {
        match self {
            Discretization::Panels(p) => p.areas(),
            Discretization::Points(p) => p.weights().to_vec(),
        }
    }

    /// `Σ weight_j σ_j`.
    pub fn total_charge(&self, sigma: &[f64]) -> f64 {
        self.weights().iter().zip(sigma).map(|(w, s)| w * s).sum()
    }

    /// CSV label used by the studies.
    pub fn label(&self) -> &'static str {
        match self {
            Discretization::Panels(_) => "PAN",
            Discretization::Points(_) => "SRF",
        }
    }
}

/// Panel `A`: `A_ii = a_i`, `A_ij = ε̂·a_j·flux(panel_i, c_j)`.
///
/// Row `i` is the Galerkin row for the constant test function on panel `i`,
/// with the source panel collapsed to its centroid and the test-panel
/// integral done analytically.
pub fn assemble_a_panel(panels: &PanelSet, cfg: &DielectricConfig) -> Result<DenseMatrix> {
    let n = panels.len();
    if n < 4 {
        return Err(Error::Geometry(format!("{n} panels cannot close a surface")));
    }
    let eps_hat = cfg.eps_hat();
    let ps = panels.panels();
    let centroids = panels.centroids();
    let mut ledger = FlopLedger::new();
    let mut a = DenseMatrix::zeros(n, n);
    for (i, test) in ps.iter().enumerate() {
        let row = &mut a.data_mut()[i * n..(i + 1) * n];
        for (j, entry) in row.iter_mut().enumerate() {
            if i == j {
                *entry = test.area();
                continue;
            }
            if centroids[j] == centroids[i] {
                return Err(Error::Geometry(format!("panels {i} and {j} share a centroid")));
            }
            let flux = panel_flux(test, centroids[j], &mut ledger)
                .map_err(|_| Error::Geometry(format!("centroid of panel {j} lies on panel {i}")))?;
            *entry = eps_hat * ps[j].area() * flux;
        }
    }
    ledger.charge(Ops::new(0, 2, 0, 0, 0).times((n * (n - 1)) as u64));
    Ok(a.with_ledger(ledger))
}

/// Point `A`: `A_ii = 1`, `A_ij = ε̂·w_j·∂G(r_i, r_j)/∂n_i`.
pub fn assemble_a_point(cloud: &PointCloud, cfg: &DielectricConfig) -> Result<DenseMatrix> {
    let n = cloud.len();
    if n < 4 {
        return Err(Error::Geometry(format!("{n} points cannot sample a closed surface")));
    }
    let eps_hat = cfg.eps_hat();
    let (pos, nrm, w) = (cloud.positions(), cloud.normals(), cloud.weights());
    let mut ledger = FlopLedger::new();
    let mut a = DenseMatrix::zeros(n, n);
    for i in 0..n {
        let row = &mut a.data_mut()[i * n..(i + 1) * n];
        for (j, entry) in row.iter_mut().enumerate() {
            if i == j {
                *entry = 1.0;
                continue;
            }
            let k = normal_field_kernel(pos[j], pos[i], nrm[i], &mut ledger)
                .map_err(|_| Error::Geometry(format!("points {i} and {j} coincide")))?;
            *entry = eps_hat * w[j] * k;
        }
    }
    ledger.charge(Ops::new(0, 2, 0, 0, 0).times((n * (n - 1)) as u64));
    Ok(a.with_ledger(ledger))
}

/// Dispatch on the discretization.
pub fn assemble_a(disc: &Discretization, cfg: &DielectricConfig) -> Result<DenseMatrix> {
    match disc {
        Discretization::Panels(p) => assemble_a_panel(p, cfg),
        Discretization::Points(p) => assemble_a_point(p, cfg),
    }
}

/// Source term, `N × Q`: `B_ik = −(ε̂/ε_III)·(normal field of unit charge k)`
/// integrated over test panel `i`, or sampled at point `i`.
pub fn assemble_b(disc: &Discretization, charges: &ChargeSet, cfg: &DielectricConfig) -> Result<DenseMatrix> {
    let n = disc.len();
    let q = charges.len();
    let coef = -cfg.eps_hat() / cfg.eps_solute();
    let mut ledger = FlopLedger::new();
    let mut b = DenseMatrix::zeros(n, q);
    let on_surface = |k: usize| Error::Singularity(format!("charge {k} lies on the surface"));
    match disc {
        Discretization::Panels(ps) => {
            for (i, panel) in ps.panels().iter().enumerate() {
                for (k, &r) in charges.positions().iter().enumerate() {
                    if panel.distance(r) < SURFACE_CLEARANCE {
                        return Err(on_surface(k));
                    }
                    let flux = panel_flux(panel, r, &mut ledger).map_err(|_| on_surface(k))?;
                    b[(i, k)] = coef * flux;
                }
            }
        }
        Discretization::Points(pc) => {
            for i in 0..n {
                for (k, &r) in charges.positions().iter().enumerate() {
                    if (pc.positions()[i] - r).norm() < SURFACE_CLEARANCE {
                        return Err(on_surface(k));
                    }
                    let f = normal_field_kernel(r, pc.positions()[i], pc.normals()[i], &mut ledger)
                        .map_err(|_| on_surface(k))?;
                    b[(i, k)] = coef * f;
                }
            }
        }
    }
    ledger.charge(Ops::new(0, 1, 0, 0, 0).times((n * q) as u64));
    Ok(b.with_ledger(ledger))
}

/// Potential map, `E × N`: unit-density panel integrals `∫_j G(p_e, r') dA'`
/// (analytic, valid arbitrarily close to the surface) or `w_j·G(p_e, r_j)`.
pub fn assemble_c(disc: &Discretization, eval_points: &[Vec3]) -> Result<DenseMatrix> {
    let n = disc.len();
    let mut ledger = FlopLedger::new();
    let mut c = DenseMatrix::zeros(eval_points.len(), n);
    for (e, &p) in eval_points.iter().enumerate() {
        let row = &mut c.data_mut()[e * n..(e + 1) * n];
        fill_c_row(disc, p, row, &mut ledger).map_err(|err| match err {
            Error::Singularity(_) => Error::Singularity(format!("evaluation point {e} lies on the surface")),
            other => other,
        })?;
    }
    Ok(c.with_ledger(ledger))
}

fn fill_c_row(disc: &Discretization, p: Vec3, row: &mut [f64], ledger: &mut FlopLedger) -> Result<()> {
    match disc {
        Discretization::Panels(ps) => {
            for (entry, panel) in row.iter_mut().zip(ps.panels()) {
                *entry = single_layer_panel_potential(panel, p, ledger);
            }
        }
        Discretization::Points(pc) => {
            for ((entry, &r), &w) in row.iter_mut().zip(pc.positions()).zip(pc.weights()) {
                if (r - p).norm() < SURFACE_CLEARANCE {
                    return Err(Error::Singularity("evaluation point on a collocation point".into()));
                }
                *entry = w * coulomb_kernel(r, p, ledger)?;
            }
            ledger.charge(Ops::new(0, 1, 0, 0, 0).times(row.len() as u64));
        }
    }
    Ok(())
}

/// `ψ(p_e) = Σ_j C_ej σ_j` without storing `C`.
pub fn eval_reaction_potential(
    disc: &Discretization,
    sigma: &[f64],
    eval_points: &[Vec3],
    ledger: &mut FlopLedger,
) -> Result<Vec<f64>> {
    if sigma.len() != disc.len() {
        return Err(Error::Dimension(format!(
            "density has {} entries for {} unknowns",
            sigma.len(),
            disc.len()
        )));
    }
    let mut row = vec![0.0; disc.len()];
    eval_points
        .iter()
        .map(|&p| {
            fill_c_row(disc, p, &mut row, ledger)?;
            ledger.charge_flops(2 * row.len() as u64);
            Ok(row.iter().zip(sigma).map(|(c, s)| c * s).sum())
        })
        .collect()
}
