//! Linear solves, the reaction-potential matrix `L = C A⁻¹ B`, and
//! solvation energies in kcal/mol.

mod gmres;
mod lu;

pub use gmres::gmres_solve;
pub use lu::{lu_factor_flops, lu_solve, lu_solve_flops, LuFactorization, SINGULAR_PIVOT_REL};

use std::f64::consts::PI;

use crate::kernels::FlopLedger;
use crate::operators::{assemble_a, assemble_b, assemble_c, DenseMatrix, DielectricConfig, Discretization};
use crate::surface::ChargeSet;
use crate::{Error, Result};

/// Coulomb constant in kcal·Å/(mol·e²).
pub const COULOMB_KCAL: f64 = 332.0636;

/// Converts `1/(4π)`-convention potentials (e/Å) to kcal/mol/e.
pub const POTENTIAL_TO_KCAL: f64 = 4.0 * PI * COULOMB_KCAL;

pub const DEFAULT_GMRES_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Direct,
    Iterative,
}

/// How `A` is inverted.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum SolveMode {
    /// Dense partial-pivoting LU.
    #[default]
    Lu,
    /// Unrestarted GMRES per right-hand side.
    Gmres { rel_tol: f64, max_iter: usize },
}

impl SolveMode {
    pub fn gmres(rel_tol: f64) -> Self {
        SolveMode::Gmres {
            rel_tol,
            max_iter: 1000,
        }
    }
}

/// Outcome of the solve phase.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: SolveMethod,
    /// Largest iteration count over right-hand sides; 0 for direct solves.
    pub iterations: usize,
    /// Largest relative residual `‖AX − B‖/‖B‖` over right-hand sides.
    pub residual: f64,
    pub flops: u64,
}

/// Solve `A X = B` for every column of `B`.
pub fn solve_columns(
    a: &DenseMatrix,
    b: &DenseMatrix,
    mode: SolveMode,
    ledger: &mut FlopLedger,
) -> Result<(DenseMatrix, SolveReport)> {
    let mut local = FlopLedger::new();
    let (x, method, iterations) = match mode {
        SolveMode::Lu => (lu_solve(a, b, &mut local)?, SolveMethod::Direct, 0),
        SolveMode::Gmres { rel_tol, max_iter } => {
            let mut x = DenseMatrix::zeros(a.cols(), b.cols());
            let mut iters = 0;
            for k in 0..b.cols() {
                let (col, rep) = gmres_solve(a, &b.col_vec(k), rel_tol, max_iter, &mut local)?;
                iters = iters.max(rep.iterations);
                for (i, v) in col.into_iter().enumerate() {
                    x[(i, k)] = v;
                }
            }
            (x, SolveMethod::Iterative, iters)
        }
    };
    // Residual check is diagnostic and not charged.
    let residual = (0..b.cols())
        .map(|k| {
            let xk = x.col_vec(k);
            let bk = b.col_vec(k);
            let axk = a.matvec(&xk, &mut FlopLedger::new());
            let num: f64 = axk.iter().zip(&bk).map(|(p, q)| (p - q).powi(2)).sum();
            let den: f64 = bk.iter().map(|q| q * q).sum();
            if den == 0.0 {
                num.sqrt()
            } else {
                (num / den).sqrt()
            }
        })
        .fold(0.0, f64::max);
    ledger.merge(&local);
    Ok((
        x,
        SolveReport {
            method,
            iterations,
            residual,
            flops: local.total().max(1),
        },
    ))
}

/// `L = C·(A⁻¹B)`, one factorization (or one GMRES run per charge) and `Q`
/// right-hand sides.
pub fn reaction_matrix(
    c: &DenseMatrix,
    a: &DenseMatrix,
    b: &DenseMatrix,
    mode: SolveMode,
    ledger: &mut FlopLedger,
) -> Result<(DenseMatrix, SolveReport)> {
    if c.cols() != a.rows() || a.cols() != b.rows() {
        return Err(Error::Dimension(format!(
            "C {}x{}, A {}x{}, B {}x{}",
            c.rows(),
            c.cols(),
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let (x, report) = solve_columns(a, b, mode, ledger)?;
    let l = c.matmul(&x, ledger)?;
    Ok((l, report))
}

/// `E = ½·(4π·K_C)·qᵀLq` in kcal/mol.
pub fn solvation_energy(l: &DenseMatrix, q: &[f64]) -> Result<f64> {
    if !l.is_square() || l.rows() != q.len() {
        return Err(Error::Dimension(format!(
            "L is {}x{} but there are {} charges",
            l.rows(),
            l.cols(),
            q.len()
        )));
    }
    let lq = l.matvec(q, &mut FlopLedger::new());
    let qlq: f64 = q.iter().zip(&lq).map(|(a, b)| a * b).sum();
    Ok(0.5 * POTENTIAL_TO_KCAL * qlq)
}

/// Energy, reaction potentials, and work of one discretized solve.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyResult {
    /// Solvation energy, kcal/mol.
    pub energy: f64,
    /// Reaction potential at each charge, kcal/mol/e.
    pub potentials: Vec<f64>,
    /// Unknown count (panels or points).
    pub unknowns: usize,
    /// Assembly of A, B, C plus the solve and the product forming L.
    pub flops_total: u64,
    /// Assembly of A alone.
    pub flops_a: u64,
    pub solve: SolveReport,
}

/// Assemble, solve, and evaluate the solvation energy of `charges`.
pub fn compute_energy(
    disc: &Discretization,
    charges: &ChargeSet,
    cfg: &DielectricConfig,
    mode: SolveMode,
) -> Result<EnergyResult> {
    let a = assemble_a(disc, cfg)?;
    let b = assemble_b(disc, charges, cfg)?;
    let c = assemble_c(disc, charges.positions())?;
    let mut ledger = *a.ledger() + *b.ledger() + *c.ledger();
    let (l, solve) = reaction_matrix(&c, &a, &b, mode, &mut ledger)?;
    let q = charges.charges();
    let lq = l.matvec(q, &mut ledger);
    let potentials: Vec<f64> = lq.iter().map(|v| POTENTIAL_TO_KCAL * v).collect();
    let energy = solvation_energy(&l, q)?;
    Ok(EnergyResult {
        energy,
        potentials,
        unknowns: disc.len(),
        flops_total: ledger.total(),
        flops_a: a.ledger().total(),
        solve,
    })
}

/// Induced density `σ` for the combined source `B q`.
pub fn solve_density(
    disc: &Discretization,
    charges: &ChargeSet,
    cfg: &DielectricConfig,
    mode: SolveMode,
) -> Result<(Vec<f64>, SolveReport)> {
    let a = assemble_a(disc, cfg)?;
    let b = assemble_b(disc, charges, cfg)?;
    let mut ledger = FlopLedger::new();
    let rhs = b.matvec(charges.charges(), &mut ledger);
    let (x, report) = solve_columns(&a, &DenseMatrix::column(&rhs), mode, &mut ledger)?;
    Ok((x.col_vec(0), report))
}

/// Born energy of a charge `q` at the centre of a sphere, kcal/mol.
pub fn born_energy(q: f64, radius: f64, cfg: &DielectricConfig) -> f64 {
    0.5 * COULOMB_KCAL * q * q * cfg.induced_charge_factor() / radius
}
