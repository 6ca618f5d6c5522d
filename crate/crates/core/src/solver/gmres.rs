use super::{SolveMethod, SolveReport};
use crate::kernels::{FlopLedger, Ops};
use crate::operators::DenseMatrix;
use crate::{Error, Result};

/// Unrestarted GMRES from a zero initial guess.
///
/// Arnoldi with modified Gram–Schmidt and Givens rotations; stops once the
/// rotated residual estimate satisfies `‖b − Ax‖ ≤ rel_tol·‖b‖`. The reported
/// residual is recomputed explicitly from the returned iterate.
pub fn gmres_solve(
    a: &DenseMatrix,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
    ledger: &mut FlopLedger,
) -> Result<(Vec<f64>, SolveReport)> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::Dimension(format!(
            "GMRES with a {}x{} matrix and {} right-hand-side entries",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rel_tol must lie in (0, 1), got {rel_tol}"
        )));
    }
    let n = b.len();
    let mut local = FlopLedger::new();
    let beta = norm(b, &mut local);
    if beta == 0.0 {
        ledger.merge(&local);
        return Ok((
            vec![0.0; n],
            SolveReport {
                method: SolveMethod::Iterative,
                iterations: 0,
                residual: 0.0,
                flops: local.total().max(1),
            },
        ));
    }

    let max_iter = max_iter.min(n).max(1);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(max_iter + 1);
    basis.push(b.iter().map(|x| x / beta).collect());
    local.charge(Ops::new(0, 0, n as u64, 0, 0));

    // Column k of the Hessenberg matrix holds h[0..=k+1].
    let mut hess: Vec<Vec<f64>> = Vec::with_capacity(max_iter);
    let mut cs: Vec<f64> = Vec::with_capacity(max_iter);
    let mut sn: Vec<f64> = Vec::with_capacity(max_iter);
    let mut g = vec![beta];
    let target = rel_tol * beta;
    let mut iterations = 0;

    for k in 0..max_iter {
        let mut w = a.matvec(&basis[k], &mut local);
        let mut h = vec![0.0; k + 2];
        for (j, v) in basis.iter().enumerate() {
            let hj = dot(&w, v, &mut local);
            axpy(-hj, v, &mut w, &mut local);
            h[j] = hj;
        }
        let hnext = norm(&w, &mut local);
        h[k + 1] = hnext;

        for j in 0..k {
            let t = cs[j] * h[j] + sn[j] * h[j + 1];
            h[j + 1] = -sn[j] * h[j] + cs[j] * h[j + 1];
            h[j] = t;
        }
        let r = h[k].hypot(h[k + 1]);
        let (c, s) = if r == 0.0 { (1.0, 0.0) } else { (h[k] / r, h[k + 1] / r) };
        h[k] = r;
        h[k + 1] = 0.0;
        cs.push(c);
        sn.push(s);
        let gk = g[k];
        g[k] = c * gk;
        g.push(-s * gk);
        local.charge(Ops::new(2 * k as u64 + 1, 4 * k as u64 + 4, 2, 1, 0));
        hess.push(h);
        iterations = k + 1;

        let converged = g[k + 1].abs() <= target;
        if converged || hnext == 0.0 {
            break;
        }
        if k + 1 < max_iter {
            basis.push(w.iter().map(|x| x / hnext).collect());
            local.charge(Ops::new(0, 0, n as u64, 0, 0));
        }
    }

    // Back substitution on the rotated triangular system, then x = V y.
    let m = iterations;
    let mut y = vec![0.0; m];
    for i in (0..m).rev() {
        let s: f64 = (i + 1..m).map(|j| hess[j][i] * y[j]).sum();
        y[i] = (g[i] - s) / hess[i][i];
    }
    local.charge(Ops::new(
        (m * m) as u64 / 2 + m as u64,
        (m * m) as u64 / 2,
        m as u64,
        0,
        0,
    ));
    let mut x = vec![0.0; n];
    for (yj, v) in y.iter().zip(&basis) {
        axpy(*yj, v, &mut x, &mut local);
    }

    let ax = a.matvec(&x, &mut local);
    let diff: Vec<f64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
    local.charge(Ops::new(n as u64, 0, 0, 0, 0));
    let residual = norm(&diff, &mut local) / beta;
    ledger.merge(&local);

    if g[m].abs() > target && residual > rel_tol {
        return Err(Error::NonConvergence {
            iterations: m,
            residual,
            best: x,
        });
    }
    Ok((
        x,
        SolveReport {
            method: SolveMethod::Iterative,
            iterations: m,
            residual,
            flops: local.total(),
        },
    ))
}

fn dot(a: &[f64], b: &[f64], ledger: &mut FlopLedger) -> f64 {
    ledger.charge_flops(2 * a.len() as u64);
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64], ledger: &mut FlopLedger) {
    ledger.charge_flops(2 * x.len() as u64);
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(a: &[f64], ledger: &mut FlopLedger) -> f64 {
    ledger.charge(Ops::new(0, 0, 0, 1, 0));
    dot(a, a, ledger).sqrt()
}
