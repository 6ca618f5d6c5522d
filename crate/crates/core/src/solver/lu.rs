use crate::kernels::FlopLedger;
use crate::operators::DenseMatrix;
use crate::{Error, Result};

/// Pivot threshold relative to `max|A|`.
pub const SINGULAR_PIVOT_REL: f64 = 1e-14;

const BLOCK: usize = 64;
const COL_TILE: usize = 512;

/// `PA = LU` with partial pivoting, stored in place (unit-diagonal `L`).
#[derive(Debug, Clone)]
pub struct LuFactorization {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

/// Closed-form flop charge of the factorization, `⌊2n³/3⌋`.
pub fn lu_factor_flops(n: usize) -> u64 {
    let n = n as u64;
    2 * n * n * n / 3
}

/// Closed-form flop charge of forward/back substitution, `2n²` per column.
pub fn lu_solve_flops(n: usize, ncols: usize) -> u64 {
    2 * (n * n * ncols) as u64
}

impl LuFactorization {
    /// Blocked right-looking factorization. The flop charge is the closed
    /// form [`lu_factor_flops`], independent of blocking.
    pub fn factor(a: &DenseMatrix, ledger: &mut FlopLedger) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "LU needs a square matrix, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let threshold = SINGULAR_PIVOT_REL * a.max_abs();
        let mut lu = a.data().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();

        let mut kb = 0;
        while kb < n {
            let bend = (kb + BLOCK).min(n);
            // Unblocked factorization of the column panel kb..bend.
            for k in kb..bend {
                let (p, pmax) =
                    (k..n)
                        .map(|i| (i, lu[i * n + k].abs()))
                        .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
                if !(pmax > threshold) || pmax == 0.0 {
                    return Err(Error::SingularMatrix { pivot: k });
                }
                if p != k {
                    swap_rows(&mut lu, n, p, k);
                    perm.swap(p, k);
                }
                let pivot = lu[k * n + k];
                let (top, rest) = lu.split_at_mut((k + 1) * n);
                let krow = &top[k * n..];
                for row in rest.chunks_exact_mut(n) {
                    let l = row[k] / pivot;
                    row[k] = l;
                    if l != 0.0 {
                        for (x, &u) in row[k + 1..bend].iter_mut().zip(&krow[k + 1..bend]) {
                            *x -= l * u;
                        }
                    }
                }
            }
            if bend < n {
                // U12 = L11⁻¹ A12.
                for k in kb..bend {
                    let (top, rest) = lu.split_at_mut((k + 1) * n);
                    let krow = &top[k * n + bend..k * n + n];
                    for row in rest[..(bend - k - 1) * n].chunks_exact_mut(n) {
                        let l = row[k];
                        for (x, &u) in row[bend..].iter_mut().zip(krow) {
                            *x -= l * u;
                        }
                    }
                }
                // A22 -= L21 U12, tiled over columns.
                let (upper, lower) = lu.split_at_mut(bend * n);
                let mut jc = bend;
                while jc < n {
                    let jend = (jc + COL_TILE).min(n);
                    for row in lower.chunks_exact_mut(n) {
                        schur_update(row, upper, n, kb, bend, jc, jend);
                    }
                    jc = jend;
                }
            }
            kb = bend;
        }
        ledger.charge_flops(lu_factor_flops(n));
        Ok(LuFactorization { n, lu, perm })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Solve `A X = rhs` column by column.
    pub fn solve(&self, rhs: &DenseMatrix, ledger: &mut FlopLedger) -> Result<DenseMatrix> {
        let n = self.n;
        if rhs.rows() != n {
            return Err(Error::Dimension(format!(
                "right-hand side has {} rows, matrix is {n}x{n}",
                rhs.rows()
            )));
        }
        let m = rhs.cols();
        let mut out = DenseMatrix::zeros(n, m);
        let mut x = vec![0.0; n];
        for j in 0..m {
            for (i, xi) in x.iter_mut().enumerate() {
                *xi = rhs[(self.perm[i], j)];
            }
            self.solve_in_place(&mut x);
            for (i, xi) in x.iter().enumerate() {
                out[(i, j)] = *xi;
            }
        }
        ledger.charge_flops(lu_solve_flops(n, m));
        Ok(out)
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let row = &self.lu[i * n..i * n + i];
            let s: f64 = row.iter().zip(&x[..i]).map(|(l, v)| l * v).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let row = &self.lu[i * n + i + 1..(i + 1) * n];
            let s: f64 = row.iter().zip(&x[i + 1..]).map(|(u, v)| u * v).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
    }
}

fn swap_rows(a: &mut [f64], n: usize, p: usize, k: usize) {
    let (lo, hi) = (p.min(k), p.max(k));
    let (first, second) = a.split_at_mut(hi * n);
    first[lo * n..(lo + 1) * n].swap_with_slice(&mut second[..n]);
}

/// `row[jc..jend] -= Σ_k row[k]·upper[k][jc..jend]` for `k ∈ kb..bend`,
/// four `k` at a time.
#[inline]
fn schur_update(row: &mut [f64], upper: &[f64], n: usize, kb: usize, bend: usize, jc: usize, jend: usize) {
    let mut k = kb;
    while k + 4 <= bend {
        let (l0, l1, l2, l3) = (row[k], row[k + 1], row[k + 2], row[k + 3]);
        let u0 = &upper[k * n + jc..k * n + jend];
        let u1 = &upper[(k + 1) * n + jc..(k + 1) * n + jend];
        let u2 = &upper[(k + 2) * n + jc..(k + 2) * n + jend];
        let u3 = &upper[(k + 3) * n + jc..(k + 3) * n + jend];
        let target = &mut row[jc..jend];
        for t in 0..target.len() {
            target[t] -= l0 * u0[t] + l1 * u1[t] + l2 * u2[t] + l3 * u3[t];
        }
        k += 4;
    }
    while k < bend {
        let l = row[k];
        let u = &upper[k * n + jc..k * n + jend];
        for (x, &v) in row[jc..jend].iter_mut().zip(u) {
            *x -= l * v;
        }
        k += 1;
    }
}

/// `X` with `A X = rhs`, charging `(2/3)n³ + 2n²·ncols` flops.
pub fn lu_solve(a: &DenseMatrix, rhs: &DenseMatrix, ledger: &mut FlopLedger) -> Result<DenseMatrix> {
    let lu = LuFactorization::factor(a, ledger)?;
    lu.solve(rhs, ledger)
}
