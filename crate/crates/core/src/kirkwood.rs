//! Analytic reaction potential of point charges inside a dielectric sphere.
//!
//! Series form (Gaussian units, `ψ = q/(εr)`), for a sphere of radius `b`
//! with permittivity `ε_1` inside and `ε_2` outside:
//!
//! ```text
//! E_nm = Σ_k q_k r_k^n (n−|m|)!/(n+|m|)! P_n^|m|(cos θ_k) e^{−imφ_k}
//! B_nm = (ε_1 − ε_2)(n + 1) / (ε_1 b^{2n+1} (ε_1 n + ε_2 (n + 1))) · E_nm
//! ψ(r, θ, φ) = Σ_n Σ_m B_nm r^n P_n^|m|(cos θ) e^{imφ}
//! ```
//!
//! `P_n^m` carries no Condon–Shortley phase. `ε_1` is the solute permittivity
//! (`ε_III`), `ε_2` the solvent (`ε_I`); this is the assignment under which the
//! `n = 0` term reduces to the Born ion.

use num_complex::Complex64;

use crate::operators::DielectricConfig;
use crate::solver::COULOMB_KCAL;
use crate::surface::ChargeSet;
use crate::{Error, Result, Vec3};

/// Truncation order used for the sphere studies.
pub const DEFAULT_ORDER: usize = 25;

/// Largest degree supported by [`associated_legendre`].
pub const MAX_DEGREE: usize = 64;

const REALNESS_TOL: f64 = 1e-10;

/// `P_n^m(x)` for `0 ≤ m ≤ n ≤ 64`, by upward recurrence in `n`.
pub fn associated_legendre(n: usize, m: usize, x: f64) -> Result<f64> {
    if m > n || n > MAX_DEGREE {
        return Err(Error::Domain(format!(
            "associated Legendre P_{n}^{m} needs 0 ≤ m ≤ n ≤ {MAX_DEGREE}"
        )));
    }
    check_unit_interval(x)?;
    Ok(legendre_column(n, m, x)[n - m])
}

fn check_unit_interval(x: f64) -> Result<()> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("Legendre argument {x} outside [-1, 1]")));
    }
    Ok(())
}

/// `[P_m^m, P_{m+1}^m, …, P_n_max^m]` at `x`.
fn legendre_column(n_max: usize, m: usize, x: f64) -> Vec<f64> {
    let s = (1.0 - x * x).max(0.0).sqrt();
    let mut pmm = 1.0;
    for k in 1..=m {
        pmm *= (2 * k - 1) as f64 * s;
    }
    let mut out = Vec::with_capacity(n_max + 1 - m);
    out.push(pmm);
    if n_max > m {
        out.push(x * (2 * m + 1) as f64 * pmm);
    }
    for n in m + 2..=n_max {
        let p1 = out[n - 1 - m];
        let p2 = out[n - 2 - m];
        out.push(((2 * n - 1) as f64 * x * p1 - (n + m - 1) as f64 * p2) / (n - m) as f64);
    }
    out
}

/// Full table `P_n^m(x)` for `0 ≤ m ≤ n ≤ n_max`, indexed by [`tri_index`].
fn legendre_table(n_max: usize, x: f64) -> Vec<f64> {
    let mut table = vec![0.0; (n_max + 1) * (n_max + 2) / 2];
    for m in 0..=n_max {
        for (off, v) in legendre_column(n_max, m, x).into_iter().enumerate() {
            table[tri_index(m + off, m)] = v;
        }
    }
    table
}

#[inline]
fn tri_index(n: usize, m: usize) -> usize {
    n * (n + 1) / 2 + m
}

/// `(n − m)!/(n + m)!` for `0 ≤ m ≤ n ≤ n_max`, by multiplicative recurrence.
fn factorial_ratios(n_max: usize) -> Vec<f64> {
    let mut table = vec![0.0; (n_max + 1) * (n_max + 2) / 2];
    for n in 0..=n_max {
        let mut r = 1.0;
        table[tri_index(n, 0)] = 1.0;
        for m in 1..=n {
            r /= ((n + m) * (n - m + 1)) as f64;
            table[tri_index(n, m)] = r;
        }
    }
    table
}

/// Expansion tables for one charge set in one sphere.
#[derive(Debug, Clone)]
pub struct SeriesCoefficients {
    n_max: usize,
    radius: f64,
    eps_inside: f64,
    eps_outside: f64,
    // Index n² + (m + n) for −n ≤ m ≤ n.
    moments: Vec<Complex64>,
    reaction: Vec<Complex64>,
}

#[inline]
fn full_index(n: usize, m: i64) -> usize {
    n * n + (m + n as i64) as usize
}

/// Multipole moments `E_nm` of the charges about the sphere centre.
pub fn charge_moments(charges: &ChargeSet, n_max: usize) -> Result<Vec<Complex64>> {
    if n_max > MAX_DEGREE {
        return Err(Error::Domain(format!("order {n_max} exceeds {MAX_DEGREE}")));
    }
    let ratios = factorial_ratios(n_max);
    let mut e = vec![Complex64::new(0.0, 0.0); (n_max + 1) * (n_max + 1)];
    for (&pos, &q) in charges.positions().iter().zip(charges.charges()) {
        let (r, cos_t, phi) = pos.to_spherical();
        let plm = legendre_table(n_max, cos_t);
        let mut rn = 1.0;
        for n in 0..=n_max {
            for m in 0..=n {
                let mag = q * rn * ratios[tri_index(n, m)] * plm[tri_index(n, m)];
                let phase = Complex64::from_polar(1.0, -(m as f64) * phi);
                e[full_index(n, m as i64)] += mag * phase;
                if m > 0 {
                    e[full_index(n, -(m as i64))] += mag * phase.conj();
                }
            }
            rn *= r;
        }
    }
    Ok(e)
}

/// Reaction coefficients `B_nm` from the moments.
pub fn reaction_coefficients(
    moments: &[Complex64],
    radius: f64,
    eps_inside: f64,
    eps_outside: f64,
) -> Result<Vec<Complex64>> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sphere radius must be positive, got {radius}"
        )));
    }
    let n_max = (moments.len() as f64).sqrt() as usize - 1;
    if (n_max + 1) * (n_max + 1) != moments.len() {
        return Err(Error::Dimension(format!(
            "{} moments is not a square table",
            moments.len()
        )));
    }
    let mut out = Vec::with_capacity(moments.len());
    for n in 0..=n_max {
        let nf = n as f64;
        let factor = (eps_inside - eps_outside) * (nf + 1.0)
            / (eps_inside * radius.powi(2 * n as i32 + 1) * (eps_inside * nf + eps_outside * (nf + 1.0)));
        for m in -(n as i64)..=(n as i64) {
            out.push(moments[full_index(n, m)] * factor);
        }
    }
    Ok(out)
}

impl SeriesCoefficients {
    /// Tables for `charges` in a sphere of `radius` (Å); `ε_1 = ε_III`,
    /// `ε_2 = ε_I`.
    pub fn new(charges: &ChargeSet, radius: f64, cfg: &DielectricConfig, n_max: usize) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "sphere radius must be positive, got {radius}"
            )));
        }
        if let Some(k) = charges.positions().iter().position(|p| p.norm() >= radius) {
            return Err(Error::Domain(format!("charge {k} is not inside the sphere")));
        }
        let moments = charge_moments(charges, n_max)?;
        let reaction = reaction_coefficients(&moments, radius, cfg.eps_solute(), cfg.eps_solvent())?;
        Ok(SeriesCoefficients {
            n_max,
            radius,
            eps_inside: cfg.eps_solute(),
            eps_outside: cfg.eps_solvent(),
            moments,
            reaction,
        })
    }

    pub fn order(&self) -> usize {
        self.n_max
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn moment(&self, n: usize, m: i64) -> Complex64 {
        self.moments[full_index(n, m)]
    }

    pub fn coefficient(&self, n: usize, m: i64) -> Complex64 {
        self.reaction[full_index(n, m)]
    }

    /// Contribution of degree `n` to `ψ` at `point` (complex, Gaussian units).
    pub fn shell_contribution(&self, n: usize, point: Vec3) -> Complex64 {
        let (r, cos_t, phi) = point.to_spherical();
        let column: Vec<f64> = (0..=n).map(|m| legendre_column(n, m, cos_t)[n - m]).collect();
        let rn = r.powi(n as i32);
        (-(n as i64)..=(n as i64))
            .map(|m| {
                self.coefficient(n, m)
                    * rn
                    * column[m.unsigned_abs() as usize]
                    * Complex64::from_polar(1.0, m as f64 * phi)
            })
            .sum()
    }

    /// Reaction potential at an interior point, Gaussian units (e/Å).
    pub fn reaction_potential(&self, point: Vec3) -> Result<f64> {
        let (r, cos_t, phi) = point.to_spherical();
        if r >= self.radius {
            return Err(Error::Domain(format!(
                "evaluation radius {r} is not inside the sphere of radius {}",
                self.radius
            )));
        }
        let plm = legendre_table(self.n_max, cos_t);
        let mut psi = Complex64::new(0.0, 0.0);
        let mut scale = 0.0;
        let mut rn = 1.0;
        for n in 0..=self.n_max {
            for m in -(n as i64)..=(n as i64) {
                let term = self.reaction[full_index(n, m)]
                    * (rn * plm[tri_index(n, m.unsigned_abs() as usize)])
                    * Complex64::from_polar(1.0, m as f64 * phi);
                scale += term.norm();
                psi += term;
            }
            rn *= r;
        }
        if psi.im.abs() > REALNESS_TOL * psi.re.abs() + 1e-15 * scale {
            return Err(Error::Domain(format!(
                "series potential is not real: {} + {}i",
                psi.re, psi.im
            )));
        }
        Ok(psi.re)
    }

    /// Reaction potential in kcal/mol/e.
    pub fn reaction_potential_kcal(&self, point: Vec3) -> Result<f64> {
        Ok(COULOMB_KCAL * self.reaction_potential(point)?)
    }

    /// Tables as CSV records `n,m,E_re,E_im,B_re,B_im`.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("n,m,E_re,E_im,B_re,B_im\n");
        for n in 0..=self.n_max {
            for m in -(n as i64)..=(n as i64) {
                let (e, b) = (self.moment(n, m), self.coefficient(n, m));
                let _ = writeln!(out, "{n},{m},{:e},{:e},{:e},{:e}", e.re, e.im, b.re, b.im);
            }
        }
        out
    }

    pub fn permittivities(&self) -> (f64, f64) {
        (self.eps_inside, self.eps_outside)
    }
}

/// Solvation energy `½·K_C·Σ q_k ψ(r_k)` in kcal/mol.
pub fn kirkwood_energy(charges: &ChargeSet, radius: f64, cfg: &DielectricConfig, n_max: usize) -> Result<f64> {
    let series = SeriesCoefficients::new(charges, radius, cfg, n_max)?;
    let mut sum = 0.0;
    for (&p, &q) in charges.positions().iter().zip(charges.charges()) {
        sum += q * series.reaction_potential(p)?;
    }
    Ok(0.5 * COULOMB_KCAL * sum)
}

#[cfg(test)]
mod tests;
