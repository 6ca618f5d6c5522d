use super::*;
use crate::surface::sample_grid_charges;
use approx::assert_relative_eq;

fn born_cfg() -> DielectricConfig {
    DielectricConfig::new(80.0, 4.0).unwrap()
}

/// Zonal Legendre polynomial by the three-term recurrence (test oracle).
fn legendre_p(n: usize, x: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return p0;
    }
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Reaction potential by the zonal (axisymmetric per charge) series, an
/// independent route around the m-sum and the factorial ratios.
fn zonal_potential(charges: &ChargeSet, radius: f64, e_in: f64, e_out: f64, n_max: usize, at: Vec3) -> f64 {
    let mut psi = 0.0;
    for (&p, &q) in charges.positions().iter().zip(charges.charges()) {
        let (rk, r) = (p.norm(), at.norm());
        let cos_g = if rk == 0.0 || r == 0.0 {
            1.0
        } else {
            (p.dot(at) / (rk * r)).clamp(-1.0, 1.0)
        };
        for n in 0..=n_max {
            let nf = n as f64;
            let f = (e_in - e_out) * (nf + 1.0) / (e_in * (e_in * nf + e_out * (nf + 1.0)));
            psi += q * f * (rk * r).powi(n as i32) / radius.powi(2 * n as i32 + 1) * legendre_p(n, cos_g);
        }
    }
    psi
}

#[test]
fn legendre_low_orders() {
    assert_relative_eq!(associated_legendre(1, 0, 0.3).unwrap(), 0.3);
    assert_relative_eq!(associated_legendre(2, 0, 0.5).unwrap(), -0.125);
    assert_relative_eq!(associated_legendre(1, 1, 0.0).unwrap(), 1.0);
}

#[test]
fn legendre_closed_forms() {
    for &x in &[-0.9, -0.3, 0.0, 0.41, 0.77, 1.0] {
        let s2 = 1.0 - x * x;
        assert_relative_eq!(associated_legendre(3, 2, x).unwrap(), 15.0 * x * s2, epsilon = 1e-13);
        assert_relative_eq!(associated_legendre(4, 4, x).unwrap(), 105.0 * s2 * s2, epsilon = 1e-12);
        assert_relative_eq!(associated_legendre(7, 0, x).unwrap(), legendre_p(7, x), epsilon = 1e-13);
    }
}

#[test]
fn legendre_domain_errors() {
    assert!(matches!(associated_legendre(2, 0, 1.5), Err(Error::Domain(_))));
    assert!(matches!(associated_legendre(2, 3, 0.5), Err(Error::Domain(_))));
    assert!(matches!(associated_legendre(65, 0, 0.5), Err(Error::Domain(_))));
    assert!(associated_legendre(64, 64, 0.2).unwrap().is_finite());
}

#[test]
fn addition_theorem_oracle() {
    // P_n(cos γ) = Σ_m (n−|m|)!/(n+|m|)! P_n^|m|(x) P_n^|m|(x') e^{im(φ−φ')}.
    let ratios = factorial_ratios(25);
    let (t1, p1, t2, p2) = (0.7f64, 0.3f64, 2.1f64, -1.2f64);
    let cos_g = t1.cos() * t2.cos() + t1.sin() * t2.sin() * (p1 - p2).cos();
    for n in [0usize, 1, 5, 12, 25] {
        let mut sum = 0.0;
        for m in -(n as i64)..=(n as i64) {
            let am = m.unsigned_abs() as usize;
            sum += ratios[tri_index(n, am)]
                * associated_legendre(n, am, t1.cos()).unwrap()
                * associated_legendre(n, am, t2.cos()).unwrap()
                * (m as f64 * (p1 - p2)).cos();
        }
        assert_relative_eq!(sum, legendre_p(n, cos_g), epsilon = 1e-12);
    }
}

#[test]
fn factorial_ratio_recurrence_matches_direct_product() {
    let ratios = factorial_ratios(25);
    for (n, m) in [(3usize, 2usize), (10, 4), (25, 25), (25, 0)] {
        let direct: f64 = ((n - m + 1)..=(n + m)).map(|k| 1.0 / k as f64).product();
        assert_relative_eq!(ratios[tri_index(n, m)], direct, max_relative = 1e-13);
    }
}

#[test]
fn moments_of_central_charge() {
    let e = charge_moments(&ChargeSet::single(Vec3::ZERO, 1.0), 6).unwrap();
    assert_eq!(e[0], Complex64::new(1.0, 0.0));
    assert!(e[1..].iter().all(|c| c.norm() == 0.0));
}

#[test]
fn moments_of_mirrored_pair() {
    let cs = ChargeSet::new(
        vec![Vec3::new(0.0, 0.0, 1.5), Vec3::new(0.0, 0.0, -1.5)],
        vec![1.0, -1.0],
    );
    let e = charge_moments(&cs, 4).unwrap();
    assert_eq!(e[full_index(0, 0)].norm(), 0.0);
    assert_relative_eq!(e[full_index(1, 0)].re, 3.0, max_relative = 1e-14);
}

#[test]
fn moments_are_additive_and_conjugate_symmetric() {
    let a = ChargeSet::single(Vec3::new(1.0, -2.0, 0.5), 0.7);
    let b = ChargeSet::single(Vec3::new(-0.3, 1.1, 2.0), -1.3);
    let both = ChargeSet::new(vec![a.positions()[0], b.positions()[0]], vec![0.7, -1.3]);
    let (ea, eb, eab) = (
        charge_moments(&a, 10).unwrap(),
        charge_moments(&b, 10).unwrap(),
        charge_moments(&both, 10).unwrap(),
    );
    for i in 0..eab.len() {
        assert!((ea[i] + eb[i] - eab[i]).norm() <= 1e-12 * (1.0 + eab[i].norm()));
    }
    for n in 0..=10 {
        for m in 1..=n as i64 {
            let d = eab[full_index(n, -m)] - eab[full_index(n, m)].conj();
            assert!(d.norm() <= 1e-12 * (1.0 + eab[full_index(n, m)].norm()));
        }
    }
}

#[test]
fn reaction_coefficient_limits() {
    let e = charge_moments(&ChargeSet::single(Vec3::new(0.5, 0.2, -1.0), 1.0), 5).unwrap();
    let b = reaction_coefficients(&e, 6.0, 4.0, 80.0).unwrap();
    assert_relative_eq!(
        b[0].re,
        (4.0 - 80.0) / (4.0 * 80.0 * 6.0) * e[0].re,
        max_relative = 1e-15
    );
    let same = reaction_coefficients(&e, 6.0, 10.0, 10.0).unwrap();
    assert!(same.iter().all(|c| c.norm() == 0.0));
    let doubled = reaction_coefficients(&e, 12.0, 4.0, 80.0).unwrap();
    assert_relative_eq!(doubled[0].re, b[0].re / 2.0, max_relative = 1e-15);
    assert!(reaction_coefficients(&e, 0.0, 4.0, 80.0).is_err());
}

#[test]
fn born_potential_and_energy() {
    let cs = ChargeSet::single(Vec3::ZERO, 1.0);
    let series = SeriesCoefficients::new(&cs, 6.0, &born_cfg(), DEFAULT_ORDER).unwrap();
    let psi = series.reaction_potential(Vec3::ZERO).unwrap();
    assert_relative_eq!(psi, (4.0 - 80.0) / (4.0 * 80.0 * 6.0), max_relative = 1e-14);
    // Constant everywhere inside: only n = 0 survives.
    let elsewhere = series.reaction_potential(Vec3::new(1.0, -3.0, 2.0)).unwrap();
    assert_relative_eq!(elsewhere, psi, max_relative = 1e-14);
    assert_relative_eq!(
        series.reaction_potential_kcal(Vec3::ZERO).unwrap(),
        -13.14418,
        max_relative = 1e-6
    );

    let e = kirkwood_energy(&cs, 6.0, &born_cfg(), DEFAULT_ORDER).unwrap();
    assert_relative_eq!(e, 0.5 * 332.0636 * (1.0 / 80.0 - 1.0 / 4.0) / 6.0, max_relative = 1e-14);
    assert_relative_eq!(e, -6.57209, max_relative = 1e-5);
}

#[test]
fn no_contrast_means_no_energy() {
    let cs = sample_grid_charges(6.0, 1.0, 10, 42).unwrap();
    let cfg = DielectricConfig::new(4.0, 4.0).unwrap();
    assert_eq!(kirkwood_energy(&cs, 6.0, &cfg, 25).unwrap(), 0.0);
}

#[test]
fn series_matches_zonal_oracle() {
    let cs = sample_grid_charges(6.0, 1.0, 10, 42).unwrap();
    let series = SeriesCoefficients::new(&cs, 6.0, &born_cfg(), 25).unwrap();
    for &p in cs.positions().iter().chain([Vec3::new(0.3, -0.2, 4.1)].iter()) {
        let want = zonal_potential(&cs, 6.0, 4.0, 80.0, 25, p);
        let got = series.reaction_potential(p).unwrap();
        assert_relative_eq!(got, want, max_relative = 1e-11, epsilon = 1e-14);
    }
}

#[test]
fn truncation_25_matches_40() {
    let cs = sample_grid_charges(6.0, 1.0, 10, 42).unwrap();
    let e25 = kirkwood_energy(&cs, 6.0, &born_cfg(), 25).unwrap();
    let e40 = kirkwood_energy(&cs, 6.0, &born_cfg(), 40).unwrap();
    // Charges sit 1 Å inside a 6 Å sphere, so the tail falls like (25/36)^n
    // and order 25 leaves a residue near 3e-5.
    assert_relative_eq!(e25, e40, max_relative = 1e-4);
    let e60 = kirkwood_energy(&cs, 6.0, &born_cfg(), 60).unwrap();
    let e64 = kirkwood_energy(&cs, 6.0, &born_cfg(), 64).unwrap();
    assert_relative_eq!(e60, e64, max_relative = 1e-8);
    assert!((e60 - e40).abs() < (e40 - e25).abs());
}

#[test]
fn shells_decay_geometrically() {
    let cs = sample_grid_charges(6.0, 1.0, 10, 42).unwrap();
    let series = SeriesCoefficients::new(&cs, 6.0, &born_cfg(), 25).unwrap();
    let rmax = cs.positions().iter().map(|p| p.norm()).fold(0.0, f64::max);
    let at = cs.positions()[0];
    // |shell n| ≤ max_n|f_n|·Σ|q_k|·(r_max·r/b²)^n/b with |P_n| ≤ 1 and
    // |f_n| = |ε_1 − ε_2|(n+1)/(ε_1(ε_1 n + ε_2(n+1))) ≤ 76/(4·80).
    let ratio = rmax * at.norm() / 36.0;
    assert!(ratio < 1.0);
    for n in 0..=25 {
        let shell = series.shell_contribution(n, at).norm();
        let bound = 76.0 / 320.0 * 10.0 * ratio.powi(n as i32) / 6.0;
        assert!(shell <= bound * (1.0 + 1e-12), "shell {n}: {shell} > {bound}");
    }
}

#[test]
fn energy_is_rotation_invariant() {
    let cs = sample_grid_charges(6.0, 1.0, 10, 42).unwrap();
    let e0 = kirkwood_energy(&cs, 6.0, &born_cfg(), 25).unwrap();
    let (a, b) = (0.7f64, -1.3f64);
    let rotated = cs.map_positions(|p| {
        let p = Vec3::new(
            p.x() * a.cos() - p.y() * a.sin(),
            p.x() * a.sin() + p.y() * a.cos(),
            p.z(),
        );
        Vec3::new(
            p.x(),
            p.y() * b.cos() - p.z() * b.sin(),
            p.y() * b.sin() + p.z() * b.cos(),
        )
    });
    let e1 = kirkwood_energy(&rotated, 6.0, &born_cfg(), 25).unwrap();
    assert_relative_eq!(e0, e1, max_relative = 1e-10);
}

#[test]
fn exterior_points_rejected() {
    let cs = ChargeSet::single(Vec3::new(0.0, 0.0, 2.0), 1.0);
    let series = SeriesCoefficients::new(&cs, 6.0, &born_cfg(), 10).unwrap();
    assert!(matches!(
        series.reaction_potential(Vec3::new(0.0, 6.0, 0.0)),
        Err(Error::Domain(_))
    ));
    let outside = ChargeSet::single(Vec3::new(0.0, 0.0, 6.5), 1.0);
    assert!(SeriesCoefficients::new(&outside, 6.0, &born_cfg(), 10).is_err());
}

#[test]
fn csv_dump_has_all_coefficients() {
    let cs = ChargeSet::single(Vec3::new(0.0, 1.0, 2.0), 1.0);
    let series = SeriesCoefficients::new(&cs, 6.0, &born_cfg(), 3).unwrap();
    assert_eq!(series.to_csv().lines().count(), 1 + 16);
}
