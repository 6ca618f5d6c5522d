use pcm_bem::kirkwood::{kirkwood_energy, SeriesCoefficients};
use pcm_bem::operators::eval_reaction_potential;
use pcm_bem::solver::{compute_energy, solve_density, POTENTIAL_TO_KCAL};
use pcm_bem::surface::generate_icosphere;
use pcm_bem::{ChargeSet, DielectricConfig, FlopLedger, SolveMode, Vec3};

use crate::analysis::{detect_crossover, observed_order, richardson_reference, CrossoverScan, WorkSample};
use crate::config::{Geometry, Method, ReferenceMode, StudyConfig};
use crate::{BenchError, Result};

/// One (method, resolution) cell of a study.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    pub method: Method,
    /// Panels or points.
    pub n: usize,
    /// kcal/mol.
    pub energy: f64,
    /// `|energy − reference|`, kcal/mol.
    pub error: f64,
    pub flops_total: u64,
    pub flops_a: u64,
    /// GMRES iterations; 0 for LU.
    pub iterations: usize,
}

/// A cell that could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyFailure {
    /// `None` when the mesh itself failed.
    pub method: Option<Method>,
    pub resolution: String,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub mode: ReferenceMode,
    pub energy: f64,
}

/// Observed order over a method's finest rows.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFit {
    pub method: Method,
    /// Slope against `h = N^{-1/2}`; `None` when fewer than two usable rows.
    pub order: Option<f64>,
    pub rows: usize,
}

impl OrderFit {
    /// The same slope measured against `1/N`.
    pub fn per_unknown(&self) -> Option<f64> {
        self.order.map(|p| 0.5 * p)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    pub reference: Reference,
    /// Sorted by method, then `N`.
    pub rows: Vec<StudyRow>,
    pub failures: Vec<StudyFailure>,
    pub orders: Vec<OrderFit>,
    /// Work-precision crossovers for total and `A`-only flops.
    pub crossover_total: Option<CrossoverScan>,
    pub crossover_a: Option<CrossoverScan>,
}

/// Which flop count a work-precision curve uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlopMetric {
    Total,
    AssemblyA,
}

impl StudyReport {
    pub fn rows_for(&self, method: Method) -> Vec<&StudyRow> {
        self.rows.iter().filter(|r| r.method == method).collect()
    }

    pub fn order_for(&self, method: Method) -> Option<&OrderFit> {
        self.orders.iter().find(|o| o.method == method)
    }

    pub fn work_curve(&self, method: Method, metric: FlopMetric) -> Vec<WorkSample> {
        self.rows_for(method)
            .into_iter()
            .map(|r| WorkSample {
                n: r.n,
                error: r.error,
                flops: match metric {
                    FlopMetric::Total => r.flops_total as f64,
                    FlopMetric::AssemblyA => r.flops_a as f64,
                },
            })
            .collect()
    }
}

/// Energies at every resolution for every method, with errors against the
/// configured reference and per-method order fits.
pub fn run_convergence_study(cfg: &StudyConfig) -> Result<StudyReport> {
    cfg.validate()?;
    let charges = cfg.load_charges()?;
    let mut cells: Vec<(Method, usize, pcm_bem::EnergyResult)> = Vec::new();
    let mut failures = Vec::new();
    for k in 0..cfg.geometry.resolutions() {
        let resolution = cfg.geometry.describe(k);
        let mesh = match cfg.geometry.mesh(k).and_then(|m| {
            charges.check_inside(&m)?;
            Ok(m)
        }) {
            Ok(m) => m,
            Err(e) => {
                failures.push(StudyFailure {
                    method: None,
                    resolution,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        for &method in cfg.methods.methods() {
            let result = method
                .discretize(&mesh)
                .and_then(|disc| compute_energy(&disc, &charges, &cfg.dielectric, cfg.solve));
            match result {
                Ok(r) => cells.push((method, r.unknowns, r)),
                Err(e) => failures.push(StudyFailure {
                    method: Some(method),
                    resolution: resolution.clone(),
                    reason: e.to_string(),
                }),
            }
        }
    }
    cells.sort_by_key(|c| (c.0, c.1));
    if let Some(w) = cells.windows(2).find(|w| w[0].0 == w[1].0 && w[0].1 == w[1].1) {
        return Err(BenchError::Config(format!(
            "two resolutions give {} {} unknowns",
            w[0].1,
            w[0].0.label()
        )));
    }

    let energy = match (cfg.reference, &cfg.geometry) {
        (ReferenceMode::Kirkwood, Geometry::Icosphere { radius, .. }) => {
            kirkwood_energy(&charges, *radius, &cfg.dielectric, cfg.series_order)?
        }
        (ReferenceMode::Kirkwood, Geometry::Meshes(_)) => unreachable!("rejected by validate"),
        (ReferenceMode::Richardson, _) => {
            let panel: Vec<_> = cells.iter().filter(|c| c.0 == Method::Panel).collect();
            let [.., coarse, fine] = panel.as_slice() else {
                return Err(BenchError::Data(format!(
                    "richardson reference needs two panel energies, {} succeeded",
                    panel.len()
                )));
            };
            richardson_reference(coarse.2.energy, fine.2.energy, coarse.1, fine.1, cfg.richardson_order)?
        }
    };
    let reference = Reference {
        mode: cfg.reference,
        energy,
    };

    let rows: Vec<StudyRow> = cells
        .into_iter()
        .map(|(method, n, r)| StudyRow {
            method,
            n,
            energy: r.energy,
            error: (r.energy - energy).abs(),
            flops_total: r.flops_total,
            flops_a: r.flops_a,
            iterations: r.solve.iterations,
        })
        .collect();

    let orders = cfg
        .methods
        .methods()
        .iter()
        .map(|&method| {
            let mine: Vec<&StudyRow> = rows.iter().filter(|r| r.method == method).collect();
            let tail = &mine[mine.len().saturating_sub(cfg.order_window)..];
            let errors: Vec<f64> = tail.iter().map(|r| r.error).collect();
            let ns: Vec<usize> = tail.iter().map(|r| r.n).collect();
            OrderFit {
                method,
                order: observed_order(&errors, &ns).ok(),
                rows: tail.len(),
            }
        })
        .collect();

    Ok(StudyReport {
        reference,
        rows,
        failures,
        orders,
        crossover_total: None,
        crossover_a: None,
    })
}

/// Convergence study plus crossover detection for both flop metrics.
/// Crossovers are only sought when both methods ran.
pub fn run_work_precision_study(cfg: &StudyConfig) -> Result<StudyReport> {
    let mut report = run_convergence_study(cfg)?;
    if cfg.methods.contains(Method::Panel) && cfg.methods.contains(Method::Point) {
        for metric in [FlopMetric::Total, FlopMetric::AssemblyA] {
            let scan = detect_crossover(
                &report.work_curve(Method::Panel, metric),
                &report.work_curve(Method::Point, metric),
            );
            match metric {
                FlopMetric::Total => report.crossover_total = Some(scan),
                FlopMetric::AssemblyA => report.crossover_a = Some(scan),
            }
        }
    }
    Ok(report)
}

/// Samples closer than this to the mesh are skipped.
pub const LINE_SURFACE_CLEARANCE: f64 = 1e-6;

/// Reaction potentials along the z axis, kcal/mol/e.
#[derive(Debug, Clone, PartialEq)]
pub struct LineRow {
    pub z: f64,
    pub series: f64,
    pub panel: f64,
    pub point: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LineTable {
    pub rows: Vec<LineRow>,
    /// Samples dropped with the reason.
    pub skipped: Vec<(f64, String)>,
}

impl LineTable {
    /// Largest `|ψ_point − ψ_series|` over rows accepted by `keep`.
    pub fn max_point_error(&self, keep: impl Fn(f64) -> bool) -> f64 {
        self.rows
            .iter()
            .filter(|r| keep(r.z))
            .map(|r| (r.point - r.series).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_panel_error(&self, keep: impl Fn(f64) -> bool) -> f64 {
        self.rows
            .iter()
            .filter(|r| keep(r.z))
            .map(|r| (r.panel - r.series).abs())
            .fold(0.0, f64::max)
    }
}

/// Reaction potential of a unit charge at `(0, 0, charge_z)` inside an
/// icosphere of radius `radius`, from the series and both discretizations.
pub fn run_line_potential_study(
    radius: f64,
    charge_z: f64,
    level: u32,
    dielectric: &DielectricConfig,
    zs: &[f64],
    series_order: usize,
    solve: SolveMode,
) -> Result<LineTable> {
    if !(charge_z.abs() < radius) {
        return Err(BenchError::Config(format!(
            "charge at z = {charge_z} is not inside radius {radius}"
        )));
    }
    let mesh = generate_icosphere(radius, level)?;
    let charges = ChargeSet::single(Vec3::new(0.0, 0.0, charge_z), 1.0);
    charges.check_inside(&mesh)?;
    let series = SeriesCoefficients::new(&charges, radius, dielectric, series_order)?;

    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for &z in zs {
        let p = Vec3::new(0.0, 0.0, z);
        if mesh.distance_to(p) < LINE_SURFACE_CLEARANCE {
            skipped.push((z, "on the surface".to_string()));
        } else if !(z.abs() < radius) {
            skipped.push((z, "outside the sphere".to_string()));
        } else {
            points.push(p);
        }
    }

    let mut potentials = Vec::new();
    for method in [Method::Panel, Method::Point] {
        let disc = method.discretize(&mesh)?;
        let (sigma, _) = solve_density(&disc, &charges, dielectric, solve)?;
        let mut ledger = FlopLedger::new();
        let psi = eval_reaction_potential(&disc, &sigma, &points, &mut ledger)?;
        potentials.push(psi.into_iter().map(|v| POTENTIAL_TO_KCAL * v).collect::<Vec<_>>());
    }
    let rows = points
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            Ok(LineRow {
                z: p.z(),
                series: series.reaction_potential_kcal(p)?,
                panel: potentials[0][i],
                point: potentials[1][i],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LineTable { rows, skipped })
}

/// `count` evenly spaced samples on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}
