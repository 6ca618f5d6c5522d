//! Reference extrapolation, convergence-order fits, and work-precision
//! crossover detection.

use crate::{BenchError, Result};

/// Richardson extrapolation from two resolutions of a surface mesh.
///
/// The mesh width ratio is taken as `ρ = √(N_fine/N_coarse)`, and the
/// returned estimate is `E_fine + (E_fine − E_coarse)/(ρ^p − 1)`.
pub fn richardson_reference(e_coarse: f64, e_fine: f64, n_coarse: usize, n_fine: usize, order: f64) -> Result<f64> {
    if !(order > 0.0) || !order.is_finite() {
        return Err(BenchError::Config(format!(
            "extrapolation order must be positive, got {order}"
        )));
    }
    if n_coarse == 0 || n_fine <= n_coarse {
        return Err(BenchError::Ordering(format!(
            "fine resolution {n_fine} must exceed coarse resolution {n_coarse}"
        )));
    }
    let rho = (n_fine as f64 / n_coarse as f64).sqrt();
    Ok(e_fine + (e_fine - e_coarse) / (rho.powf(order) - 1.0))
}

/// Least-squares slope of `log(error)` against `log(h)` with `h = N^{-1/2}`.
pub fn observed_order(errors: &[f64], ns: &[usize]) -> Result<f64> {
    if errors.len() != ns.len() {
        return Err(BenchError::Data(format!(
            "{} errors for {} resolutions",
            errors.len(),
            ns.len()
        )));
    }
    if errors.len() < 2 {
        return Err(BenchError::Data("an order fit needs at least two samples".into()));
    }
    if let Some(e) = errors.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
        return Err(BenchError::Data(format!(
            "error {e} is not positive; the reference coincides with a sample"
        )));
    }
    if ns.contains(&0) {
        return Err(BenchError::Data("resolution 0 in order fit".into()));
    }
    let xs: Vec<f64> = ns.iter().map(|&n| -0.5 * (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx <= 0.0 {
        return Err(BenchError::Data("all samples share one resolution".into()));
    }
    Ok(sxy / sxx)
}

/// One point of a work-precision curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkSample {
    pub n: usize,
    pub error: f64,
    pub flops: f64,
}

/// Error level where the cheaper method changes, with the samples whose
/// segments were interpolated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover {
    pub error: f64,
    /// `N` of the two panel samples bracketing the crossover.
    pub panel_bracket: (usize, usize),
    /// `N` of the two point samples bracketing the crossover.
    pub point_bracket: (usize, usize),
}

/// Outcome of scanning the shared error range of two work-precision curves.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverScan {
    /// Shared error range `(tightest, loosest)`, if any.
    pub overlap: Option<(f64, f64)>,
    /// `ln(flops_panel/flops_point)` at each breakpoint, loosest first.
    pub gaps: Vec<(f64, f64)>,
    pub crossover: Option<Crossover>,
}

impl CrossoverScan {
    /// Point method needs fewer flops at the loosest shared error.
    pub fn point_cheaper_loose(&self) -> bool {
        self.gaps.first().is_some_and(|g| g.1 > 0.0)
    }

    /// Panel method needs fewer flops at the tightest shared error.
    pub fn panel_cheaper_tight(&self) -> bool {
        self.gaps.last().is_some_and(|g| g.1 < 0.0)
    }
}

/// Cheapest interpolated `(ln flops, segment)` reaching `error`, taking the
/// samples in order of `N`.
fn log_cost(curve: &[WorkSample], error: f64) -> Option<(f64, (usize, usize))> {
    let le = error.ln();
    let mut best: Option<(f64, (usize, usize))> = None;
    let mut consider = |c: f64, seg: (usize, usize)| {
        if best.is_none_or(|(b, _)| c < b) {
            best = Some((c, seg));
        }
    };
    for (i, s) in curve.iter().enumerate() {
        if s.error == error {
            consider(s.flops.ln(), (i, i));
        }
    }
    for (i, w) in curve.windows(2).enumerate() {
        let (e0, e1) = (w[0].error.ln(), w[1].error.ln());
        let (lo, hi) = (e0.min(e1), e0.max(e1));
        if le < lo || le > hi || e0 == e1 {
            continue;
        }
        let t = (le - e0) / (e1 - e0);
        let c = w[0].flops.ln() + t * (w[1].flops.ln() - w[0].flops.ln());
        consider(c, (i, i + 1));
    }
    best
}

/// Find the error below which the panel curve needs fewer flops than the
/// point curve, interpolating both piecewise-linearly in log-log space.
///
/// Curves are sorted by `N` internally. Nonpositive errors or flop counts are
/// dropped. A crossover is reported only when the point method is cheaper at
/// some looser shared error and the panel method is cheaper from the
/// crossover down to the tightest shared error.
pub fn detect_crossover(panel: &[WorkSample], point: &[WorkSample]) -> CrossoverScan {
    let clean = |c: &[WorkSample]| {
        let mut v: Vec<WorkSample> = c
            .iter()
            .copied()
            .filter(|s| s.error > 0.0 && s.flops > 0.0 && s.error.is_finite())
            .collect();
        v.sort_by_key(|s| s.n);
        v
    };
    let (panel, point) = (clean(panel), clean(point));
    let none = CrossoverScan {
        overlap: None,
        gaps: Vec::new(),
        crossover: None,
    };
    if panel.len() < 2 || point.len() < 2 {
        return none;
    }
    let range = |c: &[WorkSample]| {
        c.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| {
            (lo.min(s.error), hi.max(s.error))
        })
    };
    let (plo, phi) = range(&panel);
    let (qlo, qhi) = range(&point);
    let (lo, hi) = (plo.max(qlo), phi.min(qhi));
    if lo > hi {
        return none;
    }
    let mut breaks: Vec<f64> = panel
        .iter()
        .chain(&point)
        .map(|s| s.error)
        .filter(|&e| e >= lo && e <= hi)
        .collect();
    breaks.sort_by(|a, b| b.total_cmp(a));
    breaks.dedup();

    let mut gaps = Vec::with_capacity(breaks.len());
    let mut segs = Vec::with_capacity(breaks.len());
    for &e in &breaks {
        if let (Some((cp, sp)), Some((cq, sq))) = (log_cost(&panel, e), log_cost(&point, e)) {
            gaps.push((e, cp - cq));
            segs.push((sp, sq));
        }
    }
    let mut crossover = None;
    // Walk from the tightest error towards looser ones while the panel
    // method stays cheaper; the first sign change is the crossover.
    if gaps.last().is_some_and(|g| g.1 < 0.0) {
        let mut k = gaps.len() - 1;
        while k > 0 && gaps[k - 1].1 < 0.0 {
            k -= 1;
        }
        if k > 0 {
            let (loose, tight) = (gaps[k - 1], gaps[k]);
            let t = loose.1 / (loose.1 - tight.1);
            let le = loose.0.ln() + t * (tight.0.ln() - loose.0.ln());
            let error = le.exp();
            let bracket = |curve: &[WorkSample], fallback: ((usize, usize), (usize, usize))| {
                let seg = log_cost(curve, error).map_or(fallback.0, |(_, s)| s);
                let seg = if seg.0 == seg.1 { fallback.1 } else { seg };
                (curve[seg.0].n, curve[seg.1].n)
            };
            crossover = Some(Crossover {
                error,
                panel_bracket: bracket(&panel, (segs[k].0, segs[k - 1].0)),
                point_bracket: bracket(&point, (segs[k].1, segs[k - 1].1)),
            });
        }
    }
    CrossoverScan {
        overlap: Some((lo, hi)),
        gaps,
        crossover,
    }
}
