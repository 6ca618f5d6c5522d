//! Plain-text CSV rendering. Header lines start with `#`; summary records
//! follow the data rows as `key=value` lines.

use std::fmt::Write as _;

use crate::analysis::CrossoverScan;
use crate::study::{LineTable, StudyReport};

pub const CONVERGENCE_HEADER: &str = "method,N,energy_kcal,error_kcal,flops_total,flops_A,iters";
pub const LINE_HEADER: &str = "z,psi_series,psi_panel,psi_point";

/// Leading comment block: study name, reference, free-form settings, and an
/// optional timestamp (the only line that varies between identical runs).
pub fn preamble(study: &str, settings: &[(&str, String)], timestamp: Option<u64>) -> String {
    let mut out = format!("# study={study}\n");
    if !settings.is_empty() {
        let joined: Vec<String> = settings.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let _ = writeln!(out, "# {}", joined.join(" "));
    }
    if let Some(t) = timestamp {
        let _ = writeln!(out, "# generated_unix={t}");
    }
    out
}

pub fn convergence_csv(report: &StudyReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# reference={},{:.12}",
        report.reference.mode.label(),
        report.reference.energy
    );
    let _ = writeln!(out, "{CONVERGENCE_HEADER}");
    for r in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{:.10},{:.6e},{},{},{}",
            r.method.label(),
            r.n,
            r.energy,
            r.error,
            r.flops_total,
            r.flops_a,
            r.iterations
        );
    }
    for f in &report.failures {
        let method = f.method.map_or("mesh", |m| m.label());
        let _ = writeln!(out, "# failed method={method} {} reason={}", f.resolution, f.reason);
    }
    for o in &report.orders {
        match (o.order, o.per_unknown()) {
            (Some(p), Some(q)) => {
                let _ = writeln!(out, "order={},{p:.4},per_N={q:.4},rows={}", o.method.label(), o.rows);
            }
            _ => {
                let _ = writeln!(out, "order={},undefined,rows={}", o.method.label(), o.rows);
            }
        }
    }
    if report.crossover_total.is_some() || report.crossover_a.is_some() {
        crossover_line(&mut out, "crossover_total_kcal", report.crossover_total.as_ref());
        crossover_line(&mut out, "crossover_A_kcal", report.crossover_a.as_ref());
    }
    out
}

fn crossover_line(out: &mut String, key: &str, scan: Option<&CrossoverScan>) {
    match scan {
        Some(CrossoverScan { crossover: Some(x), .. }) => {
            let _ = writeln!(
                out,
                "{key}={:.6},PAN:{}-{},SRF:{}-{}",
                x.error, x.panel_bracket.0, x.panel_bracket.1, x.point_bracket.0, x.point_bracket.1
            );
        }
        Some(
            scan @ CrossoverScan {
                overlap: Some((lo, hi)),
                ..
            },
        ) => {
            let cheaper = if scan.panel_cheaper_tight() { "PAN" } else { "SRF" };
            let _ = writeln!(out, "{key}=none,overlap={lo:.6}-{hi:.6},cheaper_at_tight={cheaper}");
        }
        _ => {
            let _ = writeln!(out, "{key}=none");
        }
    }
}

pub fn line_csv(table: &LineTable) -> String {
    let mut out = format!("{LINE_HEADER}\n");
    for r in &table.rows {
        let _ = writeln!(out, "{:.6},{:.10},{:.10},{:.10}", r.z, r.series, r.panel, r.point);
    }
    for (z, why) in &table.skipped {
        let _ = writeln!(out, "# skipped z={z:.6} reason={why}");
    }
    out
}
