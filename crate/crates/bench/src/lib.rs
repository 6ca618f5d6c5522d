//! Study drivers for the `pcm-bem` solvers: mesh convergence against the
//! Kirkwood series or a Richardson reference, work-precision curves with
//! crossover detection, and reaction potentials along a line.
//!
//! Every study writes deterministic CSV; see [`csv`] for the layout.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod csv;
pub mod study;

mod error;

pub use analysis::{detect_crossover, observed_order, richardson_reference, Crossover, CrossoverScan, WorkSample};
pub use cli::cli_main;
pub use config::{ChargeSource, Geometry, MeshFiles, Method, MethodSet, ReferenceMode, StudyConfig};
pub use error::{BenchError, Result};
pub use study::{
    run_convergence_study, run_line_potential_study, run_work_precision_study, FlopMetric, LineTable, StudyReport,
    StudyRow,
};
