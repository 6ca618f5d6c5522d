//! Boundary-element electrostatics for the polarizable continuum model.
//!
//! The induced surface charge `σ` on a closed dielectric boundary solves the
//! second-kind equation `(I + ε̂K*)σ = Bq`. Two discretizations are provided:
//!
//! - **panel** (`PAN`): flat triangles with constant density, centroid
//!   collocation of the source and analytic integration over the test panel;
//! - **point** (`SRF`): Nyström collocation at mesh vertices with one third of
//!   each incident face area as quadrature weight.
//!
//! [`kirkwood`] supplies the analytic reaction potential of charges in a
//! dielectric sphere, which pins down signs and units for both methods.
//!
//! Lengths are in Å, charges in units of `e`, kernels carry `1/(4π)`. Energies
//! are converted to kcal/mol only in [`solver`].

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod geom;
pub mod kernels;
pub mod kirkwood;
pub mod operators;
pub mod solver;
pub mod surface;

mod error;

pub use error::{Error, Result};
pub use geom::Vec3;
pub use kernels::{FlopLedger, Panel};
pub use operators::{DenseMatrix, DielectricConfig, Discretization};
pub use solver::{EnergyResult, SolveMode, SolveReport};
pub use surface::{ChargeSet, PanelSet, PointCloud, TriangleMesh};
