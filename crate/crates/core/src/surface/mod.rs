//! Mesh and charge ingestion, sphere synthesis, and the geometry both
//! discretizations are built from.

mod charges;
mod discretize;
mod icosphere;
mod mesh;
mod msms;
mod pqr;

pub use charges::{sample_grid_charges, ChargeSet, SplitMix64};
pub use discretize::{panel_geometry, vertex_quadrature, PanelSet, PointCloud};
pub use icosphere::generate_icosphere;
pub use mesh::TriangleMesh;
pub use msms::{load_msms_files, load_msms_mesh, write_msms_mesh};
pub use pqr::{load_pqr, load_pqr_file};
