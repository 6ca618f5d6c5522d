use std::path::PathBuf;

use pcm_bem::kirkwood::DEFAULT_ORDER;
use pcm_bem::surface::{generate_icosphere, load_msms_files, load_pqr_file, sample_grid_charges};
use pcm_bem::{ChargeSet, DielectricConfig, Discretization, SolveMode, TriangleMesh};

use crate::{BenchError, Result};

/// Discretization family, labelled as in the CSV output.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Panel,
    Point,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Panel => "PAN",
            Method::Point => "SRF",
        }
    }

    pub fn discretize(self, mesh: &TriangleMesh) -> pcm_bem::Result<Discretization> {
        match self {
            Method::Panel => Discretization::panels(mesh),
            Method::Point => Discretization::points(mesh),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MethodSet {
    Panel,
    Point,
    #[default]
    Both,
}

impl MethodSet {
    pub fn methods(self) -> &'static [Method] {
        match self {
            MethodSet::Panel => &[Method::Panel],
            MethodSet::Point => &[Method::Point],
            MethodSet::Both => &[Method::Panel, Method::Point],
        }
    }

    pub fn contains(self, m: Method) -> bool {
        self.methods().contains(&m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeshFiles {
    pub vert: PathBuf,
    pub face: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Geometry {
    /// Icosphere of the given radius at each subdivision level.
    Icosphere { radius: f64, levels: Vec<u32> },
    /// Meshes of one molecule at increasing density.
    Meshes(Vec<MeshFiles>),
}

impl Geometry {
    pub fn resolutions(&self) -> usize {
        match self {
            Geometry::Icosphere { levels, .. } => levels.len(),
            Geometry::Meshes(files) => files.len(),
        }
    }

    /// Mesh at resolution index `k`.
    pub fn mesh(&self, k: usize) -> Result<TriangleMesh> {
        match self {
            Geometry::Icosphere { radius, levels } => Ok(generate_icosphere(*radius, levels[k])?),
            Geometry::Meshes(files) => Ok(load_msms_files(&files[k].vert, &files[k].face)?),
        }
    }

    pub fn describe(&self, k: usize) -> String {
        match self {
            Geometry::Icosphere { levels, .. } => format!("level={}", levels[k]),
            Geometry::Meshes(files) => format!("vert={}", files[k].vert.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ChargeSource {
    /// `count` alternating unit charges drawn from a grid of spacing `h`
    /// inside a sphere of radius `radius`, using the study seed.
    Grid {
        radius: f64,
        spacing: f64,
        count: usize,
    },
    Pqr(PathBuf),
    Explicit(ChargeSet),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReferenceMode {
    Kirkwood,
    Richardson,
}

impl ReferenceMode {
    pub fn label(self) -> &'static str {
        match self {
            ReferenceMode::Kirkwood => "kirkwood",
            ReferenceMode::Richardson => "richardson",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub geometry: Geometry,
    pub charges: ChargeSource,
    pub dielectric: DielectricConfig,
    pub methods: MethodSet,
    pub solve: SolveMode,
    pub reference: ReferenceMode,
    /// Multipole order of the Kirkwood reference.
    pub series_order: usize,
    /// Order `p` assumed by the Richardson reference.
    pub richardson_order: f64,
    /// Finest rows per method entering the `order=` fit.
    pub order_window: usize,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl StudyConfig {
    /// Random unit charges in an icosphere: the sphere mesh-convergence
    /// setup with `R = 6`, `h = 1`, ten charges and seed 42 by default.
    pub fn sphere(radius: f64, levels: Vec<u32>) -> Self {
        StudyConfig {
            geometry: Geometry::Icosphere { radius, levels },
            charges: ChargeSource::Grid {
                radius,
                spacing: 1.0,
                count: 10,
            },
            dielectric: DielectricConfig::default(),
            methods: MethodSet::Both,
            solve: SolveMode::Lu,
            reference: ReferenceMode::Kirkwood,
            series_order: DEFAULT_ORDER,
            richardson_order: 1.0,
            order_window: 3,
            output: None,
            seed: 42,
        }
    }

    /// Molecular meshes with a PQR charge file and a Richardson reference.
    pub fn residue(meshes: Vec<MeshFiles>, pqr: PathBuf) -> Self {
        StudyConfig {
            geometry: Geometry::Meshes(meshes),
            charges: ChargeSource::Pqr(pqr),
            reference: ReferenceMode::Richardson,
            ..StudyConfig::sphere(1.0, Vec::new())
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.geometry.resolutions() < 2 {
            return Err(BenchError::Config(
                "a convergence study needs at least two resolutions".into(),
            ));
        }
        if let Geometry::Icosphere { radius, .. } = self.geometry {
            if !(radius > 0.0) {
                return Err(BenchError::Config(format!(
                    "sphere radius must be positive, got {radius}"
                )));
            }
        }
        match (self.reference, &self.geometry) {
            (ReferenceMode::Kirkwood, Geometry::Meshes(_)) => {
                return Err(BenchError::Config(
                    "the kirkwood reference requires sphere geometry, not mesh files".into(),
                ))
            }
            (ReferenceMode::Richardson, _) if !self.methods.contains(Method::Panel) => {
                return Err(BenchError::Config(
                    "the richardson reference extrapolates panel energies; include the panel method".into(),
                ))
            }
            _ => {}
        }
        if self.order_window < 2 {
            return Err(BenchError::Config("order window must cover at least two rows".into()));
        }
        Ok(())
    }

    pub fn load_charges(&self) -> Result<ChargeSet> {
        Ok(match &self.charges {
            ChargeSource::Grid { radius, spacing, count } => sample_grid_charges(*radius, *spacing, *count, self.seed)?,
            ChargeSource::Pqr(path) => load_pqr_file(path)?,
            ChargeSource::Explicit(c) => c.clone(),
        })
    }
}
