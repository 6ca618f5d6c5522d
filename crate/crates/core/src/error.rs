use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("malformed face {face}: {msg}")]
    MalformedFace { face: usize, msg: String },

    #[error("mesh is not closed and consistently oriented: {0}")]
    Orientation(String),

    #[error("degenerate panel {face}: area {area:e}")]
    DegeneratePanel { face: usize, area: f64 },

    #[error("vertex {0} is not referenced by any face")]
    IsolatedVertex(usize),

    #[error("vertex {0} has a zero resultant normal")]
    DegenerateNormal(usize),

    #[error("need {requested} grid charges but only {available} candidates fit inside the sphere")]
    Capacity { requested: usize, available: usize },

    #[error("singular kernel: {0}")]
    Singularity(String),

    #[error("evaluation point is within the near-singular zone of a panel")]
    NearSingular,

    #[error("adaptive quadrature did not reach rel_tol {rel_tol:e} (best estimate {estimate})")]
    AccuracyNotReached { estimate: f64, rel_tol: f64 },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("matrix is singular to working precision at pivot {pivot}")]
    SingularMatrix { pivot: usize },

    #[error("GMRES did not converge in {iterations} iterations (relative residual {residual:e})")]
    NonConvergence {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
