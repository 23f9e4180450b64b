use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("triangle {triangle} violates the strict triangle inequality (edge lengths {lengths:?})")]
    DegenerateTriangle { triangle: usize, lengths: [f64; 3] },

    #[error("surface is closed: no boundary contour found")]
    ClosedSurface,

    #[error("genus is not a non-negative integer (euler characteristic {euler}, {contours} contours)")]
    NonIntegralGenus { euler: i64, contours: usize },

    #[error("requested {requested} eigenpairs but only {available} degrees of freedom are available")]
    NotEnoughDofs { requested: usize, available: usize },

    #[error("eigensolver did not converge after {iterations} iterations (worst residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("function has zero L2 norm; Rayleigh quotient undefined")]
    ZeroFunction,

    #[error("found {count} numerically-zero Neumann modes; the mesh is disconnected")]
    MultipleZeroModes { count: usize },

    #[error("map is not proper: boundary vertex {vertex} has |f| = {modulus}")]
    NonProperMap { vertex: usize, modulus: f64 },

    #[error("degree estimate {estimate} is not close to an integer")]
    NonIntegralDegree { estimate: f64 },

    #[error("map sample has {got} values but the mesh has {expected} vertices")]
    MapSizeMismatch { expected: usize, got: usize },

    #[error("Mobius parameter a = {re} + {im}i is unbalanced (center of gravity norm {residual:e})")]
    Unbalanced { re: f64, im: f64, residual: f64 },

    #[error("balancing did not converge (best residual {best_residual:e} at a = {re} + {im}i)")]
    BalanceFailed { best_residual: f64, re: f64, im: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::InvalidMesh(_) => "invalid_mesh",
            Error::DegenerateTriangle { .. } => "degenerate_triangle",
            Error::ClosedSurface => "closed_surface",
            Error::NonIntegralGenus { .. } => "non_integral_genus",
            Error::NotEnoughDofs { .. } => "not_enough_dofs",
            Error::NoConvergence { .. } => "no_convergence",
            Error::NotPositiveDefinite { .. } => "not_positive_definite",
            Error::ZeroFunction => "zero_function",
            Error::MultipleZeroModes { .. } => "multiple_zero_modes",
            Error::NonProperMap { .. } => "non_proper_map",
            Error::NonIntegralDegree { .. } => "non_integral_degree",
            Error::MapSizeMismatch { .. } => "map_size_mismatch",
            Error::Unbalanced { .. } => "unbalanced",
            Error::BalanceFailed { .. } => "balance_failed",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }
}
