//! Generative-geometry kernel: space-time cells `{(x, y, z) ∈ D : f(x, y, z; t) ≤ iso}`
//! and height fields `z = g(x, y; t)` written in a small expression language, sampled on
//! lattices, meshed, and exported; plus Fibonacci, golden and logarithmic spirals.
//!
//! The numeric core is generic over [`Real`] (`f32` or `f64`). Wire formats (OBJ, SVG,
//! JSON, the HTTP API) and the figure recipes work in `f64`.

pub mod api;
pub mod dsl;
pub mod export;
pub mod figures;
pub mod geometry;
pub mod job;
pub mod mesher;
pub mod scalar;
pub mod spirals;

use thiserror::Error;

pub use dsl::{parse_str, DomainKind, DslError, EvalError, Expr};
pub use export::ExportError;
pub use figures::{FigureError, FigureId, FigureRecipe, OutputFormat};
pub use geometry::{CellKind, GeometryError, SpatialDomain};
pub use mesher::MeshError;
pub use scalar::Real;
pub use spirals::SpiralError;

pub type CellSpec64 = geometry::CellSpec<f64>;
pub type CellSpec32 = geometry::CellSpec<f32>;
pub type ScalarGrid64 = geometry::ScalarGrid<f64>;
pub type ScalarGrid32 = geometry::ScalarGrid<f32>;
pub type Mesh64 = mesher::Mesh<f64>;
pub type Mesh32 = mesher::Mesh<f32>;
pub type Contour64 = mesher::Contour<f64>;
pub type ArcChain64 = spirals::ArcChain<f64>;
pub type Polyline64 = spirals::Polyline<f64>;
pub type SpiralSpec64 = spirals::SpiralSpec<f64>;
pub type EvalContext64 = dsl::EvalContext<f64>;

/// Any failure of the toolchain.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Spiral(#[from] SpiralError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error(transparent)]
    Figure(#[from] FigureError),
    #[error("invalid request: {0}")]
    Invalid(String),
}

impl From<EvalError> for Error {
    fn from(e: EvalError) -> Self {
        Error::Geometry(e.into())
    }
}

/// Coarse classification driving CLI exit codes and HTTP statuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed DSL, unknown names, out-of-range settings.
    Input,
    /// Well-formed input that is numerically impossible: `t <= 0`, empty level sets, ...
    Domain,
    /// Writing output failed.
    Io,
}

impl ErrorCategory {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Input => 3,
            ErrorCategory::Domain => 4,
            ErrorCategory::Io => 1,
        }
    }

    pub fn http_status(self) -> u16 {
        match self {
            ErrorCategory::Input => 400,
            ErrorCategory::Domain => 422,
            ErrorCategory::Io => 500,
        }
    }
}

fn eval_code(e: &EvalError) -> (ErrorCategory, &'static str) {
    match e {
        EvalError::Domain(_) => (ErrorCategory::Domain, "DOMAIN_ERROR"),
        EvalError::UnboundParam(_) => (ErrorCategory::Input, "UNBOUND_PARAM"),
        EvalError::TimeNotPositive(_) => (ErrorCategory::Domain, "TIME_NOT_POSITIVE"),
    }
}

fn geometry_code(e: &GeometryError) -> (ErrorCategory, &'static str) {
    use ErrorCategory::*;
    match e {
        GeometryError::InvalidDomain(_) => (Input, "INVALID_DOMAIN"),
        GeometryError::HeightFieldUsesZ => (Input, "HEIGHTFIELD_USES_Z"),
        GeometryError::WrongKind { .. } => (Input, "WRONG_KIND"),
        GeometryError::Resolution(_) => (Input, "RESOLUTION_OUT_OF_RANGE"),
        GeometryError::TimeNotPositive(_) | GeometryError::TimeRange { .. } => (Domain, "TIME_NOT_POSITIVE"),
        GeometryError::Eval(e) => eval_code(e),
    }
}

fn spiral_code(e: &SpiralError) -> (ErrorCategory, &'static str) {
    use ErrorCategory::*;
    match e {
        SpiralError::TimeNotPositive(_) => (Domain, "TIME_NOT_POSITIVE"),
        SpiralError::ThetaRange(..) => (Input, "THETA_RANGE"),
        SpiralError::Samples { .. } | SpiralError::Count { .. } => (Input, "COUNT_OUT_OF_RANGE"),
        SpiralError::Origin => (Domain, "ORIGIN"),
    }
}

fn mesh_code(e: &MeshError) -> (ErrorCategory, &'static str) {
    use ErrorCategory::*;
    match e {
        MeshError::Empty => (Domain, "EMPTY_MESH"),
        MeshError::WrongDimension { .. } => (Input, "WRONG_DIMENSION"),
        MeshError::NotADisc => (Input, "INVALID_DOMAIN"),
        MeshError::Geometry(g) => geometry_code(g),
    }
}

fn export_code(e: &ExportError) -> (ErrorCategory, &'static str) {
    use ErrorCategory::*;
    match e {
        ExportError::EmptyGeometry => (Domain, "EMPTY_GEOMETRY"),
        ExportError::InvalidMesh(_) => (Domain, "INVALID_MESH"),
        ExportError::Sink(_) | ExportError::Json(_) => (Io, "WRITE_FAILED"),
    }
}

impl Error {
    /// Category and a stable machine-readable code such as `PARSE_ERROR`.
    pub fn classify(&self) -> (ErrorCategory, &'static str) {
        use ErrorCategory::*;
        match self {
            Error::Dsl(DslError::Arity { .. }) => (Input, "ARITY_ERROR"),
            Error::Dsl(DslError::Lex { .. }) => (Input, "LEX_ERROR"),
            Error::Dsl(DslError::Parse { .. }) => (Input, "PARSE_ERROR"),
            Error::Geometry(e) => geometry_code(e),
            Error::Mesh(e) => mesh_code(e),
            Error::Spiral(e) => spiral_code(e),
            Error::Export(e) => export_code(e),
            Error::Figure(e) => match e {
                FigureError::UnknownFigure(_) => (Input, "UNKNOWN_RECIPE"),
                FigureError::UnknownFormat(_) | FigureError::UnsupportedFormat { .. } => {
                    (Input, "UNSUPPORTED_FORMAT")
                }
                FigureError::UnknownParam { .. } => (Input, "UNKNOWN_PARAM"),
                FigureError::OutOfRange { .. } => (Input, "PARAM_OUT_OF_RANGE"),
                FigureError::TimeNotPositive(_) => (Domain, "TIME_NOT_POSITIVE"),
                FigureError::Geometry(g) => geometry_code(g),
                FigureError::Mesh(m) => mesh_code(m),
                FigureError::Spiral(s) => spiral_code(s),
                FigureError::Export(x) => export_code(x),
                FigureError::Io { .. } => (Io, "WRITE_FAILED"),
            },
            Error::Invalid(_) => (Input, "INVALID_REQUEST"),
        }
    }

    pub fn category(&self) -> ErrorCategory {
        self.classify().0
    }

    pub fn code(&self) -> &'static str {
        self.classify().1
    }
}
