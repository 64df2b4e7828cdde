//! Scalar grids to triangle meshes and contours.

mod contour;
mod heightfield;
mod isosurface;
mod mesh;

use thiserror::Error;

pub use contour::{extract_isocontour, Contour, ContourLine};
pub use heightfield::{triangulate_heightfield, triangulate_polar};
pub use isosurface::extract_isosurface;
pub use mesh::{validate_mesh, Mesh, MeshReport};

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("no triangles were produced")]
    Empty,
    #[error("expected a {expected}D grid")]
    WrongDimension { expected: usize },
    #[error("polar triangulation needs a disc domain")]
    NotADisc,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}
