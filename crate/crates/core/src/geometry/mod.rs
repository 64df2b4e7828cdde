//! Cells and their discretization into scalar grids at fixed instants of time.

mod cell;
mod domain;
mod grid;

use rayon::prelude::*;
use thiserror::Error;

pub use cell::{CellKind, CellSpec, Membership, PointLimit};
pub use domain::{GridBounds, SpatialDomain};
pub use grid::ScalarGrid;

use crate::dsl::EvalError;
use crate::scalar::Real;

/// Default planar lattice resolution per axis.
pub const DEFAULT_RESOLUTION_2D: usize = 129;
/// Default volumetric lattice resolution per axis.
pub const DEFAULT_RESOLUTION_3D: usize = 65;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("invalid spatial domain: {0}")]
    InvalidDomain(String),
    #[error("height fields may only depend on x, y and t")]
    HeightFieldUsesZ,
    #[error("operation requires a {expected:?} cell")]
    WrongKind { expected: CellKind },
    #[error("at least 2 samples per axis are required, got {0}")]
    Resolution(usize),
    #[error("time parameter must be positive, got {0}")]
    TimeNotPositive(f64),
    #[error("invalid time range [{start}, {end}] with {steps} step(s)")]
    TimeRange { start: f64, end: f64, steps: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Lattice size for [`time_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resolution {
    Planar { nx: usize, ny: usize },
    Volume { nx: usize, ny: usize, nz: usize },
}

impl Resolution {
    pub fn default_for(kind: CellKind) -> Self {
        match kind {
            CellKind::HeightField => Resolution::Planar {
                nx: DEFAULT_RESOLUTION_2D,
                ny: DEFAULT_RESOLUTION_2D,
            },
            CellKind::ImplicitRegion => Resolution::Volume {
                nx: DEFAULT_RESOLUTION_3D,
                ny: DEFAULT_RESOLUTION_3D,
                nz: DEFAULT_RESOLUTION_3D,
            },
        }
    }
}

fn check_counts(counts: &[usize]) -> Result<(), GeometryError> {
    match counts.iter().find(|&&n| n < 2) {
        Some(&n) => Err(GeometryError::Resolution(n)),
        None => Ok(()),
    }
}

/// Samples `g(x, y; t)` over the domain's planar bounding box. Nodes outside the domain
/// and nodes where `g` is undefined or non-finite are holes.
pub fn sample_heightfield<T: Real>(
    cell: &CellSpec<T>,
    t: T,
    nx: usize,
    ny: usize,
) -> Result<ScalarGrid<T>, GeometryError> {
    if cell.kind() != CellKind::HeightField {
        return Err(GeometryError::WrongKind {
            expected: CellKind::HeightField,
        });
    }
    check_counts(&[nx, ny])?;
    cell.check_time(t)?;

    let mut grid = ScalarGrid {
        dims: vec![nx, ny],
        bounds: cell.domain().planar_bounds(),
        t,
        values: vec![None; nx * ny],
    };
    fill(cell, &mut grid)?;
    Ok(grid)
}

/// Samples `f(x, y, z; t)` over the domain's volume bounds.
pub fn sample_volume<T: Real>(
    cell: &CellSpec<T>,
    t: T,
    nx: usize,
    ny: usize,
    nz: usize,
) -> Result<ScalarGrid<T>, GeometryError> {
    if cell.kind() != CellKind::ImplicitRegion {
        return Err(GeometryError::WrongKind {
            expected: CellKind::ImplicitRegion,
        });
    }
    check_counts(&[nx, ny, nz])?;
    cell.check_time(t)?;

    let mut grid = ScalarGrid {
        dims: vec![nx, ny, nz],
        bounds: cell.domain().volume_bounds(),
        t,
        values: vec![None; nx * ny * nz],
    };
    fill(cell, &mut grid)?;
    Ok(grid)
}

fn fill<T: Real>(cell: &CellSpec<T>, grid: &mut ScalarGrid<T>) -> Result<(), GeometryError> {
    let nx = grid.nx();
    let ny = grid.ny();
    let xs: Vec<T> = (0..nx).map(|i| grid.x_at(i)).collect();
    let ys: Vec<T> = (0..ny).map(|j| grid.y_at(j)).collect();
    let zs: Vec<T> = (0..grid.nz()).map(|k| grid.z_at(k)).collect();
    let base = cell.context(grid.t);

    // One row of x per task; every node is computed independently so the result does not
    // depend on scheduling.
    grid.values
        .par_chunks_mut(nx)
        .enumerate()
        .try_for_each(|(row, out)| -> Result<(), GeometryError> {
            let mut ctx = base.clone();
            ctx.y = ys[row % ny];
            ctx.z = zs[row / ny];
            for (i, slot) in out.iter_mut().enumerate() {
                ctx.x = xs[i];
                if !cell.domain().contains(ctx.x, ctx.y, ctx.z) {
                    continue;
                }
                *slot = match cell.field_at(&ctx) {
                    Ok(v) if v.is_finite() => Some(v),
                    Ok(_) | Err(EvalError::Domain(_)) => None,
                    Err(e) => return Err(e.into()),
                };
            }
            Ok(())
        })
}

/// Samples at explicit instants, in the given order.
pub fn sample_at_times<T: Real>(
    cell: &CellSpec<T>,
    times: &[T],
    resolution: Resolution,
) -> Result<Vec<ScalarGrid<T>>, GeometryError> {
    times
        .iter()
        .map(|&t| match resolution {
            Resolution::Planar { nx, ny } => sample_heightfield(cell, t, nx, ny),
            Resolution::Volume { nx, ny, nz } => sample_volume(cell, t, nx, ny, nz),
        })
        .collect()
}

/// Grids at `steps` instants linearly spaced over `[t_start, t_end]`, both ends included.
pub fn time_sweep<T: Real>(
    cell: &CellSpec<T>,
    t_start: T,
    t_end: T,
    steps: usize,
    resolution: Resolution,
) -> Result<Vec<ScalarGrid<T>>, GeometryError> {
    if !(t_start > T::zero()) || !(t_start <= t_end) || !t_end.is_finite() || steps == 0 {
        return Err(GeometryError::TimeRange {
            start: t_start.to_f64_lossy(),
            end: t_end.to_f64_lossy(),
            steps,
        });
    }
    sample_at_times(cell, &sweep_instants(t_start, t_end, steps), resolution)
}

pub fn sweep_instants<T: Real>(t_start: T, t_end: T, steps: usize) -> Vec<T> {
    if steps == 1 {
        return vec![t_start];
    }
    (0..steps)
        .map(|k| {
            if k == steps - 1 {
                t_end
            } else {
                t_start + (t_end - t_start) * T::from_index(k) / T::from_index(steps - 1)
            }
        })
        .collect()
}
