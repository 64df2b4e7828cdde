use super::{Mesh, MeshError};
use crate::geometry::{CellKind, CellSpec, GeometryError, ScalarGrid, SpatialDomain};
use crate::scalar::Real;

/// Two triangles per complete lattice cell, split along the lower-left to upper-right
/// diagonal, counterclockwise seen from +z. Cells touching a hole are skipped.
pub fn triangulate_heightfield<T: Real>(grid: &ScalarGrid<T>) -> Result<Mesh<T>, MeshError> {
    if grid.is_volume() {
        return Err(MeshError::WrongDimension { expected: 2 });
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let xs: Vec<T> = (0..nx).map(|i| grid.x_at(i)).collect();
    let ys: Vec<T> = (0..ny).map(|j| grid.y_at(j)).collect();

    let mut mesh = Mesh::default();
    let mut vertex_of = vec![usize::MAX; nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let idx = grid.index(i, j, 0);
            if let Some(z) = grid.values[idx] {
                vertex_of[idx] = mesh.vertices.len();
                mesh.vertices.push([xs[i], ys[j], z]);
            }
        }
    }

    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let ll = vertex_of[grid.index(i, j, 0)];
            let lr = vertex_of[grid.index(i + 1, j, 0)];
            let ur = vertex_of[grid.index(i + 1, j + 1, 0)];
            let ul = vertex_of[grid.index(i, j + 1, 0)];
            if [ll, lr, ur, ul].contains(&usize::MAX) {
                continue;
            }
            mesh.triangles.push([ll, lr, ur]);
            mesh.triangles.push([ll, ur, ul]);
        }
    }
    if mesh.triangles.is_empty() {
        return Err(MeshError::Empty);
    }
    Ok(mesh.compact())
}

/// Triangulates a height field over its disc domain with a polar lattice whose outer
/// ring lies exactly on the rim, so the rim of the form is represented by mesh vertices.
///
/// Vertex 0 is the centre; ring `k` (1-based) holds `segments` vertices at radius
/// `radius·k/rings`.
pub fn triangulate_polar<T: Real>(
    cell: &CellSpec<T>,
    t: T,
    rings: usize,
    segments: usize,
) -> Result<Mesh<T>, MeshError> {
    if cell.kind() != CellKind::HeightField {
        return Err(GeometryError::WrongKind {
            expected: CellKind::HeightField,
        }
        .into());
    }
    let SpatialDomain::Disc { cx, cy, radius } = *cell.domain() else {
        return Err(MeshError::NotADisc);
    };
    if rings < 1 || segments < 3 {
        return Err(GeometryError::Resolution(rings.min(segments)).into());
    }
    cell.check_time(t)?;

    let mut ctx = crate::dsl::EvalContext::new(cx, cy, T::zero(), t).with_params(cell.params().clone());
    let mut heights = Vec::with_capacity(1 + rings * segments);
    let mut positions = Vec::with_capacity(1 + rings * segments);
    positions.push((cx, cy));
    for k in 1..=rings {
        let r = if k == rings {
            radius
        } else {
            radius * T::from_index(k) / T::from_index(rings)
        };
        for s in 0..segments {
            let a = T::TAU() * T::from_index(s) / T::from_index(segments);
            positions.push((cx + r * a.cos(), cy + r * a.sin()));
        }
    }
    for &(x, y) in &positions {
        ctx.x = x;
        ctx.y = y;
        heights.push(match cell.field_at(&ctx) {
            Ok(v) if v.is_finite() => Some(v),
            Ok(_) | Err(crate::dsl::EvalError::Domain(_)) => None,
            Err(e) => return Err(GeometryError::from(e).into()),
        });
    }

    let ring = |k: usize, s: usize| 1 + (k - 1) * segments + s % segments;
    let mut mesh = Mesh {
        vertices: positions
            .iter()
            .zip(&heights)
            .map(|(&(x, y), h)| [x, y, h.unwrap_or(T::zero())])
            .collect(),
        triangles: Vec::new(),
        normals: None,
    };
    let mut push = |tri: [usize; 3]| {
        if tri.iter().all(|&i| heights[i].is_some()) {
            mesh.triangles.push(tri);
        }
    };
    for s in 0..segments {
        push([0, ring(1, s), ring(1, s + 1)]);
    }
    for k in 1..rings {
        for s in 0..segments {
            let (a, b, c, d) = (ring(k, s), ring(k + 1, s), ring(k + 1, s + 1), ring(k, s + 1));
            push([a, b, c]);
            push([a, c, d]);
        }
    }
    if mesh.triangles.is_empty() {
        return Err(MeshError::Empty);
    }
    Ok(mesh.compact())
}
