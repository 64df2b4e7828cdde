use std::collections::HashMap;

use super::contour::{edge_crossing, LatticeKey};
use super::mesh::{cross, dot};
use super::{Mesh, MeshError};
use crate::geometry::ScalarGrid;
use crate::scalar::Real;

// Cube corner c has offset (c & 1, (c >> 1) & 1, (c >> 2) & 1). The six tetrahedra all
// share the 0-7 diagonal and walk it along one permutation of the axes, so neighbouring
// cubes split their common faces along the same diagonal.
const TETRAHEDRA: [[usize; 4]; 6] = [
    [0, 1, 3, 7],
    [0, 1, 5, 7],
    [0, 2, 3, 7],
    [0, 2, 6, 7],
    [0, 4, 5, 7],
    [0, 4, 6, 7],
];

/// Isosurface `f = iso` of a volumetric grid by marching tetrahedra.
///
/// Every cube is split into six tetrahedra; each tetrahedron contributes up to two
/// triangles whose vertices are linear interpolations on lattice edges. Triangles face
/// towards increasing field values. Vertices are shared per lattice edge (or per node when
/// the level passes exactly through it); cubes touching a hole are skipped.
pub fn extract_isosurface<T: Real>(grid: &ScalarGrid<T>, iso: T) -> Result<Mesh<T>, MeshError> {
    if !grid.is_volume() {
        return Err(MeshError::WrongDimension { expected: 3 });
    }
    let (nx, ny, nz) = (grid.nx(), grid.ny(), grid.nz());
    let xs: Vec<T> = (0..nx).map(|i| grid.x_at(i)).collect();
    let ys: Vec<T> = (0..ny).map(|j| grid.y_at(j)).collect();
    let zs: Vec<T> = (0..nz).map(|k| grid.z_at(k)).collect();
    let pos = |idx: usize| [xs[idx % nx], ys[(idx / nx) % ny], zs[idx / (nx * ny)]];

    let mut mesh = Mesh::default();
    let mut ids: HashMap<LatticeKey, usize> = HashMap::new();

    for k in 0..nz - 1 {
        for j in 0..ny - 1 {
            for i in 0..nx - 1 {
                let corner: [usize; 8] = std::array::from_fn(|c| {
                    grid.index(i + (c & 1), j + ((c >> 1) & 1), k + ((c >> 2) & 1))
                });
                let mut vals = [T::zero(); 8];
                let mut complete = true;
                for c in 0..8 {
                    match grid.values[corner[c]] {
                        Some(v) => vals[c] = v,
                        None => complete = false,
                    }
                }
                if !complete {
                    continue;
                }
                let below = vals.iter().filter(|&&v| v < iso).count();
                if below == 0 || below == 8 {
                    continue;
                }
                for tet in &TETRAHEDRA {
                    let nodes = tet.map(|c| (corner[c], vals[c]));
                    march_tet(&nodes, iso, &pos, &mut ids, &mut mesh);
                }
            }
        }
    }
    if mesh.triangles.is_empty() {
        return Err(MeshError::Empty);
    }
    Ok(mesh)
}

fn march_tet<T: Real>(
    nodes: &[(usize, T); 4],
    iso: T,
    pos: &impl Fn(usize) -> [T; 3],
    ids: &mut HashMap<LatticeKey, usize>,
    mesh: &mut Mesh<T>,
) {
    let (inside, outside): (Vec<usize>, Vec<usize>) = (0..4).partition(|&n| nodes[n].1 < iso);
    if inside.is_empty() || outside.is_empty() {
        return;
    }
    let mut vertex = |a: usize, b: usize| -> usize {
        let (key, s, lo, hi) = edge_crossing(nodes[a], nodes[b], iso);
        *ids.entry(key).or_insert_with(|| {
            let (p, q) = (pos(lo), pos(hi));
            mesh.vertices.push(match key {
                LatticeKey::Node(n) => pos(n),
                LatticeKey::Edge(..) => std::array::from_fn(|d| p[d] + s * (q[d] - p[d])),
            });
            mesh.vertices.len() - 1
        })
    };

    // Ring of crossing vertices around the tetrahedron, in cyclic order.
    let ring: Vec<usize> = match (inside.len(), outside.len()) {
        (1, 3) => outside.iter().map(|&o| vertex(inside[0], o)).collect(),
        (3, 1) => inside.iter().map(|&i| vertex(i, outside[0])).collect(),
        _ => {
            let (i0, i1, o0, o1) = (inside[0], inside[1], outside[0], outside[1]);
            vec![vertex(i0, o0), vertex(i0, o1), vertex(i1, o1), vertex(i1, o0)]
        }
    };

    // direction of increasing field across this tetrahedron
    let centroid = |set: &[usize]| -> [T; 3] {
        let n = T::from_index(set.len());
        std::array::from_fn(|d| set.iter().map(|&s| pos(nodes[s].0)[d]).sum::<T>() / n)
    };
    let (ci, co) = (centroid(&inside), centroid(&outside));
    let up: [T; 3] = std::array::from_fn(|d| co[d] - ci[d]);

    for tri in ring_triangles(&ring) {
        let [a, b, c] = tri;
        if a == b || b == c || a == c {
            continue;
        }
        let [pa, pb, pc] = tri.map(|v| mesh.vertices[v]);
        let n = cross(
            [pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]],
            [pc[0] - pa[0], pc[1] - pa[1], pc[2] - pa[2]],
        );
        if dot(n, up) < T::zero() {
            mesh.triangles.push([a, c, b]);
        } else {
            mesh.triangles.push(tri);
        }
    }
}

fn ring_triangles(ring: &[usize]) -> Vec<[usize; 3]> {
    match *ring {
        [a, b, c] => vec![[a, b, c]],
        [a, b, c, d] => vec![[a, b, c], [a, c, d]],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;
    use crate::geometry::{sample_volume, CellSpec, SpatialDomain};
    use crate::mesher::validate_mesh;

    fn volume(src: &str, n: usize) -> ScalarGrid<f64> {
        let c = CellSpec::implicit(parse_str(src).unwrap(), SpatialDomain::cube(2.0)).unwrap();
        sample_volume(&c, 1.0, n, n, n).unwrap()
    }

    #[test]
    fn sphere_is_closed_and_accurate() {
        let m = extract_isosurface(&volume("x^2+y^2+z^2", 33), 1.0).unwrap();
        let r = validate_mesh(&m);
        assert!(r.is_valid(), "{r:?}");
        assert_eq!(r.boundary_edges, 0);
        assert_eq!(r.non_manifold_edges, 0);
        assert_eq!(r.orientation_conflicts, 0);
        let rel = (m.area() - 4.0 * std::f64::consts::PI).abs() / (4.0 * std::f64::consts::PI);
        assert!(rel < 0.02, "{rel}");
        // outward facing: normals agree with position on a sphere about the origin
        for f in 0..m.triangles.len() {
            let n = m.face_normal(f);
            let p = m.vertices[m.triangles[f][0]];
            assert!(dot(n, p) > 0.0);
        }
    }

    #[test]
    fn iso_outside_range_is_empty() {
        assert_eq!(
            extract_isosurface(&volume("x^2+y^2+z^2", 9), 100.0),
            Err(MeshError::Empty)
        );
    }

    #[test]
    fn linear_field_vertices_on_plane() {
        let m = extract_isosurface(&volume("x + 2*y - z", 9), 0.37).unwrap();
        for v in &m.vertices {
            assert!((v[0] + 2.0 * v[1] - v[2] - 0.37).abs() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        let g = volume("max(max(abs(x),abs(y)),abs(z))", 17);
        assert_eq!(extract_isosurface(&g, 1.0), extract_isosurface(&g, 1.0));
    }
}
