use std::collections::HashMap;

use crate::scalar::Real;

/// Indexed triangle mesh.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Mesh<T> {
    pub vertices: Vec<[T; 3]>,
    pub triangles: Vec<[usize; 3]>,
    pub normals: Option<Vec<[T; 3]>>,
}

fn sub<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn cross<T: Real>(a: [T; 3], b: [T; 3]) -> [T; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub(crate) fn dot<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm<T: Real>(a: [T; 3]) -> T {
    dot(a, a).sqrt()
}

impl<T: Real> Mesh<T> {
    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Unnormalized face normal (twice the area, right-hand rule).
    pub fn face_normal(&self, tri: usize) -> [T; 3] {
        let [a, b, c] = self.triangles[tri].map(|i| self.vertices[i]);
        cross(sub(b, a), sub(c, a))
    }

    pub fn area(&self) -> T {
        (0..self.triangles.len())
            .map(|f| norm(self.face_normal(f)))
            .sum::<T>()
            / T::lit(2.0)
    }

    /// Axis-aligned bounds of the vertices, `None` for a mesh without vertices.
    pub fn bounds(&self) -> Option<([T; 3], [T; 3])> {
        let first = *self.vertices.first()?;
        Some(self.vertices.iter().fold((first, first), |(lo, hi), v| {
            (
                [lo[0].min(v[0]), lo[1].min(v[1]), lo[2].min(v[2])],
                [hi[0].max(v[0]), hi[1].max(v[1]), hi[2].max(v[2])],
            )
        }))
    }

    /// Fills `normals` with area-weighted vertex normals.
    pub fn compute_normals(&mut self) {
        let mut acc = vec![[T::zero(); 3]; self.vertices.len()];
        for (f, tri) in self.triangles.iter().enumerate() {
            let n = self.face_normal(f);
            for &i in tri {
                for k in 0..3 {
                    acc[i][k] = acc[i][k] + n[k];
                }
            }
        }
        for n in &mut acc {
            let len = norm(*n);
            if len > T::zero() {
                *n = n.map(|c| c / len);
            }
        }
        self.normals = Some(acc);
    }

    /// True when every triangle has a positive z-component normal.
    pub fn is_ccw_from_above(&self) -> bool {
        (0..self.triangles.len()).all(|f| self.face_normal(f)[2] > T::zero())
    }

    /// Drops vertices no triangle references, preserving vertex order.
    pub(crate) fn compact(mut self) -> Self {
        let mut used = vec![false; self.vertices.len()];
        for tri in &self.triangles {
            for &i in tri {
                used[i] = true;
            }
        }
        let mut remap = vec![usize::MAX; self.vertices.len()];
        let mut kept = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if used[i] {
                remap[i] = kept.len();
                kept.push(*v);
            }
        }
        for tri in &mut self.triangles {
            *tri = tri.map(|i| remap[i]);
        }
        self.vertices = kept;
        self.normals = None;
        self
    }
}

/// Result of [`validate_mesh`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MeshReport {
    /// Triangles referencing a vertex index `>= vertices.len()`.
    pub index_out_of_range: Vec<usize>,
    /// Triangles that repeat a vertex index.
    pub degenerate_triangles: Vec<usize>,
    /// Vertices with NaN or infinite coordinates.
    pub non_finite_vertices: Vec<usize>,
    /// Normals array present but of the wrong length.
    pub normal_count_mismatch: bool,
    /// Edges used by exactly one triangle.
    pub boundary_edges: usize,
    /// Edges shared by more than two triangles.
    pub non_manifold_edges: usize,
    /// Interior edges traversed in the same direction by both triangles.
    pub orientation_conflicts: usize,
}

impl MeshReport {
    /// No invariant violations. Boundary and manifoldness counts are informational.
    pub fn is_valid(&self) -> bool {
        self.index_out_of_range.is_empty()
            && self.degenerate_triangles.is_empty()
            && self.non_finite_vertices.is_empty()
            && !self.normal_count_mismatch
    }
}

pub fn validate_mesh<T: Real>(mesh: &Mesh<T>) -> MeshReport {
    let mut report = MeshReport::default();
    let n = mesh.vertices.len();

    for (i, v) in mesh.vertices.iter().enumerate() {
        if !v.iter().all(|c| c.is_finite()) {
            report.non_finite_vertices.push(i);
        }
    }
    if let Some(normals) = &mesh.normals {
        report.normal_count_mismatch = normals.len() != n;
    }

    // undirected edge -> (uses, uses in a->b direction with a < b)
    let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for (f, &[a, b, c]) in mesh.triangles.iter().enumerate() {
        if a >= n || b >= n || c >= n {
            report.index_out_of_range.push(f);
            continue;
        }
        if a == b || b == c || a == c {
            report.degenerate_triangles.push(f);
            continue;
        }
        for (p, q) in [(a, b), (b, c), (c, a)] {
            let entry = edges.entry((p.min(q), p.max(q))).or_default();
            entry.0 += 1;
            if p < q {
                entry.1 += 1;
            }
        }
    }
    for &(uses, forward) in edges.values() {
        match uses {
            1 => report.boundary_edges += 1,
            2 if forward != 1 => report.orientation_conflicts += 1,
            2 => {}
            _ => report.non_manifold_edges += 1,
        }
    }
    report
}
