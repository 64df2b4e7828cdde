use std::collections::HashMap;

use super::MeshError;
use crate::geometry::ScalarGrid;
use crate::scalar::Real;

/// One connected piece of an isocontour.
#[derive(Debug, Clone, PartialEq)]
pub struct ContourLine<T> {
    pub points: Vec<[T; 2]>,
    /// The last point connects back to the first.
    pub closed: bool,
}

impl<T: Real> ContourLine<T> {
    pub fn length(&self) -> T {
        let open: T = self
            .points
            .windows(2)
            .map(|w| (w[1][0] - w[0][0]).hypot(w[1][1] - w[0][1]))
            .sum();
        match (self.closed, self.points.first(), self.points.last()) {
            (true, Some(a), Some(b)) => open + (a[0] - b[0]).hypot(a[1] - b[1]),
            _ => open,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Contour<T> {
    pub polylines: Vec<ContourLine<T>>,
}

impl<T: Real> Contour<T> {
    pub fn is_empty(&self) -> bool {
        self.polylines.is_empty()
    }

    pub fn length(&self) -> T {
        self.polylines.iter().map(ContourLine::length).sum()
    }
}

/// Where a contour vertex sits: strictly inside a lattice edge, or exactly on a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum LatticeKey {
    Node(usize),
    Edge(usize, usize),
}

/// Crossing of the level `iso` on the lattice edge between nodes `a` and `b`.
///
/// Nodes with value `>= iso` count as above. The point is interpolated from the node below
/// towards the node above; a crossing exactly at the upper node is keyed by that node so
/// every edge meeting there shares the vertex.
pub(crate) fn edge_crossing<T: Real>(
    (a, va): (usize, T),
    (b, vb): (usize, T),
    iso: T,
) -> (LatticeKey, T, usize, usize) {
    let (lo, vlo, hi, vhi) = if va < iso { (a, va, b, vb) } else { (b, vb, a, va) };
    let s = (iso - vlo) / (vhi - vlo);
    if s >= T::one() {
        (LatticeKey::Node(hi), T::one(), lo, hi)
    } else {
        (LatticeKey::Edge(lo.min(hi), lo.max(hi)), s, lo, hi)
    }
}

// Corner order: 0 = (i, j), 1 = (i+1, j), 2 = (i+1, j+1), 3 = (i, j+1).
// Edge order: 0 = bottom (0-1), 1 = right (1-2), 2 = top (3-2), 3 = left (0-3).
const EDGE_CORNERS: [(usize, usize); 4] = [(0, 1), (1, 2), (3, 2), (0, 3)];

fn segments_for(case: usize, centre_above: bool) -> &'static [(usize, usize)] {
    match case {
        1 | 14 => &[(3, 0)],
        2 | 13 => &[(0, 1)],
        3 | 12 => &[(3, 1)],
        4 | 11 => &[(1, 2)],
        6 | 9 => &[(0, 2)],
        7 | 8 => &[(3, 2)],
        // saddles: when the centre is above, the above corners are joined through it and
        // the segments cut off the two below corners
        5 if centre_above => &[(0, 1), (2, 3)],
        5 => &[(3, 0), (1, 2)],
        10 if centre_above => &[(3, 0), (1, 2)],
        10 => &[(0, 1), (2, 3)],
        _ => &[],
    }
}

/// Marching-squares isocontour of a planar grid with linear interpolation along edges.
///
/// Saddle cells are resolved by comparing the average of the four corners with `iso`.
/// Cells touching a hole contribute nothing.
pub fn extract_isocontour<T: Real>(grid: &ScalarGrid<T>, iso: T) -> Result<Contour<T>, MeshError> {
    if grid.is_volume() {
        return Err(MeshError::WrongDimension { expected: 2 });
    }
    let (nx, ny) = (grid.nx(), grid.ny());
    let xs: Vec<T> = (0..nx).map(|i| grid.x_at(i)).collect();
    let ys: Vec<T> = (0..ny).map(|j| grid.y_at(j)).collect();
    let pos = |idx: usize| [xs[idx % nx], ys[idx / nx]];

    let mut points: Vec<[T; 2]> = Vec::new();
    let mut ids: HashMap<LatticeKey, usize> = HashMap::new();
    let mut segments: Vec<(usize, usize)> = Vec::new();

    for j in 0..ny - 1 {
        for i in 0..nx - 1 {
            let corners = [
                grid.index(i, j, 0),
                grid.index(i + 1, j, 0),
                grid.index(i + 1, j + 1, 0),
                grid.index(i, j + 1, 0),
            ];
            let Some(vals) = corners
                .iter()
                .map(|&c| grid.values[c])
                .collect::<Option<Vec<T>>>()
            else {
                continue;
            };
            let case = (0..4).fold(0, |acc, k| acc | (usize::from(vals[k] >= iso) << k));
            let centre_above = (vals[0] + vals[1] + vals[2] + vals[3]) / T::lit(4.0) >= iso;

            let mut vertex = |edge: usize| {
                let (p, q) = EDGE_CORNERS[edge];
                let (key, s, lo, hi) =
                    edge_crossing((corners[p], vals[p]), (corners[q], vals[q]), iso);
                *ids.entry(key).or_insert_with(|| {
                    let (a, b) = (pos(lo), pos(hi));
                    points.push(match key {
                        LatticeKey::Node(n) => pos(n),
                        LatticeKey::Edge(..) => [a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])],
                    });
                    points.len() - 1
                })
            };
            for &(e0, e1) in segments_for(case, centre_above) {
                let (u, v) = (vertex(e0), vertex(e1));
                if u != v {
                    segments.push((u, v));
                }
            }
        }
    }

    Ok(Contour {
        polylines: stitch(&points, &segments),
    })
}

/// Joins undirected segments into maximal polylines, open chains first.
fn stitch<T: Real>(points: &[[T; 2]], segments: &[(usize, usize)]) -> Vec<ContourLine<T>> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for (s, &(u, v)) in segments.iter().enumerate() {
        incident[u].push(s);
        incident[v].push(s);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();

    let walk = |start: usize, used: &mut Vec<bool>| -> Option<ContourLine<T>> {
        let mut chain = vec![start];
        let mut at = start;
        while let Some(&s) = incident[at].iter().find(|&&s| !used[s]) {
            used[s] = true;
            let (u, v) = segments[s];
            at = if u == at { v } else { u };
            chain.push(at);
        }
        if chain.len() < 2 {
            return None;
        }
        let closed = chain.len() > 3 && chain.first() == chain.last();
        if closed {
            chain.pop();
        }
        Some(ContourLine {
            points: chain.into_iter().map(|i| points[i]).collect(),
            closed,
        })
    };

    // odd-degree vertices are chain ends
    for p in 0..points.len() {
        if incident[p].len() % 2 == 1 && incident[p].iter().any(|&s| !used[s]) {
            lines.extend(walk(p, &mut used));
        }
    }
    for s in 0..segments.len() {
        if !used[s] {
            lines.extend(walk(segments[s].0, &mut used));
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_str;
    use crate::geometry::{sample_heightfield, CellSpec, GridBounds, SpatialDomain};

    fn grid_of(src: &str, n: usize) -> ScalarGrid<f64> {
        let c = CellSpec::height_field(parse_str(src).unwrap(), SpatialDomain::centered_square(4.0)).unwrap();
        sample_heightfield(&c, 1.0, n, n).unwrap()
    }

    #[test]
    fn unit_circle_is_one_closed_loop() {
        let c = extract_isocontour(&grid_of("x^2+y^2", 257), 1.0).unwrap();
        assert_eq!(c.polylines.len(), 1);
        assert!(c.polylines[0].closed);
        let rel = (c.length() - std::f64::consts::TAU).abs() / std::f64::consts::TAU;
        assert!(rel < 0.01, "relative error {rel}");
        for p in &c.polylines[0].points {
            assert!(((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn below_minimum_is_empty() {
        assert!(extract_isocontour(&grid_of("x^2+y^2", 33), -1.0).unwrap().is_empty());
    }

    #[test]
    fn linear_field_gives_straight_open_line() {
        let c = extract_isocontour(&grid_of("x", 65), 0.0).unwrap();
        assert_eq!(c.polylines.len(), 1);
        let line = &c.polylines[0];
        assert!(!line.closed);
        assert_eq!(line.points.len(), 65);
        for p in &line.points {
            assert!(p[0].abs() < 1e-12);
        }
        // off-lattice level as well
        let c = extract_isocontour(&grid_of("x + 0.3*y", 17), 0.123).unwrap();
        for p in &c.polylines[0].points {
            assert!((p[0] + 0.3 * p[1] - 0.123).abs() < 1e-12);
        }
    }

    #[test]
    fn saddle_uses_cell_average() {
        let mk = |values: [f64; 4]| ScalarGrid {
            dims: vec![2, 2],
            bounds: GridBounds {
                x: [0.0, 1.0],
                y: [0.0, 1.0],
                z: None,
            },
            t: 1.0,
            values: values.map(Some).to_vec(),
        };
        // corners (0,0)=1, (1,0)=0, (0,1)=0, (1,1)=1 ; case 5 in corner order
        let high_centre = extract_isocontour(&mk([1.0, 0.0, 0.0, 1.0]), 0.4).unwrap();
        let low_centre = extract_isocontour(&mk([1.0, 0.0, 0.0, 1.0]), 0.6).unwrap();
        assert_eq!(high_centre.polylines.len(), 2);
        assert_eq!(low_centre.polylines.len(), 2);
        // above-centre: the two below corners (1,0) and (0,1) are cut off
        let near = |c: &Contour<f64>, corner: [f64; 2]| {
            c.polylines.iter().any(|l| {
                l.points
                    .iter()
                    .all(|p| (p[0] - corner[0]).abs() <= 0.6 && (p[1] - corner[1]).abs() <= 0.6)
            })
        };
        assert!(near(&high_centre, [1.0, 0.0]) && near(&high_centre, [0.0, 1.0]));
        assert!(near(&low_centre, [0.0, 0.0]) && near(&low_centre, [1.0, 1.0]));
    }

    #[test]
    fn resolution_convergence() {
        let err = |n| {
            let c = extract_isocontour(&grid_of("x^2+y^2", n), 1.0).unwrap();
            (c.length() - std::f64::consts::TAU).abs()
        };
        let (e65, e129, e257) = (err(65), err(129), err(257));
        assert!(e65 > e129 && e129 > e257, "{e65} {e129} {e257}");
    }
}
