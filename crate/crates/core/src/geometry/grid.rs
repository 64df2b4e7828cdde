use serde::{Deserialize, Serialize};

use super::GridBounds;
use crate::scalar::Real;

/// Regular lattice of field samples at a fixed time.
///
/// Values are stored x-fastest: `index = i + nx * (j + ny * k)`. `None` is a hole: a node
/// outside the cell's domain or one where the field is undefined.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalarGrid<T> {
    pub dims: Vec<usize>,
    pub bounds: GridBounds<T>,
    pub t: T,
    pub values: Vec<Option<T>>,
}

impl<T: Real> ScalarGrid<T> {
    pub fn nx(&self) -> usize {
        self.dims[0]
    }

    pub fn ny(&self) -> usize {
        self.dims[1]
    }

    /// 1 for planar grids.
    pub fn nz(&self) -> usize {
        self.dims.get(2).copied().unwrap_or(1)
    }

    pub fn is_volume(&self) -> bool {
        self.dims.len() == 3
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        i + self.nx() * (j + self.ny() * k)
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> Option<T> {
        self.values[self.index(i, j, k)]
    }

    pub fn x_at(&self, i: usize) -> T {
        lattice_coord(self.bounds.x, self.nx(), i)
    }

    pub fn y_at(&self, j: usize) -> T {
        lattice_coord(self.bounds.y, self.ny(), j)
    }

    pub fn z_at(&self, k: usize) -> T {
        match self.bounds.z {
            Some(z) => lattice_coord(z, self.nz(), k),
            None => T::zero(),
        }
    }

    pub fn node_position(&self, idx: usize) -> [T; 3] {
        let i = idx % self.nx();
        let j = (idx / self.nx()) % self.ny();
        let k = idx / (self.nx() * self.ny());
        [self.x_at(i), self.y_at(j), self.z_at(k)]
    }

    pub fn hole_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_none()).count()
    }

    /// Smallest and largest sampled value, ignoring holes.
    pub fn value_range(&self) -> Option<(T, T)> {
        self.values.iter().flatten().fold(None, |acc, &v| match acc {
            None => Some((v, v)),
            Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
        })
    }

    pub fn to_json(&self) -> String
    where
        T: Serialize,
    {
        serde_json::to_string(self).expect("grid serializes")
    }
}

/// `min + i·(max−min)/(n−1)`.
pub(crate) fn lattice_coord<T: Real>(range: [T; 2], n: usize, i: usize) -> T {
    let step = (range[1] - range[0]) / T::from_index(n - 1);
    range[0] + T::from_index(i) * step
}
