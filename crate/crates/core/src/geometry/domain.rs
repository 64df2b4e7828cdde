use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::scalar::Real;

/// Spatial domain on which a cell's field is defined.
///
/// Planar variants constrain only `(x, y)`; in three dimensions they extend as prisms
/// (see [`SpatialDomain::volume_bounds`] for the sampled `z` extent).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SpatialDomain<T> {
    Box {
        xmin: T,
        xmax: T,
        ymin: T,
        ymax: T,
        zmin: T,
        zmax: T,
    },
    Disc {
        cx: T,
        cy: T,
        radius: T,
    },
    /// `[-side/2, side/2]²` when centered, else `[0, side]²`.
    Square {
        side: T,
        centered: bool,
    },
}

/// Axis-aligned extent of a sample lattice. `z` is absent for planar grids.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridBounds<T> {
    pub x: [T; 2],
    pub y: [T; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<[T; 2]>,
}

impl<T: Real> SpatialDomain<T> {
    /// The `[-half, half]²` square used by most of the surface families.
    pub fn centered_square(side: T) -> Self {
        SpatialDomain::Square {
            side,
            centered: true,
        }
    }

    pub fn cube(half: T) -> Self {
        SpatialDomain::Box {
            xmin: -half,
            xmax: half,
            ymin: -half,
            ymax: half,
            zmin: -half,
            zmax: half,
        }
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let ok = match *self {
            SpatialDomain::Box {
                xmin,
                xmax,
                ymin,
                ymax,
                zmin,
                zmax,
            } => xmin < xmax && ymin < ymax && zmin < zmax,
            SpatialDomain::Disc { cx, cy, radius } => {
                cx.is_finite() && cy.is_finite() && radius > T::zero() && radius.is_finite()
            }
            SpatialDomain::Square { side, .. } => side > T::zero() && side.is_finite(),
        };
        let finite = self.planar_bounds().x.iter().chain(&self.planar_bounds().y).all(|v| v.is_finite());
        if ok && finite {
            Ok(())
        } else {
            Err(GeometryError::InvalidDomain(format!("{self:?}")))
        }
    }

    pub fn planar_bounds(&self) -> GridBounds<T> {
        match *self {
            SpatialDomain::Box {
                xmin,
                xmax,
                ymin,
                ymax,
                ..
            } => GridBounds {
                x: [xmin, xmax],
                y: [ymin, ymax],
                z: None,
            },
            SpatialDomain::Disc { cx, cy, radius } => GridBounds {
                x: [cx - radius, cx + radius],
                y: [cy - radius, cy + radius],
                z: None,
            },
            SpatialDomain::Square { side, centered } => {
                let (lo, hi) = square_range(side, centered);
                GridBounds {
                    x: [lo, hi],
                    y: [lo, hi],
                    z: None,
                }
            }
        }
    }

    /// Sampled 3D extent: a box as given, a square's cube, a disc's cylinder `|z| <= radius`.
    pub fn volume_bounds(&self) -> GridBounds<T> {
        let mut b = self.planar_bounds();
        b.z = Some(match *self {
            SpatialDomain::Box { zmin, zmax, .. } => [zmin, zmax],
            SpatialDomain::Disc { radius, .. } => [-radius, radius],
            SpatialDomain::Square { side, centered } => {
                let (lo, hi) = square_range(side, centered);
                [lo, hi]
            }
        });
        b
    }

    pub fn contains_planar(&self, x: T, y: T) -> bool {
        match *self {
            SpatialDomain::Disc { cx, cy, radius } => {
                let dx = x - cx;
                let dy = y - cy;
                // A few ulps of slack so lattice nodes computed on the rim are not dropped.
                dx * dx + dy * dy <= radius * radius * (T::one() + T::lit(4.0) * T::epsilon())
            }
            _ => {
                let b = self.planar_bounds();
                b.x[0] <= x && x <= b.x[1] && b.y[0] <= y && y <= b.y[1]
            }
        }
    }

    pub fn contains(&self, x: T, y: T, z: T) -> bool {
        match *self {
            SpatialDomain::Box { zmin, zmax, .. } => {
                self.contains_planar(x, y) && zmin <= z && z <= zmax
            }
            _ => self.contains_planar(x, y),
        }
    }
}

fn square_range<T: Real>(side: T, centered: bool) -> (T, T) {
    if centered {
        let half = side / T::lit(2.0);
        (-half, half)
    } else {
        (T::zero(), side)
    }
}
