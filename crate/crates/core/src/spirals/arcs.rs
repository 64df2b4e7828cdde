use serde::{Deserialize, Serialize};

use crate::scalar::Real;

/// Circular arc traversed counterclockwise from `start_angle` to `end_angle` (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc<T> {
    pub center: [T; 2],
    pub radius: T,
    pub start_angle: T,
    pub end_angle: T,
}

impl<T: Real> Arc<T> {
    pub fn point_at(&self, angle: T) -> [T; 2] {
        [
            self.center[0] + self.radius * angle.cos(),
            self.center[1] + self.radius * angle.sin(),
        ]
    }

    pub fn start(&self) -> [T; 2] {
        self.point_at(self.start_angle)
    }

    pub fn end(&self) -> [T; 2] {
        self.point_at(self.end_angle)
    }

    /// Unit tangent in the direction of travel.
    pub fn tangent_at(&self, angle: T) -> [T; 2] {
        [-angle.sin(), angle.cos()]
    }

    pub fn sweep(&self) -> T {
        self.end_angle - self.start_angle
    }

    pub fn length(&self) -> T {
        self.radius * self.sweep()
    }
}

/// Chain of arcs where each arc starts where the previous one ends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArcChain<T> {
    pub arcs: Vec<Arc<T>>,
}

impl<T: Real> ArcChain<T> {
    /// Quarter turns with the given radii, each starting where the previous ends and
    /// sharing its tangent. The first arc has centre `first_center` and starts at
    /// `start_angle`.
    pub fn quarter_turns(radii: &[T], first_center: [T; 2], start_angle: T) -> Self {
        let quarter = T::FRAC_PI_2();
        let mut arcs: Vec<Arc<T>> = Vec::with_capacity(radii.len());
        let mut center = first_center;
        let mut angle = start_angle;
        for &r in radii {
            if let Some(prev) = arcs.last() {
                // Same point and direction at the junction: the new centre lies on the
                // previous arc's end radius, shifted by the radius difference.
                let (c, s) = (angle.cos(), angle.sin());
                center = [
                    prev.center[0] + (prev.radius - r) * c,
                    prev.center[1] + (prev.radius - r) * s,
                ];
            }
            arcs.push(Arc {
                center,
                radius: r,
                start_angle: angle,
                end_angle: angle + quarter,
            });
            angle = angle + quarter;
        }
        ArcChain { arcs }
    }

    pub fn radii(&self) -> Vec<T> {
        self.arcs.iter().map(|a| a.radius).collect()
    }

    pub fn total_turning(&self) -> T {
        self.arcs.iter().map(Arc::sweep).sum()
    }

    /// Largest distance between the end of one arc and the start of the next.
    pub fn max_junction_gap(&self) -> T {
        self.arcs
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].end(), w[1].start());
                (a[0] - b[0]).hypot(a[1] - b[1])
            })
            .fold(T::zero(), T::max)
    }

    /// Largest angle between the outgoing and incoming tangent at a junction.
    pub fn max_tangent_mismatch(&self) -> T {
        self.arcs
            .windows(2)
            .map(|w| {
                let a = w[0].tangent_at(w[0].end_angle);
                let b = w[1].tangent_at(w[1].start_angle);
                (a[0] * b[1] - a[1] * b[0]).atan2(a[0] * b[0] + a[1] * b[1]).abs()
            })
            .fold(T::zero(), T::max)
    }
}

/// Sampled planar curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline<T> {
    pub points: Vec<[T; 2]>,
}
