//! Spiral constructions: the Fibonacci quarter-arc spiral on its squares, the golden
//! (Divina) spiral on a golden rectangle, and the logarithmic spiral `r = φ^(bθt)` with
//! its growth equation and implicit planar form.
//!
//! All arc chains turn counterclockwise and start from the same seed arc: centre `(1, 1)`,
//! radius 1, from angle π to 3π/2. Squares are placed around the growing rectangle
//! in the cycle right, up, left, down.

mod arcs;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use arcs::{Arc, ArcChain, Polyline};

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpiralError {
    #[error("time parameter must be positive, got {0}")]
    TimeNotPositive(f64),
    #[error("angle range must be increasing, got [{0}, {1}]")]
    ThetaRange(f64, f64),
    #[error("need at least {min} samples, got {got}")]
    Samples { min: usize, got: usize },
    #[error("need at least {min} squares or levels, got {got}")]
    Count { min: usize, got: usize },
    #[error("the implicit relation is undefined at the origin")]
    Origin,
}

/// Side of the growing rectangle against which a square is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// The seed square.
    Seed,
    Right,
    Up,
    Left,
    Down,
}

const CYCLE: [Placement; 4] = [Placement::Right, Placement::Up, Placement::Left, Placement::Down];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Square<T> {
    /// Lower-left corner.
    pub origin: [T; 2],
    pub side: T,
    /// 0-based position in the construction.
    pub index: usize,
    pub placement: Placement,
}

impl<T: Real> Square<T> {
    /// `[xmin, ymin, xmax, ymax]`.
    pub fn extent(&self) -> [T; 4] {
        [
            self.origin[0],
            self.origin[1],
            self.origin[0] + self.side,
            self.origin[1] + self.side,
        ]
    }
}

/// Union bounding box `[xmin, ymin, xmax, ymax]` of a set of squares.
pub fn bounding_box<T: Real>(squares: &[Square<T>]) -> Option<[T; 4]> {
    let first = squares.first()?.extent();
    Some(squares.iter().skip(1).fold(first, |b, s| {
        let e = s.extent();
        [b[0].min(e[0]), b[1].min(e[1]), b[2].max(e[2]), b[3].max(e[3])]
    }))
}

/// The first `n` Fibonacci numbers 1, 1, 2, 3, 5, ...
pub fn fibonacci_numbers(n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    let (mut a, mut b) = (1u64, 1u64);
    for _ in 0..n {
        out.push(a);
        (a, b) = (b, a.saturating_add(b));
    }
    out
}

/// Squares of sides 1, 1, 2, 3, 5, ... each placed against the next side of the rectangle
/// formed so far. The union of `n` squares is an `F(n) × F(n+1)` rectangle.
pub fn fibonacci_squares<T: Real>(n: usize) -> Result<Vec<Square<T>>, SpiralError> {
    if n < 1 {
        return Err(SpiralError::Count { min: 1, got: n });
    }
    let sides: Vec<T> = fibonacci_numbers(n)
        .into_iter()
        .map(|f| T::from_u64(f).expect("fibonacci number representable"))
        .collect();
    let mut squares = vec![Square {
        origin: [T::zero(), T::zero()],
        side: sides[0],
        index: 0,
        placement: Placement::Seed,
    }];
    let mut bbox = squares[0].extent();
    for (k, &s) in sides.iter().enumerate().skip(1) {
        let placement = CYCLE[(k - 1) % 4];
        let [x0, y0, x1, y1] = bbox;
        let origin = match placement {
            Placement::Right => [x1, y0],
            Placement::Up => [x0, y1],
            Placement::Left => [x0 - s, y0],
            Placement::Down | Placement::Seed => [x0, y0 - s],
        };
        let sq = Square {
            origin,
            side: s,
            index: k,
            placement,
        };
        let e = sq.extent();
        bbox = [bbox[0].min(e[0]), bbox[1].min(e[1]), bbox[2].max(e[2]), bbox[3].max(e[3])];
        squares.push(sq);
    }
    Ok(squares)
}

/// Quarter arc inscribed in `sq`, with radius equal to its side. Arc `k` sweeps
/// `[π + kπ/2, π + (k+1)π/2]` around the corner of the square that touches the rest of
/// the construction.
fn inscribed_arc<T: Real>(sq: &Square<T>) -> Arc<T> {
    let [x0, y0, x1, y1] = sq.extent();
    let center = match sq.placement {
        Placement::Seed | Placement::Down => [x1, y1],
        Placement::Right => [x0, y1],
        Placement::Up => [x0, y0],
        Placement::Left => [x1, y0],
    };
    let quarter = T::FRAC_PI_2();
    let start = T::PI() + T::from_index(sq.index) * quarter;
    Arc {
        center,
        radius: sq.side,
        start_angle: start,
        end_angle: start + quarter,
    }
}

/// One quarter arc per Fibonacci square.
pub fn fibonacci_spiral<T: Real>(n: usize) -> Result<ArcChain<T>, SpiralError> {
    if n < 2 {
        return Err(SpiralError::Count { min: 2, got: n });
    }
    Ok(ArcChain {
        arcs: fibonacci_squares(n)?.iter().map(inscribed_arc).collect(),
    })
}

/// Quarter arcs with radii 1, φ, φ², ... each inscribed in a gnomon square of a golden
/// rectangle. Radii are built by repeated multiplication by φ.
pub fn golden_spiral<T: Real>(levels: usize) -> Result<ArcChain<T>, SpiralError> {
    if levels < 2 {
        return Err(SpiralError::Count { min: 2, got: levels });
    }
    let phi = T::golden();
    let mut radii = Vec::with_capacity(levels);
    let mut r = T::one();
    for _ in 0..levels {
        radii.push(r);
        r = r * phi;
    }
    Ok(ArcChain::quarter_turns(&radii, [T::one(), T::one()], T::PI()))
}

/// The square a quarter arc is inscribed in: spanned by its centre and both end points.
pub fn gnomon_squares<T: Real>(chain: &ArcChain<T>) -> Vec<Square<T>> {
    chain
        .arcs
        .iter()
        .enumerate()
        .map(|(index, arc)| {
            let (a, b) = (arc.start(), arc.end());
            // snap the trigonometric round-off so the square is exactly radius-sized
            let xmin = arc.center[0].min(a[0]).min(b[0]);
            let ymin = arc.center[1].min(a[1]).min(b[1]);
            let origin = [
                if (xmin - arc.center[0]).abs() < arc.radius / T::lit(2.0) {
                    arc.center[0]
                } else {
                    arc.center[0] - arc.radius
                },
                if (ymin - arc.center[1]).abs() < arc.radius / T::lit(2.0) {
                    arc.center[1]
                } else {
                    arc.center[1] - arc.radius
                },
            ];
            Square {
                origin,
                side: arc.radius,
                index,
                placement: if index == 0 {
                    Placement::Seed
                } else {
                    CYCLE[(index - 1) % 4]
                },
            }
        })
        .collect()
}

/// Logarithmic spiral `r(θ; t) = φ^(b·θ·t)` sampled uniformly in θ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpiralSpec<T> {
    pub b: T,
    pub t: T,
    pub theta_range: [T; 2],
    pub samples: usize,
}

impl<T: Real> SpiralSpec<T> {
    /// Growth constant for which the radius grows by exactly φ per quarter turn.
    pub fn golden_growth() -> T {
        T::lit(2.0) / T::PI()
    }

    pub fn new(b: T, t: T, theta_range: [T; 2], samples: usize) -> Self {
        SpiralSpec {
            b,
            t,
            theta_range,
            samples,
        }
    }

    pub fn validate(&self) -> Result<(), SpiralError> {
        if !(self.t > T::zero()) {
            return Err(SpiralError::TimeNotPositive(self.t.to_f64_lossy()));
        }
        let [a, b] = self.theta_range;
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(SpiralError::ThetaRange(a.to_f64_lossy(), b.to_f64_lossy()));
        }
        if self.samples < 2 {
            return Err(SpiralError::Samples {
                min: 2,
                got: self.samples,
            });
        }
        Ok(())
    }

    pub fn step(&self) -> T {
        (self.theta_range[1] - self.theta_range[0]) / T::from_index(self.samples - 1)
    }

    pub fn theta(&self, i: usize) -> T {
        if i == self.samples - 1 {
            self.theta_range[1]
        } else {
            self.theta_range[0] + T::from_index(i) * self.step()
        }
    }

    pub fn radius(&self, theta: T) -> T {
        T::golden().powf(self.b * theta * self.t)
    }

    /// `b·t·ln φ`, the relative growth rate `(dr/dθ)/r`.
    pub fn growth_rate(&self) -> T {
        self.b * self.t * T::golden().ln()
    }
}

pub fn log_spiral<T: Real>(spec: &SpiralSpec<T>) -> Result<Polyline<T>, SpiralError> {
    spec.validate()?;
    Ok(Polyline {
        points: (0..spec.samples)
            .map(|i| {
                let theta = spec.theta(i);
                let r = spec.radius(theta);
                [r * theta.cos(), r * theta.sin()]
            })
            .collect(),
    })
}

/// Largest deviation, over interior samples, between the central difference of `r(θ)`
/// and the growth law `dr/dθ = b·t·ln(φ)·r` (at `t = 1`, `dr/dθ = b·ln(φ)·r`).
pub fn ode_residual<T: Real>(spec: &SpiralSpec<T>) -> Result<T, SpiralError> {
    spec.validate()?;
    if spec.samples < 3 {
        return Err(SpiralError::Samples {
            min: 3,
            got: spec.samples,
        });
    }
    let h = spec.step();
    let k = spec.growth_rate();
    let r: Vec<T> = (0..spec.samples).map(|i| spec.radius(spec.theta(i))).collect();
    Ok((1..spec.samples - 1)
        .map(|i| ((r[i + 1] - r[i - 1]) / (h + h) - k * r[i]).abs())
        .fold(T::zero(), T::max))
}

/// `|φ^(b·atan2(y, x)) − √(x² + y²)|`, with the angle on its principal branch (−π, π].
pub fn implicit_spiral_check<T: Real>(point: [T; 2], b: T) -> Result<T, SpiralError> {
    let [x, y] = point;
    if x == T::zero() && y == T::zero() {
        return Err(SpiralError::Origin);
    }
    let angle = y.atan2(x);
    Ok((T::golden().powf(b * angle) - x.hypot(y)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn fibonacci_square_sides_and_rectangle() {
        let sq = fibonacci_squares::<f64>(6).unwrap();
        let sides: Vec<f64> = sq.iter().map(|s| s.side).collect();
        assert_eq!(sides, [1.0, 1.0, 2.0, 3.0, 5.0, 8.0]);
        let [x0, y0, x1, y1] = bounding_box(&sq).unwrap();
        let (w, h) = (x1 - x0, y1 - y0);
        assert_eq!((w.min(h), w.max(h)), (8.0, 13.0));
        let area: f64 = sq.iter().map(|s| s.side * s.side).sum();
        assert_eq!(area, w * h, "squares tile the rectangle");

        let one = fibonacci_squares::<f64>(1).unwrap();
        assert_eq!(one.len(), 1);
        assert_eq!(one[0].side, 1.0);
        assert!(fibonacci_squares::<f64>(0).is_err());
    }

    #[test]
    fn consecutive_squares_share_an_edge() {
        let sq = fibonacci_squares::<f64>(10).unwrap();
        for w in sq.windows(2) {
            let (a, b) = (w[0].extent(), w[1].extent());
            let overlap_x = a[2].min(b[2]) - a[0].max(b[0]);
            let overlap_y = a[3].min(b[3]) - a[1].max(b[1]);
            // touching along one axis, overlapping by the smaller side along the other
            let shared = if overlap_x == 0.0 { overlap_y } else { overlap_x };
            assert!(overlap_x == 0.0 || overlap_y == 0.0);
            assert_eq!(shared, w[0].side.min(w[1].side), "{:?}", w);
        }
    }

    #[test]
    fn fibonacci_spiral_properties() {
        let chain = fibonacci_spiral::<f64>(6).unwrap();
        assert_eq!(chain.radii(), [1.0, 1.0, 2.0, 3.0, 5.0, 8.0]);
        assert!(chain.max_junction_gap() < 1e-9);
        assert!(chain.max_tangent_mismatch() < 1e-9);
        assert!((chain.total_turning() - 6.0 * FRAC_PI_2).abs() < 1e-12);
        // same geometry as chaining quarter turns from the seed arc
        let chained = ArcChain::quarter_turns(&chain.radii(), [1.0, 1.0], PI);
        for (a, b) in chain.arcs.iter().zip(&chained.arcs) {
            assert!((a.center[0] - b.center[0]).abs() < 1e-12);
            assert!((a.center[1] - b.center[1]).abs() < 1e-12);
        }
        assert!(fibonacci_spiral::<f64>(1).is_err());
    }

    #[test]
    fn golden_spiral_ratio_and_rectangle() {
        let chain = golden_spiral::<f64>(8).unwrap();
        for w in chain.arcs.windows(2) {
            assert!((w[1].radius / w[0].radius - PHI).abs() < 1e-9);
        }
        assert!(chain.max_junction_gap() < 1e-9);
        assert!(chain.max_tangent_mismatch() < 1e-9);
        let two = golden_spiral::<f64>(2).unwrap();
        assert_eq!(two.arcs.len(), 2);
        assert!(two.max_junction_gap() < 1e-12);

        let squares = gnomon_squares(&chain);
        let [x0, y0, x1, y1] = bounding_box(&squares).unwrap();
        let (w, h) = (x1 - x0, y1 - y0);
        assert!((w.max(h) / w.min(h) - PHI).abs() < 1e-9);
        // the Fibonacci squares come out of the same routine when fed Fibonacci radii
        let fib = fibonacci_spiral::<f64>(7).unwrap();
        let derived = gnomon_squares(&fib);
        for (a, b) in derived.iter().zip(fibonacci_squares::<f64>(7).unwrap()) {
            assert!((a.origin[0] - b.origin[0]).abs() < 1e-12 && (a.origin[1] - b.origin[1]).abs() < 1e-12);
        }
    }

    #[test]
    fn fibonacci_ratios_bracket_phi() {
        let f = fibonacci_numbers(20);
        let ratio = |k: usize| f[k] as f64 / f[k - 1] as f64;
        // F(6)/F(5) = 8/5 and F(7)/F(6) = 13/8 lie on either side of φ
        assert_eq!(ratio(5), 1.6);
        assert_eq!(ratio(6), 1.625);
        for k in 2..19 {
            assert!((ratio(k + 1) - PHI).abs() < (ratio(k) - PHI).abs());
        }
    }

    #[test]
    fn log_spiral_quarter_turn_growth_is_phi() {
        let spec = SpiralSpec::new(SpiralSpec::golden_growth(), 1.0, [-PI, 3.0 * PI], 17);
        for i in 0..12 {
            let theta = -2.0 + 0.37 * i as f64;
            assert!((spec.radius(theta + FRAC_PI_2) / spec.radius(theta) - PHI).abs() < 1e-9);
        }
        let line = log_spiral(&SpiralSpec::new(0.7, 2.5, [0.0, 1.0], 5)).unwrap();
        assert_eq!(line.points[0], [1.0, 0.0]);
    }

    #[test]
    fn time_transform_is_square_root_at_half() {
        let b = SpiralSpec::golden_growth();
        let one = SpiralSpec::new(b, 1.0, [0.0, 4.0 * PI], 200);
        let half = SpiralSpec { t: 0.5, ..one };
        for i in 0..200 {
            let th = one.theta(i);
            assert!((half.radius(th) - one.radius(th).sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn ode_residual_second_order() {
        let b = SpiralSpec::golden_growth();
        let coarse = SpiralSpec::new(b, 1.0, [0.0, 4.0 * PI], 12_567);
        let fine = SpiralSpec::new(b, 1.0, [0.0, 4.0 * PI], 125_665);
        let (rc, rf) = (ode_residual(&coarse).unwrap(), ode_residual(&fine).unwrap());
        assert!(rf < 1e-6);
        let ratio = rc / rf;
        assert!((80.0..125.0).contains(&ratio), "ratio {ratio}");

        let flat = SpiralSpec::new(0.0, 1.0, [0.0, 10.0], 50);
        assert_eq!(ode_residual(&flat).unwrap(), 0.0);
        assert!(ode_residual(&SpiralSpec::new(1.0, 1.0, [0.0, 1.0], 2)).is_err());
    }

    #[test]
    fn equiangular() {
        let spec = SpiralSpec::new(SpiralSpec::golden_growth(), 0.8, [0.0, 6.0], 2);
        let h = 1e-5;
        for i in 0..20 {
            let th = 0.3 * i as f64;
            let dr = (spec.radius(th + h) - spec.radius(th - h)) / (2.0 * h);
            let cot = dr / spec.radius(th);
            assert!((cot - spec.growth_rate()).abs() < 1e-6);
        }
    }

    #[test]
    fn implicit_relation_on_principal_branch() {
        let b = SpiralSpec::golden_growth();
        let spec = SpiralSpec::new(b, 1.0, [0.0, 1.0], 2);
        let r = spec.radius(FRAC_PI_4);
        let p = [r * FRAC_PI_4.cos(), r * FRAC_PI_4.sin()];
        assert!(implicit_spiral_check(p, b).unwrap() < 1e-9);
        assert_eq!(implicit_spiral_check([1.0, 0.0], 3.7).unwrap(), 0.0);
        assert_eq!(implicit_spiral_check([0.0, 0.0], b), Err(SpiralError::Origin));

        let th = 3.0 * PI;
        let r = spec.radius(th);
        let dev = implicit_spiral_check([r * th.cos(), r * th.sin()], b).unwrap();
        let expected = (PHI.powf(b * PI) - PHI.powf(b * th)).abs();
        assert!(dev > 1.0);
        assert!((dev - expected).abs() < 1e-9 * expected);
    }

    #[test]
    fn validation_errors() {
        let ok = SpiralSpec::new(1.0, 1.0, [0.0, 1.0], 2);
        assert!(log_spiral(&ok).is_ok());
        assert_eq!(
            log_spiral(&SpiralSpec { t: 0.0, ..ok }),
            Err(SpiralError::TimeNotPositive(0.0))
        );
        assert!(matches!(
            log_spiral(&SpiralSpec {
                theta_range: [1.0, 1.0],
                ..ok
            }),
            Err(SpiralError::ThetaRange(..))
        ));
        assert!(matches!(
            log_spiral(&SpiralSpec { samples: 1, ..ok }),
            Err(SpiralError::Samples { .. })
        ));
    }

    #[test]
    fn single_precision_spiral() {
        let chain = fibonacci_spiral::<f32>(6).unwrap();
        assert_eq!(chain.radii(), [1.0f32, 1.0, 2.0, 3.0, 5.0, 8.0]);
        assert!(chain.max_junction_gap() < 1e-5);
    }
}
