//! Free-form jobs outside the recipe set: an arbitrary DSL cell to mesh, or a spiral.
//! Shared by the CLI (`mesh`, `spiral`) and the HTTP API.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dsl::parse_str;
use crate::export::{Envelope, GeometryJson};
use crate::figures::{polar_counts, RESOLUTION_RANGE};
use crate::geometry::{
    sample_heightfield, sample_volume, CellKind, CellSpec, GeometryError, PointLimit, SpatialDomain,
    DEFAULT_RESOLUTION_2D, DEFAULT_RESOLUTION_3D,
};
use crate::mesher::{extract_isosurface, triangulate_heightfield, triangulate_polar, Mesh};
use crate::spirals::{fibonacci_spiral, golden_spiral, log_spiral, ArcChain, Polyline, SpiralSpec};
use crate::Error;

/// Volume lattices are capped lower than planar ones: memory grows with the cube.
pub const VOLUME_RESOLUTION_MAX: usize = 257;

/// Default half-width of the sampled square or cube when no domain is given.
pub const DEFAULT_HALF_EXTENT: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobKind {
    #[serde(alias = "height_field")]
    Heightfield,
    #[serde(alias = "implicit_region")]
    Implicit,
}

impl From<JobKind> for CellKind {
    fn from(k: JobKind) -> Self {
        match k {
            JobKind::Heightfield => CellKind::HeightField,
            JobKind::Implicit => CellKind::ImplicitRegion,
        }
    }
}

fn default_t() -> f64 {
    1.0
}

/// A DSL cell to sample and mesh at one instant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshJob {
    pub expr: String,
    pub kind: JobKind,
    /// Defaults to `[-2, 2]²` (height field) or `[-2, 2]³` (implicit).
    #[serde(default)]
    pub domain: Option<SpatialDomain<f64>>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    /// Level of the region boundary; implicit jobs only, default 1.
    #[serde(default)]
    pub iso: Option<f64>,
    #[serde(default)]
    pub limits: Vec<PointLimit<f64>>,
    #[serde(default = "default_t")]
    pub t: f64,
    /// Lattice nodes per axis.
    #[serde(default)]
    pub resolution: Option<usize>,
}

impl MeshJob {
    pub fn new(expr: impl Into<String>, kind: JobKind) -> Self {
        MeshJob {
            expr: expr.into(),
            kind,
            domain: None,
            params: BTreeMap::new(),
            iso: None,
            limits: Vec::new(),
            t: 1.0,
            resolution: None,
        }
    }

    pub fn resolution(&self) -> usize {
        self.resolution.unwrap_or(match self.kind {
            JobKind::Heightfield => DEFAULT_RESOLUTION_2D,
            JobKind::Implicit => DEFAULT_RESOLUTION_3D,
        })
    }

    /// Parses and validates into a cell.
    pub fn cell(&self) -> Result<CellSpec<f64>, Error> {
        let expr = parse_str(&self.expr)?;
        let domain = self.domain.unwrap_or(match self.kind {
            JobKind::Heightfield => SpatialDomain::centered_square(2.0 * DEFAULT_HALF_EXTENT),
            JobKind::Implicit => SpatialDomain::cube(DEFAULT_HALF_EXTENT),
        });
        let mut cell = CellSpec::new(self.kind.into(), expr, domain, self.params.clone())?;
        if let Some(iso) = self.iso {
            if self.kind == JobKind::Heightfield {
                return Err(Error::Invalid("iso applies to implicit cells only".into()));
            }
            if !iso.is_finite() {
                return Err(Error::Invalid(format!("iso must be finite, got {iso}")));
            }
            cell = cell.with_iso(iso);
        }
        for &limit in &self.limits {
            cell = cell.with_limit(limit);
        }
        Ok(cell)
    }

    /// Checks time and resolution before any sampling work is done.
    pub fn validate(&self) -> Result<CellSpec<f64>, Error> {
        if !(self.t > 0.0) || !self.t.is_finite() {
            return Err(GeometryError::TimeNotPositive(self.t).into());
        }
        let res = self.resolution();
        let max = match self.kind {
            JobKind::Heightfield => RESOLUTION_RANGE[1],
            JobKind::Implicit => VOLUME_RESOLUTION_MAX,
        };
        if !(RESOLUTION_RANGE[0]..=max).contains(&res) {
            return Err(Error::Invalid(format!(
                "resolution {res} outside [{}, {max}]",
                RESOLUTION_RANGE[0]
            )));
        }
        self.cell()
    }

    /// Height fields over a disc use the rim-conforming polar lattice; other height fields
    /// the Cartesian one; implicit cells are meshed at their iso level.
    pub fn run(&self) -> Result<Mesh<f64>, Error> {
        let cell = self.validate()?;
        let res = self.resolution();
        let mesh = match (self.kind, cell.domain()) {
            (JobKind::Heightfield, SpatialDomain::Disc { .. }) => {
                let (rings, segments) = polar_counts(res);
                triangulate_polar(&cell, self.t, rings, segments)?
            }
            (JobKind::Heightfield, _) => triangulate_heightfield(&sample_heightfield(&cell, self.t, res, res)?)?,
            (JobKind::Implicit, _) => {
                extract_isosurface(&sample_volume(&cell, self.t, res, res, res)?, cell.iso())?
            }
        };
        Ok(mesh)
    }

    pub fn envelope(&self, mesh: &Mesh<f64>) -> Envelope {
        let mut env = Envelope::default()
            .with_meta("expr", self.expr.as_str())
            .with_meta("kind", serde_json::to_value(self.kind).unwrap_or_default())
            .with_meta("t", self.t)
            .with_meta("resolution", self.resolution())
            .with_meta("vertex_count", mesh.vertices.len())
            .with_meta("triangle_count", mesh.triangles.len());
        env.push("mesh", None, mesh.into());
        env
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpiralKind {
    /// `r = φ^(b·θ·t)`, sampled.
    Log,
    /// Quarter arcs in Fibonacci squares.
    Fibonacci,
    /// Quarter arcs with ratio φ.
    Golden,
}

fn default_spiral_kind() -> SpiralKind {
    SpiralKind::Log
}

fn default_b() -> f64 {
    std::f64::consts::FRAC_2_PI
}

fn default_theta() -> [f64; 2] {
    [0.0, 4.0 * std::f64::consts::PI]
}

fn default_samples() -> usize {
    721
}

fn default_n() -> usize {
    6
}

/// Largest sample or arc count accepted for a spiral job.
pub const SPIRAL_SAMPLES_MAX: usize = 1_000_001;
pub const SPIRAL_ARCS_MAX: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpiralJob {
    #[serde(default = "default_spiral_kind")]
    pub kind: SpiralKind,
    #[serde(default = "default_b")]
    pub b: f64,
    #[serde(default = "default_t")]
    pub t: f64,
    #[serde(default = "default_theta")]
    pub theta: [f64; 2],
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Arc count for the quarter-arc spirals.
    #[serde(default = "default_n")]
    pub n: usize,
}

impl Default for SpiralJob {
    fn default() -> Self {
        SpiralJob {
            kind: default_spiral_kind(),
            b: default_b(),
            t: default_t(),
            theta: default_theta(),
            samples: default_samples(),
            n: default_n(),
        }
    }
}

/// Spiral geometry of a job.
#[derive(Debug, Clone, PartialEq)]
pub enum SpiralOutput {
    Arcs(ArcChain<f64>),
    Points(Polyline<f64>),
}

impl SpiralJob {
    pub fn run(&self) -> Result<SpiralOutput, Error> {
        match self.kind {
            SpiralKind::Log => {
                if self.samples > SPIRAL_SAMPLES_MAX {
                    return Err(Error::Invalid(format!(
                        "samples {} exceeds {SPIRAL_SAMPLES_MAX}",
                        self.samples
                    )));
                }
                if !self.b.is_finite() {
                    return Err(Error::Invalid(format!("b must be finite, got {}", self.b)));
                }
                let spec = SpiralSpec::new(self.b, self.t, self.theta, self.samples);
                Ok(SpiralOutput::Points(log_spiral(&spec)?))
            }
            SpiralKind::Fibonacci | SpiralKind::Golden => {
                if self.n > SPIRAL_ARCS_MAX {
                    return Err(Error::Invalid(format!("n {} exceeds {SPIRAL_ARCS_MAX}", self.n)));
                }
                let chain = if self.kind == SpiralKind::Fibonacci {
                    fibonacci_spiral(self.n)?
                } else {
                    golden_spiral(self.n)?
                };
                Ok(SpiralOutput::Arcs(chain))
            }
        }
    }

    pub fn envelope(&self, out: &SpiralOutput) -> Envelope {
        let mut env = Envelope::default()
            .with_meta("kind", serde_json::to_value(self.kind).unwrap_or_default());
        let geometry: GeometryJson = match out {
            SpiralOutput::Arcs(c) => {
                env = env.with_meta("n", self.n);
                c.into()
            }
            SpiralOutput::Points(p) => {
                env = env
                    .with_meta("b", self.b)
                    .with_meta("t", self.t)
                    .with_meta("theta", self.theta.to_vec())
                    .with_meta("samples", self.samples);
                p.into()
            }
        };
        env.push("spiral", None, geometry);
        env
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ErrorCategory;

    #[test]
    fn heightfield_job_defaults() {
        let mut job = MeshJob::new("exp(-(x^2+y^2)^(1/t))", JobKind::Heightfield);
        job.resolution = Some(65);
        let mesh = job.run().unwrap();
        let top = mesh.vertices.iter().map(|v| v[2]).fold(f64::MIN, f64::max);
        assert_eq!(top, 1.0);
    }

    #[test]
    fn implicit_job_meshes_sphere() {
        let mut job = MeshJob::new("x^2 + y^2 + z^2", JobKind::Implicit);
        job.resolution = Some(17);
        let mesh = job.run().unwrap();
        assert!(crate::mesher::validate_mesh(&mesh).boundary_edges == 0);
    }

    #[test]
    fn disc_heightfield_uses_polar_lattice() {
        let job: MeshJob = serde_json::from_str(
            r#"{"expr": "H - b*(x^2+y^2)", "kind": "heightfield",
                "domain": {"type": "disc", "cx": 0, "cy": 0, "radius": 10},
                "params": {"H": 10, "b": 0.1}, "resolution": 33}"#,
        )
        .unwrap();
        let mesh = job.run().unwrap();
        assert_eq!(mesh.vertices[0][2], 10.0);
    }

    #[test]
    fn job_errors_are_classified() {
        let mut job = MeshJob::new("abs(x*y)^(1/t)", JobKind::Heightfield);
        job.t = -1.0;
        assert_eq!(job.run().unwrap_err().classify(), (ErrorCategory::Domain, "TIME_NOT_POSITIVE"));
        let job = MeshJob::new("x +", JobKind::Heightfield);
        assert_eq!(job.run().unwrap_err().code(), "PARSE_ERROR");
        let job = MeshJob::new("z", JobKind::Heightfield);
        assert_eq!(job.run().unwrap_err().code(), "HEIGHTFIELD_USES_Z");
        let job = MeshJob::new("H*x", JobKind::Heightfield);
        assert_eq!(job.run().unwrap_err().code(), "UNBOUND_PARAM");
        let mut job = MeshJob::new("x^2+y^2+z^2", JobKind::Implicit);
        job.iso = Some(100.0);
        job.resolution = Some(9);
        assert_eq!(job.run().unwrap_err().code(), "EMPTY_MESH");
        job.resolution = Some(1000);
        assert_eq!(job.run().unwrap_err().code(), "INVALID_REQUEST");
    }

    #[test]
    fn spiral_jobs() {
        let SpiralOutput::Points(p) = SpiralJob::default().run().unwrap() else { panic!() };
        assert_eq!(p.points.len(), 721);
        let job = SpiralJob {
            kind: SpiralKind::Fibonacci,
            ..SpiralJob::default()
        };
        let SpiralOutput::Arcs(c) = job.run().unwrap() else { panic!() };
        assert_eq!(c.arcs.len(), 6);
        let job = SpiralJob {
            t: 0.0,
            ..SpiralJob::default()
        };
        assert_eq!(job.run().unwrap_err().code(), "TIME_NOT_POSITIVE");
    }
}
