//! JSON geometry envelope shared by the CLI, the figure recipes and the HTTP API.
//!
//! ```json
//! { "format": "morphocell-geometry", "version": 1,
//!   "meta": { ... },
//!   "items": [ { "name": "...", "stroke": "blue", "geometry": { "type": "mesh", ... } } ] }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::svg::PlanarGeometry;
use super::ExportError;
use crate::geometry::ScalarGrid;
use crate::mesher::{Contour, Mesh};
use crate::scalar::Real;
use crate::spirals::{Arc, ArcChain, Polyline, Square};

pub const ENVELOPE_FORMAT: &str = "morphocell-geometry";
pub const ENVELOPE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourLineJson {
    pub points: Vec<[f64; 2]>,
    pub closed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GeometryJson {
    Mesh {
        vertices: Vec<[f64; 3]>,
        triangles: Vec<[usize; 3]>,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        normals: Option<Vec<[f64; 3]>>,
    },
    Polyline {
        points: Vec<[f64; 2]>,
    },
    ArcChain {
        arcs: Vec<Arc<f64>>,
    },
    Contour {
        polylines: Vec<ContourLineJson>,
    },
    Squares {
        squares: Vec<Square<f64>>,
    },
    Grid(ScalarGrid<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeItem {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stroke: Option<String>,
    pub geometry: GeometryJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub format: String,
    pub version: u32,
    #[serde(default)]
    pub meta: BTreeMap<String, serde_json::Value>,
    pub items: Vec<EnvelopeItem>,
}

impl Default for Envelope {
    fn default() -> Self {
        Envelope {
            format: ENVELOPE_FORMAT.to_string(),
            version: ENVELOPE_VERSION,
            meta: BTreeMap::new(),
            items: Vec::new(),
        }
    }
}

impl Envelope {
    pub fn with_meta(mut self, key: &str, value: impl Into<serde_json::Value>) -> Self {
        self.meta.insert(key.to_string(), value.into());
        self
    }

    pub fn push(&mut self, name: impl Into<String>, stroke: Option<&str>, geometry: GeometryJson) {
        self.items.push(EnvelopeItem {
            name: name.into(),
            stroke: stroke.map(str::to_string),
            geometry,
        });
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, ExportError> {
        if self.items.is_empty() {
            return Err(ExportError::EmptyGeometry);
        }
        let mut out = serde_json::to_vec_pretty(self)?;
        out.push(b'\n');
        Ok(out)
    }
}

fn p2<T: Real>(p: [T; 2]) -> [f64; 2] {
    p.map(Real::to_f64_lossy)
}

fn p3<T: Real>(p: [T; 3]) -> [f64; 3] {
    p.map(Real::to_f64_lossy)
}

impl<T: Real> From<&Mesh<T>> for GeometryJson {
    fn from(m: &Mesh<T>) -> Self {
        GeometryJson::Mesh {
            vertices: m.vertices.iter().copied().map(p3).collect(),
            triangles: m.triangles.clone(),
            normals: m.normals.as_ref().map(|ns| ns.iter().copied().map(p3).collect()),
        }
    }
}

impl<T: Real> From<&Polyline<T>> for GeometryJson {
    fn from(p: &Polyline<T>) -> Self {
        GeometryJson::Polyline {
            points: p.points.iter().copied().map(p2).collect(),
        }
    }
}

impl<T: Real> From<&ArcChain<T>> for GeometryJson {
    fn from(c: &ArcChain<T>) -> Self {
        GeometryJson::ArcChain {
            arcs: c
                .arcs
                .iter()
                .map(|a| Arc {
                    center: p2(a.center),
                    radius: a.radius.to_f64_lossy(),
                    start_angle: a.start_angle.to_f64_lossy(),
                    end_angle: a.end_angle.to_f64_lossy(),
                })
                .collect(),
        }
    }
}

impl<T: Real> From<&Contour<T>> for GeometryJson {
    fn from(c: &Contour<T>) -> Self {
        GeometryJson::Contour {
            polylines: c
                .polylines
                .iter()
                .map(|l| ContourLineJson {
                    points: l.points.iter().copied().map(p2).collect(),
                    closed: l.closed,
                })
                .collect(),
        }
    }
}

impl<T: Real> From<&[Square<T>]> for GeometryJson {
    fn from(s: &[Square<T>]) -> Self {
        GeometryJson::Squares {
            squares: s
                .iter()
                .map(|q| Square {
                    origin: p2(q.origin),
                    side: q.side.to_f64_lossy(),
                    index: q.index,
                    placement: q.placement,
                })
                .collect(),
        }
    }
}

impl<T: Real> From<&ScalarGrid<T>> for GeometryJson {
    fn from(g: &ScalarGrid<T>) -> Self {
        let b = g.bounds;
        GeometryJson::Grid(ScalarGrid {
            dims: g.dims.clone(),
            bounds: crate::geometry::GridBounds {
                x: p2(b.x),
                y: p2(b.y),
                z: b.z.map(p2),
            },
            t: g.t.to_f64_lossy(),
            values: g.values.iter().map(|v| v.map(Real::to_f64_lossy)).collect(),
        })
    }
}

impl<T: Real> From<&PlanarGeometry<T>> for GeometryJson {
    fn from(g: &PlanarGeometry<T>) -> Self {
        match g {
            PlanarGeometry::Arcs(c) => c.into(),
            PlanarGeometry::Polyline(p) => p.into(),
            PlanarGeometry::Contour(c) => c.into(),
            PlanarGeometry::Squares(s) => s.as_slice().into(),
        }
    }
}
