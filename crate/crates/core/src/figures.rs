//! The closed set of built-in figure recipes: `fig4`, `fig6`, `fig7`, `fig8`, `fig12a`-`fig12c` and `eq1`.
//!
//! Each recipe declares its tunable parameters with defaults and bounds. Rendering is a
//! pure function of the recipe, so repeated runs yield identical bytes.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::parse_str;
use crate::export::{obj_bytes, svg_bytes, Envelope, ExportError, PlanarGeometry, SvgLayer, SvgStyle};
use crate::geometry::{sample_heightfield, CellSpec, GeometryError, PointLimit, SpatialDomain};
use crate::mesher::{triangulate_heightfield, triangulate_polar, Mesh, MeshError};
use crate::spirals::{
    fibonacci_spiral, fibonacci_squares, golden_spiral, log_spiral, SpiralError, SpiralSpec,
};

pub const FIG4_EXPR: &str = "abs(x*y)^(1/t)";
pub const FIG12_EXP_EXPR: &str = "exp(-(x^2 + y^2)^(1/t))";
pub const FIG12_STEADY_EXPR: &str = "-(x^2 + y^2)*sin(1/sqrt(x^2 + y^2))";
pub const EQ1_EXPR: &str = "H - b*(x^2 + y^2)";

/// Lattice counts accepted per axis.
pub const RESOLUTION_RANGE: [usize; 2] = [2, 4097];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig4,
    Fig6,
    Fig7,
    Fig8,
    Fig12a,
    Fig12b,
    Fig12c,
    Eq1,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Fig4,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig12a,
        FigureId::Fig12b,
        FigureId::Fig12c,
        FigureId::Eq1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig4 => "fig4",
            FigureId::Fig6 => "fig6",
            FigureId::Fig7 => "fig7",
            FigureId::Fig8 => "fig8",
            FigureId::Fig12a => "fig12a",
            FigureId::Fig12b => "fig12b",
            FigureId::Fig12c => "fig12c",
            FigureId::Eq1 => "eq1",
        }
    }

    pub fn title(self) -> &'static str {
        match self {
            FigureId::Fig4 => "z = |xy|^(1/t) at t = 1, 2, 4",
            FigureId::Fig6 => "Fibonacci squares and quarter-arc spiral",
            FigureId::Fig7 => "Fibonacci spiral (blue) and golden spiral (red)",
            FigureId::Fig8 => "Logarithmic spiral at t = 1 (red) and a second instant (blue)",
            FigureId::Fig12a => "z = exp(-(x^2+y^2)^(1/t)) at t = 1",
            FigureId::Fig12b => "z = exp(-(x^2+y^2)^(1/t)) at t = 2",
            FigureId::Fig12c => "steady form z = -(x^2+y^2) sin(1/sqrt(x^2+y^2))",
            FigureId::Eq1 => "paraboloid z = H - b(x^2+y^2) over the disc x^2+y^2 <= H/b",
        }
    }

    /// Surfaces go to OBJ, planar constructions to SVG.
    pub fn is_planar(self) -> bool {
        matches!(self, FigureId::Fig6 | FigureId::Fig7 | FigureId::Fig8)
    }

    pub fn default_format(self) -> OutputFormat {
        if self.is_planar() {
            OutputFormat::Svg
        } else {
            OutputFormat::Obj
        }
    }

    pub fn supports(self, format: OutputFormat) -> bool {
        match format {
            OutputFormat::Json => true,
            OutputFormat::Svg => self.is_planar(),
            OutputFormat::Obj => !self.is_planar(),
        }
    }

    pub fn params(self) -> Vec<ParamSchema> {
        let t = |default| ParamSchema::real("t", default, 0.0, 16.0, true, "time instant");
        let res = |default| {
            ParamSchema::integer(
                "resolution",
                default,
                RESOLUTION_RANGE[0] as f64,
                RESOLUTION_RANGE[1] as f64,
                "lattice nodes per axis",
            )
        };
        let n = ParamSchema::integer("n", 6.0, 2.0, 40.0, "number of quarter arcs");
        match self {
            FigureId::Fig4 => vec![t(1.0), res(129.0)],
            FigureId::Fig12a => vec![t(1.0), res(129.0)],
            FigureId::Fig12b => vec![t(2.0), res(129.0)],
            FigureId::Fig12c => vec![res(129.0)],
            FigureId::Eq1 => vec![
                ParamSchema::real("H", 10.0, 0.0, 1e6, true, "apex height"),
                ParamSchema::real("b", 0.1, 0.0, 1e6, true, "curvature"),
                res(129.0),
            ],
            FigureId::Fig6 | FigureId::Fig7 => vec![n],
            FigureId::Fig8 => vec![
                t(0.5),
                ParamSchema::real(
                    "b",
                    std::f64::consts::FRAC_2_PI,
                    -10.0,
                    10.0,
                    false,
                    "growth constant",
                ),
                ParamSchema::integer("resolution", 721.0, 2.0, 100_001.0, "samples along θ ∈ [0, 4π]"),
            ],
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FigureId {
    type Err = FigureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| FigureError::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Svg,
    Obj,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Svg => "svg",
            OutputFormat::Obj => "obj",
            OutputFormat::Json => "json",
        }
    }
}

impl FromStr for OutputFormat {
    type Err = FigureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "svg" => Ok(OutputFormat::Svg),
            "obj" => Ok(OutputFormat::Obj),
            "json" => Ok(OutputFormat::Json),
            other => Err(FigureError::UnknownFormat(other.to_string())),
        }
    }
}

/// Declared parameter of a recipe, as published by the API.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamSchema {
    pub name: String,
    pub default: f64,
    pub min: f64,
    pub max: f64,
    /// When set, `min` itself is not allowed.
    pub exclusive_min: bool,
    pub integer: bool,
    pub description: String,
}

impl ParamSchema {
    fn real(name: &str, default: f64, min: f64, max: f64, exclusive_min: bool, description: &str) -> Self {
        ParamSchema {
            name: name.to_string(),
            default,
            min,
            max,
            exclusive_min,
            integer: false,
            description: description.to_string(),
        }
    }

    fn integer(name: &str, default: f64, min: f64, max: f64, description: &str) -> Self {
        ParamSchema {
            name: name.to_string(),
            default,
            min,
            max,
            exclusive_min: false,
            integer: true,
            description: description.to_string(),
        }
    }

    fn admits(&self, v: f64) -> bool {
        let above = if self.exclusive_min { v > self.min } else { v >= self.min };
        v.is_finite() && above && v <= self.max && (!self.integer || v.fract() == 0.0)
    }
}

#[derive(Debug, Error)]
pub enum FigureError {
    #[error("unknown figure `{0}`")]
    UnknownFigure(String),
    #[error("unknown output format `{0}`")]
    UnknownFormat(String),
    #[error("{figure} does not declare a parameter `{param}`")]
    UnknownParam { figure: FigureId, param: String },
    #[error("{param} = {value} is outside [{min}, {max}]{}", if *.integer { " or not an integer" } else { "" })]
    OutOfRange {
        param: String,
        value: f64,
        min: f64,
        max: f64,
        integer: bool,
    },
    #[error("time parameter must be positive, got {0}")]
    TimeNotPositive(f64),
    #[error("{figure} cannot be written as {format:?}")]
    UnsupportedFormat { figure: FigureId, format: OutputFormat },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Spiral(#[from] SpiralError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// A figure id with parameter overrides and an output format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FigureRecipe {
    pub id: FigureId,
    #[serde(default)]
    pub overrides: BTreeMap<String, f64>,
    #[serde(default)]
    pub format: Option<OutputFormat>,
}

impl FigureRecipe {
    pub fn new(id: FigureId) -> Self {
        FigureRecipe {
            id,
            overrides: BTreeMap::new(),
            format: None,
        }
    }

    pub fn set(mut self, name: &str, value: f64) -> Self {
        self.overrides.insert(name.to_string(), value);
        self
    }

    pub fn with_format(mut self, format: OutputFormat) -> Self {
        self.format = Some(format);
        self
    }

    pub fn format(&self) -> OutputFormat {
        self.format.unwrap_or(self.id.default_format())
    }

    /// Checks overrides and format, returning every declared parameter with its value.
    pub fn resolve(&self) -> Result<BTreeMap<String, f64>, FigureError> {
        let schema = self.id.params();
        for (name, &value) in &self.overrides {
            let Some(p) = schema.iter().find(|p| &p.name == name) else {
                return Err(FigureError::UnknownParam {
                    figure: self.id,
                    param: name.clone(),
                });
            };
            if name == "t" && !(value > 0.0) {
                return Err(FigureError::TimeNotPositive(value));
            }
            if !p.admits(value) {
                return Err(FigureError::OutOfRange {
                    param: name.clone(),
                    value,
                    min: p.min,
                    max: p.max,
                    integer: p.integer,
                });
            }
        }
        if !self.id.supports(self.format()) {
            return Err(FigureError::UnsupportedFormat {
                figure: self.id,
                format: self.format(),
            });
        }
        Ok(schema
            .into_iter()
            .map(|p| {
                let v = self.overrides.get(&p.name).copied().unwrap_or(p.default);
                (p.name, v)
            })
            .collect())
    }

    /// Whether `t` was given explicitly. `fig4` draws its three instants otherwise.
    fn time_overridden(&self) -> bool {
        self.overrides.contains_key("t")
    }
}

/// Geometry produced by a recipe before serialization.
#[derive(Debug, Clone, PartialEq)]
pub enum FigureGeometry {
    /// Named surfaces, one output file each in OBJ.
    Surfaces(Vec<(String, Mesh<f64>)>),
    /// Layers drawn into one SVG.
    Planar(Vec<SvgLayer<f64>>),
}

/// One output file: a deterministic name and its bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FigureFile {
    pub filename: String,
    pub bytes: Vec<u8>,
}

/// Compact label for an instant: `1`, `2`, `0.5`.
fn time_label(t: f64) -> String {
    let s = format!("{t}");
    s.replace('-', "m")
}

fn planar_square(half: f64) -> SpatialDomain<f64> {
    SpatialDomain::Square {
        side: 2.0 * half,
        centered: true,
    }
}

fn heightfield_mesh(cell: &CellSpec<f64>, t: f64, res: usize) -> Result<Mesh<f64>, FigureError> {
    let grid = sample_heightfield(cell, t, res, res)?;
    Ok(triangulate_heightfield(&grid)?)
}

fn parse_known(src: &str) -> crate::dsl::Expr {
    parse_str(src).expect("built-in recipe expressions parse")
}

/// Cell of a surface recipe. Planar recipes have none.
pub fn recipe_cell(id: FigureId, params: &BTreeMap<String, f64>) -> Result<Option<CellSpec<f64>>, FigureError> {
    let cell = match id {
        FigureId::Fig4 => CellSpec::height_field(parse_known(FIG4_EXPR), planar_square(2.0))?,
        FigureId::Fig12a | FigureId::Fig12b => {
            CellSpec::height_field(parse_known(FIG12_EXP_EXPR), planar_square(2.0))?
        }
        FigureId::Fig12c => CellSpec::height_field(parse_known(FIG12_STEADY_EXPR), planar_square(2.0))?
            .with_limit(PointLimit {
                x: 0.0,
                y: 0.0,
                z: 0.0,
                value: 0.0,
            }),
        FigureId::Eq1 => {
            let (h, b) = (params["H"], params["b"]);
            let domain = SpatialDomain::Disc {
                cx: 0.0,
                cy: 0.0,
                radius: (h / b).sqrt(),
            };
            let bound = BTreeMap::from([("H".to_string(), h), ("b".to_string(), b)]);
            CellSpec::new(crate::geometry::CellKind::HeightField, parse_known(EQ1_EXPR), domain, bound)?
        }
        FigureId::Fig6 | FigureId::Fig7 | FigureId::Fig8 => return Ok(None),
    };
    Ok(Some(cell))
}

/// Polar lattice matching a Cartesian resolution: `(res-1)/2` rings, four segments per ring.
pub fn polar_counts(res: usize) -> (usize, usize) {
    let rings = ((res - 1) / 2).max(1);
    (rings, (4 * rings).max(8))
}

/// Builds the geometry of a recipe.
pub fn build_figure(recipe: &FigureRecipe) -> Result<FigureGeometry, FigureError> {
    let p = recipe.resolve()?;
    let id = recipe.id;
    let res = |p: &BTreeMap<String, f64>| p["resolution"] as usize;
    let geometry = match id {
        FigureId::Fig4 => {
            let cell = recipe_cell(id, &p)?.expect("surface recipe");
            let times = if recipe.time_overridden() {
                vec![p["t"]]
            } else {
                vec![1.0, 2.0, 4.0]
            };
            let surfaces = times
                .into_iter()
                .map(|t| Ok((format!("fig4_t{}", time_label(t)), heightfield_mesh(&cell, t, res(&p))?)))
                .collect::<Result<_, FigureError>>()?;
            FigureGeometry::Surfaces(surfaces)
        }
        FigureId::Fig12a | FigureId::Fig12b => {
            let cell = recipe_cell(id, &p)?.expect("surface recipe");
            let t = p["t"];
            FigureGeometry::Surfaces(vec![(
                format!("{}_t{}", id.name(), time_label(t)),
                heightfield_mesh(&cell, t, res(&p))?,
            )])
        }
        FigureId::Fig12c => {
            let cell = recipe_cell(id, &p)?.expect("surface recipe");
            FigureGeometry::Surfaces(vec![("fig12c".to_string(), heightfield_mesh(&cell, 1.0, res(&p))?)])
        }
        FigureId::Eq1 => {
            let cell = recipe_cell(id, &p)?.expect("surface recipe");
            let (rings, segments) = polar_counts(res(&p));
            FigureGeometry::Surfaces(vec![("eq1".to_string(), triangulate_polar(&cell, 1.0, rings, segments)?)])
        }
        FigureId::Fig6 => {
            let n = p["n"] as usize;
            FigureGeometry::Planar(vec![
                SvgLayer::new(PlanarGeometry::Squares(fibonacci_squares(n)?), "#888888").with_id("squares"),
                SvgLayer::new(PlanarGeometry::Arcs(fibonacci_spiral(n)?), "blue").with_id("fibonacci"),
            ])
        }
        FigureId::Fig7 => {
            let n = p["n"] as usize;
            FigureGeometry::Planar(vec![
                SvgLayer::new(PlanarGeometry::Arcs(fibonacci_spiral(n)?), "blue").with_id("fibonacci"),
                SvgLayer::new(PlanarGeometry::Arcs(golden_spiral(n)?), "red").with_id("divina"),
            ])
        }
        FigureId::Fig8 => {
            let (b, t, samples) = (p["b"], p["t"], res(&p));
            let range = [0.0, 4.0 * std::f64::consts::PI];
            let steady = log_spiral(&SpiralSpec::new(b, 1.0, range, samples))?;
            let moved = log_spiral(&SpiralSpec::new(b, t, range, samples))?;
            FigureGeometry::Planar(vec![
                SvgLayer::new(PlanarGeometry::Polyline(steady), "red").with_id("t1"),
                SvgLayer::new(PlanarGeometry::Polyline(moved), "blue").with_id(format!("t{}", time_label(t))),
            ])
        }
    };
    Ok(geometry)
}

/// The recipe's geometry as a JSON envelope.
pub fn figure_envelope(recipe: &FigureRecipe, geometry: &FigureGeometry) -> Result<Envelope, FigureError> {
    let params = recipe.resolve()?;
    let mut env = Envelope::default()
        .with_meta("figure", recipe.id.name())
        .with_meta("title", recipe.id.title())
        .with_meta("params", serde_json::to_value(&params).map_err(ExportError::from)?);
    match geometry {
        FigureGeometry::Surfaces(meshes) => {
            for (name, mesh) in meshes {
                env.push(name.clone(), None, mesh.into());
            }
        }
        FigureGeometry::Planar(layers) => {
            for (i, layer) in layers.iter().enumerate() {
                let name = layer.id.clone().unwrap_or_else(|| format!("layer{i}"));
                env.push(name, Some(&layer.stroke), (&layer.geometry).into());
            }
        }
    }
    Ok(env)
}

/// Renders a recipe into named files without touching the filesystem.
pub fn render_figure(recipe: &FigureRecipe) -> Result<Vec<FigureFile>, FigureError> {
    let geometry = build_figure(recipe)?;
    let format = recipe.format();
    let files = match (format, &geometry) {
        (OutputFormat::Json, _) => vec![FigureFile {
            filename: format!("{}.json", recipe.id.name()),
            bytes: figure_envelope(recipe, &geometry)?.to_bytes()?,
        }],
        (OutputFormat::Obj, FigureGeometry::Surfaces(meshes)) => meshes
            .iter()
            .map(|(name, mesh)| {
                Ok(FigureFile {
                    filename: format!("{name}.obj"),
                    bytes: obj_bytes(mesh)?,
                })
            })
            .collect::<Result<_, FigureError>>()?,
        (OutputFormat::Svg, FigureGeometry::Planar(layers)) => vec![FigureFile {
            filename: format!("{}.svg", recipe.id.name()),
            bytes: svg_bytes(layers, &SvgStyle::default())?,
        }],
        _ => {
            return Err(FigureError::UnsupportedFormat {
                figure: recipe.id,
                format,
            })
        }
    };
    Ok(files)
}

/// Renders a recipe and writes its files into `out_dir`, creating it if needed.
pub fn run_figure(recipe: &FigureRecipe, out_dir: &Path) -> Result<Vec<PathBuf>, FigureError> {
    let files = render_figure(recipe)?;
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| FigureError::Io { path, source }
    };
    fs::create_dir_all(out_dir).map_err(io(out_dir))?;
    files
        .into_iter()
        .map(|f| {
            let path = out_dir.join(&f.filename);
            fs::write(&path, &f.bytes).map_err(io(&path))?;
            Ok(path)
        })
        .collect()
}
