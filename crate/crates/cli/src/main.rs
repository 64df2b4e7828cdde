//! `morphocell` command-line tool.
//!
//! Exit codes: 0 success, 1 output could not be written, 2 usage, 3 invalid input,
//! 4 numeric domain error. Log level comes from `MORPHOCELL_LOG` (e.g. `debug`).

mod serve;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;
use morphocell::export::{obj_bytes, svg_bytes, PlanarGeometry, SvgLayer, SvgStyle};
use morphocell::figures::{run_figure, FigureId, FigureRecipe, OutputFormat};
use morphocell::job::{JobKind, MeshJob, SpiralJob, SpiralKind, SpiralOutput};
use morphocell::{parse_str, Error, ErrorCategory, SpatialDomain};

#[derive(Debug, Parser)]
#[command(name = "morphocell", version, about = "Space-time cells, surfaces and spirals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Svg,
    Obj,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Svg => OutputFormat::Svg,
            FormatArg::Obj => OutputFormat::Obj,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Heightfield,
    Implicit,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpiralKindArg {
    Log,
    Fibonacci,
    Golden,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Reproduce one of the built-in figures.
    Figure {
        /// fig4, fig6, fig7, fig8, fig12a, fig12b, fig12c or eq1.
        id: String,
        /// Parameter override, repeatable: --set t=2 --set resolution=65.
        #[arg(long = "set", value_name = "K=V", value_parser = parse_assignment)]
        set: Vec<(String, f64)>,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Output format [default: svg for planar figures, obj otherwise].
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Mesh an arbitrary cell written in the expression language.
    Mesh {
        /// Expression, e.g. 'abs(x*y)^(1/t)'.
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        expr: Option<String>,
        /// JSON job file ({"expr", "kind", "domain", "params", "iso", "t", "resolution"}).
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "heightfield", conflicts_with = "spec")]
        kind: KindArg,
        /// Time instant (> 0).
        #[arg(long, allow_hyphen_values = true, conflicts_with = "spec")]
        t: Option<f64>,
        /// Lattice nodes per axis.
        #[arg(long, conflicts_with = "spec")]
        res: Option<usize>,
        /// Parameter binding, repeatable: --set H=10.
        #[arg(long = "set", value_name = "K=V", value_parser = parse_assignment, conflicts_with = "spec")]
        set: Vec<(String, f64)>,
        /// Boundary level of an implicit cell.
        #[arg(long, allow_hyphen_values = true, conflicts_with = "spec")]
        iso: Option<f64>,
        /// Half-width of the sampled square or cube.
        #[arg(long, conflicts_with = "spec")]
        extent: Option<f64>,
        /// Output file; the format follows the extension (.obj or .json). Stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format; overrides the file extension.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Draw a logarithmic, Fibonacci or golden spiral.
    Spiral {
        #[arg(long, value_enum, default_value = "log")]
        kind: SpiralKindArg,
        /// Growth constant of the log spiral [default: 2/pi].
        #[arg(long, allow_hyphen_values = true)]
        b: Option<f64>,
        /// Time instant (> 0) [default: 1].
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Angle range in radians, `start:end`.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        theta: Option<[f64; 2]>,
        /// Points along the curve.
        #[arg(long)]
        samples: Option<usize>,
        /// Arc count for fibonacci and golden spirals.
        #[arg(long)]
        n: Option<usize>,
        /// Output file (.svg or .json). Stdout if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format; overrides the file extension.
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
    },
    /// Serve the JSON API (and optionally a static directory) over HTTP.
    Serve {
        /// Port to bind; 0 picks a free one.
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Directory served for non-API paths.
        #[arg(long = "static", value_name = "DIR")]
        static_dir: Option<PathBuf>,
    },
    /// Parse and validate an expression without evaluating it.
    Check {
        /// Expression to check.
        #[arg(long)]
        expr: String,
    },
}

fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected K=V, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_range(s: &str) -> Result<[f64; 2], String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected a:b, got `{s}`"))?;
    let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number"));
    Ok([num(a)?, num(b)?])
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (category, code) = e.classify();
        Failure {
            code: category.exit_code() as u8,
            message: format!("{code}: {e}"),
        }
    }
}

impl From<morphocell::FigureError> for Failure {
    fn from(e: morphocell::FigureError) -> Self {
        Error::from(e).into()
    }
}

impl From<morphocell::ExportError> for Failure {
    fn from(e: morphocell::ExportError) -> Self {
        Error::from(e).into()
    }
}

fn input_failure(message: String) -> Failure {
    Failure {
        code: ErrorCategory::Input.exit_code() as u8,
        message,
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure {
        code: ErrorCategory::Io.exit_code() as u8,
        message: format!("cannot write {}: {e}", path.display()),
    }
}

fn format_from(path: Option<&Path>, explicit: Option<FormatArg>, fallback: OutputFormat) -> Result<OutputFormat, Failure> {
    if let Some(f) = explicit {
        return Ok(f.into());
    }
    match path.and_then(Path::extension).and_then(|e| e.to_str()) {
        Some("obj") => Ok(OutputFormat::Obj),
        Some("svg") => Ok(OutputFormat::Svg),
        Some("json") => Ok(OutputFormat::Json),
        Some(other) => Err(input_failure(format!("cannot infer a format from extension `.{other}`"))),
        None => Ok(fallback),
    }
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
            }
            fs::write(path, bytes).map_err(|e| io_failure(path, e))?;
            info!("wrote {} ({} bytes)", path.display(), bytes.len());
            Ok(())
        }
        None => io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn figure(id: &str, set: Vec<(String, f64)>, out: &Path, format: Option<FormatArg>) -> Result<(), Failure> {
    let id: FigureId = id.parse()?;
    let mut recipe = FigureRecipe::new(id);
    recipe.overrides = set.into_iter().collect();
    recipe.format = format.map(Into::into);
    for path in run_figure(&recipe, out)? {
        println!("{}", path.display());
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn mesh(
    expr: Option<String>,
    spec: Option<PathBuf>,
    kind: KindArg,
    t: Option<f64>,
    res: Option<usize>,
    set: Vec<(String, f64)>,
    iso: Option<f64>,
    extent: Option<f64>,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
) -> Result<(), Failure> {
    let job = match spec {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<MeshJob>(&text)
                .map_err(|e| input_failure(format!("invalid job file {}: {e}", path.display())))?
        }
        None => {
            let kind = match kind {
                KindArg::Heightfield => JobKind::Heightfield,
                KindArg::Implicit => JobKind::Implicit,
            };
            let mut job = MeshJob::new(expr.unwrap_or_default(), kind);
            job.params = set.into_iter().collect::<BTreeMap<_, _>>();
            job.iso = iso;
            job.resolution = res;
            if let Some(t) = t {
                job.t = t;
            }
            if let Some(half) = extent {
                job.domain = Some(match kind {
                    JobKind::Heightfield => SpatialDomain::centered_square(2.0 * half),
                    JobKind::Implicit => SpatialDomain::cube(half),
                });
            }
            job
        }
    };
    let format = format_from(out.as_deref(), format, OutputFormat::Obj)?;
    if format == OutputFormat::Svg {
        return Err(input_failure("meshes are written as obj or json".into()));
    }
    let mesh = job.run()?;
    info!("{} vertices, {} triangles", mesh.vertices.len(), mesh.triangles.len());
    let bytes = match format {
        OutputFormat::Obj => obj_bytes(&mesh)?,
        _ => job.envelope(&mesh).to_bytes()?,
    };
    emit(out.as_deref(), &bytes)
}

#[allow(clippy::too_many_arguments)]
fn spiral(
    kind: SpiralKindArg,
    b: Option<f64>,
    t: Option<f64>,
    theta: Option<[f64; 2]>,
    samples: Option<usize>,
    n: Option<usize>,
    out: Option<PathBuf>,
    format: Option<FormatArg>,
) -> Result<(), Failure> {
    let defaults = SpiralJob::default();
    let job = SpiralJob {
        kind: match kind {
            SpiralKindArg::Log => SpiralKind::Log,
            SpiralKindArg::Fibonacci => SpiralKind::Fibonacci,
            SpiralKindArg::Golden => SpiralKind::Golden,
        },
        b: b.unwrap_or(defaults.b),
        t: t.unwrap_or(defaults.t),
        theta: theta.unwrap_or(defaults.theta),
        samples: samples.unwrap_or(defaults.samples),
        n: n.unwrap_or(defaults.n),
    };
    let format = format_from(out.as_deref(), format, OutputFormat::Svg)?;
    if format == OutputFormat::Obj {
        return Err(input_failure("spirals are written as svg or json".into()));
    }
    let output = job.run()?;
    let bytes = match format {
        OutputFormat::Json => job.envelope(&output).to_bytes()?,
        _ => {
            let geometry = match output {
                SpiralOutput::Arcs(c) => PlanarGeometry::Arcs(c),
                SpiralOutput::Points(p) => PlanarGeometry::Polyline(p),
            };
            svg_bytes(&[SvgLayer::new(geometry, "black")], &SvgStyle::default())?
        }
    };
    emit(out.as_deref(), &bytes)
}

fn check(expr: &str) -> Result<(), Failure> {
    let parsed = parse_str(expr).map_err(Error::from)?;
    println!("{parsed}");
    let params: Vec<_> = parsed.free_params().into_iter().collect();
    if !params.is_empty() {
        println!("params: {}", params.join(", "));
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MORPHOCELL_LOG", "warn")).init();
    // clap reports usage errors with exit code 2 on its own.
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Figure { id, set, out, format } => figure(&id, set, &out, format),
        Command::Mesh {
            expr,
            spec,
            kind,
            t,
            res,
            set,
            iso,
            extent,
            out,
            format,
        } => mesh(expr, spec, kind, t, res, set, iso, extent, out, format),
        Command::Spiral {
            kind,
            b,
            t,
            theta,
            samples,
            n,
            out,
            format,
        } => spiral(kind, b, t, theta, samples, n, out, format),
        Command::Serve { port, host, static_dir } => serve::run(&host, port, static_dir).map_err(|e| Failure {
            code: 1,
            message: e,
        }),
        Command::Check { expr } => check(&expr),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
