use std::fmt::Write as _;
use std::io::Write;

use super::number::format_sig9;
use super::{CountingWriter, ExportError};
use crate::mesher::Contour;
use crate::scalar::Real;
use crate::spirals::{ArcChain, Polyline, Square};

/// Planar geometry that can be drawn as SVG.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanarGeometry<T> {
    Arcs(ArcChain<T>),
    Polyline(Polyline<T>),
    Contour(Contour<T>),
    Squares(Vec<Square<T>>),
}

impl<T: Real> PlanarGeometry<T> {
    pub fn is_empty(&self) -> bool {
        match self {
            PlanarGeometry::Arcs(c) => c.arcs.is_empty(),
            PlanarGeometry::Polyline(p) => p.points.len() < 2,
            PlanarGeometry::Contour(c) => c.is_empty(),
            PlanarGeometry::Squares(s) => s.is_empty(),
        }
    }

    /// Points whose bounding box covers the geometry.
    fn extent_points(&self) -> Vec<[f64; 2]> {
        let f = |p: [T; 2]| [p[0].to_f64_lossy(), p[1].to_f64_lossy()];
        match self {
            PlanarGeometry::Arcs(c) => c
                .arcs
                .iter()
                .flat_map(|a| (0..=8).map(move |k| a.start_angle + a.sweep() * T::from_index(k) / T::lit(8.0)).map(move |th| f(a.point_at(th))))
                .collect(),
            PlanarGeometry::Polyline(p) => p.points.iter().copied().map(f).collect(),
            PlanarGeometry::Contour(c) => c
                .polylines
                .iter()
                .flat_map(|l| l.points.iter().copied().map(f))
                .collect(),
            PlanarGeometry::Squares(s) => s
                .iter()
                .flat_map(|q| {
                    let [x0, y0, x1, y1] = q.extent();
                    [f([x0, y0]), f([x1, y1])]
                })
                .collect(),
        }
    }
}

/// One stroked layer of an SVG document.
#[derive(Debug, Clone, PartialEq)]
pub struct SvgLayer<T> {
    pub geometry: PlanarGeometry<T>,
    pub stroke: String,
    pub id: Option<String>,
}

impl<T> SvgLayer<T> {
    pub fn new(geometry: PlanarGeometry<T>, stroke: impl Into<String>) -> Self {
        SvgLayer {
            geometry,
            stroke: stroke.into(),
            id: None,
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvgStyle {
    /// Stroke width as a fraction of the larger drawing extent.
    pub stroke_fraction: f64,
    /// Blank margin as a fraction of the larger drawing extent.
    pub margin_fraction: f64,
    /// Rendered width in pixels; height follows the aspect ratio.
    pub pixel_width: f64,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            stroke_fraction: 0.004,
            margin_fraction: 0.05,
            pixel_width: 800.0,
        }
    }
}

fn n(v: f64) -> String {
    format_sig9(v)
}

/// Writes a standalone SVG 1.1 document. The y axis points up (coordinates are mirrored
/// into SVG's y-down frame); arcs are emitted as elliptical-arc path commands.
pub fn write_svg<T: Real, W: Write>(
    layers: &[SvgLayer<T>],
    style: &SvgStyle,
    sink: W,
) -> Result<u64, ExportError> {
    if layers.is_empty() || layers.iter().any(|l| l.geometry.is_empty()) {
        return Err(ExportError::EmptyGeometry);
    }
    let pts: Vec<[f64; 2]> = layers.iter().flat_map(|l| l.geometry.extent_points()).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in &pts {
        x0 = x0.min(p[0]);
        x1 = x1.max(p[0]);
        // mirrored
        y0 = y0.min(-p[1]);
        y1 = y1.max(-p[1]);
    }
    let extent = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let margin = extent * style.margin_fraction;
    let (vx, vy) = (x0 - margin, y0 - margin);
    let (vw, vh) = (x1 - x0 + 2.0 * margin, y1 - y0 + 2.0 * margin);
    let height = style.pixel_width * vh / vw;

    let mut doc = String::new();
    doc.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        doc,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" viewBox=\"{} {} {} {}\">",
        n(style.pixel_width),
        n(height),
        n(vx),
        n(vy),
        n(vw),
        n(vh)
    );
    let _ = writeln!(
        doc,
        "<g fill=\"none\" stroke-width=\"{}\" stroke-linecap=\"round\" stroke-linejoin=\"round\">",
        n(extent * style.stroke_fraction)
    );
    for layer in layers {
        let id = layer
            .id
            .as_ref()
            .map(|id| format!(" id=\"{}\"", escape(id)))
            .unwrap_or_default();
        let stroke = escape(&layer.stroke);
        match &layer.geometry {
            PlanarGeometry::Squares(squares) => {
                let _ = writeln!(doc, "<g{id} stroke=\"{stroke}\">");
                for s in squares {
                    let [sx0, _, _, sy1] = s.extent();
                    let _ = writeln!(
                        doc,
                        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\"/>",
                        n(sx0.to_f64_lossy()),
                        n(-sy1.to_f64_lossy()),
                        n(s.side.to_f64_lossy()),
                        n(s.side.to_f64_lossy())
                    );
                }
                doc.push_str("</g>\n");
            }
            geometry => {
                let _ = writeln!(doc, "<path{id} stroke=\"{stroke}\" d=\"{}\"/>", path_data(geometry));
            }
        }
    }
    doc.push_str("</g>\n</svg>\n");

    let mut out = CountingWriter::new(sink);
    out.write_all(doc.as_bytes())?;
    out.flush()?;
    Ok(out.count())
}

pub fn svg_bytes<T: Real>(layers: &[SvgLayer<T>], style: &SvgStyle) -> Result<Vec<u8>, ExportError> {
    let mut buf = Vec::new();
    write_svg(layers, style, &mut buf)?;
    Ok(buf)
}

fn pt<T: Real>(p: [T; 2]) -> String {
    format!("{} {}", n(p[0].to_f64_lossy()), n(-p[1].to_f64_lossy()))
}

fn path_data<T: Real>(geometry: &PlanarGeometry<T>) -> String {
    let mut d = String::new();
    match geometry {
        PlanarGeometry::Arcs(chain) => {
            for (i, arc) in chain.arcs.iter().enumerate() {
                if i == 0 {
                    let _ = write!(d, "M {}", pt(arc.start()));
                }
                let large = u8::from(arc.sweep().abs() > T::PI());
                // counterclockwise in the y-up frame is sweep-flag 0 once mirrored
                let sweep = u8::from(arc.sweep() < T::zero());
                let r = n(arc.radius.to_f64_lossy());
                let _ = write!(d, " A {r} {r} 0 {large} {sweep} {}", pt(arc.end()));
            }
        }
        PlanarGeometry::Polyline(line) => write_points(&mut d, &line.points, false),
        PlanarGeometry::Contour(contour) => {
            for (i, line) in contour.polylines.iter().enumerate() {
                if i > 0 {
                    d.push(' ');
                }
                write_points(&mut d, &line.points, line.closed);
            }
        }
        PlanarGeometry::Squares(_) => {}
    }
    d
}

fn write_points<T: Real>(d: &mut String, points: &[[T; 2]], closed: bool) {
    for (i, p) in points.iter().enumerate() {
        let cmd = if i == 0 { "M" } else { " L" };
        let _ = write!(d, "{cmd} {}", pt(*p));
    }
    if closed {
        d.push_str(" Z");
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spirals::{fibonacci_spiral, golden_spiral, log_spiral, SpiralSpec};

    #[test]
    fn fibonacci_spiral_uses_native_arcs() {
        let layer = SvgLayer::new(PlanarGeometry::Arcs(fibonacci_spiral::<f64>(6).unwrap()), "blue");
        let text = String::from_utf8(svg_bytes(&[layer], &SvgStyle::default()).unwrap()).unwrap();
        assert_eq!(text.matches(" A ").count(), 6);
        assert_eq!(text.matches("<path").count(), 1);
        assert!(text.starts_with("<?xml"));
        assert!(text.contains("version=\"1.1\""));
        assert!(text.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn overlay_keeps_colours() {
        let layers = [
            SvgLayer::new(PlanarGeometry::Arcs(fibonacci_spiral::<f64>(6).unwrap()), "blue").with_id("fibonacci"),
            SvgLayer::new(PlanarGeometry::Arcs(golden_spiral::<f64>(6).unwrap()), "red").with_id("divina"),
        ];
        let text = String::from_utf8(svg_bytes(&layers, &SvgStyle::default()).unwrap()).unwrap();
        assert_eq!(text.matches("<path").count(), 2);
        assert!(text.contains("stroke=\"blue\"") && text.contains("stroke=\"red\""));
    }

    #[test]
    fn empty_input_rejected() {
        assert!(matches!(
            svg_bytes::<f64>(&[], &SvgStyle::default()),
            Err(ExportError::EmptyGeometry)
        ));
        let empty = SvgLayer::new(PlanarGeometry::Polyline(Polyline::<f64> { points: vec![] }), "red");
        assert!(matches!(
            svg_bytes(&[empty], &SvgStyle::default()),
            Err(ExportError::EmptyGeometry)
        ));
    }

    #[test]
    fn polyline_and_determinism() {
        let line = log_spiral(&SpiralSpec::new(0.5, 1.0, [0.0, 6.0], 50)).unwrap();
        let layers = [SvgLayer::new(PlanarGeometry::Polyline(line), "#333")];
        let a = svg_bytes(&layers, &SvgStyle::default()).unwrap();
        let b = svg_bytes(&layers, &SvgStyle::default()).unwrap();
        assert_eq!(a, b);
        assert_eq!(String::from_utf8(a).unwrap().matches(" L ").count(), 49);
    }
}
