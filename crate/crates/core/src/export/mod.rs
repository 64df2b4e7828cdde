//! Writers for OBJ, SVG and the JSON geometry envelope. All output is byte-stable: the
//! same geometry always produces the same bytes.

mod json;
mod number;
mod obj;
mod svg;

use std::io::{self, Write};

use thiserror::Error;

pub use json::{ContourLineJson, Envelope, EnvelopeItem, GeometryJson, ENVELOPE_FORMAT, ENVELOPE_VERSION};
pub use number::format_sig9;
pub use obj::{obj_bytes, write_obj};
pub use svg::{svg_bytes, write_svg, PlanarGeometry, SvgLayer, SvgStyle};

use crate::mesher::MeshReport;

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("refusing to write empty geometry")]
    EmptyGeometry,
    #[error("mesh violates its invariants: {0:?}")]
    InvalidMesh(MeshReport),
    #[error("write failed: {0}")]
    Sink(#[from] io::Error),
    #[error("json encoding failed: {0}")]
    Json(#[from] serde_json::Error),
}

/// Write adapter that counts bytes accepted by the inner sink.
pub(crate) struct CountingWriter<W> {
    inner: W,
    count: u64,
}

impl<W: Write> CountingWriter<W> {
    pub(crate) fn new(inner: W) -> Self {
        CountingWriter { inner, count: 0 }
    }

    pub(crate) fn count(&self) -> u64 {
        self.count
    }
}

impl<W: Write> Write for CountingWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let n = self.inner.write(buf)?;
        self.count += n as u64;
        Ok(n)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}
