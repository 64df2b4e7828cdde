use std::io::Write;

use super::number::format_sig9;
use super::{CountingWriter, ExportError};
use crate::mesher::{validate_mesh, Mesh};
use crate::scalar::Real;

/// Writes an ASCII OBJ: all `v x y z` lines, then `f i j k` lines with 1-based indices.
/// Returns the number of bytes written.
pub fn write_obj<T: Real, W: Write>(mesh: &Mesh<T>, sink: W) -> Result<u64, ExportError> {
    if mesh.is_empty() {
        return Err(ExportError::EmptyGeometry);
    }
    let report = validate_mesh(mesh);
    if !report.is_valid() {
        return Err(ExportError::InvalidMesh(report));
    }
    let mut out = CountingWriter::new(sink);
    for v in &mesh.vertices {
        writeln!(
            out,
            "v {} {} {}",
            format_sig9(v[0].to_f64_lossy()),
            format_sig9(v[1].to_f64_lossy()),
            format_sig9(v[2].to_f64_lossy())
        )?;
    }
    for [a, b, c] in &mesh.triangles {
        writeln!(out, "f {} {} {}", a + 1, b + 1, c + 1)?;
    }
    out.flush()?;
    Ok(out.count())
}

pub fn obj_bytes<T: Real>(mesh: &Mesh<T>) -> Result<Vec<u8>, ExportError> {
    let mut buf = Vec::new();
    write_obj(mesh, &mut buf)?;
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tri() -> Mesh<f64> {
        Mesh {
            vertices: vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
            triangles: vec![[0, 1, 2]],
            normals: None,
        }
    }

    #[test]
    fn single_triangle_layout() {
        let bytes = obj_bytes(&tri()).unwrap();
        let text = String::from_utf8(bytes.clone()).unwrap();
        assert_eq!(
            text,
            "v 0 0 0\nv 1.00000000 0 0\nv 0 1.00000000 0\nf 1 2 3\n"
        );
        let mut sink = Vec::new();
        assert_eq!(write_obj(&tri(), &mut sink).unwrap(), bytes.len() as u64);
    }

    #[test]
    fn refuses_empty_and_invalid() {
        assert!(matches!(obj_bytes(&Mesh::<f64>::default()), Err(ExportError::EmptyGeometry)));
        let mut bad = tri();
        bad.triangles[0] = [0, 0, 2];
        assert!(matches!(obj_bytes(&bad), Err(ExportError::InvalidMesh(_))));
    }

    #[test]
    fn sink_failure_is_reported() {
        struct Broken;
        impl Write for Broken {
            fn write(&mut self, _: &[u8]) -> std::io::Result<usize> {
                Err(std::io::Error::other("disk full"))
            }
            fn flush(&mut self) -> std::io::Result<()> {
                Ok(())
            }
        }
        assert!(matches!(write_obj(&tri(), Broken), Err(ExportError::Sink(_))));
    }
}
