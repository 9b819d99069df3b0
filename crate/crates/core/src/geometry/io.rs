//! OBJ and STL reading and writing.
//!
//! OBJ carries shared vertex indices and is trusted as-is. STL repeats every
//! vertex per facet, so STL input is welded before validation.

use std::collections::HashMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use super::mesh::TriangleMesh;
use super::vector::Point3;
use crate::error::{Error, Result};
use crate::scalar::{fmt17, Scalar};

/// Absolute distance below which STL vertices are merged.
pub const STL_WELD_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    StlBinary,
    StlAscii,
}

impl MeshFormat {
    /// Guesses from the file extension; `.stl` means binary.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "obj" => Some(MeshFormat::Obj),
            "stl" => Some(MeshFormat::StlBinary),
            _ => None,
        }
    }
}

impl std::str::FromStr for MeshFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "obj" => Ok(MeshFormat::Obj),
            "stl" | "stl-binary" => Ok(MeshFormat::StlBinary),
            "stl-ascii" => Ok(MeshFormat::StlAscii),
            other => Err(Error::invalid(format!("unknown mesh format {other:?}"))),
        }
    }
}

/// Reads and validates a mesh.
///
/// A file declared as binary STL that does not have the binary layout but
/// starts with `solid` is read as ASCII STL.
pub fn load_mesh<T: Scalar>(path: impl AsRef<Path>, format: MeshFormat) -> Result<TriangleMesh<T>> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let (vertices, faces) = match format {
        MeshFormat::Obj => parse_obj(&String::from_utf8_lossy(&bytes))?,
        MeshFormat::StlBinary if !looks_binary_stl(&bytes) && bytes.starts_with(b"solid") => {
            weld(&parse_stl_ascii(&String::from_utf8_lossy(&bytes))?, STL_WELD_TOLERANCE)
        }
        MeshFormat::StlBinary => weld(&parse_stl_binary(&bytes)?, STL_WELD_TOLERANCE),
        MeshFormat::StlAscii => weld(&parse_stl_ascii(&String::from_utf8_lossy(&bytes))?, STL_WELD_TOLERANCE),
    };
    let vertices = vertices.into_iter().map(Point3::from_f64).collect();
    TriangleMesh::validated(vertices, faces)
}

/// Writes `mesh`; OBJ coordinates use 17 significant digits, STL uses the
/// format's single precision.
pub fn save_mesh<T: Scalar>(mesh: &TriangleMesh<T>, path: impl AsRef<Path>, format: MeshFormat) -> Result<()> {
    let path = path.as_ref();
    let bytes = match format {
        MeshFormat::Obj => write_obj(mesh).into_bytes(),
        MeshFormat::StlBinary => write_stl_binary(mesh),
        MeshFormat::StlAscii => write_stl_ascii(mesh).into_bytes(),
    };
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(&bytes).map_err(|e| Error::io(path, e))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn parse_obj(text: &str) -> Result<(Vec<[f64; 3]>, Vec<[usize; 3]>)> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut tokens = line.split_whitespace();
        match tokens.next() {
            Some("v") => {
                let mut p = [0.0; 3];
                for c in &mut p {
                    let tok = tokens.next().ok_or_else(|| parse_err(line_no, "vertex needs 3 coordinates"))?;
                    *c = tok.parse().map_err(|_| parse_err(line_no, format!("bad coordinate {tok:?}")))?;
                }
                vertices.push(p);
            }
            Some("f") => {
                let idx = tokens
                    .map(|tok| {
                        // `v`, `v/vt`, `v//vn`, `v/vt/vn`
                        let head = tok.split('/').next().unwrap_or("");
                        let k: i64 = head.parse().map_err(|_| parse_err(line_no, format!("bad index {tok:?}")))?;
                        let resolved = if k > 0 { k - 1 } else { vertices.len() as i64 + k };
                        if k == 0 || resolved < 0 {
                            return Err(parse_err(line_no, format!("index {k} out of range")));
                        }
                        Ok(resolved as usize)
                    })
                    .collect::<Result<Vec<usize>>>()?;
                if idx.len() < 3 {
                    return Err(parse_err(line_no, "face needs at least 3 vertices"));
                }
                for k in 1..idx.len() - 1 {
                    faces.push([idx[0], idx[k], idx[k + 1]]);
                }
            }
            _ => {}
        }
    }
    if let Some((i, _)) = faces.iter().enumerate().find(|(_, f)| f.iter().any(|&v| v >= vertices.len())) {
        return Err(parse_err(0, format!("face {i} references a missing vertex")));
    }
    Ok((vertices, faces))
}

fn looks_binary_stl(bytes: &[u8]) -> bool {
    if bytes.len() < 84 {
        return false;
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    bytes.len() == 84 + 50 * count
}

fn parse_stl_binary(bytes: &[u8]) -> Result<Vec<[[f64; 3]; 3]>> {
    if bytes.len() < 84 {
        return Err(parse_err(0, "binary STL shorter than its 84-byte header"));
    }
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    if bytes.len() < 84 + 50 * count {
        return Err(parse_err(0, format!("binary STL truncated: {count} facets declared")));
    }
    let read = |off: usize| f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as f64;
    Ok((0..count)
        .map(|i| {
            let base = 84 + 50 * i + 12; // skip the facet normal
            let mut tri = [[0.0; 3]; 3];
            for (k, v) in tri.iter_mut().enumerate() {
                for (c, slot) in v.iter_mut().enumerate() {
                    *slot = read(base + 12 * k + 4 * c);
                }
            }
            tri
        })
        .collect())
}

fn parse_stl_ascii(text: &str) -> Result<Vec<[[f64; 3]; 3]>> {
    let mut tris = Vec::new();
    let mut current: Vec<[f64; 3]> = Vec::with_capacity(3);
    for (i, raw) in text.lines().enumerate() {
        let mut tokens = raw.split_whitespace();
        match tokens.next() {
            Some("vertex") => {
                let mut p = [0.0; 3];
                for c in &mut p {
                    let tok = tokens.next().ok_or_else(|| parse_err(i + 1, "vertex needs 3 coordinates"))?;
                    *c = tok.parse().map_err(|_| parse_err(i + 1, format!("bad coordinate {tok:?}")))?;
                }
                current.push(p);
            }
            Some("endfacet") => {
                if current.len() != 3 {
                    return Err(parse_err(i + 1, format!("facet with {} vertices", current.len())));
                }
                tris.push([current[0], current[1], current[2]]);
                current.clear();
            }
            _ => {}
        }
    }
    if tris.is_empty() {
        return Err(parse_err(0, "no facets in ASCII STL"));
    }
    Ok(tris)
}

/// Merges facet corners closer than `tol`, returning shared-index geometry.
/// The first corner seen in a cluster is kept as its representative.
pub fn weld(tris: &[[[f64; 3]; 3]], tol: f64) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let cell = |p: &[f64; 3]| -> [i64; 3] { [0, 1, 2].map(|c| (p[c] / tol).floor() as i64) };
    let mut grid: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
    let mut vertices: Vec<[f64; 3]> = Vec::new();
    let mut faces = Vec::with_capacity(tris.len());
    for tri in tris {
        let mut face = [0usize; 3];
        for (k, p) in tri.iter().enumerate() {
            let key = cell(p);
            let mut hit = None;
            'search: for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(ids) = grid.get(&[key[0] + dx, key[1] + dy, key[2] + dz]) {
                            for &id in ids {
                                let q = vertices[id];
                                let d2 = (0..3).map(|c| (p[c] - q[c]).powi(2)).sum::<f64>();
                                if d2 <= tol * tol {
                                    hit = Some(id);
                                    break 'search;
                                }
                            }
                        }
                    }
                }
            }
            face[k] = hit.unwrap_or_else(|| {
                vertices.push(*p);
                grid.entry(key).or_default().push(vertices.len() - 1);
                vertices.len() - 1
            });
        }
        faces.push(face);
    }
    (vertices, faces)
}

fn write_obj<T: Scalar>(mesh: &TriangleMesh<T>) -> String {
    let mut out = String::with_capacity(64 * (mesh.vertices().len() + mesh.faces().len()));
    for p in mesh.vertices() {
        let [x, y, z] = p.to_f64();
        out.push_str(&format!("v {} {} {}\n", fmt17(x), fmt17(y), fmt17(z)));
    }
    for [a, b, c] in mesh.faces() {
        out.push_str(&format!("f {} {} {}\n", a + 1, b + 1, c + 1));
    }
    out
}

fn write_stl_binary<T: Scalar>(mesh: &TriangleMesh<T>) -> Vec<u8> {
    let mut out = Vec::with_capacity(84 + 50 * mesh.faces().len());
    let mut header = [0u8; 80];
    let tag = b"isoperim binary stl";
    header[..tag.len()].copy_from_slice(tag);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(mesh.faces().len() as u32).to_le_bytes());
    for f in 0..mesh.faces().len() {
        let n = mesh.face_normal(f).unwrap_or_else(Point3::zero).to_f64();
        for c in n {
            out.extend_from_slice(&(c as f32).to_le_bytes());
        }
        for p in mesh.triangle(f) {
            for c in p.to_f64() {
                out.extend_from_slice(&(c as f32).to_le_bytes());
            }
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}

fn write_stl_ascii<T: Scalar>(mesh: &TriangleMesh<T>) -> String {
    let mut out = String::from("solid isoperim\n");
    for f in 0..mesh.faces().len() {
        let [nx, ny, nz] = mesh.face_normal(f).unwrap_or_else(Point3::zero).to_f64();
        out.push_str(&format!("  facet normal {nx:e} {ny:e} {nz:e}\n    outer loop\n"));
        for p in mesh.triangle(f) {
            let [x, y, z] = p.to_f64();
            out.push_str(&format!("      vertex {:e} {:e} {:e}\n", x as f32, y as f32, z as f32));
        }
        out.push_str("    endloop\n  endfacet\n");
    }
    out.push_str("endsolid isoperim\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Violation;
    use crate::shapes::{generate, ShapeSpec};

    const TETRA_OBJ: &str = "# regular tetrahedron\nv 1 1 1\nv 1 -1 -1\nv -1 1 -1\nv -1 -1 1\nf 1 2 3\nf 1 3 4\nf 1 4 2\nf 2 4 3\n";

    #[test]
    fn loads_tetrahedron_obj() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("tetra.obj");
        fs::write(&path, TETRA_OBJ).unwrap();
        let mesh: TriangleMesh<f64> = load_mesh(&path, MeshFormat::Obj).unwrap();
        assert_eq!(mesh.faces().len(), 4);
        assert_eq!(mesh.vertices().len(), 4);
    }

    #[test]
    fn open_quad_strip_reports_boundary() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("open.obj");
        fs::write(&path, "v 0 0 0\nv 1 0 0\nv 0 1 0\nv 1 1 0\nv 0 2 0\nv 1 2 0\nf 1 2 4 3\nf 3 4 6 5\n").unwrap();
        match load_mesh::<f64>(&path, MeshFormat::Obj) {
            Err(Error::InvalidMesh(report)) => {
                assert!(!report.is_watertight());
                assert!(report.boundary_edges().count() >= 6, "{report}");
            }
            other => panic!("expected invalid mesh, got {other:?}"),
        }
    }

    #[test]
    fn obj_round_trip_keeps_connectivity() {
        let cube: TriangleMesh<f64> = generate(&ShapeSpec::cube(1.0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cube.obj");
        save_mesh(&cube, &path, MeshFormat::Obj).unwrap();
        let back: TriangleMesh<f64> = load_mesh(&path, MeshFormat::Obj).unwrap();
        assert_eq!(back.faces().len(), 12);
        assert_eq!(back, cube);
    }

    #[test]
    fn binary_stl_round_trip_welds_back() {
        let sphere: TriangleMesh<f64> = generate(&ShapeSpec::sphere(1.0, 4)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sphere.stl");
        save_mesh(&sphere, &path, MeshFormat::StlBinary).unwrap();
        let back: TriangleMesh<f64> = load_mesh(&path, MeshFormat::StlBinary).unwrap();
        assert_eq!(back.faces().len(), 5120);
        assert_eq!(back.vertices().len(), sphere.vertices().len());
        assert!(back.validate().is_valid());
        for f in 0..back.faces().len() {
            for (p, q) in back.triangle(f).iter().zip(sphere.triangle(f)) {
                assert!((*p - q).norm() < 1e-7);
            }
        }
    }

    #[test]
    fn ascii_stl_round_trip() {
        let cube: TriangleMesh<f64> = generate(&ShapeSpec::boxed(1.0, 2.0, 3.0)).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("box.stl");
        save_mesh(&cube, &path, MeshFormat::StlAscii).unwrap();
        let back: TriangleMesh<f64> = load_mesh(&path, MeshFormat::StlAscii).unwrap();
        assert_eq!(back.vertices().len(), 8);
        assert!((back.volume().unwrap() - 6.0).abs() < 1e-6);
        // `.stl` defaults to binary but ASCII content is still recognized
        let sniffed: TriangleMesh<f64> = load_mesh(&path, MeshFormat::StlBinary).unwrap();
        assert_eq!(sniffed, back);
    }

    #[test]
    fn weld_merges_within_tolerance_only() {
        let tris = [[[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]], [[5e-10, 0.0, 0.0], [1.0, 0.0, 2e-9], [0.0, 1.0, 0.0]]];
        let (v, f) = weld(&tris, STL_WELD_TOLERANCE);
        assert_eq!(v.len(), 4);
        assert_eq!(f[1], [0, 3, 2]);
    }

    #[test]
    fn flipped_facet_in_stl_is_an_orientation_error() {
        let cube: TriangleMesh<f64> = generate(&ShapeSpec::cube(1.0)).unwrap();
        let mut faces = cube.faces().to_vec();
        faces[3].swap(0, 1);
        let bad = TriangleMesh::new(cube.vertices().to_vec(), faces).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.stl");
        save_mesh(&bad, &path, MeshFormat::StlBinary).unwrap();
        match load_mesh::<f64>(&path, MeshFormat::StlBinary) {
            Err(Error::InvalidMesh(r)) => assert!(r
                .violations
                .iter()
                .any(|v| matches!(v, Violation::InconsistentOrientation { faces } if faces == &vec![3]))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_path_is_io_error() {
        let cube: TriangleMesh<f64> = generate(&ShapeSpec::cube(1.0)).unwrap();
        assert!(matches!(save_mesh(&cube, "", MeshFormat::Obj), Err(Error::Io { .. })));
        assert!(matches!(load_mesh::<f64>("/nonexistent/none.obj", MeshFormat::Obj), Err(Error::Io { .. })));
    }

    #[test]
    fn malformed_obj_is_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.obj");
        fs::write(&path, "v 0 0 zero\n").unwrap();
        assert!(matches!(load_mesh::<f64>(&path, MeshFormat::Obj), Err(Error::Parse { line: 1, .. })));
    }
}
