use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::Serialize;

use super::vector::{Mat3, Point3};
use crate::error::{Error, Result};
use crate::scalar::{compensated_sum, Scalar};

/// Closed triangle surface. Faces wind counterclockwise seen from outside.
///
/// Construction only checks that indices are in range; use
/// [`TriangleMesh::validate`] (or [`TriangleMesh::validated`]) for the
/// watertightness and orientation invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleMesh<T> {
    vertices: Vec<Point3<T>>,
    faces: Vec<[usize; 3]>,
}

/// One broken mesh invariant.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// Undirected edge used by a single face.
    BoundaryEdge { a: usize, b: usize },
    /// Undirected edge used by more than two faces.
    NonManifoldEdge { a: usize, b: usize, count: usize },
    /// Faces whose winding disagrees with the rest of their component.
    InconsistentOrientation { faces: Vec<usize> },
    DegenerateFace { face: usize },
    NonPositiveVolume { volume: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::BoundaryEdge { a, b } => write!(f, "boundary edge ({a}, {b})"),
            Violation::NonManifoldEdge { a, b, count } => {
                write!(f, "edge ({a}, {b}) shared by {count} faces")
            }
            Violation::InconsistentOrientation { faces } => {
                write!(f, "inconsistently oriented faces {faces:?}")
            }
            Violation::DegenerateFace { face } => write!(f, "degenerate face {face}"),
            Violation::NonPositiveVolume { volume } => {
                write!(f, "non-positive signed volume {volume}")
            }
        }
    }
}

/// Result of [`TriangleMesh::validate`]; empty means valid.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.violations.iter().filter_map(|v| match v {
            Violation::BoundaryEdge { a, b } => Some((*a, *b)),
            _ => None,
        })
    }

    pub fn is_watertight(&self) -> bool {
        !self
            .violations
            .iter()
            .any(|v| matches!(v, Violation::BoundaryEdge { .. } | Violation::NonManifoldEdge { .. }))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        let shown: Vec<String> = self.violations.iter().take(16).map(|v| v.to_string()).collect();
        write!(f, "{} violation(s): {}", self.violations.len(), shown.join("; "))?;
        if self.violations.len() > 16 {
            write!(f, "; ...")?;
        }
        Ok(())
    }
}

impl<T: Scalar> TriangleMesh<T> {
    /// Builds a mesh, rejecting out-of-range indices. No other checks.
    pub fn new(vertices: Vec<Point3<T>>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let n = vertices.len();
        if let Some((i, f)) = faces.iter().enumerate().find(|(_, f)| f.iter().any(|&v| v >= n)) {
            return Err(Error::invalid(format!("face {i} {f:?} indexes past {n} vertices")));
        }
        if vertices.iter().any(|p| !(p.x.is_finite() && p.y.is_finite() && p.z.is_finite())) {
            return Err(Error::invalid("non-finite vertex coordinate"));
        }
        Ok(Self { vertices, faces })
    }

    /// Builds a mesh and requires an empty validation report.
    pub fn validated(vertices: Vec<Point3<T>>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let mesh = Self::new(vertices, faces)?;
        let report = mesh.validate();
        if report.is_valid() {
            Ok(mesh)
        } else {
            Err(Error::InvalidMesh(report))
        }
    }

    pub fn vertices(&self) -> &[Point3<T>] {
        &self.vertices
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    #[inline]
    pub fn triangle(&self, face: usize) -> [Point3<T>; 3] {
        let [a, b, c] = self.faces[face];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Area-weighted normal `(v₁ − v₀) × (v₂ − v₀)`, twice the face area long.
    #[inline]
    pub fn face_cross(&self, face: usize) -> Point3<T> {
        let [a, b, c] = self.triangle(face);
        (b - a).cross(c - a)
    }

    pub fn face_area(&self, face: usize) -> T {
        self.face_cross(face).norm() * T::of(0.5)
    }

    /// Outward unit normal, `None` for a degenerate face.
    pub fn face_normal(&self, face: usize) -> Option<Point3<T>> {
        self.face_cross(face).normalized()
    }

    /// Applies `f` to every vertex, keeping connectivity.
    pub fn map_vertices(&self, f: impl Fn(Point3<T>) -> Point3<T>) -> Self {
        Self { vertices: self.vertices.iter().map(|&p| f(p)).collect(), faces: self.faces.clone() }
    }

    pub fn rotated(&self, m: &Mat3<T>) -> Self {
        self.map_vertices(|p| m.apply(p))
    }

    /// Σ ½|e₁ × e₂| in face order, compensated.
    pub fn surface_area(&self) -> T {
        compensated_sum((0..self.faces.len()).map(|f| self.face_area(f)))
    }

    /// Signed volume by the divergence theorem, Σ v₀·(v₁ × v₂)/6.
    ///
    /// Vertices are taken relative to the first vertex so the sum does not
    /// lose digits for meshes far from the origin.
    pub fn signed_volume(&self) -> T {
        let Some(&origin) = self.vertices.first() else {
            return T::zero();
        };
        let sixth = T::one() / T::of(6.0);
        compensated_sum(self.faces.iter().map(|&[a, b, c]| {
            let (p, q, r) = (self.vertices[a] - origin, self.vertices[b] - origin, self.vertices[c] - origin);
            p.dot(q.cross(r)) * sixth
        }))
    }

    /// Enclosed volume; errors when the signed volume is not positive
    /// (typically inward-facing winding).
    pub fn volume(&self) -> Result<T> {
        let v = self.signed_volume();
        if v > T::zero() {
            Ok(v)
        } else {
            Err(Error::InvalidMesh(ValidationReport {
                violations: vec![Violation::NonPositiveVolume { volume: v.to_f64_lossy() }],
            }))
        }
    }

    /// Smallest and largest vertex x-coordinate.
    pub fn bounds_x(&self) -> Result<(T, T)> {
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for p in &self.vertices {
            lo = lo.min(p.x);
            hi = hi.max(p.x);
        }
        if !(lo < hi) {
            return Err(Error::FlatMesh(lo.to_f64_lossy()));
        }
        Ok((lo, hi))
    }

    /// Axis-aligned bounding box diagonal.
    pub fn extent(&self) -> T {
        let mut lo = Point3::new(T::infinity(), T::infinity(), T::infinity());
        let mut hi = -lo;
        for p in &self.vertices {
            lo = Point3::new(lo.x.min(p.x), lo.y.min(p.y), lo.z.min(p.z));
            hi = Point3::new(hi.x.max(p.x), hi.y.max(p.y), hi.z.max(p.z));
        }
        if self.vertices.is_empty() {
            T::zero()
        } else {
            (hi - lo).norm()
        }
    }

    /// Checks watertightness, orientation consistency, degenerate faces and
    /// the sign of the enclosed volume.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        // undirected edge -> faces using it, with the direction each face uses
        let mut edges: BTreeMap<(usize, usize), Vec<(usize, bool)>> = BTreeMap::new();
        for (fi, f) in self.faces.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (f[k], f[(k + 1) % 3]);
                let key = (a.min(b), a.max(b));
                edges.entry(key).or_default().push((fi, a < b));
            }
        }

        let mut manifold = true;
        for (&(a, b), uses) in &edges {
            match uses.len() {
                2 => {}
                1 => {
                    manifold = false;
                    violations.push(Violation::BoundaryEdge { a, b });
                }
                count => {
                    manifold = false;
                    violations.push(Violation::NonManifoldEdge { a, b, count });
                }
            }
        }

        let flipped = self.orientation_outliers(&edges);
        if !flipped.is_empty() {
            violations.push(Violation::InconsistentOrientation { faces: flipped });
        }

        let scale = self.extent();
        let area_floor = T::epsilon() * scale * scale;
        for fi in 0..self.faces.len() {
            let [a, b, c] = self.faces[fi];
            if a == b || b == c || a == c || !(self.face_area(fi) > area_floor) {
                violations.push(Violation::DegenerateFace { face: fi });
            }
        }

        // sign of the volume is only meaningful for a closed surface
        if manifold && !self.faces.is_empty() {
            let v = self.signed_volume();
            if !(v > T::zero()) {
                violations.push(Violation::NonPositiveVolume { volume: v.to_f64_lossy() });
            }
        }
        ValidationReport { violations }
    }

    /// Propagates a winding from the first face of each edge-connected
    /// component and returns the faces in the minority class of every
    /// component that cannot be oriented consistently as given.
    fn orientation_outliers(&self, edges: &BTreeMap<(usize, usize), Vec<(usize, bool)>>) -> Vec<usize> {
        let nf = self.faces.len();
        let mut adjacency: Vec<Vec<(usize, bool)>> = vec![Vec::new(); nf];
        for uses in edges.values() {
            if uses.len() != 2 {
                continue;
            }
            let (f0, d0) = uses[0];
            let (f1, d1) = uses[1];
            // same direction on a shared edge means the pair disagrees
            let agree = d0 != d1;
            adjacency[f0].push((f1, agree));
            adjacency[f1].push((f0, agree));
        }

        let mut flip: Vec<Option<bool>> = vec![None; nf];
        let mut outliers = Vec::new();
        for seed in 0..nf {
            if flip[seed].is_some() {
                continue;
            }
            let mut component = vec![seed];
            let mut conflicting = false;
            flip[seed] = Some(false);
            let mut queue = VecDeque::from([seed]);
            while let Some(f) = queue.pop_front() {
                let ff = flip[f].unwrap();
                for &(g, agree) in &adjacency[f] {
                    let want = if agree { ff } else { !ff };
                    match flip[g] {
                        None => {
                            flip[g] = Some(want);
                            component.push(g);
                            queue.push_back(g);
                        }
                        Some(have) if have != want => conflicting = true,
                        _ => {}
                    }
                }
            }
            let flipped: Vec<usize> = component.iter().copied().filter(|&f| flip[f] == Some(true)).collect();
            if !flipped.is_empty() && flipped.len() * 2 <= component.len() {
                outliers.extend(flipped);
            } else if !flipped.is_empty() {
                outliers.extend(component.iter().copied().filter(|&f| flip[f] == Some(false)));
            } else if conflicting {
                // non-orientable component; report it whole
                outliers.extend(component);
            }
        }
        outliers.sort_unstable();
        outliers
    }
}
