//! Deterministic test bodies with closed-form surface area and volume.
//!
//! Bodies of revolution (cylinder, cone, capsule) are built around the
//! x-axis; the torus revolves around z so that x-slices cut its ring.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Mat3, Point3, TriangleMesh};
use crate::isoperimetric::isoperimetric_quotient;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    Sphere,
    Ellipsoid,
    Box,
    Cylinder,
    Cone,
    Capsule,
    Torus,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 7] = [
        ShapeKind::Sphere,
        ShapeKind::Ellipsoid,
        ShapeKind::Box,
        ShapeKind::Cylinder,
        ShapeKind::Cone,
        ShapeKind::Capsule,
        ShapeKind::Torus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Sphere => "sphere",
            ShapeKind::Ellipsoid => "ellipsoid",
            ShapeKind::Box => "box",
            ShapeKind::Cylinder => "cylinder",
            ShapeKind::Cone => "cone",
            ShapeKind::Capsule => "capsule",
            ShapeKind::Torus => "torus",
        }
    }

    fn param_count(self) -> usize {
        match self {
            ShapeKind::Sphere => 1,
            ShapeKind::Ellipsoid | ShapeKind::Box => 3,
            ShapeKind::Cylinder | ShapeKind::Cone | ShapeKind::Capsule | ShapeKind::Torus => 2,
        }
    }

    /// Icosphere-based kinds take a subdivision level as resolution; the
    /// lathe-based kinds take a segment count.
    fn uses_subdivision(self) -> bool {
        matches!(self, ShapeKind::Sphere | ShapeKind::Ellipsoid)
    }

    pub fn default_resolution(self) -> usize {
        if self.uses_subdivision() {
            4
        } else {
            64
        }
    }
}

impl fmt::Display for ShapeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ShapeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ShapeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown shape kind {s:?}")))
    }
}

/// Parameters of a generated body.
///
/// | kind      | params                     | resolution            |
/// |-----------|----------------------------|-----------------------|
/// | sphere    | radius                     | subdivision level     |
/// | ellipsoid | semi-axes along x, y, z    | subdivision level     |
/// | box       | edge lengths along x, y, z | ignored               |
/// | cylinder  | radius, length             | segments around x     |
/// | cone      | base radius, height        | segments around x     |
/// | capsule   | radius, cylinder length    | segments around x     |
/// | torus     | major radius, minor radius | segments around z     |
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub params: Vec<f64>,
    pub resolution: usize,
}

const MAX_SUBDIVISION: usize = 8;
const MIN_SEGMENTS: usize = 8;

impl ShapeSpec {
    pub fn new(kind: ShapeKind, params: Vec<f64>, resolution: usize) -> Result<Self> {
        let spec = Self { kind, params, resolution };
        spec.check()?;
        Ok(spec)
    }

    fn check(&self) -> Result<()> {
        let n = self.kind.param_count();
        if self.params.len() != n {
            return Err(Error::invalid(format!("{} takes {n} parameter(s), got {}", self.kind, self.params.len())));
        }
        if self.params.iter().any(|&p| !(p > 0.0 && p.is_finite())) {
            return Err(Error::invalid(format!("{} parameters must be positive: {:?}", self.kind, self.params)));
        }
        if self.kind == ShapeKind::Torus && self.params[1] >= self.params[0] {
            return Err(Error::invalid("torus minor radius must be below its major radius"));
        }
        if self.kind.uses_subdivision() {
            if self.resolution > MAX_SUBDIVISION {
                return Err(Error::invalid(format!("subdivision level {} exceeds {MAX_SUBDIVISION}", self.resolution)));
            }
        } else if self.kind != ShapeKind::Box && self.resolution < MIN_SEGMENTS {
            return Err(Error::invalid(format!("resolution must be at least {MIN_SEGMENTS}, got {}", self.resolution)));
        }
        Ok(())
    }

    pub fn sphere(radius: f64, subdivisions: usize) -> Self {
        Self { kind: ShapeKind::Sphere, params: vec![radius], resolution: subdivisions }
    }

    pub fn ellipsoid(a: f64, b: f64, c: f64, subdivisions: usize) -> Self {
        Self { kind: ShapeKind::Ellipsoid, params: vec![a, b, c], resolution: subdivisions }
    }

    pub fn boxed(a: f64, b: f64, c: f64) -> Self {
        Self { kind: ShapeKind::Box, params: vec![a, b, c], resolution: 0 }
    }

    pub fn cube(a: f64) -> Self {
        Self::boxed(a, a, a)
    }

    pub fn cylinder(radius: f64, length: f64, segments: usize) -> Self {
        Self { kind: ShapeKind::Cylinder, params: vec![radius, length], resolution: segments }
    }

    pub fn cone(radius: f64, height: f64, segments: usize) -> Self {
        Self { kind: ShapeKind::Cone, params: vec![radius, height], resolution: segments }
    }

    pub fn capsule(radius: f64, length: f64, segments: usize) -> Self {
        Self { kind: ShapeKind::Capsule, params: vec![radius, length], resolution: segments }
    }

    pub fn torus(major: f64, minor: f64, segments: usize) -> Self {
        Self { kind: ShapeKind::Torus, params: vec![major, minor], resolution: segments }
    }

    /// The corpus every acceptance property is checked against.
    pub fn bundled() -> Vec<ShapeSpec> {
        vec![
            Self::sphere(1.0, 4),
            Self::ellipsoid(2.0, 1.0, 0.5, 4),
            Self::boxed(1.0, 2.0, 3.0),
            Self::cube(1.0),
            Self::cylinder(1.0, 2.0, 128),
            Self::cone(1.0, 1.0, 128),
            Self::capsule(0.5, 1.0, 64),
            Self::torus(2.0, 0.5, 64),
        ]
    }

    pub fn label(&self) -> String {
        let params: Vec<String> = self.params.iter().map(|p| p.to_string()).collect();
        format!("{}({})", self.kind, params.join(","))
    }
}

/// Closed-form measures of the smooth body a [`ShapeSpec`] approximates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalyticReference {
    pub s_exact: f64,
    pub v_exact: f64,
    pub quotient_exact: f64,
    /// Axis of rotational symmetry, when the body is one of revolution.
    pub rotational_axis: Option<[f64; 3]>,
    /// Set when `s_exact` is an approximation (ellipsoid).
    pub approximate: bool,
}

/// Exponent of Thomsen's ellipsoid surface approximation (±0.02 %).
const THOMSEN_P: f64 = 1.6075;

pub fn analytic_reference(spec: &ShapeSpec) -> Result<AnalyticReference> {
    spec.check()?;
    let p = &spec.params;
    let x_axis = Some([1.0, 0.0, 0.0]);
    let (s, v, axis, approximate) = match spec.kind {
        ShapeKind::Sphere => (4.0 * PI * p[0] * p[0], 4.0 / 3.0 * PI * p[0].powi(3), x_axis, false),
        ShapeKind::Ellipsoid => {
            let (a, b, c) = (p[0].powf(THOMSEN_P), p[1].powf(THOMSEN_P), p[2].powf(THOMSEN_P));
            let s = 4.0 * PI * ((a * b + a * c + b * c) / 3.0).powf(1.0 / THOMSEN_P);
            let axis = (p[1] == p[2]).then_some([1.0, 0.0, 0.0]);
            (s, 4.0 / 3.0 * PI * p[0] * p[1] * p[2], axis, true)
        }
        ShapeKind::Box => (2.0 * (p[0] * p[1] + p[0] * p[2] + p[1] * p[2]), p[0] * p[1] * p[2], None, false),
        ShapeKind::Cylinder => {
            let (r, h) = (p[0], p[1]);
            (2.0 * PI * r * r + 2.0 * PI * r * h, PI * r * r * h, x_axis, false)
        }
        ShapeKind::Cone => {
            let (r, h) = (p[0], p[1]);
            (PI * r * r + PI * r * r.hypot(h), PI * r * r * h / 3.0, x_axis, false)
        }
        ShapeKind::Capsule => {
            let (r, l) = (p[0], p[1]);
            (4.0 * PI * r * r + 2.0 * PI * r * l, 4.0 / 3.0 * PI * r.powi(3) + PI * r * r * l, x_axis, false)
        }
        ShapeKind::Torus => {
            let (big, small) = (p[0], p[1]);
            (4.0 * PI * PI * big * small, 2.0 * PI * PI * big * small * small, Some([0.0, 0.0, 1.0]), false)
        }
    };
    Ok(AnalyticReference {
        s_exact: s,
        v_exact: v,
        quotient_exact: isoperimetric_quotient(s, v)?,
        rotational_axis: axis,
        approximate,
    })
}

/// Tessellates `spec` into a watertight, outward-oriented mesh.
pub fn generate<T: Scalar>(spec: &ShapeSpec) -> Result<TriangleMesh<T>> {
    spec.check()?;
    let p = &spec.params;
    let (vertices, faces) = match spec.kind {
        ShapeKind::Sphere => {
            let (v, f) = icosphere(spec.resolution);
            (v.into_iter().map(|q| q.map(|c| c * p[0])).collect(), f)
        }
        ShapeKind::Ellipsoid => {
            let (v, f) = icosphere(spec.resolution);
            (v.into_iter().map(|q| [q[0] * p[0], q[1] * p[1], q[2] * p[2]]).collect(), f)
        }
        ShapeKind::Box => cuboid(p[0], p[1], p[2]),
        ShapeKind::Cylinder => {
            let (r, h) = (p[0], p[1]);
            lathe(&[(-0.5 * h, r), (0.5 * h, r)], spec.resolution, End::Disk, End::Disk)
        }
        ShapeKind::Cone => lathe(&[(p[1], p[0])], spec.resolution, End::Apex(0.0), End::Disk),
        ShapeKind::Capsule => {
            let (r, l) = (p[0], p[1]);
            let k = (spec.resolution / 4).max(2);
            let mut rings = Vec::with_capacity(2 * k);
            for i in 1..=k {
                let t = 0.5 * PI * i as f64 / k as f64;
                rings.push((-0.5 * l - r * t.cos(), r * t.sin()));
            }
            for i in (1..=k).rev() {
                let t = 0.5 * PI * i as f64 / k as f64;
                rings.push((0.5 * l + r * t.cos(), r * t.sin()));
            }
            lathe(&rings, spec.resolution, End::Apex(-0.5 * l - r), End::Apex(0.5 * l + r))
        }
        ShapeKind::Torus => torus(p[0], p[1], spec.resolution, (spec.resolution / 2).max(MIN_SEGMENTS)),
    };
    TriangleMesh::new(vertices.into_iter().map(Point3::from_f64).collect(), faces)
}

/// How a lathe closes at either end of its ring list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum End {
    /// Single vertex on the axis at this x.
    Apex(f64),
    /// Flat disk in the plane of the end ring.
    Disk,
}

/// Surface of revolution about x through rings `(x, radius)` with
/// `segments` vertices each.
pub(crate) fn lathe(rings: &[(f64, f64)], segments: usize, start: End, end: End) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let m = segments;
    let mut vertices = Vec::with_capacity(rings.len() * m + 2);
    for &(x, r) in rings {
        for j in 0..m {
            let t = 2.0 * PI * j as f64 / m as f64;
            vertices.push([x, r * t.cos(), r * t.sin()]);
        }
    }
    let ring = |i: usize, j: usize| i * m + j % m;
    let mut faces = Vec::with_capacity(2 * rings.len() * m);
    for i in 0..rings.len().saturating_sub(1) {
        for j in 0..m {
            let (a, b, c, d) = (ring(i, j), ring(i, j + 1), ring(i + 1, j + 1), ring(i + 1, j));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    let last = rings.len() - 1;
    let start_center = match start {
        End::Apex(x) => [x, 0.0, 0.0],
        End::Disk => [rings[0].0, 0.0, 0.0],
    };
    vertices.push(start_center);
    let c0 = vertices.len() - 1;
    for j in 0..m {
        faces.push([c0, ring(0, j + 1), ring(0, j)]);
    }
    let end_center = match end {
        End::Apex(x) => [x, 0.0, 0.0],
        End::Disk => [rings[last].0, 0.0, 0.0],
    };
    vertices.push(end_center);
    let c1 = vertices.len() - 1;
    for j in 0..m {
        faces.push([c1, ring(last, j), ring(last, j + 1)]);
    }
    (vertices, faces)
}

fn cuboid(a: f64, b: f64, c: f64) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let vertices = vec![
        [0.0, 0.0, 0.0],
        [a, 0.0, 0.0],
        [a, b, 0.0],
        [0.0, b, 0.0],
        [0.0, 0.0, c],
        [a, 0.0, c],
        [a, b, c],
        [0.0, b, c],
    ];
    let faces = vec![
        [0, 2, 1],
        [0, 3, 2],
        [4, 5, 6],
        [4, 6, 7],
        [0, 1, 5],
        [0, 5, 4],
        [1, 2, 6],
        [1, 6, 5],
        [2, 3, 7],
        [2, 7, 6],
        [3, 0, 4],
        [3, 4, 7],
    ];
    (vertices, faces)
}

/// Unit icosphere. The base icosahedron is turned by a fixed generic
/// rotation so no vertex lies on a coordinate plane.
fn icosphere(level: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    let base = [
        [-1.0, g, 0.0],
        [1.0, g, 0.0],
        [-1.0, -g, 0.0],
        [1.0, -g, 0.0],
        [0.0, -1.0, g],
        [0.0, 1.0, g],
        [0.0, -1.0, -g],
        [0.0, 1.0, -g],
        [g, 0.0, -1.0],
        [g, 0.0, 1.0],
        [-g, 0.0, -1.0],
        [-g, 0.0, 1.0],
    ];
    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    let turn: Mat3<f64> = Mat3::rotation(Point3::new(0.3, 0.5, 0.8).normalized().unwrap(), 0.4);
    let unit = |p: [f64; 3]| -> [f64; 3] {
        let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        [p[0] / n, p[1] / n, p[2] / n]
    };
    let mut vertices: Vec<[f64; 3]> = base.iter().map(|&p| turn.apply(Point3::from_f64(unit(p))).to_f64()).collect();

    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(faces.len() * 4);
        for &[a, b, c] in &faces {
            let mut mid = |i: usize, j: usize| -> usize {
                *midpoint.entry((i.min(j), i.max(j))).or_insert_with(|| {
                    let (p, q) = (vertices[i], vertices[j]);
                    vertices.push(unit([p[0] + q[0], p[1] + q[1], p[2] + q[2]]));
                    vertices.len() - 1
                })
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            next.extend([[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
        }
        faces = next;
    }
    (vertices, faces)
}

fn torus(major: f64, minor: f64, around: usize, tube: usize) -> (Vec<[f64; 3]>, Vec<[usize; 3]>) {
    let mut vertices = Vec::with_capacity(around * tube);
    for j in 0..around {
        // half-step offset keeps the vertices off the x = 0 and y = 0 planes
        let u = 2.0 * PI * (j as f64 + 0.5) / around as f64;
        for k in 0..tube {
            let v = 2.0 * PI * k as f64 / tube as f64;
            let w = major + minor * v.cos();
            vertices.push([w * u.cos(), w * u.sin(), minor * v.sin()]);
        }
    }
    let id = |j: usize, k: usize| (j % around) * tube + k % tube;
    let mut faces = Vec::with_capacity(2 * around * tube);
    for j in 0..around {
        for k in 0..tube {
            let (a, b, c, d) = (id(j, k), id(j + 1, k), id(j + 1, k + 1), id(j, k + 1));
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    (vertices, faces)
}
