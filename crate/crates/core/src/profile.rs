//! Section functionals sampled along x, and the solid of revolution with the
//! same section areas.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Point3, TriangleMesh};
use crate::scalar::{compensated_sum, fmt17, CompensatedSum, Scalar};
use crate::shapes::{lathe, End};
use crate::slicer::{incidence_tolerance, section_rates_faces, slab_areas, slice_at};

pub const MIN_SLICES: usize = 8;

/// Relative nudge applied to a grid plane that hits a vertex.
const NUDGE: f64 = 1e-9;
const MAX_NUDGES: usize = 16;
/// Ends whose section area is below this fraction of the largest section
/// are treated as closed regardless of the extrapolation test.
const END_DISK_FLOOR: f64 = 1e-6;
/// `|Q'| Δx > WALL_RATIO · Q` marks a near-vertical wall.
const WALL_RATIO: f64 = 0.1;

/// `Q`, `U` and slab areas on the midpoints of a uniform partition of
/// `[x0, x1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SlicedProfile<T> {
    pub x0: T,
    pub x1: T,
    /// Cell midpoints.
    pub x: Vec<T>,
    /// Section area at each midpoint.
    pub q: Vec<T>,
    /// Section perimeter at each midpoint.
    pub u: Vec<T>,
    /// Exact mesh surface area of each cell.
    pub slab: Vec<T>,
    /// Finite-difference derivative of `q`.
    pub qp: Vec<T>,
    /// Grid indices whose plane was moved off a vertex, with the x used.
    pub nudged: Vec<(usize, T)>,
    pub warnings: Vec<String>,
    /// Integrals over each half cell, present for profiles built from a mesh.
    pub cells: Option<CellIntegrals<T>>,
}

/// Integrals over the two halves `[edgeᵢ, xᵢ]` and `[xᵢ, edgeᵢ₊₁]` of every
/// cell, evaluated with exact section rates.
///
/// Between consecutive vertex planes `U` and `Q'` are affine in x and `Q` is
/// quadratic, so three-point Gauss rules on those pieces integrate `Q`
/// exactly and the square-root integrands to high accuracy.
#[derive(Debug, Clone, PartialEq)]
pub struct CellIntegrals<T> {
    /// `∫ Q dx`.
    pub volume: Vec<[T; 2]>,
    /// `∫ √(4πQ + Q'²) dx`, the area of the symmetrized body.
    pub lateral: Vec<[T; 2]>,
    /// `∫ √(U² + Q'²) dx`.
    pub ia_rhs: Vec<[T; 2]>,
    /// Total `|ΔQ|` over planes where facets parallel to the yz-plane make
    /// `Q` jump; already included in `lateral`.
    pub steps: T,
}

impl<T: Scalar> CellIntegrals<T> {
    pub fn total_volume(&self) -> T {
        compensated_sum(self.volume.iter().flatten().copied())
    }

    pub fn total_lateral(&self) -> T {
        compensated_sum(self.lateral.iter().flatten().copied())
    }

    /// `∫ √(U² + Q'²) dx` over each whole cell.
    pub fn ia_cells(&self) -> Vec<T> {
        self.ia_rhs.iter().map(|[a, b]| *a + *b).collect()
    }
}

/// Integral from `x0` up to each grid midpoint of half-cell values.
pub(crate) fn cumulative_to_midpoints_exact<T: Scalar>(halves: &[[T; 2]]) -> Vec<T> {
    let mut acc = CompensatedSum::new();
    halves
        .iter()
        .map(|[a, b]| {
            acc.add(*a);
            let here = acc.value();
            acc.add(*b);
            here
        })
        .collect()
}

/// Second-order differences: central inside, one-sided at both ends.
pub fn q_derivative<T: Scalar>(q: &[T], dx: T) -> Vec<T> {
    let n = q.len();
    assert!(n >= 3, "derivative needs at least 3 samples");
    let two_dx = T::of(2.0) * dx;
    let (three, four) = (T::of(3.0), T::of(4.0));
    (0..n)
        .map(|i| {
            if i == 0 {
                (-three * q[0] + four * q[1] - q[2]) / two_dx
            } else if i == n - 1 {
                (three * q[n - 1] - four * q[n - 2] + q[n - 3]) / two_dx
            } else {
                (q[i + 1] - q[i - 1]) / two_dx
            }
        })
        .collect()
}

impl<T: Scalar> SlicedProfile<T> {
    /// Profile from externally computed samples on the midpoint grid of
    /// `[x0, x1]` with `q.len()` cells.
    pub fn from_samples(x0: T, x1: T, q: Vec<T>, u: Vec<T>, slab: Vec<T>) -> Result<Self> {
        let n = q.len();
        if n < 3 || u.len() != n || slab.len() != n {
            return Err(Error::invalid("profile needs at least 3 samples of q, u and slab each"));
        }
        if !(x0 < x1) {
            return Err(Error::invalid("profile interval must be increasing"));
        }
        let dx = (x1 - x0) / T::of(n as f64);
        let x = (0..n).map(|i| x0 + dx * (T::of(i as f64) + T::of(0.5))).collect();
        let qp = q_derivative(&q, dx);
        let mut profile = Self { x0, x1, x, q, u, slab, qp, nudged: Vec::new(), warnings: Vec::new(), cells: None };
        profile.warnings = profile.wall_warnings();
        Ok(profile)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn dx(&self) -> T {
        (self.x1 - self.x0) / T::of(self.len() as f64)
    }

    /// `√(4πQ + Q'²)` at each midpoint: the lateral area density of the
    /// symmetrized body.
    pub fn revolution_density(&self) -> Vec<T> {
        let four_pi = T::of(4.0) * T::PI();
        self.q.iter().zip(&self.qp).map(|(&q, &qp)| (four_pi * q + qp * qp).sqrt()).collect()
    }

    /// Midpoint-rule `∫ Q dx`.
    pub fn integrated_volume(&self) -> T {
        compensated_sum(self.q.iter().copied()) * self.dx()
    }

    fn max_q(&self) -> T {
        self.q.iter().fold(T::zero(), |m, &q| m.max(q))
    }

    /// Whether the body ends in a flat face at `x0` (`start`) or `x1`.
    ///
    /// The section area is extrapolated linearly from the boundary midpoint
    /// to the boundary. A body closing smoothly (pole, apex) extrapolates to
    /// nearly zero; a flat end keeps most of its area.
    pub fn has_flat_end(&self, start: bool) -> bool {
        let n = self.len();
        let (q, qp, toward) = if start { (self.q[0], self.qp[0], -T::one()) } else { (self.q[n - 1], self.qp[n - 1], T::one()) };
        let at_boundary = q + toward * qp * self.dx() * T::of(0.5);
        q > T::of(END_DISK_FLOOR) * self.max_q() && at_boundary > T::of(0.5) * q
    }

    /// Disk areas closing the symmetrized body at `(x0, x1)`; zero for ends
    /// that close smoothly.
    pub fn end_disks(&self) -> (T, T) {
        let n = self.len();
        let start = if self.has_flat_end(true) { self.q[0] } else { T::zero() };
        let end = if self.has_flat_end(false) { self.q[n - 1] } else { T::zero() };
        (start, end)
    }

    fn wall_warnings(&self) -> Vec<String> {
        let dx = self.dx();
        (0..self.len())
            .filter(|&i| self.qp[i].abs() * dx > T::of(WALL_RATIO) * self.q[i])
            .map(|i| {
                format!(
                    "steep section change at x = {}: |Q'| dx = {:.3e} exceeds {WALL_RATIO} Q = {:.3e}",
                    fmt17(self.x[i].to_f64_lossy()),
                    (self.qp[i].abs() * dx).to_f64_lossy(),
                    (T::of(WALL_RATIO) * self.q[i]).to_f64_lossy()
                )
            })
            .collect()
    }

    /// CSV with header `x,Q,U,Qp,slab,sqrt4piQ_Qp2`.
    pub fn to_csv(&self) -> String {
        let density = self.revolution_density();
        let mut out = String::from("x,Q,U,Qp,slab,sqrt4piQ_Qp2\n");
        for i in 0..self.len() {
            let row = [self.x[i], self.q[i], self.u[i], self.qp[i], self.slab[i], density[i]]
                .map(|v| fmt17(v.to_f64_lossy()));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Slices `mesh` at the midpoints of `n` equal cells spanning its x-extent.
///
/// Slices are evaluated in parallel and assembled by grid index. A plane
/// that passes through a vertex is moved by `1e-9 (x1 − x0)` and the move is
/// recorded.
pub fn build_profile<T: Scalar>(mesh: &TriangleMesh<T>, n: usize) -> Result<SlicedProfile<T>> {
    if n < MIN_SLICES {
        return Err(Error::invalid(format!("need at least {MIN_SLICES} slices, got {n}")));
    }
    let (x0, x1) = mesh.bounds_x()?;
    let dx = (x1 - x0) / T::of(n as f64);
    let nudge = T::of(NUDGE) * (x1 - x0);

    let sections: Vec<Result<(T, T, Option<T>)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let nominal = x0 + dx * (T::of(i as f64) + T::of(0.5));
            let mut x = nominal;
            for _ in 0..MAX_NUDGES {
                match slice_at(mesh, x) {
                    Ok(s) => return Ok((s.area(), s.perimeter(), (x != nominal).then_some(x))),
                    Err(Error::DegenerateIncidence { .. }) => x = x + nudge,
                    Err(e) => return Err(e),
                }
            }
            slice_at(mesh, x).map(|s| (s.area(), s.perimeter(), Some(x)))
        })
        .collect();

    let mut q = Vec::with_capacity(n);
    let mut u = Vec::with_capacity(n);
    let mut nudged = Vec::new();
    for (i, s) in sections.into_iter().enumerate() {
        let (area, perimeter, moved) = s?;
        if !(area > T::zero()) {
            let x = x0 + dx * (T::of(i as f64) + T::of(0.5));
            return Err(Error::NonPositiveArea { x: x.to_f64_lossy(), area: area.to_f64_lossy() });
        }
        q.push(area);
        u.push(perimeter);
        if let Some(x) = moved {
            nudged.push((i, x));
        }
    }

    let edges: Vec<T> = (0..=n).map(|i| if i == n { x1 } else { x0 + dx * T::of(i as f64) }).collect();
    let slab = slab_areas(mesh, &edges);
    let mut profile = SlicedProfile::from_samples(x0, x1, q, u, slab)?;
    profile.cells = Some(cell_integrals(mesh, &edges, &profile.x)?);
    for &(i, x) in &nudged {
        profile.warnings.push(format!(
            "slice {i} moved off a vertex to x = {}",
            fmt17(x.to_f64_lossy())
        ));
    }
    profile.nudged = nudged;
    Ok(profile)
}

const GAUSS_NODES: [f64; 3] = [-0.774_596_669_241_483_4, 0.0, 0.774_596_669_241_483_4];
const GAUSS_WEIGHTS: [f64; 3] = [5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0];

/// Gauss integrals of the section functionals over the half cells split at
/// `mids`, with vertex planes as additional breakpoints.
fn cell_integrals<T: Scalar>(mesh: &TriangleMesh<T>, edges: &[T], mids: &[T]) -> Result<CellIntegrals<T>> {
    let verts = mesh.vertices();
    let mut vx: Vec<T> = verts.iter().map(|v| v.x).collect();
    vx.sort_by(|a, b| a.partial_cmp(b).expect("finite vertex coordinates"));
    vx.dedup();
    // pieces this narrow hold no measurable area and cannot be sampled off
    // their vertex planes
    let min_width = T::of(1e3) * incidence_tolerance(mesh);
    let face_range: Vec<(T, T)> = mesh
        .faces()
        .iter()
        .map(|f| {
            let xs = f.map(|v| verts[v].x);
            (xs[0].min(xs[1]).min(xs[2]), xs[0].max(xs[1]).max(xs[2]))
        })
        .collect();
    let four_pi = T::of(4.0) * T::PI();

    let per_cell: Vec<Result<[[T; 2]; 3]>> = (0..mids.len())
        .into_par_iter()
        .map(|i| {
            let (a, b) = (edges[i], edges[i + 1]);
            let faces: Vec<usize> =
                (0..face_range.len()).filter(|&f| face_range[f].0 < b && face_range[f].1 > a).collect();
            let mut out = [[T::zero(); 2]; 3];
            for (h, (lo, hi)) in [(a, mids[i]), (mids[i], b)].into_iter().enumerate() {
                let start = vx.partition_point(|&v| v <= lo);
                let end = vx.partition_point(|&v| v < hi);
                let mut breaks = Vec::with_capacity(end - start + 2);
                breaks.push(lo);
                breaks.extend_from_slice(&vx[start..end]);
                breaks.push(hi);
                let (mut vol, mut lat, mut ia) = (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
                for w in breaks.windows(2) {
                    let half_width = (w[1] - w[0]) * T::of(0.5);
                    if w[1] - w[0] <= min_width {
                        continue;
                    }
                    let centre = (w[0] + w[1]) * T::of(0.5);
                    for (&node, &weight) in GAUSS_NODES.iter().zip(&GAUSS_WEIGHTS) {
                        let r = section_rates_faces(mesh, faces.iter().copied(), centre + half_width * T::of(node))?;
                        let q = r.area.max(T::zero());
                        let wt = T::of(weight) * half_width;
                        vol.add(wt * q);
                        lat.add(wt * (four_pi * q + r.area_rate * r.area_rate).sqrt());
                        ia.add(wt * r.perimeter.hypot(r.area_rate));
                    }
                }
                out[0][h] = vol.value();
                out[1][h] = lat.value();
                out[2][h] = ia.value();
            }
            Ok(out)
        })
        .collect();

    let mut cells = CellIntegrals { volume: Vec::new(), lateral: Vec::new(), ia_rhs: Vec::new(), steps: T::zero() };
    for c in per_cell {
        let [v, l, r] = c?;
        cells.volume.push(v);
        cells.lateral.push(l);
        cells.ia_rhs.push(r);
    }

    // a jump of Q at a plane adds |ΔQ| of flat annulus or disk to the
    // symmetrized body
    let mut flat: Vec<(T, T)> = (0..face_range.len())
        .filter(|&f| face_range[f].0 == face_range[f].1)
        .map(|f| (face_range[f].0, mesh.face_cross(f).x * T::of(0.5)))
        .collect();
    flat.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite vertex coordinates"));
    let mut steps = CompensatedSum::new();
    for group in flat.chunk_by(|a, b| a.0 == b.0) {
        let jump = compensated_sum(group.iter().map(|g| g.1)).abs();
        let x = group[0].0;
        let cell = edges[1..edges.len() - 1].partition_point(|&e| e <= x);
        let half = usize::from(x >= mids[cell]);
        cells.lateral[cell][half] = cells.lateral[cell][half] + jump;
        steps.add(jump);
    }
    cells.steps = steps.value();
    Ok(cells)
}

/// Lateral area `Σ √(4πQ + Q'²) Δx` of the symmetrized body and the total
/// area of its flat end disks.
pub fn revolution_lateral_area<T: Scalar>(profile: &SlicedProfile<T>) -> (T, T) {
    let lateral = compensated_sum(profile.revolution_density()) * profile.dx();
    let (a, b) = profile.end_disks();
    (lateral, a + b)
}

/// Solid of revolution about x whose section at each grid point has the
/// profile's area.
#[derive(Debug, Clone, PartialEq)]
pub struct RevolutionBody<T> {
    pub x: Vec<T>,
    /// `√(Q/π)` at each grid point.
    pub r: Vec<T>,
    pub lateral_area: T,
    pub end_disk_area: T,
    pub volume: T,
}

impl<T: Scalar> RevolutionBody<T> {
    pub fn surface_area(&self) -> T {
        self.lateral_area + self.end_disk_area
    }
}

pub fn revolution_body<T: Scalar>(profile: &SlicedProfile<T>) -> RevolutionBody<T> {
    let (lateral_area, end_disk_area) = revolution_lateral_area(profile);
    RevolutionBody {
        x: profile.x.clone(),
        r: profile.q.iter().map(|&q| (q / T::PI()).sqrt()).collect(),
        lateral_area,
        end_disk_area,
        volume: profile.integrated_volume(),
    }
}

/// Triangulates the symmetrized body with `segments` vertices per ring.
///
/// Rings sit at the grid midpoints with the radius that gives the polygon
/// the section's area. Smooth ends close with an apex at `x0`/`x1`, flat ends
/// with a disk there.
pub fn revolve_mesh<T: Scalar>(profile: &SlicedProfile<T>, segments: usize) -> Result<TriangleMesh<T>> {
    if segments < 3 {
        return Err(Error::invalid(format!("need at least 3 segments, got {segments}")));
    }
    let m = segments as f64;
    let polygon_factor = 2.0 / (m * (2.0 * std::f64::consts::PI / m).sin());
    let mut rings: Vec<(f64, f64)> = profile
        .x
        .iter()
        .zip(&profile.q)
        .map(|(&x, &q)| (x.to_f64_lossy(), (q.to_f64_lossy() * polygon_factor).sqrt()))
        .collect();
    let (x0, x1) = (profile.x0.to_f64_lossy(), profile.x1.to_f64_lossy());
    let start = if profile.has_flat_end(true) {
        rings.insert(0, (x0, rings[0].1));
        End::Disk
    } else {
        End::Apex(x0)
    };
    let end = if profile.has_flat_end(false) {
        rings.push((x1, rings[rings.len() - 1].1));
        End::Disk
    } else {
        End::Apex(x1)
    };
    let (vertices, faces) = lathe(&rings, segments, start, end);
    TriangleMesh::new(vertices.into_iter().map(Point3::from_f64).collect(), faces)
}

/// Cumulative midpoint sums `Σ_{j<i} vⱼ Δx + vᵢ Δx / 2`, i.e. the integral
/// from `x0` up to each grid point.
pub(crate) fn cumulative_to_midpoints<T: Scalar>(values: &[T], dx: T) -> Vec<T> {
    let half = T::of(0.5);
    let mut acc = CompensatedSum::new();
    values
        .iter()
        .map(|&v| {
            let here = acc.value() + v * dx * half;
            acc.add(v * dx);
            here
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::{orient_axis, Tilt};
    use crate::shapes::{generate, ShapeSpec};

    fn mesh(spec: &ShapeSpec) -> TriangleMesh<f64> {
        generate(spec).unwrap()
    }

    fn analytic(n: usize, q: impl Fn(f64) -> f64, x0: f64, x1: f64) -> SlicedProfile<f64> {
        let dx = (x1 - x0) / n as f64;
        let qs: Vec<f64> = (0..n).map(|i| q(x0 + (i as f64 + 0.5) * dx)).collect();
        let us = qs.iter().map(|&a| (4.0 * PI * a).sqrt()).collect();
        let slab = vec![0.0; n];
        SlicedProfile::from_samples(x0, x1, qs, us, slab).unwrap()
    }

    #[test]
    fn derivative_is_exact_for_affine_and_quadratic() {
        let q: Vec<f64> = (0..10).map(|i| 3.0 + 0.5 * i as f64).collect();
        assert!(q_derivative(&q, 0.5).iter().all(|&d| (d - 1.0).abs() < 1e-14));
        let cyl = analytic(128, |_| PI, -1.0, 1.0);
        assert!(cyl.qp.iter().all(|&d| d == 0.0));
        // sphere: Q = π(1 − x²), Q' = −2πx
        let sphere = analytic(256, |x| PI * (1.0 - x * x), -1.0, 1.0);
        for (x, qp) in sphere.x.iter().zip(&sphere.qp) {
            assert!((qp + 2.0 * PI * x).abs() < 1e-10, "{x}");
        }
        // cone Q = πx²: Q'(0.5) = π
        let cone = analytic(64, |x| PI * x * x, 0.0, 1.0);
        let mid = cone.x.iter().position(|&x| (x - 0.5 + 1.0 / 128.0).abs() < 1e-12).unwrap();
        assert!((cone.qp[mid] - 2.0 * PI * cone.x[mid]).abs() < 1e-12);
    }

    #[test]
    fn analytic_sphere_lateral_is_four_pi() {
        let p = analytic(512, |x| PI * (1.0 - x * x), -1.0, 1.0);
        let (lateral, disks) = revolution_lateral_area(&p);
        assert!((lateral - 4.0 * PI).abs() < 1e-9, "{lateral}");
        assert_eq!(disks, 0.0);
    }

    #[test]
    fn sphere_profile_matches_closed_forms() {
        let p = build_profile(&mesh(&ShapeSpec::sphere(1.0, 4)), 256).unwrap();
        let v = p.integrated_volume();
        assert!((v - 4.0 / 3.0 * PI).abs() / (4.0 / 3.0 * PI) < 1e-2, "{v}");
        let mid = p.len() / 2;
        assert!((p.q[mid] - PI).abs() / PI < 1e-2);
        assert!((p.u[mid] - 2.0 * PI).abs() / (2.0 * PI) < 1e-2);
        assert_eq!(p.end_disks(), (0.0, 0.0));
        let total: f64 = compensated_sum(p.slab.iter().copied());
        let s = mesh(&ShapeSpec::sphere(1.0, 4)).surface_area();
        assert!((total - s).abs() <= 1e-9 * s);
    }

    #[test]
    fn cylinder_profile_is_constant() {
        let m = mesh(&ShapeSpec::cylinder(1.0, 2.0, 128));
        let (m, _) = orient_axis(&m, Point3::new(1.0, 0.0, 0.0), Tilt::Auto).unwrap();
        let p = build_profile(&m, 128).unwrap();
        let polygon = 64.0 * (2.0 * PI / 128.0).sin();
        for i in 1..p.len() - 1 {
            assert!((p.q[i] - polygon).abs() < 1e-4, "{i}: {}", p.q[i]);
            assert!(p.qp[i].abs() < 1e-2, "{i}: {}", p.qp[i]);
        }
        assert!(p.has_flat_end(true) && p.has_flat_end(false));
        let (lateral, disks) = revolution_lateral_area(&p);
        assert!((lateral - 4.0 * PI).abs() / (4.0 * PI) < 1e-2, "{lateral}");
        assert!((disks - 2.0 * PI).abs() / (2.0 * PI) < 1e-2, "{disks}");
    }

    #[test]
    fn box_along_its_long_axis() {
        let m = mesh(&ShapeSpec::boxed(1.0, 2.0, 3.0));
        let (m, _) = orient_axis(&m, Point3::new(0.0, 0.0, 1.0), Tilt::Auto).unwrap();
        let p = build_profile(&m, 64).unwrap();
        for i in 1..p.len() - 1 {
            assert!((p.q[i] - 2.0).abs() < 1e-5 && (p.u[i] - 6.0).abs() < 1e-5, "{i}");
        }
        let (lateral, disks) = revolution_lateral_area(&p);
        // 3 √(8π) + 2·2
        assert!((lateral - 3.0 * (8.0 * PI).sqrt()).abs() < 0.05, "{lateral}");
        assert!((disks - 4.0).abs() < 1e-4);
        assert!(((8.0 * PI).sqrt() - 5.01326).abs() < 1e-5);
    }

    #[test]
    fn cell_integrals_recover_mesh_volume() {
        for spec in [ShapeSpec::sphere(1.0, 3), ShapeSpec::torus(2.0, 0.5, 32), ShapeSpec::cone(1.0, 1.0, 32)] {
            let m = mesh(&spec);
            let cells = build_profile(&m, 64).unwrap().cells.unwrap();
            let v = m.volume().unwrap();
            assert!((cells.total_volume() - v).abs() <= 1e-12 * v, "{}", spec.label());
        }
    }

    #[test]
    fn flat_ends_become_steps() {
        // untilted: the end disks sit exactly on x0 and x1
        let m = mesh(&ShapeSpec::cylinder(1.0, 2.0, 64));
        let p = build_profile(&m, 32).unwrap();
        let cells = p.cells.as_ref().unwrap();
        let disk = p.q[0];
        assert!((cells.steps - 2.0 * disk).abs() < 1e-12);
        let lateral = p.u[0] * 2.0 / p.u[0] * (4.0 * PI * disk).sqrt();
        assert!((cells.total_lateral() - (lateral + 2.0 * disk)).abs() < 1e-9, "{}", cells.total_lateral());

        // tilted: the disks turn into steep ramps with the same area
        let (t, _) = orient_axis(&m, Point3::new(1.0, 0.0, 0.0), Tilt::Auto).unwrap();
        let tilted = build_profile(&t, 32).unwrap().cells.unwrap();
        assert_eq!(tilted.steps, 0.0);
        assert!((tilted.total_lateral() - cells.total_lateral()).abs() < 1e-3 * cells.total_lateral(), "{}", tilted.total_lateral());
    }

    #[test]
    fn exact_lateral_never_exceeds_mesh_area() {
        for spec in ShapeSpec::bundled() {
            let m = mesh(&spec);
            let (t, _) = orient_axis(&m, Point3::new(1.0, 0.0, 0.0), Tilt::Auto).unwrap();
            let p = build_profile(&t, 64).unwrap();
            let cells = p.cells.as_ref().unwrap();
            let s = t.surface_area();
            assert!(cells.total_lateral() <= s * (1.0 + 1e-9), "{}", spec.label());
            for (slab, rhs) in p.slab.iter().zip(cells.ia_cells()) {
                assert!(*slab >= rhs - 1e-9 * slab, "{}", spec.label());
            }
        }
    }

    #[test]
    fn too_few_slices_is_rejected() {
        assert!(build_profile(&mesh(&ShapeSpec::cube(1.0)), 4).is_err());
    }

    #[test]
    fn volume_converges_second_order() {
        let m = mesh(&ShapeSpec::sphere(1.0, 5));
        let v = m.volume().unwrap();
        let e1 = (build_profile(&m, 64).unwrap().integrated_volume() - v).abs();
        let e2 = (build_profile(&m, 128).unwrap().integrated_volume() - v).abs();
        assert!(e1 / e2 > 3.0, "{e1} {e2}");
    }

    #[test]
    fn revolved_sphere_keeps_volume_and_area() {
        let m = mesh(&ShapeSpec::sphere(1.0, 4));
        let p = build_profile(&m, 128).unwrap();
        let body = revolution_body(&p);
        let r = revolve_mesh(&p, 64).unwrap();
        assert!(r.validate().is_valid(), "{}", r.validate());
        let v = r.volume().unwrap();
        assert!((v - body.volume).abs() / body.volume < 1e-2, "{v}");
        assert!((r.surface_area() - body.surface_area()).abs() / body.surface_area() < 1e-2);
    }

    #[test]
    fn revolved_box_is_a_cylinder_of_equal_volume() {
        let m = mesh(&ShapeSpec::boxed(1.0, 2.0, 3.0));
        let (m, _) = orient_axis(&m, Point3::new(0.0, 0.0, 1.0), Tilt::Auto).unwrap();
        let p = build_profile(&m, 128).unwrap();
        let r = revolve_mesh(&p, 64).unwrap();
        assert!(r.validate().is_valid());
        assert!((r.volume().unwrap() - 6.0).abs() / 6.0 < 1e-2);
        assert!(r.surface_area() < 22.0);
    }

    #[test]
    fn cumulative_midpoints() {
        let c = cumulative_to_midpoints(&[1.0f64, 2.0, 3.0], 0.5);
        assert_eq!(c, vec![0.25, 1.0, 2.25]);
    }

    #[test]
    fn profile_csv_layout() {
        let p = analytic(8, |x| PI * (1.0 - x * x), -1.0, 1.0);
        let csv = p.to_csv();
        assert!(csv.starts_with("x,Q,U,Qp,slab,sqrt4piQ_Qp2\n"));
        assert_eq!(csv.lines().count(), 9);
        assert!(csv.lines().skip(1).all(|l| l.split(',').count() == 6));
    }
}
