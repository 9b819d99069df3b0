//! Plane sections `x = const` of a closed mesh.
//!
//! Each triangle crossing the plane yields one directed segment. A crossing
//! point is identified by the mesh edge it lies on, and it is computed from
//! that edge's endpoints in canonical order, so the two faces sharing an
//! edge produce bit-identical points and loops close without a tolerance.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::geometry::{Point2, Point3, TriangleMesh};
use crate::scalar::{compensated_sum, fmt17, CompensatedSum, Scalar};

/// Closed polygon in a slicing plane; the last point connects to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarLoop<T> {
    points: Vec<Point2<T>>,
    signed_area: T,
    length: T,
}

impl<T: Scalar> PlanarLoop<T> {
    /// Builds a loop from at least three points.
    pub fn new(points: Vec<Point2<T>>) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::invalid(format!("a loop needs 3 points, got {}", points.len())));
        }
        let signed_area = shoelace(&points);
        let length = compensated_sum((0..points.len()).map(|i| points[i].dist(points[(i + 1) % points.len()])));
        Ok(Self { points, signed_area, length })
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    /// Shoelace area; positive for counterclockwise loops.
    pub fn signed_area(&self) -> T {
        self.signed_area
    }

    pub fn length(&self) -> T {
        self.length
    }

    fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        Self { points, signed_area: -self.signed_area, length: self.length }
    }

    /// Even–odd containment of `p`.
    pub fn contains(&self, p: Point2<T>) -> bool {
        let n = self.points.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (a, b) = (self.points[i], self.points[j]);
            if (a.z > p.z) != (b.z > p.z) {
                let y_cross = a.y + (p.z - a.z) * (b.y - a.y) / (b.z - a.z);
                if p.y < y_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }
}

/// ½ Σ (yᵢ zᵢ₊₁ − yᵢ₊₁ zᵢ) over the closed polygon.
pub fn shoelace<T: Scalar>(points: &[Point2<T>]) -> T {
    let n = points.len();
    compensated_sum((0..n).map(|i| points[i].cross(points[(i + 1) % n]))) * T::of(0.5)
}

/// All loops cut from a body by the plane at `x`.
///
/// Loops are oriented so the body lies to their left: outer boundaries run
/// counterclockwise in `(y, z)` and holes clockwise, which makes the
/// enclosed area `Q` positive.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossSection<T> {
    pub x: T,
    loops: Vec<PlanarLoop<T>>,
    area: T,
    perimeter: T,
}

impl<T: Scalar> CrossSection<T> {
    /// Assembles a section from loops, orienting each by containment parity.
    pub fn from_loops(x: T, loops: Vec<PlanarLoop<T>>) -> Self {
        let depth: Vec<usize> = (0..loops.len())
            .map(|i| {
                let probe = loops[i].points[0];
                (0..loops.len()).filter(|&j| j != i && loops[j].contains(probe)).count()
            })
            .collect();
        let loops: Vec<PlanarLoop<T>> = loops
            .into_iter()
            .zip(depth)
            .map(|(l, d)| {
                let want_ccw = d % 2 == 0;
                if (l.signed_area > T::zero()) == want_ccw {
                    l
                } else {
                    l.reversed()
                }
            })
            .collect();
        let area = compensated_sum(loops.iter().map(|l| l.signed_area));
        let perimeter = compensated_sum(loops.iter().map(|l| l.length));
        Self { x, loops, area, perimeter }
    }

    pub fn loops(&self) -> &[PlanarLoop<T>] {
        &self.loops
    }

    /// Enclosed area `Q(x)`.
    pub fn area(&self) -> T {
        self.area
    }

    /// Total boundary length `U(x)`.
    pub fn perimeter(&self) -> T {
        self.perimeter
    }

    /// CSV with header `loop_id,point_id,y,z`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("loop_id,point_id,y,z\n");
        for (li, l) in self.loops.iter().enumerate() {
            for (pi, p) in l.points.iter().enumerate() {
                out.push_str(&format!("{li},{pi},{},{}\n", fmt17(p.y.to_f64_lossy()), fmt17(p.z.to_f64_lossy())));
            }
        }
        out
    }
}

/// Distance from a vertex to the slicing plane below which the plane counts
/// as passing through it.
pub fn incidence_tolerance<T: Scalar>(mesh: &TriangleMesh<T>) -> T {
    T::roundoff(1e-12) * mesh.extent().max(T::one())
}

/// Cuts `mesh` with the plane at `x`.
pub fn slice_at<T: Scalar>(mesh: &TriangleMesh<T>, x: T) -> Result<CrossSection<T>> {
    slice_faces(mesh, 0..mesh.faces().len(), x)
}

/// Like [`slice_at`] but only looks at `faces`, which must include every face
/// the plane crosses.
pub fn slice_faces<T: Scalar>(
    mesh: &TriangleMesh<T>,
    faces: impl IntoIterator<Item = usize>,
    x: T,
) -> Result<CrossSection<T>> {
    let verts = mesh.vertices();
    let tol = incidence_tolerance(mesh);
    let (x0, x1) = mesh.bounds_x()?;
    let xf = x.to_f64_lossy();

    struct Segment<T> {
        from: (usize, usize),
        to: (usize, usize),
        start: Point2<T>,
    }

    let crossing = |a: usize, b: usize| -> Point2<T> {
        let (i, j) = (a.min(b), a.max(b));
        let (p, q) = (verts[i], verts[j]);
        let t = (x - p.x) / (q.x - p.x);
        let c: Point3<T> = p.lerp(q, t);
        Point2::new(c.y, c.z)
    };

    let mut segments: Vec<Segment<T>> = Vec::new();
    for f in faces {
        let tri = mesh.faces()[f];
        let d = tri.map(|v| verts[v].x - x);
        if d.iter().all(|&v| v > tol) || d.iter().all(|&v| v < -tol) {
            continue;
        }
        if let Some(k) = (0..3).find(|&k| d[k].abs() <= tol) {
            return Err(Error::DegenerateIncidence {
                x: xf,
                vertex: tri[k],
                distance: d[k].abs().to_f64_lossy(),
                suggested: xf + 1e-9 * (x1 - x0).to_f64_lossy(),
            });
        }
        // exactly one edge goes from above to below, one from below to above
        let mut down = None;
        let mut up = None;
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            let (da, db) = (d[k], d[(k + 1) % 3]);
            if da > T::zero() && db < T::zero() {
                down = Some((a, b));
            } else if da < T::zero() && db > T::zero() {
                up = Some((a, b));
            }
        }
        let (Some(down), Some(up)) = (down, up) else { continue };
        let key = |(a, b): (usize, usize)| (a.min(b), a.max(b));
        segments.push(Segment { from: key(down), to: key(up), start: crossing(down.0, down.1) });
    }

    let mut by_start: HashMap<(usize, usize), usize> = HashMap::with_capacity(segments.len());
    for (i, s) in segments.iter().enumerate() {
        if by_start.insert(s.from, i).is_some() {
            return Err(Error::OpenChain { x: xf });
        }
    }

    let dedup_tol = T::roundoff(1e-12) * mesh.extent().max(T::one());
    let mut used = vec![false; segments.len()];
    let mut loops = Vec::new();
    for first in 0..segments.len() {
        if used[first] {
            continue;
        }
        let mut points = Vec::new();
        let mut cur = first;
        loop {
            used[cur] = true;
            points.push(segments[cur].start);
            let next = *by_start.get(&segments[cur].to).ok_or(Error::OpenChain { x: xf })?;
            if next == first {
                break;
            }
            if used[next] {
                return Err(Error::OpenChain { x: xf });
            }
            cur = next;
        }
        let mut cleaned: Vec<Point2<T>> = Vec::with_capacity(points.len());
        for p in points {
            if cleaned.last().is_none_or(|q: &Point2<T>| q.dist(p) > dedup_tol) {
                cleaned.push(p);
            }
        }
        while cleaned.len() > 1 && cleaned[0].dist(*cleaned.last().unwrap()) <= dedup_tol {
            cleaned.pop();
        }
        if cleaned.len() >= 3 {
            loops.push(PlanarLoop::new(cleaned)?);
        }
    }
    Ok(CrossSection::from_loops(x, loops))
}

/// Section functionals at one plane, summed segment by segment without
/// assembling loops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectionRates<T> {
    /// `Q(x)`.
    pub area: T,
    /// `U(x)`.
    pub perimeter: T,
    /// Exact `Q'(x) = Σ ℓ a`, with `a` the outward drift of each segment per
    /// unit x.
    pub area_rate: T,
    /// Mesh area per unit x, `Σ ℓ √(1 + a²)`.
    pub surface_density: T,
}

/// [`SectionRates`] of the plane `x` over all faces.
pub fn section_rates<T: Scalar>(mesh: &TriangleMesh<T>, x: T) -> Result<SectionRates<T>> {
    section_rates_faces(mesh, 0..mesh.faces().len(), x)
}

/// Like [`section_rates`] but only looks at `faces`, which must include
/// every face the plane crosses.
pub fn section_rates_faces<T: Scalar>(
    mesh: &TriangleMesh<T>,
    faces: impl IntoIterator<Item = usize>,
    x: T,
) -> Result<SectionRates<T>> {
    let verts = mesh.vertices();
    let tol = incidence_tolerance(mesh);
    let half = T::of(0.5);
    let (mut area, mut perimeter, mut rate, mut density) =
        (CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new(), CompensatedSum::new());
    let crossing = |a: usize, b: usize| -> Point2<T> {
        let (i, j) = (a.min(b), a.max(b));
        let (p, q) = (verts[i], verts[j]);
        let c = p.lerp(q, (x - p.x) / (q.x - p.x));
        Point2::new(c.y, c.z)
    };
    for f in faces {
        let tri = mesh.faces()[f];
        let d = tri.map(|v| verts[v].x - x);
        if d.iter().all(|&v| v > tol) || d.iter().all(|&v| v < -tol) {
            continue;
        }
        if let Some(k) = (0..3).find(|&k| d[k].abs() <= tol) {
            let (x0, x1) = mesh.bounds_x()?;
            let xf = x.to_f64_lossy();
            return Err(Error::DegenerateIncidence {
                x: xf,
                vertex: tri[k],
                distance: d[k].abs().to_f64_lossy(),
                suggested: xf + 1e-9 * (x1 - x0).to_f64_lossy(),
            });
        }
        let mut down = None;
        let mut up = None;
        for k in 0..3 {
            let (da, db) = (d[k], d[(k + 1) % 3]);
            if da > T::zero() && db < T::zero() {
                down = Some((tri[k], tri[(k + 1) % 3]));
            } else if da < T::zero() && db > T::zero() {
                up = Some((tri[k], tri[(k + 1) % 3]));
            }
        }
        let (Some(down), Some(up)) = (down, up) else { continue };
        let (p, q) = (crossing(down.0, down.1), crossing(up.0, up.1));
        let len = p.dist(q);
        let c = mesh.face_cross(f);
        let in_plane = c.y.hypot(c.z);
        area.add(p.cross(q) * half);
        perimeter.add(len);
        rate.add(-len * c.x / in_plane);
        density.add(len * c.norm() / in_plane);
    }
    Ok(SectionRates { area: area.value(), perimeter: perimeter.value(), area_rate: rate.value(), surface_density: density.value() })
}

/// A section's loops joined into one closed polyline through the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainedCurve<T> {
    points: Vec<Point2<T>>,
    cumulative_s: Vec<T>,
    total_length: T,
    enclosed_area: T,
}

impl<T: Scalar> ChainedCurve<T> {
    /// Builds a chain from an explicit polyline that starts and ends at the
    /// origin.
    pub fn from_points(points: Vec<Point2<T>>) -> Result<Self> {
        if points.len() < 4 {
            return Err(Error::invalid("a chain needs at least 3 distinct vertices"));
        }
        let o = Point2::origin();
        if points[0] != o || *points.last().unwrap() != o {
            return Err(Error::invalid("a chain must start and end at the origin"));
        }
        let mut cumulative_s = Vec::with_capacity(points.len());
        let mut acc = CompensatedSum::new();
        cumulative_s.push(T::zero());
        for w in points.windows(2) {
            let step = w[0].dist(w[1]);
            if !(step > T::zero()) {
                return Err(Error::invalid("chain has repeated consecutive vertices"));
            }
            acc.add(step);
            cumulative_s.push(acc.value());
        }
        let total_length = acc.value();
        let enclosed_area = shoelace(&points[..points.len() - 1]);
        Ok(Self { points, cumulative_s, total_length, enclosed_area })
    }

    pub fn points(&self) -> &[Point2<T>] {
        &self.points
    }

    pub fn cumulative_s(&self) -> &[T] {
        &self.cumulative_s
    }

    pub fn total_length(&self) -> T {
        self.total_length
    }

    pub fn enclosed_area(&self) -> T {
        self.enclosed_area
    }
}

/// Joins the loops of `section` into one closed curve through the origin.
///
/// Loops go in order of decreasing `|area|` (ties by first point); each is
/// translated so its first vertex sits at the origin and traversed once.
pub fn chain_loops<T: Scalar>(section: &CrossSection<T>) -> ChainedCurve<T> {
    let mut order: Vec<&PlanarLoop<T>> = section.loops.iter().collect();
    order.sort_by(|a, b| {
        b.signed_area
            .abs()
            .partial_cmp(&a.signed_area.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| {
                let (p, q) = (a.points[0], b.points[0]);
                p.y.partial_cmp(&q.y).unwrap_or(std::cmp::Ordering::Equal).then(
                    p.z.partial_cmp(&q.z).unwrap_or(std::cmp::Ordering::Equal),
                )
            })
    });
    let mut points = vec![Point2::origin()];
    for l in order {
        let base = l.points[0];
        points.extend(l.points[1..].iter().map(|&p| p - base));
        points.push(Point2::origin());
    }
    ChainedCurve::from_points(points).expect("section loops have distinct consecutive vertices")
}

/// Area of the part of triangle `tri` with `lo ≤ x ≤ hi`.
fn clipped_area<T: Scalar>(tri: [Point3<T>; 3], lo: T, hi: T) -> T {
    let mut poly: Vec<Point3<T>> = tri.to_vec();
    for (bound, keep_above) in [(lo, true), (hi, false)] {
        let inside = |p: &Point3<T>| if keep_above { p.x >= bound } else { p.x <= bound };
        if poly.iter().all(inside) {
            continue;
        }
        let mut out = Vec::with_capacity(poly.len() + 1);
        for i in 0..poly.len() {
            let (p, q) = (poly[i], poly[(i + 1) % poly.len()]);
            let (pin, qin) = (inside(&p), inside(&q));
            if pin {
                out.push(p);
            }
            if pin != qin {
                let t = (bound - p.x) / (q.x - p.x);
                let mut c = p.lerp(q, t);
                c.x = bound;
                out.push(c);
            }
        }
        poly = out;
        if poly.len() < 3 {
            return T::zero();
        }
    }
    let mut normal = Point3::zero();
    for i in 1..poly.len() - 1 {
        normal = normal + (poly[i] - poly[0]).cross(poly[i + 1] - poly[0]);
    }
    normal.norm() * T::of(0.5)
}

/// Mesh surface area inside the slab `x_a ≤ x ≤ x_b`.
pub fn slab_area<T: Scalar>(mesh: &TriangleMesh<T>, x_a: T, x_b: T) -> T {
    slab_areas(mesh, &[x_a, x_b])[0]
}

/// Surface area of every slab between consecutive `edges` (increasing).
/// Each slab sums its faces in face order.
pub fn slab_areas<T: Scalar>(mesh: &TriangleMesh<T>, edges: &[T]) -> Vec<T> {
    let cells = edges.len().saturating_sub(1);
    let mut acc = vec![CompensatedSum::new(); cells];
    for f in 0..mesh.faces().len() {
        let tri = mesh.triangle(f);
        let lo = tri.iter().fold(T::infinity(), |m, p| m.min(p.x));
        let hi = tri.iter().fold(T::neg_infinity(), |m, p| m.max(p.x));
        if lo == hi {
            // a facet in a plane x = const belongs to the cell containing it
            if lo >= edges[0] && lo <= edges[cells] {
                let c = edges[1..cells].partition_point(|&e| e <= lo);
                acc[c].add(mesh.face_area(f));
            }
            continue;
        }
        // first cell whose upper edge exceeds `lo`
        let start = edges[1..].partition_point(|&e| e <= lo);
        for c in start..cells {
            if edges[c] >= hi {
                break;
            }
            let (a, b) = (edges[c], edges[c + 1]);
            let area = if lo >= a && hi <= b { mesh.face_area(f) } else { clipped_area(tri, a, b) };
            acc[c].add(area);
        }
    }
    acc.into_iter().map(|a| a.value()).collect()
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::{orient_axis, Tilt};
    use crate::shapes::{generate, ShapeSpec};

    fn circle(n: usize, radius: f64, center: (f64, f64)) -> Vec<Point2<f64>> {
        (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64;
                Point2::new(center.0 + radius * t.cos(), center.1 + radius * t.sin())
            })
            .collect()
    }

    #[test]
    fn sphere_equator_is_one_circle() {
        let mesh: TriangleMesh<f64> = generate(&ShapeSpec::sphere(1.0, 4)).unwrap();
        let s = slice_at(&mesh, 1e-3).unwrap();
        assert_eq!(s.loops().len(), 1);
        assert!(s.area() < PI && (PI - s.area()) / PI < 1e-2, "{}", s.area());
        assert!((2.0 * PI - s.perimeter()) / (2.0 * PI) < 1e-2);
        assert!(s.area() > 0.0);
    }

    #[test]
    fn torus_section_has_two_loops() {
        let mesh: TriangleMesh<f64> = generate(&ShapeSpec::torus(2.0, 0.5, 64)).unwrap();
        let s = slice_at(&mesh, 0.0).unwrap();
        assert_eq!(s.loops().len(), 2);
        let expected = 2.0 * PI * 0.25;
        assert!((s.area() - expected).abs() / expected < 1e-2, "{}", s.area());
        assert!(s.loops().iter().all(|l| l.signed_area() > 0.0));
    }

    #[test]
    fn tilted_cube_mid_section_is_a_unit_square() {
        let cube: TriangleMesh<f64> = generate(&ShapeSpec::cube(1.0)).unwrap();
        let (m, _) = orient_axis(&cube, Point3::new(1.0, 0.0, 0.0), Tilt::Auto).unwrap();
        let (x0, x1) = m.bounds_x().unwrap();
        let s = slice_at(&m, 0.5 * (x0 + x1)).unwrap();
        assert_eq!(s.loops().len(), 1);
        // each side of the square crosses the two triangles of a cube face
        assert_eq!(s.loops()[0].points().len(), 8);
        assert!((s.area() - 1.0).abs() < 1e-5, "{}", s.area());
        assert!((s.perimeter() - 4.0).abs() < 1e-5);
    }

    #[test]
    fn plane_through_a_vertex_is_rejected_with_a_nudge() {
        let cube: TriangleMesh<f64> = generate(&ShapeSpec::cube(1.0)).unwrap();
        let (m, _) = orient_axis(&cube, Point3::new(1.0, 0.0, 0.0), Tilt::Auto).unwrap();
        let vx = m.vertices()[3].x;
        match slice_at(&m, vx) {
            Err(Error::DegenerateIncidence { suggested, .. }) => {
                assert!(suggested > vx);
                assert!(slice_at(&m, suggested).is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn hole_is_clockwise_and_subtracts() {
        let outer = PlanarLoop::new(circle(512, 2.0, (0.0, 0.0))).unwrap();
        // both given counterclockwise; parity must flip the hole
        let inner = PlanarLoop::new(circle(512, 1.0, (0.0, 0.0))).unwrap();
        let s = CrossSection::from_loops(0.0, vec![inner, outer]);
        assert!(s.loops()[0].signed_area() < 0.0);
        assert!(s.loops()[1].signed_area() > 0.0);
        let chain = chain_loops(&s);
        assert!((chain.enclosed_area() - s.area()).abs() <= 1e-12 * s.area());
        // polygons converge to 4π − π
        assert!((s.area() - 3.0 * PI).abs() < 1e-3);
    }

    #[test]
    fn chain_preserves_area_and_length() {
        let a = PlanarLoop::new(circle(256, 1.0, (3.0, 0.0))).unwrap();
        let b = PlanarLoop::new(circle(256, 1.0, (-3.0, 1.0))).unwrap();
        let s = CrossSection::from_loops(0.0, vec![a, b]);
        let chain = chain_loops(&s);
        assert_eq!(chain.points()[0], Point2::origin());
        assert_eq!(*chain.points().last().unwrap(), Point2::origin());
        assert!((chain.total_length() - s.perimeter()).abs() <= 1e-12 * s.perimeter());
        assert!((chain.enclosed_area() - s.area()).abs() <= 1e-12 * s.area());
        assert!((chain.total_length() - 4.0 * PI).abs() < 1e-3);
        assert!((chain.enclosed_area() - 2.0 * PI).abs() < 1e-3);
        assert!(chain.cumulative_s().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn single_loop_chain_is_a_translation() {
        let l = PlanarLoop::new(circle(64, 1.0, (0.5, 0.5))).unwrap();
        let s = CrossSection::from_loops(0.0, vec![l.clone()]);
        let chain = chain_loops(&s);
        assert_eq!(chain.points().len(), 65);
        let base = l.points()[0];
        for (c, p) in chain.points()[1..64].iter().zip(&l.points()[1..]) {
            assert_eq!(*c, *p - base);
        }
        assert!((chain.total_length() - s.perimeter()).abs() <= 1e-12 * s.perimeter());
    }

    #[test]
    fn slab_areas_partition_the_surface() {
        for spec in [ShapeSpec::sphere(1.0, 3), ShapeSpec::torus(2.0, 0.5, 32), ShapeSpec::cone(1.0, 1.0, 32)] {
            let mesh: TriangleMesh<f64> = generate(&spec).unwrap();
            let (x0, x1) = mesh.bounds_x().unwrap();
            let n = 37;
            let edges: Vec<f64> = (0..=n).map(|i| x0 + (x1 - x0) * i as f64 / n as f64).collect();
            let total = compensated_sum(slab_areas(&mesh, &edges));
            let s = mesh.surface_area();
            assert!((total - s).abs() <= 1e-9 * s, "{}: {total} vs {s}", spec.label());
        }
    }

    #[test]
    fn sphere_zone_area_follows_archimedes() {
        let mesh: TriangleMesh<f64> = generate(&ShapeSpec::sphere(1.0, 5)).unwrap();
        let a = slab_area(&mesh, -0.1, 0.1);
        let exact = 2.0 * PI * 0.2;
        assert!((a - exact).abs() / exact < 5e-3, "{a}");
    }

    #[test]
    fn cylinder_band_and_whole_cube() {
        let cyl: TriangleMesh<f64> = generate(&ShapeSpec::cylinder(1.0, 2.0, 256)).unwrap();
        let band = slab_area(&cyl, -0.25, 0.25);
        assert!((band - PI).abs() / PI < 1e-3, "{band}");
        let cube: TriangleMesh<f64> = generate(&ShapeSpec::cube(1.0)).unwrap();
        assert_eq!(slab_area(&cube, 0.0, 1.0), 6.0);
    }

    #[test]
    fn section_rates_match_assembled_sections() {
        let mesh: TriangleMesh<f64> = generate(&ShapeSpec::torus(2.0, 0.5, 32)).unwrap();
        for x in [-2.2, -1.0, 0.013, 1.7] {
            let s = slice_at(&mesh, x).unwrap();
            let r = section_rates(&mesh, x).unwrap();
            assert!((r.area - s.area()).abs() <= 1e-12 * s.area(), "{x}");
            assert!((r.perimeter - s.perimeter()).abs() <= 1e-12 * s.perimeter());
            assert!(r.surface_density >= r.perimeter.hypot(r.area_rate) * (1.0 - 1e-12));
        }
    }

    #[test]
    fn area_rate_of_a_sphere_section() {
        let mesh: TriangleMesh<f64> = generate(&ShapeSpec::sphere(1.0, 5)).unwrap();
        for x in [-0.6, 0.2, 0.5] {
            let r = section_rates(&mesh, x).unwrap();
            let h = 1e-6;
            let fd = (slice_at(&mesh, x + h).unwrap().area() - slice_at(&mesh, x - h).unwrap().area()) / (2.0 * h);
            assert!((r.area_rate - fd).abs() < 1e-4 * fd.abs().max(1.0), "{x}: {} vs {fd}", r.area_rate);
            assert!((r.area_rate + 2.0 * PI * x).abs() < 2e-2, "{x}");
        }
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mesh: TriangleMesh<f64> = generate(&ShapeSpec::torus(2.0, 0.5, 16)).unwrap();
        let s = slice_at(&mesh, 0.0).unwrap();
        let csv = s.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("loop_id,point_id,y,z"));
        let ids: std::collections::BTreeSet<&str> = lines.map(|l| l.split(',').next().unwrap()).collect();
        assert_eq!(ids.into_iter().collect::<Vec<_>>(), vec!["0", "1"]);
    }

    #[test]
    fn chain_rejects_bad_endpoints() {
        let pts = vec![Point2::new(1.0, 0.0), Point2::new(0.0, 1.0), Point2::new(0.0, 0.0), Point2::new(1.0, 0.0)];
        assert!(ChainedCurve::from_points(pts).is_err());
    }
}
