//! Circular-segment comparison along a chained section curve.
//!
//! At arclength `s` the curve has swept the signed area `F` about the chain
//! origin and sits at distance `ρ` from it. The circular segment on the
//! chord from the origin to the current point with the same swept area has
//! half-angle `φ` (from `f(φ) = 2F/ρ²`), signed radius `r` and arc length
//! `L = 2rφ`. The defect `s − L` never decreases, and at the end of the
//! chain it equals `U − √(4πQ)`.

use crate::error::{Error, Result};
use crate::scalar::{fmt17, CompensatedSum, Scalar};
use crate::slicer::ChainedCurve;

use super::solvers::solve_phi;

/// Below this |φ| the radius comes from `ρ ≈ 2rφ`.
const SMALL_ANGLE: f64 = 1e-6;
/// `ρ < RESTART_RHO · U` together with `|F| < RESTART_AREA · Q` restarts the trace.
const RESTART_RHO: f64 = 1e-9;
const RESTART_AREA: f64 = 1e-12;

/// One vertex of the trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSample<T> {
    pub s: T,
    /// Distance from the chain origin.
    pub rho: T,
    /// Swept signed area `∫ ½ (y dz − z dy)`.
    pub area: T,
    /// Half central angle of the comparison segment.
    pub phi: T,
    /// Signed segment radius; infinite on a straight chord.
    pub r: T,
    /// Arc length of the comparison segment.
    pub arc: T,
    pub defect: T,
    /// The half-angle hit the solver clamp; identities do not hold here.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentTrace<T> {
    pub samples: Vec<SegmentSample<T>>,
    /// Arclengths at which both `ρ` and `F` vanished inside the chain.
    pub restart_points: Vec<T>,
    pub total_length: T,
    pub enclosed_area: T,
}

impl<T: Scalar> SegmentTrace<T> {
    pub fn final_defect(&self) -> T {
        self.samples.last().map_or(T::zero(), |s| s.defect)
    }

    /// Largest decrease of the defect between consecutive samples that are
    /// not separated by a restart; zero or negative for a monotone trace.
    pub fn worst_decrease(&self) -> T {
        let mut worst = T::neg_infinity();
        for w in self.samples.windows(2) {
            if self.restart_points.contains(&w[1].s) {
                continue;
            }
            worst = worst.max(w[0].defect - w[1].defect);
        }
        worst
    }

    pub fn min_defect(&self) -> T {
        self.samples.iter().fold(T::infinity(), |m, s| m.min(s.defect))
    }

    /// CSV with header `s,rho,F,phi,r,L,defect`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,rho,F,phi,r,L,defect\n");
        for p in &self.samples {
            let row = [p.s, p.rho, p.area, p.phi, p.r, p.arc, p.defect].map(|v| {
                let v = v.to_f64_lossy();
                if v.is_infinite() {
                    if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
                } else {
                    fmt17(v)
                }
            });
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Segment quantities for swept area `area` at distance `rho > 0`.
fn segment_at<T: Scalar>(rho: T, area: T) -> (T, T, T, bool) {
    let root = solve_phi(T::of(2.0) * area / (rho * rho));
    let phi = root.phi;
    let (s, c) = phi.sin_cos();
    let (r, arc) = if phi.abs() < T::of(SMALL_ANGLE) {
        if phi == T::zero() {
            (T::infinity(), rho)
        } else {
            let r = rho / (T::of(2.0) * phi);
            (r, rho)
        }
    } else if phi.abs() <= T::FRAC_PI_2() {
        let r = rho / (T::of(2.0) * s);
        (r, T::of(2.0) * r * phi)
    } else {
        // near ±π the chord formula loses digits; the area formula does not
        let r = (area / (phi - s * c)).sqrt() * phi.signum();
        (r, T::of(2.0) * r * phi)
    };
    (phi, r, arc, root.clamped)
}

/// Traces the circular-segment comparison at every vertex of `chain`.
pub fn segment_trace<T: Scalar>(chain: &ChainedCurve<T>) -> Result<SegmentTrace<T>> {
    let q = chain.enclosed_area();
    let u = chain.total_length();
    if !(q > T::zero()) {
        return Err(Error::invalid(format!("chain encloses non-positive area {}", q.to_f64_lossy())));
    }
    let points = chain.points();
    let svals = chain.cumulative_s();
    let last = points.len() - 1;
    let half = T::of(0.5);
    let four_pi = T::of(4.0) * T::PI();

    let mut samples = Vec::with_capacity(points.len());
    samples.push(SegmentSample {
        s: T::zero(),
        rho: T::zero(),
        area: T::zero(),
        phi: T::zero(),
        r: T::infinity(),
        arc: T::zero(),
        defect: T::zero(),
        clamped: false,
    });
    let mut restart_points = Vec::new();
    let mut swept = CompensatedSum::new();
    for i in 1..points.len() {
        swept.add(points[i - 1].cross(points[i]) * half);
        let area = swept.value();
        let rho = points[i].norm();
        let s = svals[i];

        if i < last && rho < T::of(RESTART_RHO) * u && area.abs() < T::of(RESTART_AREA) * q {
            restart_points.push(s);
            swept = CompensatedSum::new();
            samples.push(SegmentSample {
                s,
                rho,
                area: T::zero(),
                phi: T::zero(),
                r: T::infinity(),
                arc: T::zero(),
                defect: s,
                clamped: false,
            });
            continue;
        }

        let sample = if rho == T::zero() {
            // back at the origin: the segment has become a full circle of area |F|
            let r = (area.abs() / T::PI()).sqrt() * area.signum();
            let phi = T::PI() * area.signum();
            let arc = (four_pi * area.abs()).sqrt();
            SegmentSample { s, rho, area, phi, r, arc, defect: s - arc, clamped: false }
        } else {
            let (phi, r, arc, clamped) = segment_at(rho, area);
            SegmentSample { s, rho, area, phi, r, arc, defect: s - arc, clamped }
        };
        samples.push(sample);
    }
    Ok(SegmentTrace { samples, restart_points, total_length: u, enclosed_area: q })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::Point2;
    use crate::isoperimetric::solvers::segment_fn;
    use crate::slicer::{chain_loops, CrossSection, PlanarLoop};

    fn polygon_chain(n: usize) -> ChainedCurve<f64> {
        // regular n-gon on the unit circle through the origin
        let pts: Vec<Point2<f64>> = (0..n)
            .map(|i| {
                let t = 2.0 * PI * i as f64 / n as f64 + PI;
                Point2::new(1.0 + t.cos(), t.sin())
            })
            .collect();
        chain_loops(&CrossSection::from_loops(0.0, vec![PlanarLoop::new(pts).unwrap()]))
    }

    fn square_chain() -> ChainedCurve<f64> {
        let pts = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)];
        chain_loops(&CrossSection::from_loops(0.0, vec![PlanarLoop::new(pts).unwrap()]))
    }

    fn assert_identities(trace: &SegmentTrace<f64>) {
        for p in &trace.samples {
            if p.clamped || !p.r.is_finite() || p.rho == 0.0 {
                continue;
            }
            // F = r²(φ − sin φ cos φ) written via f(φ) to avoid cancellation
            let s = p.phi.sin();
            let f_from_segment = p.r * p.r * 2.0 * s * s * segment_fn(p.phi);
            assert!((f_from_segment - p.area).abs() <= 1e-9 * p.area.abs().max(1e-300) + 1e-15, "{p:?}");
            assert!((2.0 * p.r * s - p.rho).abs() <= 1e-9 * p.rho, "{p:?}");
        }
    }

    #[test]
    fn circle_is_the_equality_case() {
        let trace = segment_trace(&polygon_chain(256)).unwrap();
        assert!(trace.samples.iter().all(|p| p.defect <= 1e-3));
        assert!(trace.final_defect() <= 1e-3 && trace.final_defect() >= 0.0);
        assert!((trace.samples.last().unwrap().arc - 2.0 * PI).abs() < 1e-3);
        assert!(trace.worst_decrease() <= 1e-12 * trace.total_length, "{}", trace.worst_decrease());
        assert_identities(&trace);
    }

    #[test]
    fn square_defect_is_closed_form() {
        let trace = segment_trace(&square_chain()).unwrap();
        let expected = 4.0 - 2.0 * PI.sqrt();
        assert!((trace.final_defect() - expected).abs() <= 1e-9, "{}", trace.final_defect());
        assert!((expected - 0.4551).abs() < 1e-4);
        assert!(trace.worst_decrease() <= 1e-12 * 4.0);
        assert_identities(&trace);
    }

    #[test]
    fn two_circles_pass_through_the_origin_without_restart() {
        let circle = |cy: f64| -> PlanarLoop<f64> {
            PlanarLoop::new(
                (0..512).map(|i| {
                    let t = 2.0 * PI * i as f64 / 512.0;
                    Point2::new(t.cos(), cy + t.sin())
                })
                .collect(),
            )
            .unwrap()
        };
        let section = CrossSection::from_loops(0.0, vec![circle(0.0), circle(3.0)]);
        let chain = chain_loops(&section);
        let trace = segment_trace(&chain).unwrap();
        // the swept area is Q₁ ≠ 0 where the loops meet, so no restart
        assert!(trace.restart_points.is_empty());
        let junction = trace.samples.iter().find(|p| p.rho == 0.0 && p.s > 0.0 && p.s < trace.total_length).unwrap();
        assert!((junction.s - 2.0 * PI).abs() < 1e-3);
        assert!((junction.phi - PI).abs() < 1e-15);
        let expected = chain.total_length() - (4.0 * PI * chain.enclosed_area()).sqrt();
        assert!((trace.final_defect() - expected).abs() <= 1e-9 * chain.total_length());
        assert!((expected - (4.0 * PI - 2.0 * PI * 2f64.sqrt())).abs() < 1e-3);
        assert!(trace.worst_decrease() <= 1e-12 * chain.total_length());
    }

    #[test]
    fn cancelling_loops_trigger_a_restart() {
        // CCW unit square, the same square clockwise, then a CCW 2×1 rectangle
        let o = Point2::new(0.0, 0.0);
        let p = |y, z| Point2::new(y, z);
        let pts = vec![
            o,
            p(1.0, 0.0),
            p(1.0, 1.0),
            p(0.0, 1.0),
            o,
            p(0.0, 1.0),
            p(1.0, 1.0),
            p(1.0, 0.0),
            o,
            p(2.0, 0.0),
            p(2.0, 1.0),
            p(0.0, 1.0),
            o,
        ];
        let chain: ChainedCurve<f64> = ChainedCurve::from_points(pts).unwrap();
        assert!((chain.enclosed_area() - 2.0).abs() < 1e-15);
        let trace = segment_trace(&chain).unwrap();
        assert_eq!(trace.restart_points, vec![8.0]);
        assert!(trace.worst_decrease() <= 1e-12 * chain.total_length());
        let expected = 14.0 - (8.0 * PI).sqrt();
        assert!((trace.final_defect() - expected).abs() <= 1e-9 * 14.0);
    }

    #[test]
    fn clockwise_first_loop_gives_negative_radius() {
        // an outer loop followed by a larger-|area| hole is impossible in a
        // section, but negative F must still be handled: start clockwise
        let o = Point2::new(0.0, 0.0);
        let pts = vec![o, Point2::new(0.0, 1.0), Point2::new(1.0, 1.0), Point2::new(1.0, 0.0), o, Point2::new(3.0, 0.0), Point2::new(3.0, 1.0), Point2::new(0.0, 1.0), o];
        let chain: ChainedCurve<f64> = ChainedCurve::from_points(pts).unwrap();
        assert!((chain.enclosed_area() - 2.0).abs() < 1e-15);
        let trace = segment_trace(&chain).unwrap();
        assert!(trace.samples.iter().any(|p| p.r.is_finite() && p.r < 0.0 && p.phi < 0.0));
        assert!(trace.worst_decrease() <= 1e-12 * chain.total_length());
        assert_identities(&trace);
    }

    #[test]
    fn non_positive_chain_is_rejected() {
        let o = Point2::new(0.0, 0.0);
        let pts = vec![o, Point2::new(0.0, 1.0), Point2::new(1.0, 1.0), Point2::new(1.0, 0.0), o];
        let chain: ChainedCurve<f64> = ChainedCurve::from_points(pts).unwrap();
        assert!(segment_trace(&chain).is_err());
    }

    #[test]
    fn csv_layout() {
        let csv = segment_trace(&square_chain()).unwrap().to_csv();
        assert!(csv.starts_with("s,rho,F,phi,r,L,defect\n"));
        assert_eq!(csv.lines().count(), 6);
    }
}
