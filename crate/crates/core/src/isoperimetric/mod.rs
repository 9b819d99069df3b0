//! The inequality chain `S ≥ ∫√(4πQ + Q'²) dx ≥ ∛(36πV²)` and its parts.

mod cap;
mod report;
mod segment;
mod solvers;

pub use cap::{ball_bound, cap_area, cap_rim, cap_trace, cap_volume, CapSample, CapTrace};
pub use report::{
    tolerance, verify_chain, verify_chain_with, InequalityReport, SliceRecord, Status, Verdict, Verdicts, Verification,
    VerifyOptions,
};
pub use segment::{segment_trace, SegmentSample, SegmentTrace};
pub use solvers::{cap_fn, segment_fn, segment_fn_prime, solve_phi, solve_psi, PhiRoot, PHI_CLAMP_GAP, PHI_TARGET_CLAMP};

use crate::error::{Error, Result};
use crate::profile::SlicedProfile;
use crate::scalar::Scalar;
use crate::slicer::CrossSection;

/// `S / ∛(36πV²)`; one for a ball, larger for every other body.
pub fn isoperimetric_quotient<T: Scalar>(area: T, volume: T) -> Result<T> {
    if !(area > T::zero() && volume > T::zero()) || !area.is_finite() || !volume.is_finite() {
        return Err(Error::invalid(format!(
            "quotient needs positive area and volume, got S = {}, V = {}",
            area.to_f64_lossy(),
            volume.to_f64_lossy()
        )));
    }
    Ok(area / ball_bound(volume))
}

/// Area factor `(1 + ε)(1 − η)^(−2/3)` of the polyhedral approximation and
/// whether `(1 + η)³ / (1 − η)² < s_ratio³`.
pub fn approximation_factor<T: Scalar>(eps: T, eta: T, s_ratio: T) -> Result<(T, bool)> {
    if !(eps >= T::zero() && eps.is_finite()) {
        return Err(Error::invalid(format!("eps must be nonnegative, got {}", eps.to_f64_lossy())));
    }
    if !(eta >= T::zero() && eta < T::one()) {
        return Err(Error::invalid(format!("eta must lie in [0, 1), got {}", eta.to_f64_lossy())));
    }
    if !(s_ratio > T::zero() && s_ratio.is_finite()) {
        return Err(Error::invalid(format!("area ratio must be positive, got {}", s_ratio.to_f64_lossy())));
    }
    let one = T::one();
    let factor = (one + eps) * (one - eta).powf(T::of(-2.0 / 3.0));
    let lhs = (one + eta).powi(3) / (one - eta).powi(2);
    Ok((factor, lhs < s_ratio.powi(3)))
}

/// Per-cell margins `slabᵢ − ∫ √(U² + Q'²) dx`.
///
/// Profiles built from a mesh integrate the right side over each cell with
/// exact section rates; otherwise the midpoint value `√(Uᵢ² + Q'ᵢ²) Δx` is
/// used.
pub fn check_slab_ia<T: Scalar>(profile: &SlicedProfile<T>) -> Vec<T> {
    match &profile.cells {
        Some(cells) => profile.slab.iter().zip(cells.ia_cells()).map(|(&s, r)| s - r).collect(),
        None => {
            let dx = profile.dx();
            (0..profile.len()).map(|i| profile.slab[i] - profile.u[i].hypot(profile.qp[i]) * dx).collect()
        }
    }
}

/// `U² − 4πQ` for one section.
pub fn check_iia<T: Scalar>(section: &CrossSection<T>) -> T {
    iia_margin(section.area(), section.perimeter())
}

pub(crate) fn iia_margin<T: Scalar>(q: T, u: T) -> T {
    u * u - T::of(4.0) * T::PI() * q
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::geometry::Point2;
    use crate::slicer::PlanarLoop;

    #[test]
    fn quotient_of_balls_is_one() {
        assert_eq!(isoperimetric_quotient(4.0 * PI, 4.0 * PI / 3.0).unwrap(), 1.0);
        let q = isoperimetric_quotient(16.0 * PI, 32.0 * PI / 3.0).unwrap();
        assert!((q - 1.0).abs() < 1e-15);
        assert!((isoperimetric_quotient(6.0f64, 1.0).unwrap() - 1.2407009817988).abs() < 1e-12);
        assert!(isoperimetric_quotient(0.0, 1.0).is_err());
        assert!(isoperimetric_quotient(1.0, -1.0).is_err());
    }

    #[test]
    fn approximation_factor_examples() {
        let (f, ok) = approximation_factor(0.01f64, 0.01, 1.05).unwrap();
        assert!((f - 1.01679).abs() < 1e-5, "{f}");
        assert!(ok);
        assert!(!approximation_factor(0.01, 0.01, 1.01).unwrap().1);
        assert_eq!(approximation_factor(0.0, 0.0, 2.0).unwrap().0, 1.0);
        assert!(approximation_factor(0.0, 1.0, 2.0).is_err());
        assert!(approximation_factor(-0.1, 0.5, 2.0).is_err());
    }

    #[test]
    fn iia_examples() {
        let hex: Vec<Point2<f64>> = (0..6).map(|i| {
            let t = PI / 3.0 * i as f64;
            Point2::new(t.cos(), t.sin())
        }).collect();
        let s = CrossSection::from_loops(0.0, vec![PlanarLoop::new(hex).unwrap()]);
        let ratio = s.perimeter().powi(2) / (4.0 * PI * s.area());
        assert!((ratio - 6.0 / PI * (PI / 6.0).tan()).abs() < 1e-12);
        assert!(check_iia(&s) > 0.0);

        let square = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 0.0), Point2::new(1.0, 1.0), Point2::new(0.0, 1.0)];
        let s = CrossSection::from_loops(0.0, vec![PlanarLoop::new(square).unwrap()]);
        assert!((check_iia(&s) - (16.0 - 4.0 * PI)).abs() < 1e-12);
        assert!((iia_margin(2.0 * PI, 4.0 * PI) - 8.0 * PI * PI).abs() < 1e-12);
    }
}
