//! Spherical-cap comparison along the symmetrized profile.
//!
//! At each grid point the body of revolution has swept the volume `B` and
//! has radius `r`. The spherical cap on the same circle enclosing the same
//! volume has quarter-angle `ψ` (from `f(ψ) = 2B/(r³π)`), sphere radius `R`
//! and area `H = 4πR² sin²ψ`. The lateral area swept so far never falls
//! below `H`; at `x1` the cap closes into the ball of volume `V`.

use crate::error::{Error, Result};
use crate::profile::{cumulative_to_midpoints, cumulative_to_midpoints_exact, SlicedProfile};
use crate::scalar::{fmt17, Scalar};

use super::solvers::solve_psi;

const SMALL_ANGLE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapSample<T> {
    pub x: T,
    /// Volume of the body of revolution between `x0` and `x`.
    pub volume: T,
    /// Profile radius `√(Q/π)`.
    pub r: T,
    /// Quarter central angle of the cap.
    pub psi: T,
    /// Radius of the sphere carrying the cap.
    pub sphere_radius: T,
    pub cap_area: T,
    /// Lateral area of the body of revolution up to `x`, start disk included.
    pub lateral: T,
    /// `lateral − cap_area`.
    pub defect: T,
    /// `r = 0` with positive swept volume.
    pub pinched: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CapTrace<T> {
    /// One record per profile grid point.
    pub samples: Vec<CapSample<T>>,
    /// The closed body at `x1`: `ψ = π/2`, the cap is the whole ball.
    pub terminal: CapSample<T>,
}

impl<T: Scalar> CapTrace<T> {
    pub fn min_defect(&self) -> T {
        self.samples.iter().chain(std::iter::once(&self.terminal)).fold(T::infinity(), |m, s| m.min(s.defect))
    }

    pub fn pinches(&self) -> impl Iterator<Item = &CapSample<T>> {
        self.samples.iter().filter(|s| s.pinched)
    }

    /// CSV with header `x,B,r,psi,R,H,lateral,defect`; the last row is the
    /// terminal record.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,B,r,psi,R,H,lateral,defect\n");
        for s in self.samples.iter().chain(std::iter::once(&self.terminal)) {
            let row = [s.x, s.volume, s.r, s.psi, s.sphere_radius, s.cap_area, s.lateral, s.defect]
                .map(|v| fmt17(v.to_f64_lossy()));
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Cap volume `(4/3) R³ π sin⁴ψ (sin²ψ + 3 cos²ψ)`.
pub fn cap_volume<T: Scalar>(psi: T, sphere_radius: T) -> T {
    let (s, c) = psi.sin_cos();
    let s2 = s * s;
    T::of(4.0 / 3.0) * T::PI() * sphere_radius.powi(3) * s2 * s2 * (s2 + T::of(3.0) * c * c)
}

/// Cap rim radius `2R sin ψ cos ψ`.
pub fn cap_rim<T: Scalar>(psi: T, sphere_radius: T) -> T {
    let (s, c) = psi.sin_cos();
    T::of(2.0) * sphere_radius * s * c
}

/// Cap area `4π R² sin²ψ`.
pub fn cap_area<T: Scalar>(psi: T, sphere_radius: T) -> T {
    let s = psi.sin();
    T::of(4.0) * T::PI() * sphere_radius * sphere_radius * s * s
}

/// Cap of volume `volume` on a rim of radius `r`.
fn cap_for<T: Scalar>(volume: T, r: T) -> (T, T, bool) {
    let three_quarter_pi = T::of(3.0) / (T::of(4.0) * T::PI());
    if volume == T::zero() {
        return (T::zero(), r * T::of(0.5), false);
    }
    if r == T::zero() {
        // a full ball pinched off at this point
        return (T::FRAC_PI_2(), (three_quarter_pi * volume).cbrt(), true);
    }
    let psi = solve_psi(T::of(2.0) * volume / (r * r * r * T::PI()));
    let radius = if psi < T::of(SMALL_ANGLE) {
        r / (T::of(2.0) * psi)
    } else if psi <= T::FRAC_PI_4() {
        let (s, c) = psi.sin_cos();
        r / (T::of(2.0) * s * c)
    } else {
        // cos ψ → 0 makes the rim relation ill-conditioned; use the volume
        let (s, c) = psi.sin_cos();
        let s2 = s * s;
        (three_quarter_pi * volume / (s2 * s2 * (s2 + T::of(3.0) * c * c))).cbrt()
    };
    (psi, radius, false)
}

/// Traces the cap comparison at every grid point of `profile`.
pub fn cap_trace<T: Scalar>(profile: &SlicedProfile<T>) -> Result<CapTrace<T>> {
    if profile.q.iter().any(|&q| q < T::zero() || !q.is_finite()) {
        return Err(Error::invalid("profile has negative or non-finite section areas"));
    }
    let dx = profile.dx();
    // mesh profiles carry exact cell integrals whose lateral part already
    // contains any flat ends
    let (volumes, laterals, start_disk, end_disk, volume, lateral) = match &profile.cells {
        Some(cells) => (
            cumulative_to_midpoints_exact(&cells.volume),
            cumulative_to_midpoints_exact(&cells.lateral),
            T::zero(),
            T::zero(),
            cells.total_volume(),
            cells.total_lateral(),
        ),
        None => {
            let (start, end) = profile.end_disks();
            let (lateral, _) = crate::profile::revolution_lateral_area(profile);
            (
                cumulative_to_midpoints(&profile.q, dx),
                cumulative_to_midpoints(&profile.revolution_density(), dx),
                start,
                end,
                profile.integrated_volume(),
                lateral,
            )
        }
    };

    let samples = (0..profile.len())
        .map(|i| {
            let volume = volumes[i];
            let r = (profile.q[i] / T::PI()).sqrt();
            let (psi, sphere_radius, pinched) = cap_for(volume, r);
            let area = if volume == T::zero() { T::zero() } else { cap_area(psi, sphere_radius) };
            let lateral = laterals[i] + start_disk;
            CapSample { x: profile.x[i], volume, r, psi, sphere_radius, cap_area: area, lateral, defect: lateral - area, pinched }
        })
        .collect();

    let lateral = lateral + start_disk + end_disk;
    let sphere_radius = (T::of(3.0) * volume / (T::of(4.0) * T::PI())).cbrt();
    let area = ball_bound(volume);
    let terminal = CapSample {
        x: profile.x1,
        volume,
        r: T::zero(),
        psi: T::FRAC_PI_2(),
        sphere_radius,
        cap_area: area,
        lateral,
        defect: lateral - area,
        pinched: false,
    };
    Ok(CapTrace { samples, terminal })
}

/// `∛(36π V²)`, the area of the ball of volume `V`.
pub fn ball_bound<T: Scalar>(volume: T) -> T {
    (T::of(36.0) * T::PI() * volume * volume).cbrt()
}
