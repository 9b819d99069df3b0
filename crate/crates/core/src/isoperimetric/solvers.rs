//! Monotone transcendental equations of the segment and cap constructions.

use crate::scalar::Scalar;

/// Targets beyond this magnitude clamp the segment half-angle.
pub const PHI_TARGET_CLAMP: f64 = 1e15;
/// Distance from ±π of a clamped half-angle.
pub const PHI_CLAMP_GAP: f64 = 1e-8;

/// Below this |φ| the segment function is evaluated from its series.
const PHI_SERIES_CUTOFF: f64 = 0.05;

/// `(φ − sin φ cos φ) / (2 sin² φ)`, odd and strictly increasing on (−π, π).
pub fn segment_fn<T: Scalar>(phi: T) -> T {
    if phi.abs() < T::of(PHI_SERIES_CUTOFF) {
        // 2φ − sin 2φ = Σ (−1)^(k+1) (2φ)^(2k+1)/(2k+1)!, k ≥ 1
        let u = phi * T::of(2.0);
        let u2 = u * u;
        let mut term = u * u2 / T::of(6.0);
        let mut numer = term;
        for k in 2..8 {
            let kk = T::of(((2 * k) * (2 * k + 1)) as f64);
            term = -term * u2 / kk;
            numer = numer + term;
        }
        let s = phi.sin();
        return numer / (T::of(4.0) * s * s);
    }
    let (s, c) = phi.sin_cos();
    (phi - s * c) / (T::of(2.0) * s * s)
}

/// Derivative `(sin φ − φ cos φ) / sin³ φ` of [`segment_fn`].
pub fn segment_fn_prime<T: Scalar>(phi: T) -> T {
    if phi.abs() < T::of(PHI_SERIES_CUTOFF) {
        // 1/3 + 2φ²/15 + O(φ⁴)
        let p2 = phi * phi;
        return T::of(1.0 / 3.0) + p2 * (T::of(2.0 / 15.0) + p2 * T::of(17.0 / 315.0));
    }
    let (s, c) = phi.sin_cos();
    (s - phi * c) / (s * s * s)
}

/// Root of `segment_fn(φ) = target` and whether the target was clamped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiRoot<T> {
    pub phi: T,
    pub clamped: bool,
}

/// Solves `(φ − sin φ cos φ)/(2 sin² φ) = target` for φ ∈ (−π, π).
///
/// Bisection on a shrinking bracket with Newton steps accepted when they stay
/// inside it. The equation is odd, so negative targets are solved by
/// symmetry and `solve_phi(-t) == -solve_phi(t)` exactly.
pub fn solve_phi<T: Scalar>(target: T) -> PhiRoot<T> {
    assert!(target.is_finite(), "segment target must be finite");
    let t = target.abs();
    let sign = if target < T::zero() { -T::one() } else { T::one() };
    if t == T::zero() {
        return PhiRoot { phi: T::zero(), clamped: false };
    }
    if t > T::of(PHI_TARGET_CLAMP) {
        return PhiRoot { phi: sign * (T::PI() - T::of(PHI_CLAMP_GAP)), clamped: true };
    }

    let mut lo = T::zero();
    let mut hi = T::PI();
    // initial guess from the two asymptotes: f ≈ φ/3 and f ≈ π / (2 (π − φ)²)
    let mut phi = if t < T::one() {
        (t * T::of(3.0)).min(T::of(2.0))
    } else {
        T::PI() - (T::PI() / (T::of(2.0) * t)).sqrt()
    };
    if !(phi > lo && phi < hi) {
        phi = T::of(0.5) * (lo + hi);
    }
    let tol = T::roundoff(1e-12) * (T::one() + t);
    for _ in 0..200 {
        let f = segment_fn(phi) - t;
        if f.abs() <= tol * T::of(1e-3) {
            break;
        }
        if f > T::zero() {
            hi = phi;
        } else {
            lo = phi;
        }
        let step = f / segment_fn_prime(phi);
        let newton = phi - step;
        let next = if newton > lo && newton < hi { newton } else { T::of(0.5) * (lo + hi) };
        if next == phi || hi - lo <= T::epsilon() * hi {
            break;
        }
        phi = next;
    }
    PhiRoot { phi: sign * best_of(phi, lo, hi, |p| (segment_fn(p) - t).abs()), clamped: false }
}

fn best_of<T: Scalar>(a: T, b: T, c: T, err: impl Fn(T) -> T) -> T {
    let mut best = a;
    let mut e = err(a);
    for cand in [b, c] {
        if cand > T::zero() && cand < T::PI() {
            let ec = err(cand);
            if ec < e {
                best = cand;
                e = ec;
            }
        }
    }
    best
}

/// `tan ψ + tan³ ψ / 3`, strictly increasing on [0, π/2).
pub fn cap_fn<T: Scalar>(psi: T) -> T {
    let t = psi.tan();
    t + t * t * t / T::of(3.0)
}

/// Solves `tan ψ + tan³ ψ / 3 = target` for ψ ∈ [0, π/2).
///
/// Closed form for `τ = tan ψ` from `τ³ + 3τ − 3·target = 0`, written as
/// `τ = 2 sinh(asinh(3·target/2)/3)` to avoid cancellation, followed by
/// Newton polishing in τ.
pub fn solve_psi<T: Scalar>(target: T) -> T {
    assert!(target >= T::zero() && target.is_finite(), "cap target must be finite and nonnegative");
    if target == T::zero() {
        return T::zero();
    }
    let mut tau = T::of(2.0) * ((T::of(1.5) * target).asinh() / T::of(3.0)).sinh();
    for _ in 0..4 {
        let g = tau + tau * tau * tau / T::of(3.0) - target;
        let step = g / (T::one() + tau * tau);
        tau = tau - step;
        if step.abs() <= T::epsilon() * tau {
            break;
        }
    }
    let psi = tau.atan();
    // snap to the neighbouring float when it has a smaller forward residual
    let err = |p: T| (cap_fn(p) - target).abs();
    let up = psi + psi * T::epsilon();
    let down = psi - psi * T::epsilon();
    let mut best = psi;
    for cand in [up, down] {
        if cand >= T::zero() && cand < T::FRAC_PI_2() && err(cand) < err(best) {
            best = cand;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    use super::*;

    #[test]
    fn phi_known_roots() {
        assert_eq!(solve_phi(0.0f64).phi, 0.0);
        let half_disk = solve_phi(FRAC_PI_4);
        assert!((half_disk.phi - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(solve_phi(-FRAC_PI_4).phi, -half_disk.phi);
    }

    #[test]
    fn segment_fn_series_matches_closed_form() {
        for phi in [0.049f64, 0.051, 0.02, 0.1] {
            let (s, c) = phi.sin_cos();
            let direct = (phi - s * c) / (2.0 * s * s);
            assert!((segment_fn(phi) - direct).abs() < 1e-12 * direct, "{phi}");
        }
        assert!((segment_fn(1e-8f64) - 1e-8 / 3.0).abs() < 1e-22);
    }

    #[test]
    fn derivative_matches_finite_differences() {
        for phi in [-2.5f64, -1.0, -0.03, 0.01, 0.4, 1.5, 3.0] {
            let h = 1e-6;
            let fd = (segment_fn(phi + h) - segment_fn(phi - h)) / (2.0 * h);
            let an = segment_fn_prime(phi);
            assert!((fd - an).abs() < 1e-6 * an.abs().max(1.0), "{phi}: {fd} vs {an}");
            assert!(an > 0.0);
        }
    }

    #[test]
    fn huge_targets_clamp() {
        let r = solve_phi(2e15f64);
        assert!(r.clamped);
        assert_eq!(r.phi, PI - 1e-8);
        assert_eq!(solve_phi(-2e15f64).phi, -(PI - 1e-8));
    }

    #[test]
    fn psi_known_roots() {
        assert_eq!(solve_psi(0.0f64), 0.0);
        assert!((solve_psi(4.0f64 / 3.0) - FRAC_PI_4).abs() <= 1e-12);
        assert!((solve_psi(14.0f64 / 3.0) - 2f64.atan()).abs() <= 1e-12);
        assert!((2f64.atan() - 1.1071487).abs() < 1e-7);
    }

    #[test]
    fn residuals_small_across_scales() {
        for k in -12..=6 {
            let t = 10f64.powi(k) * 1.7;
            let phi = solve_phi(t).phi;
            assert!((segment_fn(phi) - t).abs() <= 1e-12 * (1.0 + t), "phi {t}");
            let psi = solve_psi(t);
            assert!((cap_fn(psi) - t).abs() <= 1e-12 * (1.0 + t), "psi {t}");
        }
    }

    #[test]
    fn solvers_work_in_f32() {
        let phi = solve_phi(std::f32::consts::FRAC_PI_4).phi;
        assert!((phi - std::f32::consts::FRAC_PI_2).abs() < 1e-5);
        let psi = solve_psi(4.0f32 / 3.0);
        assert!((psi - std::f32::consts::FRAC_PI_4).abs() < 1e-6);
    }
}
