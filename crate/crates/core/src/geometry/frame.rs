//! Rigid placement of the slicing axis onto +x.

use serde::Serialize;

use super::mesh::TriangleMesh;
use super::vector::{Mat3, Point3};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Golden angle, used to pick the fixed tilt axis.
const GOLDEN_ANGLE: f64 = 2.399_963_229_728_653;
const AUTO_TILT_START: f64 = 1e-3;
const AUTO_TILT_MAX_DOUBLINGS: usize = 20;

/// How to treat facets lying in a plane `x = const` after the axis is
/// aligned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tilt {
    /// Fail if any facet is parallel to the yz-plane.
    None,
    /// Compose a deterministic tilt, doubling its angle until no facet is
    /// parallel to the yz-plane.
    Auto,
    /// Always compose a tilt of this many radians.
    Angle(f64),
}

impl std::str::FromStr for Tilt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "none" => Ok(Tilt::None),
            "auto" => Ok(Tilt::Auto),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|a| a.is_finite())
                .map(Tilt::Angle)
                .ok_or_else(|| Error::invalid(format!("tilt must be none, auto or radians, got {other:?}"))),
        }
    }
}

/// The rigid transform applied by [`orient_axis`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisFrame<T> {
    /// Maps original coordinates to the sliced frame; the requested axis
    /// lands on +x (up to the tilt).
    pub rotation: Mat3<T>,
    /// Radians of extra tilt composed after the alignment.
    pub tilt_angle: T,
}

impl<T: Scalar> AxisFrame<T> {
    pub fn identity() -> Self {
        Self { rotation: Mat3::identity(), tilt_angle: T::zero() }
    }
}

/// Fixed axis for tilt rotations: perpendicular to x, at the golden angle in
/// the yz-plane.
fn tilt_axis<T: Scalar>() -> Point3<T> {
    let (s, c) = GOLDEN_ANGLE.sin_cos();
    Point3::from_f64([0.0, c, s])
}

/// Rotation taking the unit vector `a` onto +x.
fn align_to_x<T: Scalar>(a: Point3<T>) -> Mat3<T> {
    let ex = Point3::new(T::one(), T::zero(), T::zero());
    let cos = a.dot(ex).max(-T::one()).min(T::one());
    let axis = a.cross(ex);
    let sin = axis.norm();
    if sin <= T::epsilon() {
        if cos > T::zero() {
            return Mat3::identity();
        }
        // antiparallel: half turn about z
        return Mat3::rotation(Point3::new(T::zero(), T::zero(), T::one()), T::PI());
    }
    Mat3::rotation(axis * (T::one() / sin), sin.atan2(cos))
}

/// Faces whose normal is parallel to the x-axis, i.e. facets lying in a
/// plane `x = const`.
pub fn facets_parallel_to_yz<T: Scalar>(mesh: &TriangleMesh<T>) -> Vec<usize> {
    let tol = T::roundoff(1e-12);
    (0..mesh.faces().len())
        .filter(|&f| match mesh.face_normal(f) {
            Some(n) => n.y.hypot(n.z) <= tol,
            None => false,
        })
        .collect()
}

/// Rotates `mesh` so `axis` becomes +x, optionally composing a small tilt so
/// no facet lies in a plane `x = const`.
pub fn orient_axis<T: Scalar>(
    mesh: &TriangleMesh<T>,
    axis: Point3<T>,
    tilt: Tilt,
) -> Result<(TriangleMesh<T>, AxisFrame<T>)> {
    let axis = axis.normalized().ok_or_else(|| Error::invalid("slicing axis must be nonzero"))?;
    let align = align_to_x(axis);
    let aligned = mesh.rotated(&align);

    let (rotation, tilt_angle) = match tilt {
        Tilt::None => {
            let faces = facets_parallel_to_yz(&aligned);
            if !faces.is_empty() {
                return Err(Error::ParallelFacets { faces });
            }
            (align, T::zero())
        }
        Tilt::Angle(a) => {
            let angle = T::of(a);
            let rot = Mat3::rotation(tilt_axis(), angle).mul(&align);
            let faces = facets_parallel_to_yz(&mesh.rotated(&rot));
            if !faces.is_empty() {
                return Err(Error::ParallelFacets { faces });
            }
            (rot, angle)
        }
        Tilt::Auto => {
            if facets_parallel_to_yz(&aligned).is_empty() {
                (align, T::zero())
            } else {
                let mut angle = T::of(AUTO_TILT_START);
                let mut found = None;
                for _ in 0..AUTO_TILT_MAX_DOUBLINGS {
                    let rot = Mat3::rotation(tilt_axis(), angle).mul(&align);
                    if facets_parallel_to_yz(&mesh.rotated(&rot)).is_empty() {
                        found = Some(rot);
                        break;
                    }
                    angle = angle * T::of(2.0);
                }
                match found {
                    Some(rot) => (rot, angle),
                    None => return Err(Error::ParallelFacets { faces: facets_parallel_to_yz(&aligned) }),
                }
            }
        }
    };
    Ok((mesh.rotated(&rotation), AxisFrame { rotation, tilt_angle }))
}
