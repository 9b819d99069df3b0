//! Numerical certification of the isoperimetric inequality chain
//! `S ≥ ∫√(4πQ + Q'²) dx ≥ ∛(36πV²)` on triangle meshes.
//!
//! A body is sliced by planes `x = const`. Each section contributes its area
//! `Q` and perimeter `U`; replacing every section by a centred disk of the
//! same area gives the symmetrized solid of revolution. The crate measures
//! the mesh, the symmetrized body and the ball of equal volume, and checks
//! each inequality of the chain together with the planar and per-slice
//! inequalities behind it.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the aliases below
//! fix `f64`.
//!
//! ```
//! use isoperim::{generate, verify_chain, Mesh, ShapeSpec};
//!
//! let cube: Mesh = generate(&ShapeSpec::cube(1.0)).unwrap();
//! let report = verify_chain(&cube, 64).unwrap();
//! assert!(report.verdicts.all_pass());
//! assert!(report.s_mesh > report.lateral && report.lateral > report.ball_bound);
//! ```

pub mod error;
pub mod geometry;
pub mod isoperimetric;
pub mod profile;
pub mod scalar;
pub mod shapes;
pub mod slicer;

pub use error::{Error, Result};
pub use geometry::{load_mesh, orient_axis, save_mesh, AxisFrame, MeshFormat, Tilt, TriangleMesh, ValidationReport};
pub use isoperimetric::{
    approximation_factor, cap_trace, isoperimetric_quotient, segment_trace, solve_phi, solve_psi, verify_chain,
    verify_chain_with, InequalityReport, VerifyOptions,
};
pub use profile::{build_profile, revolution_lateral_area, revolve_mesh, SlicedProfile};
pub use scalar::Scalar;
pub use shapes::{analytic_reference, generate, ShapeKind, ShapeSpec};
pub use slicer::{chain_loops, slab_area, slice_at, ChainedCurve, CrossSection, PlanarLoop};

pub type Mesh = TriangleMesh<f64>;
pub type Profile = SlicedProfile<f64>;
pub type Section = CrossSection<f64>;
pub type Chain = ChainedCurve<f64>;
pub type Frame = AxisFrame<f64>;
pub type SegmentTrace = isoperimetric::SegmentTrace<f64>;
pub type CapTrace = isoperimetric::CapTrace<f64>;
pub type RevolutionBody = profile::RevolutionBody<f64>;
pub type Point3 = geometry::Point3<f64>;
pub type Point2 = geometry::Point2<f64>;
