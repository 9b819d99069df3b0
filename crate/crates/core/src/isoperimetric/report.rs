//! End-to-end verification of the chain for one mesh and its JSON report.

use serde::ser::Error as _;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::error::{Error, Result};
use crate::geometry::{orient_axis, AxisFrame, Point3, Tilt, TriangleMesh};
use crate::profile::{build_profile, revolution_lateral_area, SlicedProfile};
use crate::scalar::{fmt17, Scalar};

use super::cap::{ball_bound, cap_trace, CapTrace};
use super::{check_slab_ia, iia_margin, isoperimetric_quotient};

/// Relative slack `2.56 / n` granted to inequalities that carry
/// discretization error (1% at 256 slices).
pub fn tolerance(n: usize) -> f64 {
    2.56 / n as f64
}

/// Relative slack for the planar inequality, which is exact for polygons.
const IIA_SLACK: f64 = 1e-9;

/// A number serialized with 17 significant digits; non-finite values become
/// `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            RawValue::from_string(fmt17(self.0)).map_err(S::Error::custom)?.serialize(s)
        } else {
            s.serialize_none()
        }
    }
}

fn ser_num<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    Num(*v).serialize(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(serialize_with = "ser_num")]
    pub margin: f64,
}

impl Verdict {
    fn new(margin: f64, threshold: f64) -> Self {
        let status = if margin >= threshold { Status::Pass } else { Status::Fail };
        Verdict { status, margin }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Margins and outcomes of the five inequalities.
///
/// * `Ia`: smallest per-cell `(slab − √(U² + Q'²) Δx) / slab`, passes above `−tol`.
/// * `IIa`: smallest `(U² − 4πQ) / U²`, passes above `−1e-9`.
/// * `IIb`: `S − lateral`, passes above `−tol · S`.
/// * `IIIa`: smallest of `lateral − bound` and every cap defect, passes above `−tol · bound`.
/// * `IIIb`: `S − bound`, passes above `−tol · bound`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct Verdicts {
    pub Ia: Verdict,
    pub IIa: Verdict,
    pub IIb: Verdict,
    pub IIIa: Verdict,
    pub IIIb: Verdict,
}

impl Verdicts {
    pub fn all(&self) -> [(&'static str, Verdict); 5] {
        [("Ia", self.Ia), ("IIa", self.IIa), ("IIb", self.IIb), ("IIIa", self.IIIa), ("IIIb", self.IIIb)]
    }

    pub fn all_pass(&self) -> bool {
        self.all().iter().all(|(_, v)| v.passed())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct SliceRecord {
    #[serde(serialize_with = "ser_num")]
    pub x: f64,
    #[serde(serialize_with = "ser_num")]
    pub U: f64,
    #[serde(serialize_with = "ser_num")]
    pub Q: f64,
    #[serde(serialize_with = "ser_num")]
    pub Qp: f64,
    /// Slab area divided by the cell width.
    #[serde(serialize_with = "ser_num")]
    pub slab_density: f64,
    /// `√(U² + Q'²)`.
    #[serde(serialize_with = "ser_num")]
    pub rhs_Ia: f64,
    /// `slab_density − rhs_Ia`.
    #[serde(serialize_with = "ser_num")]
    pub margin_Ia: f64,
    /// `U² − 4πQ`.
    #[serde(serialize_with = "ser_num")]
    pub margin_IIa: f64,
    /// Lateral area so far minus the equal-volume cap area.
    #[serde(serialize_with = "ser_num")]
    pub cap_defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    #[serde(rename = "S_mesh", serialize_with = "ser_num")]
    pub s_mesh: f64,
    #[serde(rename = "V_mesh", serialize_with = "ser_num")]
    pub v_mesh: f64,
    /// Area of the symmetrized body, end disks included.
    #[serde(serialize_with = "ser_num")]
    pub lateral: f64,
    #[serde(serialize_with = "ser_num")]
    pub end_disks: f64,
    #[serde(serialize_with = "ser_num")]
    pub ball_bound: f64,
    #[serde(serialize_with = "ser_num")]
    pub quotient: f64,
    pub verdicts: Verdicts,
    pub slices: Vec<SliceRecord>,
    pub warnings: Vec<String>,
}

impl InequalityReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        s.push('\n');
        s
    }

    /// `S=… lateral=… bound=… quotient=…`
    pub fn summary(&self) -> String {
        format!(
            "S={} lateral={} bound={} quotient={}",
            fmt17(self.s_mesh),
            fmt17(self.lateral),
            fmt17(self.ball_bound),
            fmt17(self.quotient)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Slicing direction in the input coordinates.
    pub axis: [f64; 3],
    pub tilt: Tilt,
    pub slices: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { axis: [1.0, 0.0, 0.0], tilt: Tilt::Auto, slices: 256 }
    }
}

/// Everything computed on the way to a report.
#[derive(Debug, Clone)]
pub struct Verification<T> {
    pub report: InequalityReport,
    /// The input rotated into the slicing frame.
    pub mesh: TriangleMesh<T>,
    pub frame: AxisFrame<T>,
    pub profile: SlicedProfile<T>,
    pub cap: CapTrace<T>,
}

/// Verifies the chain with the default axis (x) and automatic tilt.
pub fn verify_chain<T: Scalar>(mesh: &TriangleMesh<T>, n: usize) -> Result<InequalityReport> {
    verify_chain_with(mesh, &VerifyOptions { slices: n, ..VerifyOptions::default() }).map(|v| v.report)
}

pub fn verify_chain_with<T: Scalar>(mesh: &TriangleMesh<T>, options: &VerifyOptions) -> Result<Verification<T>> {
    let validation = mesh.validate();
    if !validation.is_valid() {
        return Err(Error::InvalidMesh(validation));
    }
    let (oriented, frame) = orient_axis(mesh, Point3::from_f64(options.axis), options.tilt)?;
    let s_mesh = oriented.surface_area();
    let v_mesh = oriented.volume()?;
    let profile = build_profile(&oriented, options.slices)?;
    let (_, end_disks) = revolution_lateral_area(&profile);
    let lateral_total = profile.cells.as_ref().expect("mesh profiles carry cell integrals").total_lateral();
    let bound = ball_bound(v_mesh);
    let quotient = isoperimetric_quotient(s_mesh, v_mesh)?;
    let cap = cap_trace(&profile)?;
    let ia = check_slab_ia(&profile);

    let f = |v: T| v.to_f64_lossy();
    let tol = tolerance(options.slices);
    let dx = profile.dx();
    let ia_rhs = profile.cells.as_ref().map(|c| c.ia_cells()).unwrap_or_default();
    let slices: Vec<SliceRecord> = (0..profile.len())
        .map(|i| {
            let rhs = ia_rhs[i] / dx;
            let slab_density = profile.slab[i] / dx;
            SliceRecord {
                x: f(profile.x[i]),
                U: f(profile.u[i]),
                Q: f(profile.q[i]),
                Qp: f(profile.qp[i]),
                slab_density: f(slab_density),
                rhs_Ia: f(rhs),
                margin_Ia: f(slab_density - rhs),
                margin_IIa: f(iia_margin(profile.q[i], profile.u[i])),
                cap_defect: f(cap.samples[i].defect),
            }
        })
        .collect();

    let ia_margin = ia
        .iter()
        .zip(&profile.slab)
        .map(|(&m, &slab)| f(m / slab))
        .fold(f64::INFINITY, f64::min);
    let iia = profile
        .q
        .iter()
        .zip(&profile.u)
        .map(|(&q, &u)| f(iia_margin(q, u) / (u * u)))
        .fold(f64::INFINITY, f64::min);
    let (s, lat, bnd) = (f(s_mesh), f(lateral_total), f(bound));
    let iiia = (lat - bnd).min(f(cap.min_defect()));
    let verdicts = Verdicts {
        Ia: Verdict::new(ia_margin, -tol),
        IIa: Verdict::new(iia, -IIA_SLACK),
        IIb: Verdict::new(s - lat, -tol * s),
        IIIa: Verdict::new(iiia, -tol * bnd),
        IIIb: Verdict::new(s - bnd, -tol * bnd),
    };

    let mut warnings = Vec::new();
    if frame.tilt_angle != T::zero() {
        warnings.push(format!("tilted by {} rad to clear facets parallel to the slicing planes", fmt17(f(frame.tilt_angle))));
    }
    let (d0, d1) = profile.end_disks();
    for (side, d) in [("x0", d0), ("x1", d1)] {
        if d > T::zero() {
            warnings.push(format!("flat end at {side}: disk of area {} added to the symmetrized body", fmt17(f(d))));
        }
    }
    warnings.extend(profile.warnings.iter().cloned());
    for p in cap.pinches() {
        warnings.push(format!("symmetrized body pinched at x = {}", fmt17(f(p.x))));
    }

    let report = InequalityReport {
        s_mesh: s,
        v_mesh: f(v_mesh),
        lateral: lat,
        end_disks: f(end_disks),
        ball_bound: bnd,
        quotient: f(quotient),
        verdicts,
        slices,
        warnings,
    };
    Ok(Verification { report, mesh: oriented, frame, profile, cap })
}
