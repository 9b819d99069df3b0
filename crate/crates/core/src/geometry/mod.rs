//! Triangle meshes: representation, validation, measurement, file formats
//! and the rigid placement of the slicing axis.

mod frame;
mod io;
mod mesh;
mod vector;

pub use frame::{facets_parallel_to_yz, orient_axis, AxisFrame, Tilt};
pub use io::{load_mesh, save_mesh, weld, MeshFormat, STL_WELD_TOLERANCE};
pub use mesh::{TriangleMesh, ValidationReport, Violation};
pub use vector::{Mat3, Point2, Point3};
