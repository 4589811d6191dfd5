//! Meshes, level-set interfaces, cut-element decomposition and quadrature.

mod cut;
mod levelset;
mod mesh;
mod quadrature;
pub(crate) mod space;

pub use cut::{
    classify_and_cut, CutDecomposition, CutElement, ElementSide, InterfaceFacet, Side, SubElement,
};
pub use levelset::{levelset_value, LevelSetShape};
pub use mesh::{build_structured_mesh, read_mesh_text, write_mesh_text, Domain, GridKind, Mesh};
pub use quadrature::{bulk_quadrature, segment_gauss, triangle_rule};
pub use space::{ElemKind, ElementBasis, Space};

/// A point in the plane; 1D meshes keep the second coordinate at zero.
pub type Point = [f64; 2];

pub(crate) fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

/// Signed area of a triangle given counter-clockwise vertices.
pub(crate) fn tri_signed_area(a: Point, b: Point, c: Point) -> f64 {
    0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
}
