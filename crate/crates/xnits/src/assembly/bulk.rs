use super::{LinearSystem, Model};
use crate::geometry::{bulk_quadrature, ElementSide, Side, SubElement};
use crate::physics::constitutive_matrix;

/// Bulk stiffness: classical block B^T D B, with enriched rows/columns
/// carrying the shifted Heaviside per side. Cut elements integrate each side
/// over its own sub-elements with that side's material.
pub fn assemble_bulk(model: &Model, sys: &mut LinearSystem) {
    let degree = model.bulk_degree();
    for e in 0..model.mesh.elements.len() {
        let ed = model.element_dofs(e);
        match model.cut.side[e] {
            ElementSide::Cut => {
                let ce = model.cut.cut(e).expect("classified as cut");
                for sub in &ce.sub_elements {
                    integrate_sub(model, &ed, sub, degree, sys);
                }
            }
            ElementSide::Plus => integrate_whole(model, &ed, e, Side::Plus, degree, sys),
            ElementSide::Minus => integrate_whole(model, &ed, e, Side::Minus, degree, sys),
        }
    }
}

fn integrate_sub(
    model: &Model,
    ed: &super::ElementDofs,
    sub: &SubElement,
    degree: usize,
    sys: &mut LinearSystem,
) {
    let d = constitutive_matrix(model.materials.side(sub.side));
    for (p, w) in bulk_quadrature(sub, degree) {
        let b = ed.b_matrix(p, sub.side);
        let k = b.transpose() * &d * &b * w;
        sys.add_block(&ed.global, &k);
    }
}

fn integrate_whole(
    model: &Model,
    ed: &super::ElementDofs,
    element: usize,
    side: Side,
    degree: usize,
    sys: &mut LinearSystem,
) {
    let d = constitutive_matrix(model.materials.side(side));
    let whole = SubElement {
        vertices: ed.basis.coords[..model.mesh.elements[element].len()].to_vec(),
        side,
        measure: model.mesh.element_measure(element),
    };
    for (p, w) in bulk_quadrature(&whole, degree) {
        let b = ed.b_matrix(p, side);
        let k = b.transpose() * &d * &b * w;
        sys.add_block(&ed.global, &k);
    }
}
