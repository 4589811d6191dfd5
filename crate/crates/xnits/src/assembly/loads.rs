use nalgebra::DVector;

use super::{LinearSystem, Model, VecField};
use crate::geometry::{bulk_quadrature, segment_gauss, ElementSide, Point, Side, SubElement};

/// Traction data on a tagged part of the outer boundary.
pub struct NeumannLoad {
    pub tag: String,
    pub traction: VecField,
}

/// Body-force and Neumann contributions. Enriched rows on cut elements carry
/// the per-side shifted Heaviside, integrated sub-element-wise.
pub fn assemble_loads(
    model: &Model,
    body_force: Option<&VecField>,
    neumann: &[NeumannLoad],
    sys: &mut LinearSystem,
) {
    let c = model.dofs.components;
    if let Some(f) = body_force {
        let degree = model.bulk_degree();
        for e in 0..model.mesh.elements.len() {
            let ed = model.element_dofs(e);
            let mut accumulate = |sub: &SubElement| {
                for (p, w) in bulk_quadrature(sub, degree) {
                    let tr = ed.trace_matrix(p, sub.side);
                    let fv = f(p);
                    let fv = DVector::from_iterator(c, fv.iter().take(c).copied());
                    let contrib = tr.transpose() * fv * w;
                    sys.add_rhs_block(&ed.global, &contrib);
                }
            };
            match model.cut.side[e] {
                ElementSide::Cut => {
                    for sub in &model.cut.cut(e).expect("cut").sub_elements {
                        accumulate(sub);
                    }
                }
                ElementSide::Plus => accumulate(&whole(model, &ed, e, Side::Plus)),
                ElementSide::Minus => accumulate(&whole(model, &ed, e, Side::Minus)),
            }
        }
    }

    for load in neumann {
        for (facet_nodes, tag) in &model.mesh.boundary_facets {
            if tag != &load.tag {
                continue;
            }
            if model.mesh.dimension == 1 {
                let node = facet_nodes[0];
                let p = model.mesh.node_coords[node];
                add_boundary_point(model, node, p, &load.traction, sys);
            } else {
                add_boundary_edge(model, facet_nodes, &load.traction, sys);
            }
        }
    }
}

fn whole(model: &Model, ed: &super::ElementDofs, e: usize, side: Side) -> SubElement {
    SubElement {
        vertices: ed.basis.coords[..model.mesh.elements[e].len()].to_vec(),
        side,
        measure: model.mesh.element_measure(e),
    }
}

fn add_boundary_point(
    model: &Model,
    node: usize,
    p: Point,
    traction: &VecField,
    sys: &mut LinearSystem,
) {
    // 1D boundary facet: point load t * v(node). The shifted enrichment
    // vanishes at nodes, so only the classical dof picks it up.
    let c = model.dofs.components;
    let t = traction(p);
    for comp in 0..c {
        sys.add_rhs(model.dofs.classical_dof(node, comp), t[comp]);
    }
}

fn add_boundary_edge(
    model: &Model,
    facet_nodes: &[usize],
    traction: &VecField,
    sys: &mut LinearSystem,
) {
    let c = model.dofs.components;
    let edge_nodes = model.space.edge_nodes(facet_nodes);
    let p0 = model.mesh.node_coords[facet_nodes[0]];
    let p1 = model.mesh.node_coords[facet_nodes[1]];
    for (p, w) in segment_gauss(p0, p1, model.facet_gauss()) {
        let shapes = crate::geometry::space::edge_shape(model.space.order, edge_param(p0, p1, p));
        let ls = model.shape.value(p);
        let side = if ls >= 0.0 { Side::Plus } else { Side::Minus };
        let t = traction(p);
        for (k, &node) in edge_nodes.iter().enumerate() {
            for comp in 0..c {
                sys.add_rhs(
                    model.dofs.classical_dof(node, comp),
                    shapes[k] * t[comp] * w,
                );
                if let Some(dof) = model.dofs.enriched_dof(node, comp) {
                    let ht =
                        crate::enrichment::shifted_heaviside(side, model.dofs.nodal_sign[node]);
                    sys.add_rhs(dof, shapes[k] * ht * t[comp] * w);
                }
            }
        }
    }
}

fn edge_param(p0: Point, p1: Point, p: Point) -> f64 {
    let dx = [p1[0] - p0[0], p1[1] - p0[1]];
    let dp = [p[0] - p0[0], p[1] - p0[1]];
    let l2 = dx[0] * dx[0] + dx[1] * dx[1];
    (dp[0] * dx[0] + dp[1] * dx[1]) / l2
}
