use nalgebra::DVector;

use super::{InterfaceCondition, LinearSystem, Model};
use crate::error::{Error, Result};
use crate::geometry::{segment_gauss, Point, Side};

/// Lagrange-multiplier enforcement with piecewise-constant multipliers: one
/// multiplier per interface facet per constraint component. Constraint rows
/// enforce the facet average of [[u]] = i (jump) or u+/- = g+/- (Dirichlet),
/// producing the saddle system [[K, C^T], [C, 0]].
pub fn assemble_lagrange(
    model: &Model,
    cond: &InterfaceCondition,
    sys: &mut LinearSystem,
) -> Result<()> {
    if model.cut.cut_elements.is_empty() {
        return Err(Error::Assembly("no interface facets to constrain".into()));
    }
    let c = model.dofs.components;
    for ce in &model.cut.cut_elements {
        let ed = model.element_dofs(ce.element);
        for facet in &ce.facets {
            let qp: Vec<(Point, f64)> = if model.mesh.dimension == 1 {
                vec![(facet.endpoints[0], facet.measure)]
            } else {
                segment_gauss(facet.endpoints[0], facet.endpoints[1], model.facet_gauss())
            };
            match cond {
                InterfaceCondition::Jump { i_bar, .. } => {
                    let lam: Vec<usize> = (0..c).map(|_| sys.push_multiplier()).collect();
                    let mut rows = vec![DVector::<f64>::zeros(ed.n_local()); c];
                    let mut data = vec![0.0; c];
                    for &(p, w) in &qp {
                        let jump = ed.jump_matrix(p);
                        let iv = i_bar(p);
                        for comp in 0..c {
                            rows[comp] += jump.row(comp).transpose() * (w / facet.measure);
                            data[comp] += iv[comp] * w / facet.measure;
                        }
                    }
                    scatter(sys, &ed.global, &lam, &rows, &data);
                }
                InterfaceCondition::DirichletTwoSided { g_plus, g_minus } => {
                    for (side, g) in [(Side::Plus, g_plus), (Side::Minus, g_minus)] {
                        let lam: Vec<usize> = (0..c).map(|_| sys.push_multiplier()).collect();
                        let mut rows = vec![DVector::<f64>::zeros(ed.n_local()); c];
                        let mut data = vec![0.0; c];
                        for &(p, w) in &qp {
                            let tr = ed.trace_matrix(p, side);
                            let gv = g(p);
                            for comp in 0..c {
                                rows[comp] += tr.row(comp).transpose() * (w / facet.measure);
                                data[comp] += gv[comp] * w / facet.measure;
                            }
                        }
                        scatter(sys, &ed.global, &lam, &rows, &data);
                    }
                }
            }
        }
    }
    Ok(())
}

fn scatter(
    sys: &mut LinearSystem,
    dofs: &[usize],
    lam: &[usize],
    rows: &[DVector<f64>],
    data: &[f64],
) {
    for (comp, &l) in lam.iter().enumerate() {
        for (k, &d) in dofs.iter().enumerate() {
            let v = rows[comp][k];
            sys.add(l, d, v);
            sys.add(d, l, v);
        }
        sys.add_rhs(l, data[comp]);
    }
}
