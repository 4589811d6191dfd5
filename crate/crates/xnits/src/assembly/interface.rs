use nalgebra::DVector;

use super::{
    compute_alpha_e, compute_gamma_e, AlphaKind, AlphaMode, InterfaceCondition, LinearSystem,
    MethodConfig, Model, Weighting,
};
use crate::error::{Error, Result};
use crate::geometry::{segment_gauss, CutElement, InterfaceFacet, Point, Side};

fn facet_quadrature(model: &Model, facet: &InterfaceFacet) -> Vec<(Point, f64)> {
    if model.mesh.dimension == 1 {
        vec![(facet.endpoints[0], facet.measure)]
    } else {
        segment_gauss(facet.endpoints[0], facet.endpoints[1], model.facet_gauss())
    }
}

fn field_vec(f: &super::VecField, p: Point, c: usize) -> DVector<f64> {
    let v = f(p);
    DVector::from_iterator(c, v.iter().take(c).copied())
}

struct NitscheParams {
    gamma: f64,
    alpha_jump: f64,
    alpha_plus: f64,
    alpha_minus: f64,
}

fn nitsche_params(
    model: &Model,
    ce: &CutElement,
    facet: &InterfaceFacet,
    cfg: &MethodConfig,
) -> Result<NitscheParams> {
    let (weighting, alpha_mode) = match cfg {
        MethodConfig::Nitsche { weighting, alpha } => (*weighting, *alpha),
        _ => {
            return Err(Error::Assembly(
                "nitsche assembler needs a Nitsche config".into(),
            ))
        }
    };
    let gamma = match weighting {
        Weighting::Classical => 0.5,
        Weighting::Weighted => compute_gamma_e(
            ce.area_plus,
            ce.area_minus,
            &model.materials.plus,
            &model.materials.minus,
        )?,
    };
    let (alpha_jump, alpha_plus, alpha_minus) = match alpha_mode {
        AlphaMode::Fixed(a) => {
            if a <= 0.0 {
                return Err(Error::Assembly("fixed alpha must be positive".into()));
            }
            (a, a, a)
        }
        AlphaMode::Auto => {
            // the appendix estimates are for piecewise-constant gradients;
            // quadratic shape functions need the p^2 trace-inequality factor
            let degree_factor = (model.space.order * model.space.order) as f64;
            let kind = match weighting {
                Weighting::Classical => AlphaKind::Jump,
                Weighting::Weighted => AlphaKind::Weighted,
            };
            let aj = compute_alpha_e(
                kind,
                facet.measure,
                ce.area_plus,
                ce.area_minus,
                &model.materials.plus,
                &model.materials.minus,
            )?;
            let ap = compute_alpha_e(
                AlphaKind::DirichletPlus,
                facet.measure,
                ce.area_plus,
                ce.area_minus,
                &model.materials.plus,
                &model.materials.minus,
            )?;
            let am = compute_alpha_e(
                AlphaKind::DirichletMinus,
                facet.measure,
                ce.area_plus,
                ce.area_minus,
                &model.materials.plus,
                &model.materials.minus,
            )?;
            (aj * degree_factor, ap * degree_factor, am * degree_factor)
        }
    };
    Ok(NitscheParams {
        gamma,
        alpha_jump,
        alpha_plus,
        alpha_minus,
    })
}

/// Nitsche enforcement of a prescribed displacement jump i and traction jump
/// j: consistency, symmetry and stabilization terms on every interface facet.
/// The average flux uses the configured weighting; the jump in flux enters
/// the load with the conjugate weight.
pub fn assemble_nitsche_jump(
    model: &Model,
    cond: &InterfaceCondition,
    cfg: &MethodConfig,
    sys: &mut LinearSystem,
) -> Result<()> {
    let (i_bar, j_bar) = match cond {
        InterfaceCondition::Jump { i_bar, j_bar } => (i_bar, j_bar),
        _ => return Err(Error::Assembly("jump assembler needs jump data".into())),
    };
    let c = model.dofs.components;
    for ce in &model.cut.cut_elements {
        let ed = model.element_dofs(ce.element);
        for facet in &ce.facets {
            let prm = nitsche_params(model, ce, facet, cfg)?;
            for (p, w) in facet_quadrature(model, facet) {
                let jump = ed.jump_matrix(p);
                let avg_t = ed.avg_traction(
                    p,
                    prm.gamma,
                    &model.materials.plus,
                    &model.materials.minus,
                    facet.normal,
                );
                let consistency = jump.transpose() * &avg_t;
                let stab = jump.transpose() * &jump * prm.alpha_jump;
                let k = (&consistency + consistency.transpose() + stab) * w;
                sys.add_block(&ed.global, &k);

                let iv = field_vec(i_bar, p, c);
                let jv = field_vec(j_bar, p, c);
                let conj_trace = ed.weighted_trace(p, 1.0 - prm.gamma);
                let f = (avg_t.transpose() * &iv + jump.transpose() * &iv * prm.alpha_jump
                    - conj_trace.transpose() * &jv)
                    * w;
                sys.add_rhs_block(&ed.global, &f);
            }
        }
    }
    Ok(())
}

/// Nitsche enforcement of two-sided Dirichlet data g+/g-: two one-sided
/// problems with independent stabilization, each using its own outward
/// normal (the library normal for the minus side, its negative for plus).
pub fn assemble_nitsche_dirichlet(
    model: &Model,
    cond: &InterfaceCondition,
    cfg: &MethodConfig,
    sys: &mut LinearSystem,
) -> Result<()> {
    let (g_plus, g_minus) = match cond {
        InterfaceCondition::DirichletTwoSided { g_plus, g_minus } => (g_plus, g_minus),
        _ => {
            return Err(Error::Assembly(
                "dirichlet assembler needs two-sided data".into(),
            ))
        }
    };
    let c = model.dofs.components;
    for ce in &model.cut.cut_elements {
        let ed = model.element_dofs(ce.element);
        for facet in &ce.facets {
            let prm = nitsche_params(model, ce, facet, cfg)?;
            for (p, w) in facet_quadrature(model, facet) {
                for (side, alpha, g) in [
                    (Side::Plus, prm.alpha_plus, g_plus),
                    (Side::Minus, prm.alpha_minus, g_minus),
                ] {
                    let sgn = side.sign(); // +1 plus side, -1 minus side
                    let tr = ed.trace_matrix(p, side);
                    let tn =
                        ed.traction_matrix_side(p, side, model.materials.side(side), facet.normal);
                    let consistency = tr.transpose() * &tn * sgn;
                    let stab = tr.transpose() * &tr * alpha;
                    let k = (&consistency + consistency.transpose() + stab) * w;
                    sys.add_block(&ed.global, &k);

                    let gv = field_vec(g, p, c);
                    let f = (tn.transpose() * &gv * sgn + tr.transpose() * &gv * alpha) * w;
                    sys.add_rhs_block(&ed.global, &f);
                }
            }
        }
    }
    Ok(())
}

/// Penalty baseline: only the stabilization blocks and stabilization rhs of
/// the corresponding Nitsche assembly.
pub fn assemble_penalty(
    model: &Model,
    cond: &InterfaceCondition,
    alpha: f64,
    sys: &mut LinearSystem,
) -> Result<()> {
    if alpha <= 0.0 {
        return Err(Error::Assembly("penalty parameter must be positive".into()));
    }
    let c = model.dofs.components;
    for ce in &model.cut.cut_elements {
        let ed = model.element_dofs(ce.element);
        for facet in &ce.facets {
            for (p, w) in facet_quadrature(model, facet) {
                match cond {
                    InterfaceCondition::Jump { i_bar, .. } => {
                        let jump = ed.jump_matrix(p);
                        let k = jump.transpose() * &jump * (alpha * w);
                        sys.add_block(&ed.global, &k);
                        let iv = field_vec(i_bar, p, c);
                        let f = jump.transpose() * &iv * (alpha * w);
                        sys.add_rhs_block(&ed.global, &f);
                    }
                    InterfaceCondition::DirichletTwoSided { g_plus, g_minus } => {
                        for (side, g) in [(Side::Plus, g_plus), (Side::Minus, g_minus)] {
                            let tr = ed.trace_matrix(p, side);
                            let k = tr.transpose() * &tr * (alpha * w);
                            sys.add_block(&ed.global, &k);
                            let gv = field_vec(g, p, c);
                            let f = tr.transpose() * &gv * (alpha * w);
                            sys.add_rhs_block(&ed.global, &f);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
