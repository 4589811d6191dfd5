use nalgebra::DVector;

use super::{
    assemble_bulk, assemble_loads, assemble_nitsche_dirichlet, assemble_nitsche_jump,
    InterfaceCondition, LinearSystem, MethodConfig, Model, NeumannLoad, VecField,
};
use crate::error::Result;

/// Tangent and negated residual for the Newton iteration at state `u_k`.
///
/// The tangent carries the full Nitsche operator (consistency, the
/// symmetrization and the stabilization); the residual contains the internal
/// forces at `u_k` plus the constraint-violation terms alpha([[u_k]] - i) or
/// alpha(u_k|side - g), so with linear elasticity (D_T = D) a single step
/// lands on the direct solution.
pub fn assemble_newton(
    model: &Model,
    cond: &InterfaceCondition,
    cfg: &MethodConfig,
    body_force: Option<&VecField>,
    neumann: &[NeumannLoad],
    constraints: &[(usize, f64)],
    u_k: &[f64],
) -> Result<(LinearSystem, DVector<f64>)> {
    let mut sys = model.new_system();
    assemble_bulk(model, &mut sys);
    match cond {
        InterfaceCondition::Jump { .. } => assemble_nitsche_jump(model, cond, cfg, &mut sys)?,
        InterfaceCondition::DirichletTwoSided { .. } => {
            assemble_nitsche_dirichlet(model, cond, cfg, &mut sys)?
        }
    }
    assemble_loads(model, body_force, neumann, &mut sys);
    for &(dof, v) in constraints {
        sys.constrain(dof, v);
    }
    // minus residual: -R'(u_k) = f_ext - K_T u_k (tangent equals the operator
    // for linear elasticity, so internal forces are K_T u_k)
    let k = sys.to_dense();
    let u = DVector::from_row_slice(u_k);
    let f = DVector::from_row_slice(&sys.rhs);
    let minus_residual = f - k * u;
    Ok((sys, minus_residual))
}
