use crate::error::{Error, Result};
use crate::physics::Material;

/// Which coercivity estimate the stabilization comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaKind {
    DirichletMinus,
    DirichletPlus,
    /// classical jump average (gamma = 1/2)
    Jump,
    /// weighted average with the measure-over-stiffness weights
    Weighted,
}

/// Weighted-average weight of the plus side for one cut element:
/// gamma_e = (A+/E+) / (A+/E+ + A-/E-). The material scale is Young's
/// modulus, consistent with the weighted inverse estimate.
pub fn compute_gamma_e(
    a_plus: f64,
    a_minus: f64,
    mat_plus: &Material,
    mat_minus: &Material,
) -> Result<f64> {
    if a_plus + a_minus <= 0.0 {
        return Err(Error::Assembly("both side measures are zero".into()));
    }
    let wp = a_plus / mat_plus.e_mod;
    let wm = a_minus / mat_minus.e_mod;
    Ok(wp / (wp + wm))
}

/// Element-local stabilization alpha_e = 2 C1^2 from the generalized inverse
/// estimate: per side for Dirichlet conditions, averaged for jump conditions,
/// and the contrast-robust weighted variant.
pub fn compute_alpha_e(
    kind: AlphaKind,
    l_s: f64,
    a_plus: f64,
    a_minus: f64,
    mat_plus: &Material,
    mat_minus: &Material,
) -> Result<f64> {
    let check = |a: f64, name: &str| {
        if a <= 0.0 {
            Err(Error::Assembly(format!("side measure {name} is zero")))
        } else {
            Ok(())
        }
    };
    let c1_sq = match kind {
        AlphaKind::DirichletMinus => {
            check(a_minus, "A-")?;
            mat_minus.e_mod * l_s / a_minus
        }
        AlphaKind::DirichletPlus => {
            check(a_plus, "A+")?;
            mat_plus.e_mod * l_s / a_plus
        }
        AlphaKind::Jump => {
            check(a_plus, "A+")?;
            check(a_minus, "A-")?;
            0.25 * l_s * (mat_minus.e_mod / a_minus + mat_plus.e_mod / a_plus)
        }
        AlphaKind::Weighted => {
            check(a_plus, "A+")?;
            check(a_minus, "A-")?;
            l_s / (a_minus / mat_minus.e_mod + a_plus / mat_plus.e_mod)
        }
    };
    Ok(2.0 * c1_sq)
}
