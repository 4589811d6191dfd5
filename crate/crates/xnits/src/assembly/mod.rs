//! Global system assembly: bulk stiffness with shifted enrichment, the
//! interface enforcement variants (Nitsche classical/weighted, penalty,
//! Lagrange multipliers), load vectors, the scalar Poisson boundary family,
//! and the Newton tangent/residual pair.

mod bulk;
mod interface;
mod lagrange;
mod loads;
mod local;
mod newton;
mod params;
mod poisson;
mod system;

pub use bulk::assemble_bulk;
pub use interface::{assemble_nitsche_dirichlet, assemble_nitsche_jump, assemble_penalty};
pub use lagrange::assemble_lagrange;
pub use loads::{assemble_loads, NeumannLoad};
pub use local::ElementDofs;
pub use newton::assemble_newton;
pub use params::{compute_alpha_e, compute_gamma_e, AlphaKind};
pub use poisson::{assemble_poisson_eps_bc, PoissonBcData};
pub(crate) use system::check_residual;
pub use system::{CsrMatrix, LinearSystem, Reduced, Reduction};

use crate::enrichment::EnrichedDofMap;
use crate::geometry::{CutDecomposition, LevelSetShape, Mesh, Point, Space};
use crate::physics::BimaterialAssignment;

/// Vector-valued field of position; the second component is ignored in 1D.
pub type VecField = Box<dyn Fn(Point) -> [f64; 2] + Send + Sync>;

pub fn constant_field(v: [f64; 2]) -> VecField {
    Box::new(move |_| v)
}

/// Interface data: either a prescribed displacement jump and traction jump,
/// or independent Dirichlet values on each side. The traction jump is
/// measured with the library normal (minus toward plus): j = (s+ - s-) . n.
pub enum InterfaceCondition {
    Jump { i_bar: VecField, j_bar: VecField },
    DirichletTwoSided { g_plus: VecField, g_minus: VecField },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Weighting {
    /// gamma_e = 1/2
    Classical,
    /// gamma_e from side measures over stiffness
    Weighted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaMode {
    /// element-local 2 C1^2 from the inverse estimate
    Auto,
    /// one global value
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MethodConfig {
    Nitsche {
        weighting: Weighting,
        alpha: AlphaMode,
    },
    Penalty {
        alpha: f64,
    },
    Lagrange,
}

impl MethodConfig {
    pub fn classical_nitsche_auto() -> Self {
        MethodConfig::Nitsche {
            weighting: Weighting::Classical,
            alpha: AlphaMode::Auto,
        }
    }
    pub fn name(&self) -> &'static str {
        match self {
            MethodConfig::Nitsche {
                weighting: Weighting::Classical,
                ..
            } => "nitsche",
            MethodConfig::Nitsche {
                weighting: Weighting::Weighted,
                ..
            } => "nitsche-weighted",
            MethodConfig::Penalty { .. } => "penalty",
            MethodConfig::Lagrange => "lagrange",
        }
    }
}

/// Borrowed bundle of everything assembly needs.
#[derive(Clone, Copy)]
pub struct Model<'a> {
    pub mesh: &'a Mesh,
    pub space: &'a Space,
    pub shape: &'a LevelSetShape,
    pub cut: &'a CutDecomposition,
    pub dofs: &'a EnrichedDofMap,
    pub materials: &'a BimaterialAssignment,
}

impl<'a> Model<'a> {
    /// Quadrature degree for bulk terms: exact for B^T D B of the space order.
    pub fn bulk_degree(&self) -> usize {
        if self.space.order == 1 {
            2
        } else {
            4
        }
    }

    /// Gauss point count for interface facets: 2 for linears, 3 for quadratics.
    pub fn facet_gauss(&self) -> usize {
        if self.space.order == 1 {
            2
        } else {
            3
        }
    }

    pub fn new_system(&self) -> LinearSystem {
        LinearSystem::new(self.dofs.n_dofs)
    }
}
