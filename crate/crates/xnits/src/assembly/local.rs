use nalgebra::DMatrix;

use super::Model;
use crate::enrichment::shifted_heaviside;
use crate::geometry::{Point, Side};
use crate::physics::{strain_displacement_matrix, traction_matrix, Material};

/// Local dof layout and basis evaluation for one element: classical dofs for
/// every node (node-major, component-minor) followed by enriched dofs for the
/// enriched nodes in local order.
pub struct ElementDofs {
    pub basis: crate::geometry::ElementBasis,
    pub global: Vec<usize>,
    pub components: usize,
    /// Local node indices carrying enrichment.
    pub enriched_local: Vec<usize>,
    /// Nodal Heaviside sign per local node.
    pub h_sign: Vec<f64>,
}

impl ElementDofs {
    pub fn n_local(&self) -> usize {
        self.global.len()
    }

    pub fn n_classical(&self) -> usize {
        self.basis.n_nodes() * self.components
    }

    /// Extended strain-displacement matrix at `p` for one side of the
    /// interface: classical columns, then enriched columns scaled by the
    /// shifted Heaviside of that side.
    pub fn b_matrix(&self, p: Point, side: Side) -> DMatrix<f64> {
        let grads = self.basis.gradients(p);
        let c = self.components;
        let b_cls = strain_displacement_matrix(&grads, c);
        let nv = b_cls.nrows();
        let mut b = DMatrix::zeros(nv, self.n_local());
        b.view_mut((0, 0), (nv, self.n_classical()))
            .copy_from(&b_cls);
        for (slot, &ln) in self.enriched_local.iter().enumerate() {
            let ht = shifted_heaviside(side, self.h_sign[ln]);
            for comp in 0..c {
                let src = ln * c + comp;
                let dst = self.n_classical() + slot * c + comp;
                for r in 0..nv {
                    b[(r, dst)] = b_cls[(r, src)] * ht;
                }
            }
        }
        b
    }

    /// Displacement trace matrix (components x n_local) on one side:
    /// classical N_i, enriched N_i * H~_i(side).
    pub fn trace_matrix(&self, p: Point, side: Side) -> DMatrix<f64> {
        self.weighted_trace(
            p,
            match side {
                Side::Plus => 1.0,
                Side::Minus => 0.0,
            },
        )
    }

    /// Weighted two-sided trace: w * trace(+) + (1-w) * trace(-).
    pub fn weighted_trace(&self, p: Point, w_plus: f64) -> DMatrix<f64> {
        let n_vals = self.basis.values(p);
        let c = self.components;
        let mut m = DMatrix::zeros(c, self.n_local());
        for (ln, &nv) in n_vals.iter().enumerate() {
            for comp in 0..c {
                m[(comp, ln * c + comp)] = nv;
            }
        }
        for (slot, &ln) in self.enriched_local.iter().enumerate() {
            let ht = w_plus * shifted_heaviside(Side::Plus, self.h_sign[ln])
                + (1.0 - w_plus) * shifted_heaviside(Side::Minus, self.h_sign[ln]);
            for comp in 0..c {
                m[(comp, self.n_classical() + slot * c + comp)] = n_vals[ln] * ht;
            }
        }
        m
    }

    /// Jump matrix [[.]] = trace(+) - trace(-): zero classical columns,
    /// enriched columns 2 N_i.
    pub fn jump_matrix(&self, p: Point) -> DMatrix<f64> {
        let n_vals = self.basis.values(p);
        let c = self.components;
        let mut m = DMatrix::zeros(c, self.n_local());
        for (slot, &ln) in self.enriched_local.iter().enumerate() {
            for comp in 0..c {
                m[(comp, self.n_classical() + slot * c + comp)] = 2.0 * n_vals[ln];
            }
        }
        m
    }

    /// One-sided traction row sigma(.)|side . n (components x n_local), with
    /// n the interface normal (minus to plus).
    pub fn traction_matrix_side(
        &self,
        p: Point,
        side: Side,
        mat: &Material,
        normal: Point,
    ) -> DMatrix<f64> {
        let b = self.b_matrix(p, side);
        let d = crate::physics::constitutive_matrix(mat);
        let n = traction_matrix(normal, self.components).expect("facet normals are unit");
        n * d * b
    }

    /// Weighted average traction gamma * t(+) + (1-gamma) * t(-).
    pub fn avg_traction(
        &self,
        p: Point,
        gamma: f64,
        mat_plus: &Material,
        mat_minus: &Material,
        normal: Point,
    ) -> DMatrix<f64> {
        let tp = self.traction_matrix_side(p, Side::Plus, mat_plus, normal);
        let tm = self.traction_matrix_side(p, Side::Minus, mat_minus, normal);
        tp * gamma + tm * (1.0 - gamma)
    }
}

impl<'a> Model<'a> {
    /// Build the local dof view of an element.
    pub fn element_dofs(&self, element: usize) -> ElementDofs {
        let basis = self.space.basis(element);
        let c = self.dofs.components;
        let mut global = Vec::with_capacity(basis.n_nodes() * 2 * c);
        for &n in &basis.nodes {
            for comp in 0..c {
                global.push(self.dofs.classical_dof(n, comp));
            }
        }
        let mut enriched_local = Vec::new();
        for (ln, &n) in basis.nodes.iter().enumerate() {
            if self.dofs.is_enriched(n) {
                enriched_local.push(ln);
                for comp in 0..c {
                    global.push(self.dofs.enriched_dof(n, comp).expect("enriched"));
                }
            }
        }
        let h_sign = basis
            .nodes
            .iter()
            .map(|&n| self.dofs.nodal_sign[n])
            .collect();
        ElementDofs {
            basis,
            global,
            components: c,
            enriched_local,
            h_sign,
        }
    }
}
