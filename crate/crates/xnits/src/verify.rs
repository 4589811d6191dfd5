//! Analytic oracles, error norms, interfacial flux recovery and
//! convergence-rate fitting.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{assemble_bulk, assemble_loads, Model, NeumannLoad, VecField};
use crate::error::{Error, Result};
use crate::geometry::{bulk_quadrature, segment_gauss, ElementSide, Point, Side, SubElement};
use crate::physics::{constitutive_matrix, Material};
use crate::solve::Solution;

/// One row of a study: mesh size, dof count, error norms and diagnostics.
#[derive(Debug, Clone)]
pub struct ErrorReport {
    pub h: f64,
    pub dofs: usize,
    pub energy_error: f64,
    pub energy_error_rel: f64,
    pub l2_error: f64,
    pub l2_error_rel: f64,
    pub condition_number: Option<f64>,
    pub method: String,
    pub alpha: Option<f64>,
}

/// Exact solution fields evaluated per interface side, so that quadrature
/// points of a linearized cut land on the intended branch.
pub trait ExactField {
    fn displacement(&self, p: Point, side: Side) -> [f64; 2];
    /// Voigt strain; 1D fields use the first entry.
    fn strain(&self, p: Point, side: Side) -> [f64; 3];
}

/// Piecewise solution of the clamped bar with a displacement jump 2g at an
/// interior interface and zero traction jump: the stress is uniform,
/// sigma = -2 E g / H, and u is linear on each side.
pub fn bar_exact(y: f64, side: Side, g: f64, h_len: f64, e_mod: f64) -> (f64, f64) {
    let sigma = -2.0 * e_mod * g / h_len;
    let u = match side {
        Side::Minus => -2.0 * g / h_len * y,
        Side::Plus => -2.0 * g / h_len * y + 2.0 * g,
    };
    (u, sigma)
}

/// [`ExactField`] view of [`bar_exact`].
pub struct BarField {
    pub g: f64,
    pub h_len: f64,
    pub e_mod: f64,
}

impl ExactField for BarField {
    fn displacement(&self, p: Point, side: Side) -> [f64; 2] {
        [bar_exact(p[0], side, self.g, self.h_len, self.e_mod).0, 0.0]
    }
    fn strain(&self, _p: Point, _side: Side) -> [f64; 3] {
        [-2.0 * self.g / self.h_len, 0.0, 0.0]
    }
}

/// Plane-strain equivalent of the clamped block with lateral free faces:
/// uniform sigma_zz with Poisson widening. Coordinates are (x, z).
pub struct StripField {
    pub g: f64,
    pub length: f64,
    pub nu: f64,
}

impl ExactField for StripField {
    fn displacement(&self, p: Point, side: Side) -> [f64; 2] {
        let ux = 2.0 * self.nu * self.g / ((1.0 - self.nu) * self.length) * p[0];
        let uz = -2.0 * self.g / self.length * p[1]
            + if side == Side::Plus {
                2.0 * self.g
            } else {
                0.0
            };
        [ux, uz]
    }
    fn strain(&self, _p: Point, _side: Side) -> [f64; 3] {
        [
            2.0 * self.nu * self.g / ((1.0 - self.nu) * self.length),
            -2.0 * self.g / self.length,
            0.0,
        ]
    }
}

/// Radially symmetric bimaterial disc under the linear outer displacement
/// u_r(b) = b: inclusion of material 1 inside r < a, material 2 in the
/// annulus a < r <= b. Displacement is continuous, stress and strain kink at
/// r = a. The two branches are c1 r and c2 r + c3 / r with the coefficients
/// fixed by displacement/traction continuity and the outer condition.
#[derive(Clone, Copy)]
pub struct InclusionExact {
    pub a: f64,
    pub b: f64,
    pub inner: Material,
    pub outer: Material,
    pub coeff_alpha: f64,
    c1: f64,
    c2: f64,
    c3: f64,
}

/// Polar field values of the inclusion solution at one radius.
#[derive(Debug, Clone, Copy)]
pub struct InclusionPolar {
    pub u_r: f64,
    pub u_theta: f64,
    pub eps_rr: f64,
    pub eps_tt: f64,
    pub sig_rr: f64,
    pub sig_tt: f64,
}

impl InclusionExact {
    pub fn new(a: f64, b: f64, inner: Material, outer: Material) -> Result<Self> {
        if a <= 0.0 || b <= a {
            return Err(Error::Verify("need 0 < a < b".into()));
        }
        let (l1, m1) = inner.lame();
        let (l2, m2) = outer.lame();
        let alpha = ((l1 + m1 + m2) * b * b)
            / ((l2 + m2) * a * a + (l1 + m1) * (b * b - a * a) + m2 * b * b);
        let c1 = (1.0 - b * b / (a * a)) * alpha + b * b / (a * a);
        let c2 = alpha;
        let c3 = (1.0 - alpha) * b * b;
        Ok(InclusionExact {
            a,
            b,
            inner,
            outer,
            coeff_alpha: alpha,
            c1,
            c2,
            c3,
        })
    }

    fn branch(&self, side: Side) -> bool {
        side == Side::Minus // minus side of the circle level set is the inclusion
    }

    /// Polar fields at radius r on the given side of the interface.
    pub fn polar(&self, r: f64, side: Side) -> Result<InclusionPolar> {
        if r > self.b * (1.0 + 1e-9) {
            return Err(Error::Verify(format!(
                "radius {r} outside the disc b={}",
                self.b
            )));
        }
        let (eps_rr, eps_tt, u_r, mat) = if self.branch(side) {
            (self.c1, self.c1, self.c1 * r, &self.inner)
        } else {
            let rr = r.max(1e-300);
            (
                self.c2 - self.c3 / (rr * rr),
                self.c2 + self.c3 / (rr * rr),
                self.c2 * rr + self.c3 / rr,
                &self.outer,
            )
        };
        let (lam, mu) = mat.lame();
        Ok(InclusionPolar {
            u_r,
            u_theta: 0.0,
            eps_rr,
            eps_tt,
            sig_rr: 2.0 * mu * eps_rr + lam * (eps_rr + eps_tt),
            sig_tt: 2.0 * mu * eps_tt + lam * (eps_rr + eps_tt),
        })
    }

    /// Cartesian Voigt stress at a point (for boundary tractions).
    pub fn stress_voigt(&self, p: Point, side: Side) -> [f64; 3] {
        let (r, c, s) = polar_dir(p);
        let f = self.polar(r, side).expect("inside the disc");
        rotate_voigt(f.sig_rr, f.sig_tt, c, s)
    }
}

fn polar_dir(p: Point) -> (f64, f64, f64) {
    let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
    if r < 1e-14 {
        (r, 1.0, 0.0)
    } else {
        (r, p[0] / r, p[1] / r)
    }
}

/// Rotate a radially symmetric tensor to Cartesian axes. The last entry is
/// the plain tensor component f_xy; strain callers double it for the
/// engineering convention.
fn rotate_voigt(f_rr: f64, f_tt: f64, c: f64, s: f64) -> [f64; 3] {
    [
        f_rr * c * c + f_tt * s * s,
        f_rr * s * s + f_tt * c * c,
        (f_rr - f_tt) * c * s,
    ]
}

impl ExactField for InclusionExact {
    fn displacement(&self, p: Point, side: Side) -> [f64; 2] {
        let (r, c, s) = polar_dir(p);
        let f = self.polar(r, side).expect("inside the disc");
        [f.u_r * c, f.u_r * s]
    }
    fn strain(&self, p: Point, side: Side) -> [f64; 3] {
        let (r, c, s) = polar_dir(p);
        let f = self.polar(r, side).expect("inside the disc");
        let v = rotate_voigt(f.eps_rr, f.eps_tt, c, s);
        [v[0], v[1], 2.0 * v[2]]
    }
}

fn error_quadrature_degree(model: &Model) -> usize {
    if model.space.order == 1 {
        4
    } else {
        5
    }
}

fn per_side_cells(model: &Model, e: usize) -> Vec<SubElement> {
    match model.cut.side[e] {
        ElementSide::Cut => model.cut.cut(e).expect("cut").sub_elements.clone(),
        ElementSide::Plus | ElementSide::Minus => {
            let side = if model.cut.side[e] == ElementSide::Plus {
                Side::Plus
            } else {
                Side::Minus
            };
            vec![SubElement {
                vertices: model.space.basis(e).coords[..model.mesh.elements[e].len()].to_vec(),
                side,
                measure: model.mesh.element_measure(e),
            }]
        }
    }
}

/// Energy norm of the discretization error and of the exact field:
/// sqrt of the integral of (eps_h - eps)^T D (eps_h - eps), side by side.
pub fn energy_norm_error(model: &Model, solution: &Solution, field: &dyn ExactField) -> (f64, f64) {
    let degree = error_quadrature_degree(model);
    let nv = model.materials.plus.n_voigt();
    let mut err2 = 0.0;
    let mut norm2 = 0.0;
    for e in 0..model.mesh.elements.len() {
        let ed = model.element_dofs(e);
        let u_local =
            DVector::from_iterator(ed.n_local(), ed.global.iter().map(|&g| solution.values[g]));
        for sub in per_side_cells(model, e) {
            let d = constitutive_matrix(model.materials.side(sub.side));
            for (p, w) in bulk_quadrature(&sub, degree) {
                let b = ed.b_matrix(p, sub.side);
                let eh = &b * &u_local;
                let ex = field.strain(p, sub.side);
                let exact = DVector::from_iterator(nv, ex.iter().take(nv).copied());
                let diff = &eh - &exact;
                err2 += (&d * &diff).dot(&diff) * w;
                norm2 += (&d * &exact).dot(&exact) * w;
            }
        }
    }
    (err2.max(0.0).sqrt(), norm2.max(0.0).sqrt())
}

/// Displacement L2 error and exact-field L2 norm.
pub fn l2_norm_error(model: &Model, solution: &Solution, field: &dyn ExactField) -> (f64, f64) {
    let degree = error_quadrature_degree(model);
    let c = model.dofs.components;
    let mut err2 = 0.0;
    let mut norm2 = 0.0;
    for e in 0..model.mesh.elements.len() {
        let ed = model.element_dofs(e);
        let u_local =
            DVector::from_iterator(ed.n_local(), ed.global.iter().map(|&g| solution.values[g]));
        for sub in per_side_cells(model, e) {
            for (p, w) in bulk_quadrature(&sub, degree) {
                let tr = ed.trace_matrix(p, sub.side);
                let uh = &tr * &u_local;
                let ux = field.displacement(p, sub.side);
                for comp in 0..c {
                    err2 += (uh[comp] - ux[comp]).powi(2) * w;
                    norm2 += ux[comp].powi(2) * w;
                }
            }
        }
    }
    (err2.max(0.0).sqrt(), norm2.max(0.0).sqrt())
}

/// Recovered interfacial flux jump at the interface-supported nodes, stored
/// per component (a component constrained at a node is absent there).
pub struct FluxRecovery {
    pub components: usize,
    /// per component: (node, value) pairs
    pub nodal: [Vec<(usize, f64)>; 2],
}

impl FluxRecovery {
    pub fn value(&self, node: usize, comp: usize) -> Option<f64> {
        self.nodal[comp]
            .iter()
            .find(|(n, _)| *n == node)
            .map(|(_, v)| *v)
    }

    /// Evaluate the recovered field at a point of an element by shape
    /// interpolation over the recovered nodes.
    pub fn at_point(&self, model: &Model, element: usize, p: Point) -> [f64; 2] {
        let basis = model.space.basis(element);
        let n_vals = basis.values(p);
        let mut out = [0.0, 0.0];
        for (k, &node) in basis.nodes.iter().enumerate() {
            for comp in 0..self.components {
                if let Some(v) = self.value(node, comp) {
                    out[comp] += n_vals[k] * v;
                }
            }
        }
        out
    }
}

/// Solve the interface mass-matrix system M_d j = f_b + f_h - K_b u for the
/// nodal flux jump, restricted to nodes whose shape functions have a nonzero
/// interface integral. The jump is reported with the library normal
/// (minus to plus). A rank-deficient M_d (one facet in 1D) is resolved by
/// SVD pseudo-inverse; the interpolated interface value stays well defined.
///
/// Rows of strongly constrained dofs carry reaction forces instead of the
/// flux identity, so those components are dropped (absent, not zero).
pub fn recover_flux_jump(
    model: &Model,
    solution: &Solution,
    body_force: Option<&VecField>,
    neumann: &[NeumannLoad],
    constrained_dofs: &[usize],
) -> Result<FluxRecovery> {
    if model.cut.cut_elements.is_empty() {
        return Err(Error::Singular("no interface: nothing to recover".into()));
    }
    let c = model.dofs.components;
    // bulk operator and loads only
    let mut sys = model.new_system();
    assemble_bulk(model, &mut sys);
    assemble_loads(model, body_force, neumann, &mut sys);
    let k = sys.to_dense();
    let u = DVector::from_row_slice(&solution.values);
    let f = DVector::from_row_slice(&sys.rhs);
    let residual = f - k * u;

    // interface integrals of every shape function
    let n_nodes = model.space.n_nodes();
    let mut n_int = vec![0.0; n_nodes];
    for ce in &model.cut.cut_elements {
        let basis = model.space.basis(ce.element);
        for facet in &ce.facets {
            let qp = if model.mesh.dimension == 1 {
                vec![(facet.endpoints[0], facet.measure)]
            } else {
                segment_gauss(facet.endpoints[0], facet.endpoints[1], model.facet_gauss())
            };
            for (p, w) in qp {
                let vals = basis.values(p);
                for (i, &node) in basis.nodes.iter().enumerate() {
                    n_int[node] += vals[i] * w;
                }
            }
        }
    }
    let total: f64 = model.cut.interface_measure();
    let supported: Vec<usize> = (0..n_nodes)
        .filter(|&n| n_int[n].abs() > 1e-12 * total.max(1.0))
        .collect();
    if supported.is_empty() {
        return Err(Error::Singular("interface mass matrix is empty".into()));
    }
    let is_constrained =
        |node: usize, comp: usize| constrained_dofs.contains(&model.dofs.classical_dof(node, comp));
    let mut nodal: [Vec<(usize, f64)>; 2] = [Vec::new(), Vec::new()];
    for comp in 0..c {
        let nodes: Vec<usize> = supported
            .iter()
            .copied()
            .filter(|&n| !is_constrained(n, comp))
            .collect();
        if nodes.is_empty() {
            continue;
        }
        let index_of: std::collections::HashMap<usize, usize> =
            nodes.iter().enumerate().map(|(i, &n)| (n, i)).collect();
        let m = nodes.len();
        let mut mass = DMatrix::zeros(m, m);
        for ce in &model.cut.cut_elements {
            let basis = model.space.basis(ce.element);
            for facet in &ce.facets {
                let qp = if model.mesh.dimension == 1 {
                    vec![(facet.endpoints[0], facet.measure)]
                } else {
                    segment_gauss(facet.endpoints[0], facet.endpoints[1], model.facet_gauss())
                };
                for (p, w) in qp {
                    let vals = basis.values(p);
                    for (i, &ni) in basis.nodes.iter().enumerate() {
                        let (Some(&ii), _) = (index_of.get(&ni), ()) else {
                            continue;
                        };
                        for (j, &nj) in basis.nodes.iter().enumerate() {
                            if let Some(&jj) = index_of.get(&nj) {
                                mass[(ii, jj)] += vals[i] * vals[j] * w;
                            }
                        }
                    }
                }
            }
        }
        let mut rhs = DVector::zeros(m);
        for (i, &node) in nodes.iter().enumerate() {
            rhs[i] = residual[model.dofs.classical_dof(node, comp)];
        }
        // restrictions of the bulk shape functions to the interface line can
        // be linearly dependent, so M_d is solved by pseudo-inverse with the
        // small singular values cut; the interpolated interface value is
        // invariant to the min-norm choice
        let j = pseudo_solve(&mass, &rhs)?;
        nodal[comp] = nodes.into_iter().zip(j.iter().copied()).collect();
    }
    Ok(FluxRecovery {
        components: c,
        nodal,
    })
}

fn pseudo_solve(m: &DMatrix<f64>, b: &DVector<f64>) -> Result<DVector<f64>> {
    let svd = m.clone().svd(true, true);
    let cutoff = 1e-8 * m.amax().max(1e-300);
    svd.pseudo_inverse(cutoff)
        .map(|pinv| pinv * b)
        .map_err(|e| Error::Singular(format!("pseudo-inverse failed: {e}")))
}

/// Least-squares slope of log(error) against log(h).
pub fn fit_rate(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Verify("rate fit needs at least two points".into()));
    }
    if points.iter().any(|&(h, e)| h <= 0.0 || e <= 0.0) {
        return Err(Error::Verify(
            "rate fit needs positive sizes and errors".into(),
        ));
    }
    let n = points.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(h, e) in points {
        let (x, y) = (h.ln(), e.ln());
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    Ok((n * sxy - sx * sy) / (n * sxx - sx * sx))
}
