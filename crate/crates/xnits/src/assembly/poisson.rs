use super::LinearSystem;
use crate::error::{Error, Result};
use crate::geometry::{segment_gauss, Mesh};

/// Data for the one-parameter family of boundary conditions on the 1D
/// Poisson problem -u'' = f: Dirichlet value u0, Neumann value g and the
/// blending parameter epsilon (0 = Dirichlet via Nitsche, large = Neumann).
pub struct PoissonBcData {
    pub epsilon: f64,
    pub gamma: f64,
    pub u0: Box<dyn Fn(f64) -> f64>,
    pub g: Box<dyn Fn(f64) -> f64>,
    pub f: Box<dyn Fn(f64) -> f64>,
}

/// Assemble the stabilized general-boundary-condition form on a fitted 1D
/// mesh whose boundary is its two endpoints. Per boundary element E with
/// size h_E and outward normal derivative d/dn:
///
///   B += -(g h/(e+g h)) [<u_n, v> + <u, v_n>] + (1/(e+g h)) <u, v>
///        -(e g h/(e+g h)) <u_n, v_n>
///   F += (1/(e+g h)) <u0, v> - (g h/(e+g h)) <u0, v_n>
///        + (e/(e+g h)) <g, v> - (e g h/(e+g h)) <g, v_n>
///
/// epsilon = 0 recovers Nitsche's Dirichlet form; gamma = 0 the plain
/// penalty form.
pub fn assemble_poisson_eps_bc(mesh: &Mesh, data: &PoissonBcData) -> Result<LinearSystem> {
    if mesh.dimension != 1 {
        return Err(Error::Assembly(
            "poisson BC family is a 1D operation".into(),
        ));
    }
    if data.gamma <= 0.0 && data.epsilon <= 0.0 {
        return Err(Error::Assembly("need gamma > 0 or epsilon > 0".into()));
    }
    if data.gamma < 0.0 {
        return Err(Error::Assembly(
            "stability parameter gamma must be nonnegative".into(),
        ));
    }
    let n = mesh.node_coords.len();
    let mut sys = LinearSystem::new(n);

    // bulk (u', v') and load (f, v)
    for el in &mesh.elements {
        let (a, b) = (mesh.node_coords[el[0]][0], mesh.node_coords[el[1]][0]);
        let h = b - a;
        let k = 1.0 / h;
        sys.add(el[0], el[0], k);
        sys.add(el[1], el[1], k);
        sys.add(el[0], el[1], -k);
        sys.add(el[1], el[0], -k);
        for (p, w) in segment_gauss([a, 0.0], [b, 0.0], 2) {
            let t = (p[0] - a) / h;
            sys.add_rhs(el[0], (1.0 - t) * (data.f)(p[0]) * w);
            sys.add_rhs(el[1], t * (data.f)(p[0]) * w);
        }
    }

    // boundary endpoints: i0 with its adjacent element
    let x_min = mesh
        .node_coords
        .iter()
        .map(|p| p[0])
        .fold(f64::INFINITY, f64::min);
    let x_max = mesh
        .node_coords
        .iter()
        .map(|p| p[0])
        .fold(f64::NEG_INFINITY, f64::max);
    for (e, el) in mesh.elements.iter().enumerate() {
        let (a, b) = (mesh.node_coords[el[0]][0], mesh.node_coords[el[1]][0]);
        let h_e = b - a;
        let ends: Vec<(usize, f64, f64)> = [(el[0], a), (el[1], b)]
            .into_iter()
            .filter(|&(_, x)| x == x_min || x == x_max)
            .map(|(node, x)| (node, x, if x == x_min { -1.0 } else { 1.0 }))
            .collect();
        let _ = e;
        for (bnode, x, outward) in ends {
            let denom = data.epsilon + data.gamma * h_e;
            let c1 = -data.gamma * h_e / denom;
            let c2 = 1.0 / denom;
            let c3 = -data.epsilon * data.gamma * h_e / denom;
            // nodal values and normal derivatives of the two element shape
            // functions at the boundary point
            let nvals = [
                if bnode == el[0] { 1.0 } else { 0.0 },
                if bnode == el[1] { 1.0 } else { 0.0 },
            ];
            let dn = [outward * (-1.0 / h_e), outward * (1.0 / h_e)];
            for i in 0..2 {
                for j in 0..2 {
                    let v = c1 * (dn[j] * nvals[i] + nvals[j] * dn[i])
                        + c2 * nvals[i] * nvals[j]
                        + c3 * dn[i] * dn[j];
                    sys.add(el[i], el[j], v);
                }
            }
            let u0 = (data.u0)(x);
            let gval = (data.g)(x);
            let c_g = data.epsilon / denom;
            for i in 0..2 {
                sys.add_rhs(
                    el[i],
                    c2 * u0 * nvals[i]
                        + c1 * u0 * dn[i]
                        + c_g * gval * nvals[i]
                        + c3 * gval * dn[i],
                );
            }
        }
    }
    Ok(sys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_structured_mesh, Domain, GridKind};

    fn data(eps: f64, gamma: f64) -> PoissonBcData {
        PoissonBcData {
            epsilon: eps,
            gamma,
            u0: Box::new(|_| 0.0),
            g: Box::new(|_| 0.0),
            f: Box::new(|_| 1.0),
        }
    }

    #[test]
    fn gamma_zero_equals_penalty_form() {
        let mesh =
            build_structured_mesh(Domain::interval(0.0, 1.0), 0.25, GridKind::Segment).unwrap();
        let eps = 0.01;
        let sys = assemble_poisson_eps_bc(&mesh, &data(eps, 0.0)).unwrap();
        // hand-assemble (u',v') + (1/eps)<u,v> at the two endpoints
        let mut pen = LinearSystem::new(mesh.node_coords.len());
        for el in &mesh.elements {
            let h = mesh.node_coords[el[1]][0] - mesh.node_coords[el[0]][0];
            pen.add(el[0], el[0], 1.0 / h);
            pen.add(el[1], el[1], 1.0 / h);
            pen.add(el[0], el[1], -1.0 / h);
            pen.add(el[1], el[0], -1.0 / h);
        }
        let last = mesh.node_coords.len() - 1;
        pen.add(0, 0, 1.0 / eps);
        pen.add(last, last, 1.0 / eps);
        let diff = (sys.to_dense() - pen.to_dense()).amax();
        assert!(diff < 1e-14, "max diff {diff}");
    }

    #[test]
    fn rejects_zero_gamma_zero_eps() {
        let mesh =
            build_structured_mesh(Domain::interval(0.0, 1.0), 0.5, GridKind::Segment).unwrap();
        assert!(assemble_poisson_eps_bc(&mesh, &data(0.0, 0.0)).is_err());
    }
}
