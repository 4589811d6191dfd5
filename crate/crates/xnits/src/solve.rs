//! Linear solvers, the Newton driver and spectral diagnostics.

use nalgebra::{DMatrix, DVector};

use crate::assembly::{check_residual, LinearSystem};
use crate::error::{Error, Result};

/// Dense factorizations are used up to this size; larger SPD systems go
/// through conjugate gradients.
pub const DENSE_LIMIT: usize = 2000;

/// Solve result: full dof vector (constrained values included), multipliers
/// split off for saddle systems, and solver diagnostics.
#[derive(Debug, Clone)]
pub struct Solution {
    pub values: Vec<f64>,
    pub multipliers: Vec<f64>,
    pub iterations: usize,
    pub residual: f64,
}

impl Solution {
    fn from_full(full: Vec<f64>, n_primal: usize, iterations: usize, residual: f64) -> Self {
        let multipliers = full[n_primal..].to_vec();
        let values = full[..n_primal].to_vec();
        Solution {
            values,
            multipliers,
            iterations,
            residual,
        }
    }
    pub fn assert_finite(&self) -> Result<()> {
        if self
            .values
            .iter()
            .chain(self.multipliers.iter())
            .all(|v| v.is_finite())
        {
            Ok(())
        } else {
            Err(Error::Singular(
                "solution contains non-finite entries".into(),
            ))
        }
    }
}

/// Direct solve: Cholesky for symmetric positive definite systems, LU with
/// partial pivoting otherwise (always LU for saddle systems). The
/// factorization is verified by re-multiplication at 1e-10 relative.
pub fn solve_direct(sys: &LinearSystem) -> Result<Solution> {
    let red = sys.reduce_dense();
    let n = red.matrix.nrows();
    if n == 0 {
        return Ok(Solution::from_full(
            red.expand(&DVector::zeros(0)),
            sys.n_primal,
            0,
            0.0,
        ));
    }
    let x = if sys.is_saddle() {
        // saddle blocks mix scales, so raw pivot magnitudes mislead; the
        // re-multiplication check below is the singularity guard
        lu_solve(&red.matrix, &red.rhs, false)?
    } else {
        match red.matrix.clone().cholesky() {
            Some(chol) => chol.solve(&red.rhs),
            None => lu_solve(&red.matrix, &red.rhs, true)?,
        }
    };
    let residual = check_residual(&red.matrix, &x, &red.rhs, 1e-10)?;
    let full = red.expand(&x);
    sol_ok(full, sys, 1, residual)
}

fn sol_ok(full: Vec<f64>, sys: &LinearSystem, iters: usize, residual: f64) -> Result<Solution> {
    let s = Solution::from_full(full, sys.n_primal, iters, residual);
    s.assert_finite()?;
    Ok(s)
}

fn lu_solve(m: &DMatrix<f64>, b: &DVector<f64>, check_pivots: bool) -> Result<DVector<f64>> {
    let norm = m.amax();
    let lu = m.clone().lu();
    if check_pivots {
        // reject pivots far below the matrix scale
        let umat = lu.u();
        let min_pivot = (0..umat.nrows().min(umat.ncols()))
            .map(|i| umat[(i, i)].abs())
            .fold(f64::INFINITY, f64::min);
        if min_pivot < 1e-14 * norm {
            return Err(Error::Singular(format!(
                "pivot {min_pivot:.3e} below 1e-14 of matrix scale {norm:.3e}"
            )));
        }
    }
    lu.solve(b)
        .ok_or_else(|| Error::Singular("LU back-substitution failed".into()))
}

/// Jacobi-preconditioned conjugate gradients for SPD systems.
pub fn solve_cg(sys: &LinearSystem, tol: f64, max_iter: usize) -> Result<Solution> {
    if sys.is_saddle() {
        return Err(Error::Assembly(
            "CG needs a positive definite system, not a saddle".into(),
        ));
    }
    let (csr, rhs, reduction) = sys.reduce_csr();
    let n = csr.n;
    let bnorm = rhs.norm();
    if bnorm == 0.0 {
        return Ok(Solution::from_full(
            reduction.expand(&DVector::zeros(n)),
            sys.n_primal,
            0,
            0.0,
        ));
    }
    let diag = csr.diagonal();
    if diag.iter().any(|&d| d <= 0.0) {
        return Err(Error::Singular(
            "nonpositive diagonal entry; system is not SPD".into(),
        ));
    }
    let mut x = DVector::zeros(n);
    let mut r = rhs.clone();
    let mut z = r.component_div(&diag);
    let mut p = z.clone();
    let mut rz = r.dot(&z);
    let mut ap = DVector::zeros(n);
    for it in 0..max_iter {
        csr.mul_vec(&p, &mut ap);
        let pap = p.dot(&ap);
        if pap <= 0.0 {
            return Err(Error::NoConvergence {
                residual: r.norm() / bnorm,
                iterations: it,
            });
        }
        let alpha = rz / pap;
        x.axpy(alpha, &p, 1.0);
        r.axpy(-alpha, &ap, 1.0);
        let rel = r.norm() / bnorm;
        if rel <= tol {
            return Ok(Solution::from_full(
                reduction.expand(&x),
                sys.n_primal,
                it + 1,
                rel,
            ));
        }
        z = r.component_div(&diag);
        let rz_next = r.dot(&z);
        let beta = rz_next / rz;
        rz = rz_next;
        p = &z + &p * beta;
    }
    Err(Error::NoConvergence {
        residual: r.norm() / bnorm,
        iterations: max_iter,
    })
}

/// Direct solve under the dense limit, CG above it.
pub fn solve_auto(sys: &LinearSystem) -> Result<Solution> {
    if sys.is_saddle() || sys.n_total() <= DENSE_LIMIT {
        solve_direct(sys)
    } else {
        solve_cg(sys, 1e-10, 40 * sys.n_total())
    }
}

/// One Newton step record.
#[derive(Debug, Clone)]
pub struct NewtonStep {
    pub residual_norm: f64,
    pub increment_norm: f64,
}

/// Newton driver: the assembler maps the current state to the tangent system
/// and the negated residual. Iterates u <- u + du until the residual drops
/// below tol relative to its starting value; linear problems take one step.
pub fn newton_drive(
    mut assembler: impl FnMut(&[f64]) -> Result<(LinearSystem, DVector<f64>)>,
    u0: &[f64],
    tol: f64,
    max_iter: usize,
) -> Result<(Solution, Vec<NewtonStep>)> {
    let mut u = u0.to_vec();
    let mut trace = Vec::new();
    let mut r0_norm: Option<f64> = None;
    for _ in 0..max_iter {
        let (sys, minus_res) = assembler(&u)?;
        // measure the residual on free dofs only
        let red = sys.reduce_dense();
        let mut res_free = DVector::zeros(red.free.len());
        for (k, &d) in red.free.iter().enumerate() {
            res_free[k] = minus_res[d];
        }
        let rnorm = res_free.norm();
        // starting at the solution leaves only float noise; accept residuals
        // small against the load scale as converged too
        let load_scale = red.rhs.norm().max(1e-300);
        let scale = (*r0_norm.get_or_insert(rnorm.max(1e-300))).max(load_scale);
        if rnorm <= tol * scale {
            trace.push(NewtonStep {
                residual_norm: rnorm,
                increment_norm: 0.0,
            });
            let sol = Solution::from_full(u, sys.n_primal, trace.len(), rnorm / scale);
            return Ok((sol, trace));
        }
        let du_red = match red.matrix.clone().cholesky() {
            Some(c) => c.solve(&res_free),
            None => lu_solve(&red.matrix, &res_free, true)?,
        };
        let mut dnorm = 0.0f64;
        for (k, &d) in red.free.iter().enumerate() {
            u[d] += du_red[k];
            dnorm += du_red[k] * du_red[k];
        }
        trace.push(NewtonStep {
            residual_norm: rnorm,
            increment_norm: dnorm.sqrt(),
        });
    }
    Err(Error::NoConvergence {
        residual: trace.last().map(|s| s.residual_norm).unwrap_or(f64::NAN),
        iterations: max_iter,
    })
}

/// Spectral condition number of a symmetric matrix: dense eigensolve up to
/// n = 500, otherwise power iteration for the largest and inverse iteration
/// on an LU factorization for the smallest magnitude eigenvalue.
pub fn condition_number(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    if n == 0 {
        return Err(Error::Singular("empty matrix".into()));
    }
    if n <= 500 {
        let eig = m.clone().symmetric_eigenvalues();
        let max = eig.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
        let min = eig.iter().fold(f64::INFINITY, |a, &l| a.min(l.abs()));
        if min == 0.0 {
            return Err(Error::Singular("zero eigenvalue".into()));
        }
        return Ok(max / min);
    }
    let lam_max = power_iteration(m, 4000, 1e-10)?;
    let lam_min = inverse_power_magnitude(m, 4000, 1e-10)?;
    if lam_min == 0.0 {
        return Err(Error::Singular("zero eigenvalue".into()));
    }
    Ok(lam_max / lam_min)
}

/// Smallest eigenvalue of a symmetric matrix (signed). Dense eigensolve up to
/// n = 500, otherwise a spectral-shift power iteration.
pub fn min_eigenvalue(m: &DMatrix<f64>) -> Result<f64> {
    let n = m.nrows();
    if n == 0 {
        return Err(Error::Singular("empty matrix".into()));
    }
    if n <= 500 {
        let eig = m.clone().symmetric_eigenvalues();
        return Ok(eig.iter().fold(f64::INFINITY, |a, &l| a.min(l)));
    }
    // shift by the largest magnitude so the smallest eigenvalue becomes the
    // dominant one of (s I - A)
    let s = power_iteration(m, 4000, 1e-10)?;
    let shifted = DMatrix::identity(n, n) * s - m;
    let lam = power_iteration(&shifted, 4000, 1e-10)?;
    Ok(s - lam)
}

fn power_iteration(m: &DMatrix<f64>, max_iter: usize, tol: f64) -> Result<f64> {
    let n = m.nrows();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    // deterministic perturbation avoids starting orthogonal to the dominant mode
    for i in 0..n {
        v[i] += 1e-3 * ((i % 7) as f64 - 3.0) / (n as f64).sqrt();
    }
    v /= v.norm();
    let mut lam = 0.0;
    for _ in 0..max_iter {
        let w = m * &v;
        let nw = w.norm();
        if nw == 0.0 {
            return Ok(0.0);
        }
        let next = v.dot(&w);
        let vnew = w / nw;
        if (next - lam).abs() <= tol * next.abs().max(1.0) {
            return Ok(next.abs());
        }
        lam = next;
        v = vnew;
    }
    Ok(lam.abs())
}

fn inverse_power_magnitude(m: &DMatrix<f64>, max_iter: usize, tol: f64) -> Result<f64> {
    let n = m.nrows();
    let lu = m.clone().lu();
    let mut v = DVector::from_element(n, 1.0 / (n as f64).sqrt());
    let mut lam_inv = 0.0;
    for _ in 0..max_iter {
        let w = lu
            .solve(&v)
            .ok_or_else(|| Error::Singular("inverse iteration hit singular factor".into()))?;
        let nw = w.norm();
        if nw == 0.0 {
            return Err(Error::Singular("inverse iteration collapsed".into()));
        }
        let next = v.dot(&w);
        v = w / nw;
        if (next - lam_inv).abs() <= tol * next.abs().max(1.0) {
            return Ok(1.0 / next.abs());
        }
        lam_inv = next;
    }
    Ok(1.0 / lam_inv.abs())
}
