use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Assembled sparse system in triplet form, with strong Dirichlet constraints
/// kept symbolic until reduction. Multiplier dofs (Lagrange rows) are appended
/// after the primal block.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    pub n_primal: usize,
    pub n_multipliers: usize,
    triplets: Vec<(usize, usize, f64)>,
    pub rhs: Vec<f64>,
    /// (dof, prescribed value), applied by row/column elimination.
    pub constrained: Vec<(usize, f64)>,
}

impl LinearSystem {
    pub fn new(n_primal: usize) -> Self {
        LinearSystem {
            n_primal,
            n_multipliers: 0,
            triplets: Vec::new(),
            rhs: vec![0.0; n_primal],
            constrained: Vec::new(),
        }
    }

    pub fn n_total(&self) -> usize {
        self.n_primal + self.n_multipliers
    }

    pub fn push_multiplier(&mut self) -> usize {
        self.n_multipliers += 1;
        self.rhs.push(0.0);
        self.n_primal + self.n_multipliers - 1
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        if v != 0.0 {
            self.triplets.push((i, j, v));
        }
    }

    pub fn add_rhs(&mut self, i: usize, v: f64) {
        self.rhs[i] += v;
    }

    /// Scatter a local dense block with one global id per local row/column.
    pub fn add_block(&mut self, dofs: &[usize], block: &DMatrix<f64>) {
        for (il, &gi) in dofs.iter().enumerate() {
            for (jl, &gj) in dofs.iter().enumerate() {
                self.add(gi, gj, block[(il, jl)]);
            }
        }
    }

    pub fn add_rhs_block(&mut self, dofs: &[usize], vals: &DVector<f64>) {
        for (il, &gi) in dofs.iter().enumerate() {
            self.add_rhs(gi, vals[il]);
        }
    }

    /// Prescribe a dof value (strong outer Dirichlet). Later calls override.
    pub fn constrain(&mut self, dof: usize, value: f64) {
        if let Some(entry) = self.constrained.iter_mut().find(|(d, _)| *d == dof) {
            entry.1 = value;
        } else {
            self.constrained.push((dof, value));
        }
    }

    pub fn is_saddle(&self) -> bool {
        self.n_multipliers > 0
    }

    /// Dense matrix over all dofs, duplicate triplets summed in insertion
    /// order (deterministic).
    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.n_total();
        let mut m = DMatrix::zeros(n, n);
        for &(i, j, v) in &self.triplets {
            m[(i, j)] += v;
        }
        m
    }

    /// Largest off-symmetry of the assembled matrix relative to its norm.
    pub fn asymmetry(&self) -> f64 {
        let m = self.to_dense();
        let norm = m.amax().max(1e-300);
        let mut worst: f64 = 0.0;
        for i in 0..m.nrows() {
            for j in (i + 1)..m.ncols() {
                worst = worst.max((m[(i, j)] - m[(j, i)]).abs());
            }
        }
        worst / norm
    }

    /// Eliminate constrained dofs: returns the free-dof index set, the reduced
    /// dense matrix and corrected rhs.
    pub fn reduce_dense(&self) -> Reduced {
        let n = self.n_total();
        let mut fixed_val = vec![None; n];
        for &(d, v) in &self.constrained {
            fixed_val[d] = Some(v);
        }
        let free: Vec<usize> = (0..n).filter(|&d| fixed_val[d].is_none()).collect();
        let mut index_of = vec![usize::MAX; n];
        for (k, &d) in free.iter().enumerate() {
            index_of[d] = k;
        }
        let nf = free.len();
        let mut matrix = DMatrix::zeros(nf, nf);
        let mut rhs = DVector::zeros(nf);
        for (k, &d) in free.iter().enumerate() {
            rhs[k] = self.rhs[d];
        }
        for &(i, j, v) in &self.triplets {
            match (fixed_val[i], fixed_val[j]) {
                (None, None) => matrix[(index_of[i], index_of[j])] += v,
                (None, Some(val)) => rhs[index_of[i]] -= v * val,
                _ => {}
            }
        }
        Reduced {
            free,
            index_of,
            matrix,
            rhs,
            fixed_val,
        }
    }

    /// Reduced system in CSR form for iterative solves.
    pub fn reduce_csr(&self) -> (CsrMatrix, DVector<f64>, Reduction) {
        let n = self.n_total();
        let mut fixed_val = vec![None; n];
        for &(d, v) in &self.constrained {
            fixed_val[d] = Some(v);
        }
        let free: Vec<usize> = (0..n).filter(|&d| fixed_val[d].is_none()).collect();
        let mut index_of = vec![usize::MAX; n];
        for (k, &d) in free.iter().enumerate() {
            index_of[d] = k;
        }
        let nf = free.len();
        let mut rhs = DVector::zeros(nf);
        for (k, &d) in free.iter().enumerate() {
            rhs[k] = self.rhs[d];
        }
        let mut entries: Vec<(usize, usize, f64)> = Vec::with_capacity(self.triplets.len());
        for &(i, j, v) in &self.triplets {
            match (fixed_val[i], fixed_val[j]) {
                (None, None) => entries.push((index_of[i], index_of[j], v)),
                (None, Some(val)) => rhs[index_of[i]] -= v * val,
                _ => {}
            }
        }
        entries.sort_by_key(|&(i, j, _)| (i, j));
        let mut merged: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (i, j, v) in entries {
            match merged.last_mut() {
                Some((li, lj, lv)) if *li == i && *lj == j => *lv += v,
                _ => merged.push((i, j, v)),
            }
        }
        let mut row_ptr = vec![0usize; nf + 1];
        let mut cols = Vec::with_capacity(merged.len());
        let mut vals = Vec::with_capacity(merged.len());
        for (i, j, v) in merged {
            row_ptr[i + 1] += 1;
            cols.push(j);
            vals.push(v);
        }
        for r in 0..nf {
            row_ptr[r + 1] += row_ptr[r];
        }
        (
            CsrMatrix {
                n: nf,
                row_ptr,
                cols,
                vals,
            },
            rhs,
            Reduction {
                free,
                index_of,
                fixed_val,
            },
        )
    }
}

/// Free-dof bookkeeping shared by both reduction paths.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub free: Vec<usize>,
    pub index_of: Vec<usize>,
    pub fixed_val: Vec<Option<f64>>,
}

impl Reduction {
    /// Expand a reduced solution to the full dof vector.
    pub fn expand(&self, reduced: &DVector<f64>) -> Vec<f64> {
        let mut full = vec![0.0; self.fixed_val.len()];
        for (d, slot) in self.fixed_val.iter().enumerate() {
            full[d] = match slot {
                Some(v) => *v,
                None => reduced[self.index_of[d]],
            };
        }
        full
    }
}

#[derive(Debug)]
pub struct Reduced {
    pub free: Vec<usize>,
    pub index_of: Vec<usize>,
    pub matrix: DMatrix<f64>,
    pub rhs: DVector<f64>,
    pub fixed_val: Vec<Option<f64>>,
}

impl Reduced {
    pub fn expand(&self, reduced: &DVector<f64>) -> Vec<f64> {
        let mut full = vec![0.0; self.fixed_val.len()];
        for (d, slot) in self.fixed_val.iter().enumerate() {
            full[d] = match slot {
                Some(v) => *v,
                None => reduced[self.index_of[d]],
            };
        }
        full
    }
}

/// Minimal CSR storage for the conjugate-gradient path.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    pub fn mul_vec(&self, x: &DVector<f64>, y: &mut DVector<f64>) {
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            y[i] = acc;
        }
    }

    pub fn diagonal(&self) -> DVector<f64> {
        let mut d = DVector::zeros(self.n);
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.cols[k] == i {
                    d[i] += self.vals[k];
                }
            }
        }
        d
    }
}

pub(crate) fn check_residual(
    m: &DMatrix<f64>,
    x: &DVector<f64>,
    b: &DVector<f64>,
    rel: f64,
) -> Result<f64> {
    let r = (m * x - b).norm();
    let scale = b.norm().max(1e-300);
    if r > rel * scale && r > 1e-300 {
        return Err(Error::Singular(format!(
            "factorization residual {r:.3e} exceeds {rel:.1e} * {scale:.3e}"
        )));
    }
    Ok(r)
}
