//! Isotropic linear elasticity: constitutive matrix, strain-displacement
//! operator and traction extraction, in 1D bar and 2D plane-strain form.
//!
//! Voigt ordering in 2D is fixed crate-wide as (eps_xx, eps_yy, 2 eps_xy);
//! every assembly and error integral relies on it.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    Bar1d,
    PlaneStrain,
}

/// Isotropic material.
#[derive(Debug, Clone, Copy)]
pub struct Material {
    pub e_mod: f64,
    pub nu: f64,
    pub regime: Regime,
}

impl Material {
    pub fn bar(e_mod: f64) -> Result<Self> {
        Material::new(e_mod, 0.0, Regime::Bar1d)
    }

    pub fn plane_strain(e_mod: f64, nu: f64) -> Result<Self> {
        Material::new(e_mod, nu, Regime::PlaneStrain)
    }

    pub fn new(e_mod: f64, nu: f64, regime: Regime) -> Result<Self> {
        if e_mod <= 0.0 {
            return Err(Error::Material("Young's modulus must be positive".into()));
        }
        if !(-1.0 < nu && nu < 0.5) {
            return Err(Error::Material(format!(
                "Poisson ratio {nu} outside (-1, 0.5)"
            )));
        }
        Ok(Material { e_mod, nu, regime })
    }

    pub fn lame(&self) -> (f64, f64) {
        let lambda = self.e_mod * self.nu / ((1.0 + self.nu) * (1.0 - 2.0 * self.nu));
        let mu = self.e_mod / (2.0 * (1.0 + self.nu));
        (lambda, mu)
    }

    /// Number of Voigt strain components.
    pub fn n_voigt(&self) -> usize {
        match self.regime {
            Regime::Bar1d => 1,
            Regime::PlaneStrain => 3,
        }
    }
}

/// Materials on the two sides of the interface.
#[derive(Debug, Clone, Copy)]
pub struct BimaterialAssignment {
    pub plus: Material,
    pub minus: Material,
}

impl BimaterialAssignment {
    pub fn uniform(m: Material) -> Self {
        BimaterialAssignment { plus: m, minus: m }
    }
    pub fn side(&self, side: crate::geometry::Side) -> &Material {
        match side {
            crate::geometry::Side::Plus => &self.plus,
            crate::geometry::Side::Minus => &self.minus,
        }
    }
}

/// Constitutive matrix in Voigt form: [E] in 1D, the standard isotropic
/// plane-strain matrix in 2D.
pub fn constitutive_matrix(m: &Material) -> DMatrix<f64> {
    match m.regime {
        Regime::Bar1d => DMatrix::from_element(1, 1, m.e_mod),
        Regime::PlaneStrain => {
            let (lambda, mu) = m.lame();
            let mut d = DMatrix::zeros(3, 3);
            d[(0, 0)] = lambda + 2.0 * mu;
            d[(1, 1)] = lambda + 2.0 * mu;
            d[(0, 1)] = lambda;
            d[(1, 0)] = lambda;
            d[(2, 2)] = mu;
            d
        }
    }
}

/// Strain-displacement matrix B for one set of shape gradients; columns
/// grouped node-major, component-minor. `components` is 1 or 2.
pub fn strain_displacement_matrix(gradients: &[Point], components: usize) -> DMatrix<f64> {
    let k = gradients.len();
    if components == 1 {
        let mut b = DMatrix::zeros(1, k);
        for (j, g) in gradients.iter().enumerate() {
            b[(0, j)] = g[0];
        }
        b
    } else {
        let mut b = DMatrix::zeros(3, 2 * k);
        for (j, g) in gradients.iter().enumerate() {
            b[(0, 2 * j)] = g[0];
            b[(1, 2 * j + 1)] = g[1];
            b[(2, 2 * j)] = g[1];
            b[(2, 2 * j + 1)] = g[0];
        }
        b
    }
}

/// Matrix mapping a Voigt stress to the traction vector for a unit normal:
/// traction = n_matrix * sigma_voigt.
pub fn traction_matrix(normal: Point, components: usize) -> Result<DMatrix<f64>> {
    let len = (normal[0] * normal[0] + normal[1] * normal[1]).sqrt();
    if (len - 1.0).abs() > 1e-12 {
        return Err(Error::Assembly(format!(
            "normal {normal:?} is not unit length"
        )));
    }
    if components == 1 {
        Ok(DMatrix::from_element(1, 1, normal[0]))
    } else {
        let mut n = DMatrix::zeros(2, 3);
        n[(0, 0)] = normal[0];
        n[(0, 2)] = normal[1];
        n[(1, 1)] = normal[1];
        n[(1, 2)] = normal[0];
        Ok(n)
    }
}
