//! Error functionals, closed-form leading errors, the Dirichlet eigenbasis and
//! the dispersion equation for the even part of the S2 spectrum.

mod dispersion;
mod errors;
mod spectrum;

use std::f64::consts::PI;

pub use dispersion::{
    cn_dispersion_error, cn_mode_error, dispersion_residual, dispersion_solve,
    dispersion_solve_schrodinger, dispersion_solve_with, periodic_eigenvalues,
    schrodinger_residual, LeadingTerm,
};
pub use errors::{commutator_error_constant, leading_error_oe, one_step_error};
pub use spectrum::{spectrum_report, EvenRow, SpectrumReport, SPECTRUM_GATE_CAP};

use crate::error::Result;
use crate::lattice::{DomainSpec, GridFunction};

/// Eigenpairs of the Dirichlet Laplacian:
/// `μ_j = −4 sin²(π(j+1)/2N)`, `φ_j(k) = √(σ_j/N) sin(π(j+1)(k+½)/N)`.
#[derive(Debug, Clone)]
pub struct DirichletEigenpairs {
    pub mu: Vec<f64>,
    pub phi: Vec<GridFunction>,
}

pub fn dirichlet_mu(j: usize, n: usize) -> f64 {
    -4.0 * (PI * (j + 1) as f64 / (2 * n) as f64).sin().powi(2)
}

fn sigma(j: usize, n: usize) -> f64 {
    if j + 1 == n {
        1.0
    } else {
        2.0
    }
}

pub fn dirichlet_mode(j: usize, n: usize) -> Result<GridFunction> {
    let d = DomainSpec::new(n)?;
    let amp = (sigma(j, n) / n as f64).sqrt();
    let v: Vec<f64> = (0..n)
        .map(|k| amp * (PI * (j + 1) as f64 * (k as f64 + 0.5) / n as f64).sin())
        .collect();
    GridFunction::from_real(d, &v)
}

pub fn dirichlet_eigenpairs(n: usize) -> Result<DirichletEigenpairs> {
    DomainSpec::new(n)?;
    Ok(DirichletEigenpairs {
        mu: (0..n).map(|j| dirichlet_mu(j, n)).collect(),
        phi: (0..n)
            .map(|j| dirichlet_mode(j, n))
            .collect::<Result<_>>()?,
    })
}
