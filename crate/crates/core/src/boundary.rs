//! The boundary operator `G_KL = A_K − A_L` and its exponential.
//!
//! Two extensions of one stencil agree at every inner point, so their
//! difference is zero outside the boundary rows. When both extensions read
//! only boundary values, `G_KL` is a direct sum of zero and a small block on
//! `C(∂Ω)`, and `exp(θ G_KL)` is the identity off that block.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{CMatrix, DomainSpec, ExtendedOperator, ExtensionSpec, GridFunction, Stencil};

/// Largest boundary block `exp_boundary` accepts by default.
pub const DEFAULT_BOUNDARY_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryOperator {
    indices: Vec<usize>,
    matrix: CMatrix,
    domain: DomainSpec,
}

impl BoundaryOperator {
    /// Boundary lattice indices, ascending; they label the block's rows and
    /// columns.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    /// The block placed at `indices × indices` of an `n × n` zero matrix.
    pub fn embedded(&self) -> CMatrix {
        let n = self.domain.n();
        let mut full = CMatrix::zeros(n, n);
        for (a, &i) in self.indices.iter().enumerate() {
            for (b, &j) in self.indices.iter().enumerate() {
                full[(i, j)] = self.matrix[(a, b)];
            }
        }
        full
    }

    pub fn from_operators(k: &ExtendedOperator, l: &ExtendedOperator) -> Result<Self> {
        let domain = k.domain();
        if l.domain() != domain {
            return Err(Error::DomainMismatch {
                expected: domain.n(),
                actual: l.domain().n(),
            });
        }
        let sets = k.sets();
        let indices = sets.boundary.clone();
        let position: BTreeMap<usize, usize> =
            indices.iter().enumerate().map(|(a, &i)| (i, a)).collect();
        let mut matrix = CMatrix::zeros(indices.len(), indices.len());
        let zero = Complex64::new(0.0, 0.0);
        for (a, &x) in indices.iter().enumerate() {
            let mut row_k = BTreeMap::new();
            k.for_each_in_row(x, |col, v| *row_k.entry(col).or_insert(zero) += v);
            let mut row_l = BTreeMap::new();
            l.for_each_in_row(x, |col, v| *row_l.entry(col).or_insert(zero) += v);
            for col in row_k.keys().chain(row_l.keys()) {
                let diff = row_k.get(col).copied().unwrap_or(zero)
                    - row_l.get(col).copied().unwrap_or(zero);
                if diff == zero {
                    continue;
                }
                match position.get(col) {
                    Some(&b) => matrix[(a, b)] = diff,
                    None => return Err(Error::BoundarySupport { row: x, col: *col }),
                }
            }
        }
        Ok(Self {
            indices,
            matrix,
            domain,
        })
    }
}

pub fn build_gkl(
    stencil: &Stencil,
    ext_k: &ExtensionSpec,
    ext_l: &ExtensionSpec,
    domain: DomainSpec,
) -> Result<BoundaryOperator> {
    let k = ExtendedOperator::new(stencil, ext_k, domain)?;
    let l = ExtendedOperator::new(stencil, ext_l, domain)?;
    BoundaryOperator::from_operators(&k, &l)
}

/// `exp(θ·G)` on the boundary block; acts as the identity elsewhere.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryExponential {
    indices: Vec<usize>,
    matrix: CMatrix,
    theta: Complex64,
}

impl BoundaryExponential {
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn theta(&self) -> Complex64 {
        self.theta
    }
}

pub fn exp_boundary(theta: Complex64, g: &BoundaryOperator) -> Result<BoundaryExponential> {
    exp_boundary_capped(theta, g, DEFAULT_BOUNDARY_CAP)
}

pub fn exp_boundary_capped(
    theta: Complex64,
    g: &BoundaryOperator,
    cap: usize,
) -> Result<BoundaryExponential> {
    let size = g.indices.len();
    if size > cap {
        return Err(Error::BoundaryBlockTooLarge { size, cap });
    }
    let matrix = if size == 0 {
        CMatrix::zeros(0, 0)
    } else {
        (&g.matrix * theta).exp()
    };
    Ok(BoundaryExponential {
        indices: g.indices.clone(),
        matrix,
        theta,
    })
}

pub fn apply_boundary_exp(e: &BoundaryExponential, f: &GridFunction) -> GridFunction {
    let mut out = f.clone();
    let local: Vec<Complex64> = e.indices.iter().map(|&i| f[i]).collect();
    let values = out.values_mut();
    for (a, &i) in e.indices.iter().enumerate() {
        values[i] = local
            .iter()
            .enumerate()
            .map(|(b, v)| e.matrix[(a, b)] * v)
            .sum();
    }
    out
}
