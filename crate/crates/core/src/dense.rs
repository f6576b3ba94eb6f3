//! Dense reference linear algebra: the exact exponential, operator norms,
//! spectra and the tridiagonal sweep.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::lattice::{CMatrix, ExtendedOperator, GridFunction, Tridiagonal};

/// Largest lattice the exact propagator will factor.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// `exp(t·c·A)` for a fixed operator `A` and scale `c`.
#[derive(Debug, Clone)]
pub enum ExactPropagator {
    /// `A = V diag(λ) Vᵀ` with real orthogonal `V`.
    Symmetric {
        vectors: DMatrix<f64>,
        values: DVector<f64>,
        scale: Complex64,
    },
    /// Anything else: exponentiate `t·c·A` on demand.
    General { generator: CMatrix },
}

impl ExactPropagator {
    pub fn new(op: &ExtendedOperator, scale: Complex64) -> Result<Self> {
        Self::with_cap(op, scale, DEFAULT_DENSE_CAP)
    }

    pub fn with_cap(op: &ExtendedOperator, scale: Complex64, cap: usize) -> Result<Self> {
        let n = op.domain().n();
        if n > cap {
            return Err(Error::DenseCapExceeded { n, cap });
        }
        let dense = op.dense();
        if op.is_real_symmetric() {
            let eig = SymmetricEigen::new(dense.map(|v| v.re));
            Ok(ExactPropagator::Symmetric {
                vectors: eig.eigenvectors,
                values: eig.eigenvalues,
                scale,
            })
        } else {
            Ok(ExactPropagator::General {
                generator: dense * scale,
            })
        }
    }

    pub fn apply(&self, t: f64, f: &GridFunction) -> GridFunction {
        let x = DVector::from_column_slice(f.values());
        let y = match self {
            ExactPropagator::Symmetric {
                vectors,
                values,
                scale,
            } => {
                let v = vectors.map(|r| Complex64::new(r, 0.0));
                let mut coeffs = v.tr_mul(&x);
                for (c, &l) in coeffs.iter_mut().zip(values.iter()) {
                    *c *= (*scale * (t * l)).exp();
                }
                v * coeffs
            }
            ExactPropagator::General { generator } => {
                (generator * Complex64::new(t, 0.0)).exp() * x
            }
        };
        GridFunction::new(f.domain(), y.iter().copied().collect())
            .expect("propagator preserves length")
    }

    /// Dense `exp(t·c·A)`.
    pub fn matrix(&self, t: f64) -> CMatrix {
        match self {
            ExactPropagator::Symmetric {
                vectors,
                values,
                scale,
            } => {
                let v = vectors.map(|r| Complex64::new(r, 0.0));
                let d = DVector::from_iterator(
                    values.len(),
                    values.iter().map(|&l| (*scale * (t * l)).exp()),
                );
                &v * DMatrix::from_diagonal(&d) * v.transpose()
            }
            ExactPropagator::General { generator } => (generator * Complex64::new(t, 0.0)).exp(),
        }
    }
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().max()
}

/// All eigenvalues of a square complex matrix (complex Schur form).
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    m.clone()
        .schur()
        .eigenvalues()
        .map(|v| v.iter().copied().collect())
        .ok_or_else(|| Error::OracleGate("Schur form did not triangularize".into()))
}

/// Largest distance in a greedy nearest-neighbour pairing of two equally
/// sized multisets. `None` if the sizes differ.
pub fn multiset_distance(a: &[Complex64], b: &[Complex64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for x in a {
        let (idx, d) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))?;
        used[idx] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// Thomas elimination for `(shift·E + coef·A) h = rhs` with tridiagonal `A`.
/// `None` when a pivot vanishes.
pub(crate) fn solve_shifted_tridiagonal(
    tri: &Tridiagonal,
    shift: Complex64,
    coef: Complex64,
    rhs: &[Complex64],
) -> Option<Vec<Complex64>> {
    let n = rhs.len();
    let mut upper = vec![Complex64::new(0.0, 0.0); n];
    let mut h = vec![Complex64::new(0.0, 0.0); n];
    let mut prev_upper = Complex64::new(0.0, 0.0);
    let mut prev_h = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let lower = if i > 0 {
            coef * tri.lower[i]
        } else {
            Complex64::new(0.0, 0.0)
        };
        let pivot = shift + coef * tri.diag[i] - lower * prev_upper;
        if pivot.norm() <= f64::EPSILON * (shift.norm() + (coef * tri.diag[i]).norm()) {
            return None;
        }
        upper[i] = coef * tri.upper[i] / pivot;
        h[i] = (rhs[i] - lower * prev_h) / pivot;
        prev_upper = upper[i];
        prev_h = h[i];
    }
    for i in (0..n.saturating_sub(1)).rev() {
        let next = h[i + 1];
        h[i] -= upper[i] * next;
    }
    Some(h)
}
