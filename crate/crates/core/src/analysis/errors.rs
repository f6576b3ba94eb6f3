use nalgebra::DVector;

use super::dirichlet_mu;
use crate::error::{Error, Result};
use crate::lattice::GridFunction;
use crate::steppers::{exact_step, step, EvolutionProblem, SchemeKind};

/// `‖scheme(t) g − exp(t A_K) g‖`.
pub fn one_step_error(
    p: &EvolutionProblem,
    scheme: SchemeKind,
    t: f64,
    g: &GridFunction,
) -> Result<f64> {
    let exact = exact_step(p, t, g)?;
    Ok(step(p, scheme, t, g)?.distance(&exact))
}

/// Leading term of the one-step error of S1 (`order = 1`) or S2
/// (`order = 2`) on the Dirichlet eigenfunction `φ_j`. Zero for odd `j`.
///
/// With `v = e_0 + e_{N−1}`, `G = −v vᵀ`, and
/// * order 1: `t²/2 ‖[A, G] φ_j‖ = t² √2/(2√N) √(−σ μ (1 + (3+μ)²))`
/// * order 2: `t³/12 ‖([A,[A,G]] − ½[G,[A,G]]) φ_j‖
///   = t³ √2/(12√N) √(−σ μ (1 + 4(3+μ)² + (μ²+5μ+7)²))`
///
/// The boundary rows must not interact, which needs `n ≥ 4` for order 1 and
/// `n ≥ 6` for order 2.
pub fn leading_error_oe(order: u8, j: usize, t: f64, n: usize) -> Result<f64> {
    let min_n = match order {
        1 => 4,
        2 => 6,
        _ => {
            return Err(Error::InvalidArgument(format!(
                "order must be 1 or 2, got {order}"
            )))
        }
    };
    if n < min_n {
        return Err(Error::InvalidArgument(format!(
            "closed form for order {order} needs n >= {min_n}, got {n}"
        )));
    }
    if j >= n {
        return Err(Error::InvalidArgument(format!(
            "mode index {j} out of range for n = {n}"
        )));
    }
    if j % 2 == 1 {
        return Ok(0.0);
    }
    let mu = dirichlet_mu(j, n);
    let sigma = if j + 1 == n { 1.0 } else { 2.0 };
    let base = -sigma * mu;
    let root2n = std::f64::consts::SQRT_2 / (n as f64).sqrt();
    Ok(match order {
        1 => t * t * root2n / 2.0 * (base * (1.0 + (3.0 + mu).powi(2))).sqrt(),
        _ => {
            let q = mu * mu + 5.0 * mu + 7.0;
            t.powi(3) * root2n / 12.0 * (base * (1.0 + 4.0 * (3.0 + mu).powi(2) + q * q)).sqrt()
        }
    })
}

/// Commutator constant of the leading one-step error, so that the S1 error
/// is `≈ C t²` and the S2 error `≈ C t³`:
/// * order 1: `½ ‖[A_K, G] g‖`
/// * order 2: `(1/12) ‖([A_K,[A_K,G]] − ½[G,[A_K,G]]) g‖`
pub fn commutator_error_constant(p: &EvolutionProblem, order: u8, g: &GridFunction) -> Result<f64> {
    let a = p.generator_matrix();
    let gm = p.boundary_matrix();
    let x = DVector::from_column_slice(g.values());
    let ag = &a * &gm - &gm * &a;
    match order {
        1 => Ok(0.5 * (&ag * x).norm()),
        2 => {
            let outer = &a * &ag - &ag * &a;
            let inner = &gm * &ag - &ag * &gm;
            let v = outer * &x - inner * &x * num_complex::Complex64::new(0.5, 0.0);
            Ok(v.norm() / 12.0)
        }
        _ => Err(Error::InvalidArgument(format!(
            "order must be 1 or 2, got {order}"
        ))),
    }
}
