use num_complex::Complex64;

use super::dispersion::{cn_mode_error, dispersion_solve, periodic_eigenvalues};
use super::{dirichlet_mode, dirichlet_mu};
use crate::dense::{eigenvalues, multiset_distance};
use crate::error::{Error, Result};
use crate::lattice::ExtensionSpec;
use crate::steppers::{step_matrix, EvolutionProblem, SchemeKind, Stepper};

/// Largest `n` for which reports are cross-checked against a dense
/// eigensolve of S2.
pub const SPECTRUM_GATE_CAP: usize = 256;

const GATE_TOL: f64 = 1e-8;
const ODD_TOL: f64 = 1e-11;

#[derive(Debug, Clone, PartialEq)]
pub struct EvenRow {
    pub j: usize,
    pub xi: f64,
    /// `μ_{2j}`.
    pub mu: f64,
    pub oe_error: f64,
    pub cn_error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    pub t: f64,
    pub n: usize,
    pub even: Vec<EvenRow>,
    /// Whether `S2 φ_{2j+1} = exp(tμ_{2j+1}) φ_{2j+1}` to `1e−11`.
    pub odd_exact: Vec<bool>,
    /// Multiset distance to the dense S2 spectrum when the gate ran.
    pub gate_distance: Option<f64>,
}

impl SpectrumReport {
    /// Share of even rows where the OE error is below the CN error.
    pub fn oe_win_fraction(&self) -> f64 {
        let wins = self.even.iter().filter(|r| r.oe_error < r.cn_error).count();
        wins as f64 / self.even.len() as f64
    }
}

/// Dispersion roots against `μ_{2j}` and the CN baseline for the Dirichlet
/// diffusion S2 operator. Aborts with an oracle-gate error if the predicted
/// spectrum disagrees with a dense eigensolve (for `n ≤ SPECTRUM_GATE_CAP`).
pub fn spectrum_report(t: f64, n: usize) -> Result<SpectrumReport> {
    let roots = dispersion_solve(t, n)?;
    let even = roots
        .iter()
        .enumerate()
        .map(|(j, &xi)| {
            let mu = dirichlet_mu(2 * j, n);
            Ok(EvenRow {
                j,
                xi,
                mu,
                oe_error: (xi - mu).abs(),
                cn_error: cn_mode_error(t, mu)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let p = EvolutionProblem::diffusion(n, &ExtensionSpec::dirichlet())?;
    let stepper = Stepper::new(&p, SchemeKind::S2, t)?;
    let odd_exact = (0..n / 2)
        .map(|j| {
            let k = 2 * j + 1;
            let phi = dirichlet_mode(k, n)?;
            let want = phi.scaled(Complex64::new((t * dirichlet_mu(k, n)).exp(), 0.0));
            Ok(stepper.advance(&phi)?.distance(&want) <= ODD_TOL)
        })
        .collect::<Result<Vec<_>>>()?;

    let gate_distance = if n <= SPECTRUM_GATE_CAP {
        let nu = periodic_eigenvalues(n)?;
        let predicted: Vec<Complex64> = roots
            .iter()
            .chain(&nu[1..])
            .map(|&x| Complex64::new((t * x).exp(), 0.0))
            .collect();
        let dense = eigenvalues(&step_matrix(&p, SchemeKind::S2, t)?)?;
        let d = multiset_distance(&predicted, &dense).unwrap_or(f64::INFINITY);
        if d > GATE_TOL {
            return Err(Error::OracleGate(format!(
                "dispersion spectrum differs from dense S2 by {d:e}"
            )));
        }
        Some(d)
    } else {
        None
    };

    Ok(SpectrumReport {
        t,
        n,
        even,
        odd_exact,
        gate_distance,
    })
}
