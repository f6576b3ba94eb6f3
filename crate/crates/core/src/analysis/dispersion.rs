//! The secular equation for the even eigenvalues `exp(tξ_j)` of the
//! Dirichlet S2 step operator, and the Crank–Nicolson dispersion baseline.
//!
//! With `M = N/2`, `ν_j = −4 sin²(πj/N)` and
//!
//! ```text
//! F(ξ) = (1 − e^{2t})/M · [ 1/(1 − e^{−tξ}) + ½ Σ_{j=1}^{M−1} (4+ν_j)/(1 − e^{t(ν_j−ξ)}) ] − 1
//! ```
//!
//! `F` is increasing between its poles `ν_0 > … > ν_{M−1}` and tends to `−1`
//! as `ξ → −∞`, so there is exactly one root in each `(ν_{j+1}, ν_j)` and one
//! in `(−∞, ν_{M−1})`. The last one drops below `−4` for large `N`.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::{dirichlet_mu, SPECTRUM_GATE_CAP};
use crate::dense::{eigenvalues, multiset_distance};
use crate::error::{Error, Result};
use crate::lattice::ExtensionSpec;
use crate::steppers::{step_matrix, EvolutionProblem, SchemeKind};
use num_complex::Complex64;

const RESIDUAL_TOL: f64 = 1e-10;
const SCHRODINGER_GATE_TOL: f64 = 1e-6;

/// Which sign the isolated `j = 0` term carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LeadingTerm {
    /// `1/(1 − e^{−tξ})`, the `ν_0 = 0` instance of the summand. Matches the
    /// dense spectrum.
    NegativeExponent,
    /// `1/(1 − e^{tξ})`. Kept for comparison; it has no root in `(ν_1, 0)`.
    PositiveExponent,
}

/// `ν_0, …, ν_M` for even `n`, decreasing from `0` to `−4`.
pub fn periodic_eigenvalues(n: usize) -> Result<Vec<f64>> {
    let m = half(n)?;
    Ok((0..=m)
        .map(|j| -4.0 * (PI * j as f64 / n as f64).sin().powi(2))
        .collect())
}

fn half(n: usize) -> Result<usize> {
    if n < 2 {
        return Err(Error::DomainTooSmall(n));
    }
    if n % 2 == 1 {
        return Err(Error::OddDomain(n));
    }
    Ok(n / 2)
}

fn check_step(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "step must be positive and finite, got {t}"
        )))
    }
}

struct Secular {
    t: f64,
    nu: Vec<f64>,
    prefactor: f64,
    form: LeadingTerm,
}

impl Secular {
    fn new(form: LeadingTerm, t: f64, n: usize) -> Result<Self> {
        check_step(t)?;
        let nu = periodic_eigenvalues(n)?;
        let m = nu.len() - 1;
        Ok(Self {
            t,
            prefactor: -(2.0 * t).exp_m1() / m as f64,
            nu,
            form,
        })
    }

    fn m(&self) -> usize {
        self.nu.len() - 1
    }

    fn eval(&self, xi: f64) -> f64 {
        let t = self.t;
        let lead = match self.form {
            LeadingTerm::NegativeExponent => 1.0 / -(-t * xi).exp_m1(),
            LeadingTerm::PositiveExponent => 1.0 / -(t * xi).exp_m1(),
        };
        let sum: f64 = self.nu[1..self.m()]
            .iter()
            .map(|&nu| (4.0 + nu) / -(t * (nu - xi)).exp_m1())
            .sum();
        self.prefactor * (lead + 0.5 * sum) - 1.0
    }
}

struct TanForm {
    t: f64,
    nu: Vec<f64>,
    prefactor: f64,
}

impl TanForm {
    fn new(t: f64, n: usize) -> Result<Self> {
        check_step(t)?;
        if t.cos().abs() < 1e-8 {
            return Err(Error::DegenerateStep(t));
        }
        if t >= PI / 2.0 {
            return Err(Error::InvalidArgument(format!(
                "tan-form solver needs t < π/2 so the pole pattern does not wrap, got {t}"
            )));
        }
        let nu = periodic_eigenvalues(n)?;
        let m = nu.len() - 1;
        Ok(Self {
            t,
            prefactor: t.tan() / m as f64,
            nu,
        })
    }

    fn m(&self) -> usize {
        self.nu.len() - 1
    }

    fn eval(&self, xi: f64) -> f64 {
        let h = 0.5 * self.t;
        let cot = |x: f64| x.cos() / x.sin();
        let sum: f64 = self.nu[1..self.m()]
            .iter()
            .map(|&nu| (4.0 + nu) * cot(h * (nu - xi)))
            .sum();
        self.prefactor * (-cot(h * xi) + 0.5 * sum) - 1.0
    }
}

/// `F(ξ)` for the chosen leading term.
pub fn dispersion_residual(form: LeadingTerm, t: f64, n: usize, xi: f64) -> Result<f64> {
    Ok(Secular::new(form, t, n)?.eval(xi))
}

/// Residual of the unitary (tan) form at `ξ`.
pub fn schrodinger_residual(t: f64, n: usize, xi: f64) -> Result<f64> {
    Ok(TanForm::new(t, n)?.eval(xi))
}

fn inward(lo: f64, hi: f64) -> (f64, f64) {
    let w = hi - lo;
    let d = (1e-12 * w).max(8.0 * f64::EPSILON * lo.abs().max(hi.abs()));
    (lo + d, hi - d)
}

/// Bisection to adjacent floats on `[lo, hi]`; `interval` is reported on
/// failure.
fn bisect(f: impl Fn(f64) -> f64, lo: f64, hi: f64, interval: (f64, f64)) -> Result<f64> {
    let failure = Error::BracketFailure {
        lo: interval.0,
        hi: interval.1,
    };
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if !(fa.is_finite() && fb.is_finite()) || (fa < 0.0) == (fb < 0.0) {
        return Err(failure);
    }
    let a_negative = fa < 0.0;
    let (mut best, mut best_res) = if fa.abs() < fb.abs() {
        (a, fa)
    } else {
        (b, fb)
    };
    for _ in 0..2100 {
        let mid = a + 0.5 * (b - a);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm.abs() < best_res.abs() {
            best = mid;
            best_res = fm;
        }
        if fm == 0.0 {
            break;
        }
        if (fm < 0.0) == a_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    if best_res.abs() > RESIDUAL_TOL {
        return Err(Error::RootResidual {
            xi: best,
            residual: best_res,
        });
    }
    Ok(best)
}

/// The interval below the last pole: walk down from `start` until `f < 0`.
fn open_lower(f: &impl Fn(f64) -> f64, start: f64, hi: f64) -> Result<f64> {
    let mut a = start;
    let mut step = 1.0;
    while f(a) >= 0.0 {
        a -= step;
        step *= 2.0;
        if step > 1e12 {
            return Err(Error::BracketFailure {
                lo: f64::NEG_INFINITY,
                hi,
            });
        }
    }
    Ok(a)
}

/// Roots `ξ_0 > ξ_1 > … > ξ_{M−1}` of the dispersion equation.
pub fn dispersion_solve(t: f64, n: usize) -> Result<Vec<f64>> {
    dispersion_solve_with(LeadingTerm::NegativeExponent, t, n)
}

pub fn dispersion_solve_with(form: LeadingTerm, t: f64, n: usize) -> Result<Vec<f64>> {
    let eq = Secular::new(form, t, n)?;
    let m = eq.m();
    let f = |xi: f64| eq.eval(xi);
    (0..m)
        .into_par_iter()
        .map(|j| {
            let hi = eq.nu[j];
            if j + 1 < m {
                let lo = eq.nu[j + 1];
                let (a, b) = inward(lo, hi);
                bisect(f, a, b, (lo, hi))
            } else {
                let (_, b) = inward(hi - 1.0, hi);
                let a = open_lower(&f, (-4.0f64).min(b - 1.0), hi)?;
                bisect(f, a, b, (f64::NEG_INFINITY, hi))
            }
        })
        .collect()
}

/// Roots of the tan-form equation for `∂f/∂t = iΔf`; the even eigenvalues of
/// the unitary S2 are `exp(itξ_j)`. For `n` within the dense gate the
/// predicted spectrum is checked against a dense eigensolve.
pub fn dispersion_solve_schrodinger(t: f64, n: usize) -> Result<Vec<f64>> {
    let eq = TanForm::new(t, n)?;
    let m = eq.m();
    let f = |xi: f64| eq.eval(xi);
    let roots = (0..m)
        .into_par_iter()
        .map(|j| {
            let hi = eq.nu[j];
            let lo = if j + 1 < m {
                eq.nu[j + 1]
            } else {
                eq.nu[0] - 2.0 * PI / t
            };
            let (a, b) = inward(lo, hi);
            bisect(f, a, b, (lo, hi))
        })
        .collect::<Result<Vec<f64>>>()?;

    if n <= SPECTRUM_GATE_CAP {
        let p = EvolutionProblem::schrodinger(n, &ExtensionSpec::dirichlet())?;
        let dense = eigenvalues(&step_matrix(&p, SchemeKind::S2, t)?)?;
        let i = Complex64::new(0.0, 1.0);
        let predicted: Vec<Complex64> = roots
            .iter()
            .chain(&eq.nu[1..])
            .map(|&x| (i * t * x).exp())
            .collect();
        let d = multiset_distance(&predicted, &dense).unwrap_or(f64::INFINITY);
        if d > SCHRODINGER_GATE_TOL {
            return Err(Error::OracleGate(format!(
                "tan-form spectrum differs from dense S2 by {d:e}"
            )));
        }
    }
    Ok(roots)
}

/// `|(1/t) ln((1 + tμ/2)/(1 − tμ/2)) − μ|`, the per-mode rate error of
/// Crank–Nicolson.
pub fn cn_mode_error(t: f64, mu: f64) -> Result<f64> {
    check_step(t)?;
    // ln((1+a)/(1−a)) = 2 atanh(a), accurate near a = 0.
    let a = 0.5 * t * mu;
    if a.is_nan() || a.abs() >= 1.0 {
        return Err(Error::LogDomain { t, mu });
    }
    Ok((2.0 * a.atanh() / t - mu).abs())
}

/// `cn_mode_error` at every Dirichlet eigenvalue `μ_0 … μ_{n−1}`.
pub fn cn_dispersion_error(t: f64, n: usize) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::DomainTooSmall(n));
    }
    (0..n)
        .map(|j| cn_mode_error(t, dirichlet_mu(j, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_s2_spectrum(n: usize, t: f64) -> Vec<Complex64> {
        let p = EvolutionProblem::diffusion(n, &ExtensionSpec::dirichlet()).unwrap();
        eigenvalues(&step_matrix(&p, SchemeKind::S2, t).unwrap()).unwrap()
    }

    fn predicted(roots: &[f64], n: usize, t: f64) -> Vec<Complex64> {
        let nu = periodic_eigenvalues(n).unwrap();
        roots
            .iter()
            .chain(&nu[1..])
            .map(|&x| Complex64::new((t * x).exp(), 0.0))
            .collect()
    }

    #[test]
    fn nu_sequence() {
        let nu = periodic_eigenvalues(8).unwrap();
        assert_eq!(nu.len(), 5);
        assert_eq!(nu[0], 0.0);
        assert!((nu[4] + 4.0).abs() < 1e-15);
        assert!(nu.windows(2).all(|w| w[1] < w[0]));
        assert_eq!(periodic_eigenvalues(7).unwrap_err(), Error::OddDomain(7));
    }

    #[test]
    fn roots_lie_in_their_intervals() {
        for n in [2, 4, 16, 64, 256] {
            let nu = periodic_eigenvalues(n).unwrap();
            let roots = dispersion_solve(0.5, n).unwrap();
            assert_eq!(roots.len(), n / 2);
            for (j, &xi) in roots.iter().enumerate() {
                assert!(xi < nu[j], "n={n} j={j}");
                if j + 1 < n / 2 {
                    assert!(xi > nu[j + 1], "n={n} j={j}");
                }
                assert!(
                    dispersion_residual(LeadingTerm::NegativeExponent, 0.5, n, xi)
                        .unwrap()
                        .abs()
                        <= 1e-10
                );
            }
        }
    }

    #[test]
    fn lowest_root_drops_below_minus_four() {
        let roots = dispersion_solve(0.5, 64).unwrap();
        let last = *roots.last().unwrap();
        assert!(last < -4.0 && last > -4.1, "{last}");
    }

    #[test]
    fn matches_dense_spectrum() {
        for n in [4, 8, 16, 32] {
            for t in [0.1, 0.5, 2.0] {
                let roots = dispersion_solve(t, n).unwrap();
                let d =
                    multiset_distance(&predicted(&roots, n, t), &dense_s2_spectrum(n, t)).unwrap();
                assert!(d < 1e-8, "n={n} t={t} d={d}");
            }
        }
    }

    #[test]
    fn printed_leading_term_fails_to_bracket() {
        let err = dispersion_solve_with(LeadingTerm::PositiveExponent, 0.5, 16).unwrap_err();
        assert!(matches!(err, Error::BracketFailure { .. }), "{err:?}");
    }

    #[test]
    fn schrodinger_roots_match_unitary_spectrum() {
        for n in [4, 8, 16] {
            let roots = dispersion_solve_schrodinger(0.5, n).unwrap();
            assert_eq!(roots.len(), n / 2);
            for &xi in &roots {
                assert!(schrodinger_residual(0.5, n, xi).unwrap().abs() <= 1e-10);
            }
        }
        assert_eq!(
            dispersion_solve_schrodinger(PI / 2.0, 8).unwrap_err(),
            Error::DegenerateStep(PI / 2.0)
        );
        assert!(dispersion_solve_schrodinger(2.0, 8).is_err());
    }

    #[test]
    fn cn_baseline() {
        let e = cn_mode_error(0.5, -2.0).unwrap();
        assert!((e - (2.0 * (1.0f64 / 3.0).ln() + 2.0).abs()).abs() < 1e-15);
        assert!((e - 0.19722).abs() < 1e-5);
        assert!(cn_mode_error(0.5, -1e-8).unwrap() < 1e-20);
        assert_eq!(
            cn_mode_error(0.5, -4.0).unwrap_err(),
            Error::LogDomain { t: 0.5, mu: -4.0 }
        );
        // μ_{N−1} = −4 at t = ½ leaves the log domain.
        assert!(cn_dispersion_error(0.5, 2).is_err());
        let all = cn_dispersion_error(0.25, 16).unwrap();
        assert_eq!(all.len(), 16);
        assert!(all.windows(2).all(|w| w[1] > w[0]));
    }
}
