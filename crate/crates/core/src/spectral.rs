//! Discrete Fourier transform and the exact periodic exponential.
//!
//! The forward transform is `(F f)(x) = Σ_y exp(−i2πxy/N) f(y)` without
//! normalization; the inverse carries the `1/N`. On the Fourier mode
//! `f_x(k) = exp(i2πxk/N)` a periodic stencil acts as multiplication by its
//! symbol `ν(x)`, so `exp(t·A_L) = F⁻¹ diag(exp(t·ν)) F`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::Result;
use crate::lattice::{DomainSpec, GridFunction, Stencil};

/// Forward and inverse transforms of one length. Read-only once built.
#[derive(Clone)]
pub struct FourierPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for FourierPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FourierPlan").field("n", &self.n).finish()
    }
}

impl FourierPlan {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
    }

    /// Inverse transform including the `1/N` factor.
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
        let scale = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= scale;
        }
    }
}

pub fn dft_forward(f: &GridFunction) -> GridFunction {
    let mut out = f.clone();
    FourierPlan::new(f.len()).forward_in_place(out.values_mut());
    out
}

pub fn dft_inverse(f: &GridFunction) -> GridFunction {
    let mut out = f.clone();
    FourierPlan::new(f.len()).inverse_in_place(out.values_mut());
    out
}

/// Eigenvalues of a periodic stencil on the Fourier modes, together with the
/// transform plan for its domain.
#[derive(Debug, Clone)]
pub struct PeriodicSymbol {
    nu: Vec<Complex64>,
    domain: DomainSpec,
    plan: FourierPlan,
}

impl PeriodicSymbol {
    pub fn nu(&self) -> &[Complex64] {
        &self.nu
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    /// `F⁻¹ diag(exp(θ·ν)) F f` for a complex time factor `θ`.
    pub fn propagate(&self, theta: Complex64, f: &GridFunction) -> Result<GridFunction> {
        f.check_domain(self.domain)?;
        let mut out = f.clone();
        if theta == Complex64::new(0.0, 0.0) {
            return Ok(out);
        }
        let buf = out.values_mut();
        self.plan.forward_in_place(buf);
        for (v, nu) in buf.iter_mut().zip(&self.nu) {
            *v *= (theta * nu).exp();
        }
        self.plan.inverse_in_place(buf);
        Ok(out)
    }
}

pub fn periodic_symbol(stencil: &Stencil, domain: DomainSpec) -> PeriodicSymbol {
    let n = domain.n();
    let nu = (0..n)
        .map(|x| {
            stencil
                .taps()
                .iter()
                .map(|&(o, c)| {
                    // Reduce o·x mod n before scaling to keep the angle small.
                    let k = (o * x as isize).rem_euclid(n as isize) as f64;
                    c * Complex64::from_polar(1.0, 2.0 * PI * k / n as f64)
                })
                .sum()
        })
        .collect();
    PeriodicSymbol {
        nu,
        domain,
        plan: FourierPlan::new(n),
    }
}

/// `exp(t·A_L) f` for the periodic extension of the stencil behind `symbol`.
pub fn exp_periodic(t: f64, symbol: &PeriodicSymbol, f: &GridFunction) -> Result<GridFunction> {
    symbol.propagate(Complex64::new(t, 0.0), f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{dense_matrix, ExtensionSpec};
    use nalgebra::{DMatrix, DVector, SymmetricEigen};
    use proptest::prelude::*;

    fn direct_dft(f: &[Complex64]) -> Vec<Complex64> {
        let n = f.len();
        (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| {
                        let k = (x * y % n) as f64;
                        f[y] * Complex64::from_polar(1.0, -2.0 * PI * k / n as f64)
                    })
                    .sum()
            })
            .collect()
    }

    fn grid(values: Vec<Complex64>) -> GridFunction {
        GridFunction::new(DomainSpec::new(values.len()).unwrap(), values).unwrap()
    }

    fn re(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn seeded(n: usize, seed: u64) -> GridFunction {
        // Small LCG; the values only need to be generic.
        let mut s = seed
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        grid((0..n).map(|_| Complex64::new(next(), next())).collect())
    }

    #[test]
    fn small_transforms() {
        let f = dft_forward(&grid(re(&[1.0, 0.0, 0.0, 0.0])));
        assert_eq!(f.values(), re(&[1.0, 1.0, 1.0, 1.0]).as_slice());
        let f = dft_forward(&grid(re(&[1.0, 1.0, 1.0, 1.0])));
        for (a, b) in f.values().iter().zip(re(&[4.0, 0.0, 0.0, 0.0])) {
            assert!((a - b).norm() < 1e-15);
        }
        let (a, b) = (Complex64::new(0.7, -0.2), Complex64::new(-1.3, 0.4));
        let f = dft_forward(&grid(vec![a, b]));
        assert!((f[0] - (a + b)).norm() < 1e-15);
        assert!((f[1] - (a - b)).norm() < 1e-15);
    }

    #[test]
    fn matches_direct_summation() {
        for n in [2, 3, 5, 8, 12, 64, 100] {
            let f = seeded(n, n as u64);
            let fast = dft_forward(&f);
            let slow = direct_dft(f.values());
            let err: f64 = fast
                .values()
                .iter()
                .zip(&slow)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            assert!(err < 1e-12 * n as f64, "n={n} err={err}");
        }
    }

    #[test]
    fn laplacian_symbol() {
        let sym = periodic_symbol(&Stencil::laplacian(), DomainSpec::new(4).unwrap());
        for (a, b) in sym.nu().iter().zip(re(&[0.0, -2.0, -4.0, -2.0])) {
            assert!((a - b).norm() < 1e-15);
        }
        let i = Complex64::new(0.0, 1.0);
        let sym = periodic_symbol(&Stencil::laplacian().scaled(i), DomainSpec::new(4).unwrap());
        for (a, b) in sym.nu().iter().zip([0.0, -2.0, -4.0, -2.0]) {
            assert!((a - i * b).norm() < 1e-15);
        }
        for n in 2..=64 {
            let sym = periodic_symbol(&Stencil::laplacian(), DomainSpec::new(n).unwrap());
            assert!(sym.nu()[0].norm() < 1e-15);
            for (x, nu) in sym.nu().iter().enumerate() {
                let want = -4.0 * (PI * x as f64 / n as f64).sin().powi(2);
                assert!((nu - want).norm() < 1e-13, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn symbol_at_zero_is_coefficient_sum() {
        let s = Stencil::new(vec![
            (-2, Complex64::new(0.5, 1.0)),
            (0, Complex64::new(-1.0, 0.0)),
            (3, Complex64::new(0.25, -0.5)),
        ])
        .unwrap();
        let sym = periodic_symbol(&s, DomainSpec::new(8).unwrap());
        let sum: Complex64 = s.taps().iter().map(|t| t.1).sum();
        assert!((sym.nu()[0] - sum).norm() < 1e-15);
    }

    #[test]
    fn fourier_mode_is_eigenvector() {
        let d = DomainSpec::new(4).unwrap();
        let mode = grid(
            (0..4)
                .map(|k| Complex64::from_polar(0.5, 2.0 * PI * k as f64 / 4.0))
                .collect(),
        );
        let sym = periodic_symbol(&Stencil::laplacian(), d);
        let out = exp_periodic(0.5, &sym, &mode).unwrap();
        let factor = (-1.0f64).exp();
        assert!((factor - 0.3678794).abs() < 1e-7);
        assert!(out.distance(&mode.scaled(Complex64::new(factor, 0.0))) < 1e-15);
        assert_eq!(exp_periodic(0.0, &sym, &mode).unwrap().distance(&mode), 0.0);
    }

    #[test]
    fn matches_dense_eigendecomposition() {
        let n = 8;
        let d = DomainSpec::new(n).unwrap();
        let lap = Stencil::laplacian();
        let m = dense_matrix(&lap, &ExtensionSpec::Periodic, d).unwrap();
        let real = DMatrix::from_fn(n, n, |i, j| m[(i, j)].re);
        let eig = SymmetricEigen::new(real);
        let f = seeded(n, 3);
        let t = 0.3;
        let v = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
        let expd = DVector::from_iterator(
            n,
            eig.eigenvalues
                .iter()
                .map(|&l| Complex64::new((t * l).exp(), 0.0)),
        );
        let fv = DVector::from_column_slice(f.values());
        let want = &v * (v.adjoint() * fv).component_mul(&expd);
        let got = exp_periodic(t, &periodic_symbol(&lap, d), &f).unwrap();
        let err: f64 = got
            .values()
            .iter()
            .zip(want.iter())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err < 1e-10 * f.norm(), "err={err}");
    }

    proptest! {
        #[test]
        fn transform_round_trip(n in 2usize..40, seed in any::<u64>()) {
            let f = seeded(n, seed);
            let back = dft_inverse(&dft_forward(&f));
            prop_assert!(back.distance(&f) < 1e-13 * (1.0 + f.norm()));
        }

        #[test]
        fn semigroup_contraction_and_unitarity(logn in 1u32..7, s in 0.0f64..2.0, t in 0.0f64..2.0, seed in any::<u64>()) {
            let n = 1usize << logn;
            let d = DomainSpec::new(n).unwrap();
            let f = seeded(n, seed);
            let sym = periodic_symbol(&Stencil::laplacian(), d);
            let once = exp_periodic(s + t, &sym, &f).unwrap();
            let twice = exp_periodic(s, &sym, &exp_periodic(t, &sym, &f).unwrap()).unwrap();
            prop_assert!(once.distance(&twice) < 1e-12 * (1.0 + f.norm()));
            prop_assert!(once.norm() <= f.norm() * (1.0 + 1e-14));

            let schr = periodic_symbol(&Stencil::laplacian().scaled(Complex64::new(0.0, 1.0)), d);
            let u = exp_periodic(t, &schr, &f).unwrap();
            prop_assert!((u.norm() - f.norm()).abs() < 1e-12);
        }
    }
}
