//! One-step evolution operators for `∂f/∂t = c·A_K f` and trajectory driving.
//!
//! The operator-exponential schemes split `A_K = A_L + G_KL` against the
//! periodic extension `L`:
//!
//! * `S1(t) = exp(t A_L) · exp(t G_KL)`
//! * `S2(t) = exp(½t G_KL) · exp(t A_L) · exp(½t G_KL)`
//!
//! `exp(t A_L)` goes through the FFT and `exp(θ G_KL)` through the small
//! boundary block, so a step costs `O(N log N)`. Euler, Crank–Nicolson and
//! the dense exact exponential serve as baselines and oracle.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DVector, LU};
use num_complex::Complex64;

use crate::boundary::{apply_boundary_exp, exp_boundary, BoundaryExponential, BoundaryOperator};
use crate::dense::{solve_shifted_tridiagonal, ExactPropagator};
use crate::error::{Error, Result};
use crate::lattice::{
    CMatrix, DomainSpec, ExtendedOperator, ExtensionSpec, GridFunction, Stencil, Tridiagonal,
};
use crate::spectral::{periodic_symbol, PeriodicSymbol};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    S1,
    S2,
    Euler,
    CrankNicolson,
    Exact,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::S1,
        SchemeKind::S2,
        SchemeKind::Euler,
        SchemeKind::CrankNicolson,
        SchemeKind::Exact,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::S1 => "s1",
            SchemeKind::S2 => "s2",
            SchemeKind::Euler => "euler",
            SchemeKind::CrankNicolson => "cn",
            SchemeKind::Exact => "exact",
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(SchemeKind::S1),
            "s2" => Ok(SchemeKind::S2),
            "euler" => Ok(SchemeKind::Euler),
            "cn" | "crank-nicolson" | "cranknicolson" => Ok(SchemeKind::CrankNicolson),
            "exact" => Ok(SchemeKind::Exact),
            other => Err(Error::InvalidArgument(format!("unknown scheme '{other}'"))),
        }
    }
}

/// `∂f/∂t = scale · A_K f` on a lattice, with the splitting pieces
/// precomputed.
#[derive(Debug, Clone)]
pub struct EvolutionProblem {
    ext_k: ExtensionSpec,
    scale: Complex64,
    target: ExtendedOperator,
    symbol: PeriodicSymbol,
    gkl: BoundaryOperator,
    tridiagonal: Option<Tridiagonal>,
}

impl EvolutionProblem {
    pub fn new(
        stencil: &Stencil,
        ext_k: &ExtensionSpec,
        domain: DomainSpec,
        scale: Complex64,
    ) -> Result<Self> {
        let target = ExtendedOperator::new(stencil, ext_k, domain)?;
        let periodic = ExtendedOperator::new(stencil, &ExtensionSpec::Periodic, domain)?;
        let gkl = BoundaryOperator::from_operators(&target, &periodic)?;
        Ok(Self {
            ext_k: ext_k.clone(),
            scale,
            tridiagonal: target.tridiagonal(),
            symbol: periodic_symbol(stencil, domain),
            target,
            gkl,
        })
    }

    /// `∂f/∂t = Δ_K f`.
    pub fn diffusion(n: usize, ext_k: &ExtensionSpec) -> Result<Self> {
        Self::new(
            &Stencil::laplacian(),
            ext_k,
            DomainSpec::new(n)?,
            Complex64::new(1.0, 0.0),
        )
    }

    /// `∂f/∂t = i·Δ_K f`.
    pub fn schrodinger(n: usize, ext_k: &ExtensionSpec) -> Result<Self> {
        Self::new(
            &Stencil::laplacian(),
            ext_k,
            DomainSpec::new(n)?,
            Complex64::new(0.0, 1.0),
        )
    }

    pub fn domain(&self) -> DomainSpec {
        self.target.domain()
    }

    pub fn stencil(&self) -> &Stencil {
        self.target.stencil()
    }

    pub fn extension(&self) -> &ExtensionSpec {
        &self.ext_k
    }

    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    /// Unscaled `A_K`.
    pub fn target(&self) -> &ExtendedOperator {
        &self.target
    }

    pub fn symbol(&self) -> &PeriodicSymbol {
        &self.symbol
    }

    /// Unscaled `G_KL` against the periodic extension.
    pub fn boundary_operator(&self) -> &BoundaryOperator {
        &self.gkl
    }

    /// `scale · A_K f`.
    pub fn apply_generator(&self, f: &GridFunction) -> Result<GridFunction> {
        Ok(self.target.apply(f)?.scaled(self.scale))
    }

    /// Dense `scale · A_K`.
    pub fn generator_matrix(&self) -> CMatrix {
        self.target.dense() * self.scale
    }

    /// Dense `scale · G_KL`.
    pub fn boundary_matrix(&self) -> CMatrix {
        self.gkl.embedded() * self.scale
    }

    pub fn exact_propagator(&self) -> Result<ExactPropagator> {
        ExactPropagator::new(&self.target, self.scale)
    }

    fn boundary_exp(&self, t: f64) -> Result<BoundaryExponential> {
        exp_boundary(self.scale * t, &self.gkl)
    }

    fn periodic(&self, t: f64, f: &GridFunction) -> Result<GridFunction> {
        self.symbol.propagate(self.scale * t, f)
    }
}

/// A scheme bound to a problem and a fixed step, with the per-step pieces
/// (boundary exponentials, factorizations) built once.
#[derive(Debug, Clone)]
pub struct Stepper<'a> {
    problem: &'a EvolutionProblem,
    scheme: SchemeKind,
    dt: f64,
    kind: Prepared,
}

#[derive(Debug, Clone)]
enum Prepared {
    Identity,
    Split1(BoundaryExponential),
    Split2(BoundaryExponential),
    Euler,
    CnSweep,
    CnDense(Box<LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>>),
    Exact(Box<CMatrix>),
}

impl<'a> Stepper<'a> {
    pub fn new(problem: &'a EvolutionProblem, scheme: SchemeKind, dt: f64) -> Result<Self> {
        let kind = if dt == 0.0 {
            Prepared::Identity
        } else {
            match scheme {
                SchemeKind::S1 => Prepared::Split1(problem.boundary_exp(dt)?),
                SchemeKind::S2 => Prepared::Split2(problem.boundary_exp(0.5 * dt)?),
                SchemeKind::Euler => Prepared::Euler,
                SchemeKind::CrankNicolson if problem.tridiagonal.is_some() => Prepared::CnSweep,
                SchemeKind::CrankNicolson => {
                    let n = problem.domain().n();
                    let m = CMatrix::identity(n, n)
                        - problem.generator_matrix() * Complex64::new(0.5 * dt, 0.0);
                    let lu = m.lu();
                    if !lu.is_invertible() {
                        return Err(Error::SingularResolvent(dt));
                    }
                    Prepared::CnDense(Box::new(lu))
                }
                SchemeKind::Exact => {
                    Prepared::Exact(Box::new(problem.exact_propagator()?.matrix(dt)))
                }
            }
        };
        Ok(Self {
            problem,
            scheme,
            dt,
            kind,
        })
    }

    pub fn scheme(&self) -> SchemeKind {
        self.scheme
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn advance(&self, f: &GridFunction) -> Result<GridFunction> {
        let p = self.problem;
        f.check_domain(p.domain())?;
        match &self.kind {
            Prepared::Identity => Ok(f.clone()),
            Prepared::Split1(e) => p.periodic(self.dt, &apply_boundary_exp(e, f)),
            Prepared::Split2(e) => {
                let mid = p.periodic(self.dt, &apply_boundary_exp(e, f))?;
                Ok(apply_boundary_exp(e, &mid))
            }
            Prepared::Euler => Ok(f.axpy(Complex64::new(self.dt, 0.0), &p.apply_generator(f)?)),
            Prepared::CnSweep => {
                let half = Complex64::new(0.5 * self.dt, 0.0);
                let rhs = f.axpy(half, &p.apply_generator(f)?);
                let tri = p
                    .tridiagonal
                    .as_ref()
                    .expect("sweep prepared for tridiagonal");
                let h = solve_shifted_tridiagonal(
                    tri,
                    Complex64::new(1.0, 0.0),
                    -half * p.scale,
                    rhs.values(),
                )
                .ok_or(Error::SingularResolvent(self.dt))?;
                GridFunction::new(f.domain(), h)
            }
            Prepared::CnDense(lu) => {
                let half = Complex64::new(0.5 * self.dt, 0.0);
                let rhs = f.axpy(half, &p.apply_generator(f)?);
                let h = lu
                    .solve(&DVector::from_column_slice(rhs.values()))
                    .ok_or(Error::SingularResolvent(self.dt))?;
                GridFunction::new(f.domain(), h.iter().copied().collect())
            }
            Prepared::Exact(m) => {
                let y = &**m * DVector::from_column_slice(f.values());
                GridFunction::new(f.domain(), y.iter().copied().collect())
            }
        }
    }

    /// The step operator as a dense matrix, column by column.
    pub fn matrix(&self) -> Result<CMatrix> {
        let d = self.problem.domain();
        let n = d.n();
        let mut m = CMatrix::zeros(n, n);
        for j in 0..n {
            let col = self.advance(&GridFunction::basis(d, j))?;
            for (i, v) in col.values().iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        Ok(m)
    }
}

pub fn step(
    p: &EvolutionProblem,
    scheme: SchemeKind,
    t: f64,
    f: &GridFunction,
) -> Result<GridFunction> {
    Stepper::new(p, scheme, t)?.advance(f)
}

/// `exp(t A_L) exp(t G_KL) f`.
pub fn step_s1(p: &EvolutionProblem, t: f64, f: &GridFunction) -> Result<GridFunction> {
    step(p, SchemeKind::S1, t, f)
}

/// `exp(½t G_KL) exp(t A_L) exp(½t G_KL) f`.
pub fn step_s2(p: &EvolutionProblem, t: f64, f: &GridFunction) -> Result<GridFunction> {
    step(p, SchemeKind::S2, t, f)
}

/// `f + t·A_K f`.
pub fn step_euler(p: &EvolutionProblem, t: f64, f: &GridFunction) -> Result<GridFunction> {
    step(p, SchemeKind::Euler, t, f)
}

/// Solves `(E − ½t A_K) h = (E + ½t A_K) f`.
pub fn step_cn(p: &EvolutionProblem, t: f64, f: &GridFunction) -> Result<GridFunction> {
    step(p, SchemeKind::CrankNicolson, t, f)
}

/// `exp(t A_K) f` from the dense oracle.
pub fn exact_step(p: &EvolutionProblem, t: f64, f: &GridFunction) -> Result<GridFunction> {
    step(p, SchemeKind::Exact, t, f)
}

pub fn step_matrix(p: &EvolutionProblem, scheme: SchemeKind, t: f64) -> Result<CMatrix> {
    Stepper::new(p, scheme, t)?.matrix()
}

/// Applies `steps` steps of size `dt` to `g`, calling `observer(k, k·dt, f_k)`
/// after each one.
pub fn evolve<F>(
    p: &EvolutionProblem,
    scheme: SchemeKind,
    dt: f64,
    steps: usize,
    g: &GridFunction,
    mut observer: F,
) -> Result<GridFunction>
where
    F: FnMut(usize, f64, &GridFunction),
{
    let stepper = Stepper::new(p, scheme, dt)?;
    let mut f = g.clone();
    for k in 1..=steps {
        f = stepper.advance(&f)?;
        observer(k, k as f64 * dt, &f);
    }
    Ok(f)
}
