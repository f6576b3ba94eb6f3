//! Operator-exponential time stepping for one-dimensional difference
//! initial-boundary value problems `∂f/∂t = c·A_K f`.
//!
//! The operator `A_K` (a stencil plus a boundary extension `K`) is split as
//! `A_L + G_KL` against the periodic extension `L`. `exp(t A_L)` is applied
//! through the FFT and `exp(t G_KL)` through a small dense block on the
//! boundary points.

pub mod analysis;
pub mod boundary;
pub mod dense;
pub mod error;
pub mod experiments;
pub mod lattice;
pub mod spectral;
pub mod steppers;

pub use boundary::{
    apply_boundary_exp, build_gkl, exp_boundary, BoundaryExponential, BoundaryOperator,
};
pub use error::{Error, Result};
pub use lattice::{DomainSpec, ExtendedOperator, ExtensionSpec, GridFunction, Stencil};
pub use spectral::{exp_periodic, periodic_symbol, PeriodicSymbol};
pub use steppers::{evolve, EvolutionProblem, SchemeKind, Stepper};
