//! Lattice domains, grid functions, constant-coefficient stencils and the
//! extension operators that encode boundary conditions.
//!
//! A stencil `A` acts on functions over `Ω = {0, …, n−1}` by
//! `(A f)(x) = Σ_k c_k f(x + o_k)`. Points whose stencil reaches outside `Ω`
//! are boundary points; the off-domain indices they touch are ghost indices.
//! An [`ExtensionSpec`] assigns every ghost value as a linear combination of
//! boundary values, which turns the stencil into an `n × n` operator.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::Index;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The lattice `Ω = {0, …, n−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DomainSpec {
    n: usize,
}

impl DomainSpec {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::DomainTooSmall(n));
        }
        Ok(Self { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `M = n / 2`, for the operations that need an even lattice.
    pub fn half(&self) -> Result<usize> {
        if !self.n.is_multiple_of(2) {
            return Err(Error::OddDomain(self.n));
        }
        Ok(self.n / 2)
    }

    pub fn contains(&self, x: isize) -> bool {
        x >= 0 && (x as usize) < self.n
    }
}

/// A complex-valued function on the lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    domain: DomainSpec,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(domain: DomainSpec, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != domain.n() {
            return Err(Error::DomainMismatch {
                expected: domain.n(),
                actual: values.len(),
            });
        }
        Ok(Self { domain, values })
    }

    pub fn from_real(domain: DomainSpec, values: &[f64]) -> Result<Self> {
        Self::new(
            domain,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn zeros(domain: DomainSpec) -> Self {
        Self {
            domain,
            values: vec![ZERO; domain.n()],
        }
    }

    /// The standard basis vector `e_k`.
    pub fn basis(domain: DomainSpec, k: usize) -> Self {
        let mut f = Self::zeros(domain);
        f.values[k] = ONE;
        f
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    /// Euclidean norm `sqrt(Σ |f(k)|²)`.
    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self − other‖`.
    pub fn distance(&self, other: &GridFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Inner product `(self, other) = Σ self(k)·conj(other(k))`.
    pub fn dot(&self, other: &GridFunction) -> Complex64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b.conj())
            .sum()
    }

    pub fn scaled(&self, c: Complex64) -> GridFunction {
        GridFunction {
            domain: self.domain,
            values: self.values.iter().map(|v| v * c).collect(),
        }
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &GridFunction) -> GridFunction {
        GridFunction {
            domain: self.domain,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    /// Unit-norm copy. A zero function is returned unchanged.
    pub fn normalized(&self) -> GridFunction {
        let norm = self.norm();
        if norm == 0.0 {
            return self.clone();
        }
        self.scaled(Complex64::new(1.0 / norm, 0.0))
    }

    pub(crate) fn check_domain(&self, domain: DomainSpec) -> Result<()> {
        if self.domain != domain {
            return Err(Error::DomainMismatch {
                expected: domain.n(),
                actual: self.domain.n(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for GridFunction {
    type Output = Complex64;

    fn index(&self, k: usize) -> &Complex64 {
        &self.values[k]
    }
}

/// Constant-coefficient difference operator, stored as `(offset, coefficient)`
/// taps sorted by offset.
#[derive(Debug, Clone, PartialEq)]
pub struct Stencil {
    taps: Vec<(isize, Complex64)>,
}

impl Stencil {
    pub fn new(mut taps: Vec<(isize, Complex64)>) -> Result<Self> {
        if taps.is_empty() {
            return Err(Error::EmptyStencil);
        }
        taps.sort_by_key(|&(o, _)| o);
        if let Some(w) = taps.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateOffset(w[0].0));
        }
        Ok(Self { taps })
    }

    pub fn from_real(taps: &[(isize, f64)]) -> Result<Self> {
        Self::new(
            taps.iter()
                .map(|&(o, c)| (o, Complex64::new(c, 0.0)))
                .collect(),
        )
    }

    /// Second difference `f(x−1) − 2f(x) + f(x+1)`.
    pub fn laplacian() -> Self {
        Self {
            taps: vec![(-1, ONE), (0, Complex64::new(-2.0, 0.0)), (1, ONE)],
        }
    }

    pub fn identity() -> Self {
        Self {
            taps: vec![(0, ONE)],
        }
    }

    /// Every coefficient multiplied by `c` (e.g. `i·Δ` for Schrödinger).
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            taps: self.taps.iter().map(|&(o, v)| (o, v * c)).collect(),
        }
    }

    pub fn taps(&self) -> &[(isize, Complex64)] {
        &self.taps
    }

    /// Largest `|offset|`.
    pub fn reach(&self) -> usize {
        self.taps
            .iter()
            .map(|&(o, _)| o.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Only offsets in {−1, 0, 1}.
    pub fn is_three_point(&self) -> bool {
        self.reach() <= 1
    }
}

/// One ghost value of a custom extension: `f(ghost) = Σ w · f(index)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GhostRule {
    pub ghost: isize,
    pub weights: Vec<(usize, Complex64)>,
}

/// Boundary conditions, expressed as the values assigned to ghost indices.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtensionSpec {
    /// `f(x) = f(x mod n)`.
    Periodic,
    /// Left ghosts take `alpha·f(0)`, right ghosts `beta·f(n−1)`.
    ThirdKind { alpha: Complex64, beta: Complex64 },
    /// Explicit linear map from boundary values to ghost values.
    Custom(Vec<GhostRule>),
}

impl ExtensionSpec {
    pub fn third_kind(alpha: Complex64, beta: Complex64) -> Self {
        ExtensionSpec::ThirdKind { alpha, beta }
    }

    pub fn dirichlet() -> Self {
        Self::third_kind(-ONE, -ONE)
    }

    pub fn neumann() -> Self {
        Self::third_kind(ONE, ONE)
    }

    /// Real symmetric boundary data: coefficients with zero imaginary part.
    pub(crate) fn is_real(&self) -> bool {
        match self {
            ExtensionSpec::Periodic => true,
            ExtensionSpec::ThirdKind { alpha, beta } => alpha.im == 0.0 && beta.im == 0.0,
            ExtensionSpec::Custom(rules) => rules
                .iter()
                .all(|r| r.weights.iter().all(|(_, w)| w.im == 0.0)),
        }
    }
}

/// Partition of `Ω` relative to a stencil, plus the ghost indices it reaches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySets {
    pub inner: Vec<usize>,
    pub boundary: Vec<usize>,
    pub ghost: Vec<isize>,
}

impl BoundarySets {
    pub fn is_boundary(&self, x: usize) -> bool {
        self.boundary.binary_search(&x).is_ok()
    }
}

pub fn classify_boundary(stencil: &Stencil, domain: DomainSpec) -> Result<BoundarySets> {
    let n = domain.n();
    let reach = stencil.reach();
    if reach >= n {
        return Err(Error::StencilTooWide { reach, n });
    }
    let mut inner = Vec::new();
    let mut boundary = Vec::new();
    let mut ghost = BTreeSet::new();
    for x in 0..n {
        let mut outside = false;
        for &(o, _) in stencil.taps() {
            let y = x as isize + o;
            if !domain.contains(y) {
                outside = true;
                ghost.insert(y);
            }
        }
        if outside {
            boundary.push(x);
        } else {
            inner.push(x);
        }
    }
    Ok(BoundarySets {
        inner,
        boundary,
        ghost: ghost.into_iter().collect(),
    })
}

/// A stencil bound to an extension on a fixed domain, with every ghost
/// resolved to its weights. This is `Â_L` for an extension `L`.
#[derive(Debug, Clone)]
pub struct ExtendedOperator {
    stencil: Stencil,
    domain: DomainSpec,
    sets: BoundarySets,
    ghosts: BTreeMap<isize, Vec<(usize, Complex64)>>,
    real_symmetric: bool,
}

impl ExtendedOperator {
    pub fn new(stencil: &Stencil, ext: &ExtensionSpec, domain: DomainSpec) -> Result<Self> {
        let sets = classify_boundary(stencil, domain)?;
        let n = domain.n() as isize;
        let mut ghosts = BTreeMap::new();
        match ext {
            ExtensionSpec::Periodic => {
                for &g in &sets.ghost {
                    ghosts.insert(g, vec![(g.rem_euclid(n) as usize, ONE)]);
                }
            }
            ExtensionSpec::ThirdKind { alpha, beta } => {
                for &g in &sets.ghost {
                    let rule = if g < 0 {
                        (0, *alpha)
                    } else {
                        ((n - 1) as usize, *beta)
                    };
                    ghosts.insert(g, vec![rule]);
                }
            }
            ExtensionSpec::Custom(rules) => {
                for rule in rules {
                    if sets.ghost.binary_search(&rule.ghost).is_err() {
                        return Err(Error::UnknownGhost(rule.ghost));
                    }
                    if let Some(&(bad, _)) =
                        rule.weights.iter().find(|(k, _)| !sets.is_boundary(*k))
                    {
                        return Err(Error::NonBoundaryReference(bad));
                    }
                    ghosts.insert(rule.ghost, rule.weights.clone());
                }
                if let Some(&missing) = sets.ghost.iter().find(|g| !ghosts.contains_key(g)) {
                    return Err(Error::ExtensionIncomplete(missing));
                }
            }
        }
        let mut op = Self {
            stencil: stencil.clone(),
            domain,
            sets,
            ghosts,
            real_symmetric: false,
        };
        op.real_symmetric =
            stencil.taps().iter().all(|(_, c)| c.im == 0.0) && ext.is_real() && op.is_symmetric();
        Ok(op)
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn stencil(&self) -> &Stencil {
        &self.stencil
    }

    pub fn sets(&self) -> &BoundarySets {
        &self.sets
    }

    /// Whether the dense matrix is real and symmetric.
    pub fn is_real_symmetric(&self) -> bool {
        self.real_symmetric
    }

    /// Feeds the nonzero contributions of row `x` to `sink` in a fixed order.
    /// Dense assembly and the boundary block both go through here, so their
    /// entries are bit-identical.
    pub(crate) fn for_each_in_row(&self, x: usize, mut sink: impl FnMut(usize, Complex64)) {
        for &(o, c) in self.stencil.taps() {
            let y = x as isize + o;
            if self.domain.contains(y) {
                sink(y as usize, c);
            } else {
                for &(k, w) in &self.ghosts[&y] {
                    sink(k, c * w);
                }
            }
        }
    }

    pub fn apply(&self, f: &GridFunction) -> Result<GridFunction> {
        f.check_domain(self.domain)?;
        let v = f.values();
        let out = (0..self.domain.n())
            .map(|x| {
                self.stencil
                    .taps()
                    .iter()
                    .map(|&(o, c)| {
                        let y = x as isize + o;
                        let value = if self.domain.contains(y) {
                            v[y as usize]
                        } else {
                            self.ghosts[&y].iter().map(|&(k, w)| w * v[k]).sum()
                        };
                        c * value
                    })
                    .sum()
            })
            .collect();
        Ok(GridFunction {
            domain: self.domain,
            values: out,
        })
    }

    pub fn dense(&self) -> CMatrix {
        let n = self.domain.n();
        let mut m = CMatrix::zeros(n, n);
        for x in 0..n {
            self.for_each_in_row(x, |col, v| m[(x, col)] += v);
        }
        m
    }

    /// Sub-, main and super-diagonal when the operator is tridiagonal.
    pub(crate) fn tridiagonal(&self) -> Option<Tridiagonal> {
        let n = self.domain.n();
        let mut t = Tridiagonal {
            lower: vec![ZERO; n],
            diag: vec![ZERO; n],
            upper: vec![ZERO; n],
        };
        let mut ok = true;
        for x in 0..n {
            self.for_each_in_row(x, |col, v| {
                if col == x {
                    t.diag[x] += v;
                } else if col + 1 == x {
                    t.lower[x] += v;
                } else if col == x + 1 {
                    t.upper[x] += v;
                } else {
                    ok = false;
                }
            });
        }
        ok.then_some(t)
    }

    fn is_symmetric(&self) -> bool {
        let n = self.domain.n();
        let mut rows: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); n];
        for (x, row) in rows.iter_mut().enumerate() {
            self.for_each_in_row(x, |col, v| *row.entry(col).or_insert(ZERO) += v);
        }
        rows.iter().enumerate().all(|(x, row)| {
            row.iter().all(|(&col, v)| {
                let t = rows[col].get(&x).copied().unwrap_or(ZERO);
                (t - v).norm() == 0.0
            })
        })
    }
}

/// Row `x` couples `lower[x]·f(x−1) + diag[x]·f(x) + upper[x]·f(x+1)`.
#[derive(Debug, Clone)]
pub(crate) struct Tridiagonal {
    pub lower: Vec<Complex64>,
    pub diag: Vec<Complex64>,
    pub upper: Vec<Complex64>,
}

pub fn apply_extended(
    stencil: &Stencil,
    ext: &ExtensionSpec,
    f: &GridFunction,
) -> Result<GridFunction> {
    ExtendedOperator::new(stencil, ext, f.domain())?.apply(f)
}

pub fn dense_matrix(stencil: &Stencil, ext: &ExtensionSpec, domain: DomainSpec) -> Result<CMatrix> {
    Ok(ExtendedOperator::new(stencil, ext, domain)?.dense())
}
