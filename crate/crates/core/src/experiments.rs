//! Experiment drivers behind the command-line tool. Every command returns the
//! complete CSV text; output is deterministic for a given configuration.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::analysis::{
    dirichlet_mode, dirichlet_mu, dispersion_solve_schrodinger, periodic_eigenvalues,
    spectrum_report,
};
use crate::dense::{operator_norm, DEFAULT_DENSE_CAP};
use crate::error::{Error, Result};
use crate::lattice::{DomainSpec, ExtensionSpec, GridFunction, Stencil};
use crate::steppers::{step_matrix, EvolutionProblem, SchemeKind, Stepper};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equation {
    Diffusion,
    Schrodinger,
}

impl Equation {
    pub fn name(&self) -> &'static str {
        match self {
            Equation::Diffusion => "diffusion",
            Equation::Schrodinger => "schrodinger",
        }
    }

    pub fn scale(&self) -> Complex64 {
        match self {
            Equation::Diffusion => Complex64::new(1.0, 0.0),
            Equation::Schrodinger => Complex64::new(0.0, 1.0),
        }
    }
}

impl FromStr for Equation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "diffusion" | "heat" => Ok(Equation::Diffusion),
            "schrodinger" | "schroedinger" => Ok(Equation::Schrodinger),
            other => Err(Error::InvalidArgument(format!(
                "unknown equation '{other}'"
            ))),
        }
    }
}

/// Initial data: `delta[:K]` (unit spike, centre by default), `random`
/// (seeded, unit norm), `eigen:J` (Dirichlet mode φ_J) or `file:PATH`.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Delta(Option<usize>),
    Random,
    Eigen(usize),
    File(PathBuf),
}

impl FromStr for InitialSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("bad initial vector '{s}'"));
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        match (head.to_ascii_lowercase().as_str(), arg) {
            ("delta", None) => Ok(InitialSpec::Delta(None)),
            ("delta", Some(k)) => Ok(InitialSpec::Delta(Some(k.parse().map_err(|_| bad())?))),
            ("random", None) => Ok(InitialSpec::Random),
            ("eigen", Some(j)) => Ok(InitialSpec::Eigen(j.parse().map_err(|_| bad())?)),
            ("file", Some(p)) if !p.is_empty() => Ok(InitialSpec::File(PathBuf::from(p))),
            _ => Err(bad()),
        }
    }
}

impl std::fmt::Display for InitialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            InitialSpec::Delta(None) => write!(f, "delta"),
            InitialSpec::Delta(Some(k)) => write!(f, "delta:{k}"),
            InitialSpec::Random => write!(f, "random"),
            InitialSpec::Eigen(j) => write!(f, "eigen:{j}"),
            InitialSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: usize,
    pub dt: f64,
    pub steps: usize,
    pub scheme: SchemeKind,
    pub equation: Equation,
    pub alpha: Complex64,
    pub beta: Complex64,
    pub initial: InitialSpec,
    pub seed: u64,
    pub jobs: usize,
    /// Prefix the CSV with a `#` block listing the configuration.
    pub echo: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: 128,
            dt: 0.5,
            steps: 100,
            scheme: SchemeKind::S2,
            equation: Equation::Diffusion,
            alpha: Complex64::new(-1.0, 0.0),
            beta: Complex64::new(-1.0, 0.0),
            initial: InitialSpec::Random,
            seed: 0,
            jobs: 1,
            echo: false,
        }
    }
}

impl RunConfig {
    pub fn extension(&self) -> ExtensionSpec {
        ExtensionSpec::third_kind(self.alpha, self.beta)
    }

    pub fn problem(&self) -> Result<EvolutionProblem> {
        EvolutionProblem::new(
            &Stencil::laplacian(),
            &self.extension(),
            DomainSpec::new(self.n)?,
            self.equation.scale(),
        )
    }

    pub fn initial_vector(&self) -> Result<GridFunction> {
        let d = DomainSpec::new(self.n)?;
        match &self.initial {
            InitialSpec::Delta(k) => {
                let k = k.unwrap_or(self.n / 2);
                if k >= self.n {
                    return Err(Error::InvalidArgument(format!(
                        "delta index {k} out of range"
                    )));
                }
                Ok(GridFunction::basis(d, k))
            }
            InitialSpec::Random => Ok(random_unit(d, self.seed)),
            InitialSpec::Eigen(j) => {
                if *j >= self.n {
                    return Err(Error::InvalidArgument(format!(
                        "mode index {j} out of range"
                    )));
                }
                dirichlet_mode(*j, self.n)
            }
            InitialSpec::File(path) => read_vector(d, path),
        }
    }

    fn echo_lines(&self) -> Vec<(&'static str, String)> {
        vec![
            ("n", self.n.to_string()),
            ("dt", fmt_float(self.dt)),
            ("steps", self.steps.to_string()),
            ("scheme", self.scheme.to_string()),
            ("equation", self.equation.name().to_string()),
            ("alpha", fmt_complex(self.alpha)),
            ("beta", fmt_complex(self.beta)),
            ("initial", self.initial.to_string()),
            ("seed", self.seed.to_string()),
        ]
    }
}

/// Standard complex Gaussian components from a seeded ChaCha8 stream,
/// normalized: a uniform point on the unit sphere of `C^N`.
pub fn random_unit(domain: DomainSpec, seed: u64) -> GridFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let values = (0..domain.n())
        .map(|_| {
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex64::new(re, im)
        })
        .collect();
    GridFunction::new(domain, values)
        .expect("length matches domain")
        .normalized()
}

/// One value per line (`re`, `re+imi`, `imi`); blank lines and `#` comments
/// are skipped.
fn read_vector(domain: DomainSpec, path: &PathBuf) -> Result<GridFunction> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let values = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(parse_complex)
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(domain, values)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (with optional exponents).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::InvalidArgument(format!("bad complex number '{s}'"));
    let s = s.trim();
    let num = |p: &str| -> Result<f64> {
        match p {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => p.parse::<f64>().map_err(|_| bad()),
        }
    };
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(Complex64::new(re, num(&body[k..])?))
        }
        None => Ok(Complex64::new(0.0, num(body)?)),
    }
}

/// Shortest round-trip decimal; exponent form outside `[1e−5, 1e16)`.
pub fn fmt_float(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let a = x.abs();
    if a == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}i", fmt_float(z.re), sign, fmt_float(z.im.abs()))
}

fn echo_block(out: &mut String, pairs: &[(&str, String)]) {
    for (k, v) in pairs {
        let _ = writeln!(out, "# {k}={v}");
    }
}

fn join(items: impl IntoIterator<Item = String>) -> String {
    items.into_iter().collect::<Vec<_>>().join(";")
}

fn in_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "time step must be finite and non-negative, got {dt}"
        )))
    }
}

fn rel_error(f: &GridFunction, exact: &GridFunction) -> f64 {
    f.distance(exact) / exact.norm()
}

/// `step,time,rel_error,norm` for one scheme; `rel_error` is blank when the
/// dense oracle does not fit.
pub fn cmd_evolve(cfg: &RunConfig) -> Result<String> {
    check_dt(cfg.dt)?;
    let p = cfg.problem()?;
    let g = cfg.initial_vector()?;
    let stepper = Stepper::new(&p, cfg.scheme, cfg.dt)?;
    let oracle = if cfg.n <= DEFAULT_DENSE_CAP {
        Some(Stepper::new(&p, SchemeKind::Exact, cfg.dt)?)
    } else {
        None
    };

    let mut out = String::new();
    if cfg.echo {
        echo_block(&mut out, &cfg.echo_lines());
    }
    out.push_str("step,time,rel_error,norm\n");
    let mut f = g.clone();
    let mut exact = g;
    for k in 0..=cfg.steps {
        if k > 0 {
            f = stepper.advance(&f)?;
            if let Some(o) = &oracle {
                exact = o.advance(&exact)?;
            }
        }
        let err = match &oracle {
            Some(_) => fmt_float(rel_error(&f, &exact)),
            None => String::new(),
        };
        let _ = writeln!(
            out,
            "{k},{},{err},{}",
            fmt_float(k as f64 * cfg.dt),
            fmt_float(f.norm())
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Row {
    pub step: usize,
    pub time: f64,
    pub s2: f64,
    pub cn: f64,
}

/// S2 and Crank–Nicolson relative errors against the exact solution, side
/// by side, at every step.
pub fn fig2_series(cfg: &RunConfig) -> Result<Vec<Fig2Row>> {
    check_dt(cfg.dt)?;
    if cfg.n > DEFAULT_DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            n: cfg.n,
            cap: DEFAULT_DENSE_CAP,
        });
    }
    let p = cfg.problem()?;
    let g = cfg.initial_vector()?;
    let s2 = Stepper::new(&p, SchemeKind::S2, cfg.dt)?;
    let cn = Stepper::new(&p, SchemeKind::CrankNicolson, cfg.dt)?;
    let ex = Stepper::new(&p, SchemeKind::Exact, cfg.dt)?;
    let (mut a, mut b, mut e) = (g.clone(), g.clone(), g);
    let mut rows = Vec::with_capacity(cfg.steps + 1);
    for k in 0..=cfg.steps {
        if k > 0 {
            a = s2.advance(&a)?;
            b = cn.advance(&b)?;
            e = ex.advance(&e)?;
        }
        rows.push(Fig2Row {
            step: k,
            time: k as f64 * cfg.dt,
            s2: rel_error(&a, &e),
            cn: rel_error(&b, &e),
        });
    }
    Ok(rows)
}

pub fn cmd_fig2(cfg: &RunConfig) -> Result<String> {
    let rows = fig2_series(cfg)?;
    let mut out = String::new();
    if cfg.echo {
        let mut pairs = cfg.echo_lines();
        pairs.retain(|(k, _)| *k != "scheme");
        pairs.push(("schemes", "s2;cn".into()));
        echo_block(&mut out, &pairs);
    }
    out.push_str("step,time,s2_rel_error,cn_rel_error\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.step,
            fmt_float(r.time),
            fmt_float(r.s2),
            fmt_float(r.cn)
        );
    }
    Ok(out)
}

/// `j,xi,mu,oe_error,cn_error` for the even eigenvalues of the Dirichlet
/// diffusion S2 operator. Small `n` is cross-checked against a dense
/// eigensolve before anything is written.
pub fn cmd_fig1(t: f64, n: usize, jobs: usize, echo: bool) -> Result<String> {
    let report = in_pool(jobs, || spectrum_report(t, n))??;
    let mut out = String::new();
    if echo {
        echo_block(&mut out, &[("n", n.to_string()), ("t", fmt_float(t))]);
    }
    out.push_str("j,xi,mu,oe_error,cn_error\n");
    for r in &report.even {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.j,
            fmt_float(r.xi),
            fmt_float(r.mu),
            fmt_float(r.oe_error),
            fmt_float(r.cn_error)
        );
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceConfig {
    pub base: RunConfig,
    pub schemes: Vec<SchemeKind>,
    pub horizon: f64,
    pub dts: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub scheme: SchemeKind,
    pub dt: f64,
    pub global_error: f64,
    pub observed_order: Option<f64>,
}

fn whole_steps(horizon: f64, dt: f64) -> Result<usize> {
    let r = horizon / dt;
    let k = r.round();
    if !(dt > 0.0 && k >= 1.0 && (r - k).abs() <= 1e-9 * k) {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} is not a whole number of steps of {dt}"
        )));
    }
    Ok(k as usize)
}

/// Global error `‖f_scheme(T) − f_exact(T)‖` over a strictly decreasing step
/// ladder, with orders from successive error ratios.
pub fn convergence_table(cfg: &ConvergenceConfig) -> Result<Vec<ConvergenceRow>> {
    if cfg.dts.is_empty() || cfg.dts.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidArgument(
            "step ladder must be non-empty and strictly decreasing".into(),
        ));
    }
    let counts = cfg
        .dts
        .iter()
        .map(|&dt| whole_steps(cfg.horizon, dt))
        .collect::<Result<Vec<_>>>()?;
    let p = cfg.base.problem()?;
    let g = cfg.base.initial_vector()?;
    let exact = Stepper::new(&p, SchemeKind::Exact, cfg.horizon)?.advance(&g)?;

    let points: Vec<(SchemeKind, usize)> = cfg
        .schemes
        .iter()
        .flat_map(|&s| (0..cfg.dts.len()).map(move |i| (s, i)))
        .collect();
    let errors = in_pool(cfg.base.jobs, || {
        points
            .par_iter()
            .map(|&(s, i)| {
                let stepper = Stepper::new(&p, s, cfg.dts[i])?;
                let mut f = g.clone();
                for _ in 0..counts[i] {
                    f = stepper.advance(&f)?;
                }
                Ok(f.distance(&exact))
            })
            .collect::<Result<Vec<f64>>>()
    })??;

    let mut rows = Vec::with_capacity(points.len());
    for (idx, &(scheme, i)) in points.iter().enumerate() {
        let observed_order = (i > 0)
            .then(|| (errors[idx - 1] / errors[idx]).ln() / (cfg.dts[i - 1] / cfg.dts[i]).ln());
        rows.push(ConvergenceRow {
            scheme,
            dt: cfg.dts[i],
            global_error: errors[idx],
            observed_order,
        });
    }
    Ok(rows)
}

pub fn cmd_convergence(cfg: &ConvergenceConfig) -> Result<String> {
    let rows = convergence_table(cfg)?;
    let mut out = String::new();
    if cfg.base.echo {
        let mut pairs = cfg.base.echo_lines();
        pairs.retain(|(k, _)| !matches!(*k, "scheme" | "dt" | "steps"));
        pairs.push(("schemes", join(cfg.schemes.iter().map(|s| s.to_string()))));
        pairs.push(("horizon", fmt_float(cfg.horizon)));
        pairs.push(("dts", join(cfg.dts.iter().map(|&d| fmt_float(d)))));
        echo_block(&mut out, &pairs);
    }
    out.push_str("scheme,dt,global_error,observed_order\n");
    for r in rows {
        let order = r.observed_order.map(fmt_float).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{order}",
            r.scheme,
            fmt_float(r.dt),
            fmt_float(r.global_error)
        );
    }
    Ok(out)
}

/// A named boundary condition: `dirichlet`, `neumann`, `periodic` or
/// `third:ALPHA:BETA`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryChoice {
    pub name: String,
    pub extension: ExtensionSpec,
}

impl FromStr for BoundaryChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.to_ascii_lowercase();
        let extension = match lower.as_str() {
            "dirichlet" => ExtensionSpec::dirichlet(),
            "neumann" => ExtensionSpec::neumann(),
            "periodic" => ExtensionSpec::Periodic,
            other => {
                let params = other.strip_prefix("third:").ok_or_else(|| {
                    Error::InvalidArgument(format!("unknown boundary condition '{s}'"))
                })?;
                let (a, b) = params.split_once(':').ok_or_else(|| {
                    Error::InvalidArgument(format!("expected third:ALPHA:BETA, got '{s}'"))
                })?;
                ExtensionSpec::third_kind(parse_complex(a)?, parse_complex(b)?)
            }
        };
        Ok(Self {
            name: lower,
            extension,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityConfig {
    pub n: usize,
    pub equation: Equation,
    pub bcs: Vec<BoundaryChoice>,
    pub schemes: Vec<SchemeKind>,
    pub times: Vec<f64>,
    pub jobs: usize,
    pub echo: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityRow {
    pub bc: String,
    pub scheme: SchemeKind,
    pub t: f64,
    pub op_norm: f64,
}

/// Largest singular value of each dense step matrix.
pub fn stability_table(cfg: &StabilityConfig) -> Result<Vec<StabilityRow>> {
    if cfg.n > DEFAULT_DENSE_CAP {
        return Err(Error::DenseCapExceeded {
            n: cfg.n,
            cap: DEFAULT_DENSE_CAP,
        });
    }
    for &t in &cfg.times {
        check_dt(t)?;
    }
    let d = DomainSpec::new(cfg.n)?;
    let problems = cfg
        .bcs
        .iter()
        .map(|bc| {
            EvolutionProblem::new(
                &Stencil::laplacian(),
                &bc.extension,
                d,
                cfg.equation.scale(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    let mut points = Vec::new();
    for b in 0..cfg.bcs.len() {
        for &s in &cfg.schemes {
            for &t in &cfg.times {
                points.push((b, s, t));
            }
        }
    }
    in_pool(cfg.jobs, || {
        points
            .par_iter()
            .map(|&(b, s, t)| {
                Ok(StabilityRow {
                    bc: cfg.bcs[b].name.clone(),
                    scheme: s,
                    t,
                    op_norm: operator_norm(&step_matrix(&problems[b], s, t)?),
                })
            })
            .collect()
    })?
}

pub fn cmd_stability(cfg: &StabilityConfig) -> Result<String> {
    let rows = stability_table(cfg)?;
    let mut out = String::new();
    if cfg.echo {
        echo_block(
            &mut out,
            &[
                ("n", cfg.n.to_string()),
                ("equation", cfg.equation.name().to_string()),
                ("bcs", join(cfg.bcs.iter().map(|b| b.name.clone()))),
                ("schemes", join(cfg.schemes.iter().map(|s| s.to_string()))),
                ("times", join(cfg.times.iter().map(|&t| fmt_float(t)))),
            ],
        );
    }
    out.push_str("bc,scheme,t,op_norm\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            r.bc,
            r.scheme,
            fmt_float(r.t),
            fmt_float(r.op_norm)
        );
    }
    Ok(out)
}

/// The full Dirichlet S2 spectrum as rates `ln(λ_k)/(c·t)`: even `k = 2j`
/// from the dispersion roots, odd `k` from `ν_{j+1}`. `mode_exact` reports
/// whether the odd eigenfunction is reproduced exactly by a stepped S2.
pub fn cmd_spectrum(
    t: f64,
    n: usize,
    equation: Equation,
    jobs: usize,
    echo: bool,
) -> Result<String> {
    let (even, odd_exact) = match equation {
        Equation::Diffusion => {
            let r = in_pool(jobs, || spectrum_report(t, n))??;
            (
                r.even.iter().map(|row| row.xi).collect::<Vec<_>>(),
                r.odd_exact,
            )
        }
        Equation::Schrodinger => {
            let roots = in_pool(jobs, || dispersion_solve_schrodinger(t, n))??;
            let p = EvolutionProblem::schrodinger(n, &ExtensionSpec::dirichlet())?;
            let stepper = Stepper::new(&p, SchemeKind::S2, t)?;
            let exact = (0..n / 2)
                .map(|j| {
                    let k = 2 * j + 1;
                    let phi = dirichlet_mode(k, n)?;
                    let want = phi.scaled((Complex64::new(0.0, t * dirichlet_mu(k, n))).exp());
                    Ok(stepper.advance(&phi)?.distance(&want) <= 1e-11)
                })
                .collect::<Result<Vec<_>>>()?;
            (roots, exact)
        }
    };
    let nu = periodic_eigenvalues(n)?;
    let mut out = String::new();
    if echo {
        echo_block(
            &mut out,
            &[
                ("n", n.to_string()),
                ("t", fmt_float(t)),
                ("equation", equation.name().to_string()),
            ],
        );
    }
    out.push_str("k,parity,rate,mu,rate_error,mode_exact\n");
    for j in 0..n / 2 {
        for (k, rate, flag) in [
            (2 * j, even[j], String::new()),
            (2 * j + 1, nu[j + 1], u8::from(odd_exact[j]).to_string()),
        ] {
            let mu = dirichlet_mu(k, n);
            let parity = if k % 2 == 0 { "even" } else { "odd" };
            let _ = writeln!(
                out,
                "{k},{parity},{},{},{},{flag}",
                fmt_float(rate),
                fmt_float(mu),
                fmt_float((rate - mu).abs())
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(scheme: SchemeKind) -> RunConfig {
        RunConfig {
            n: 16,
            dt: 0.1,
            steps: 5,
            scheme,
            seed: 7,
            ..RunConfig::default()
        }
    }

    #[test]
    fn complex_parsing() {
        let c = |re, im| Complex64::new(re, im);
        assert_eq!(parse_complex("-1").unwrap(), c(-1.0, 0.0));
        assert_eq!(parse_complex("0.3-0.7i").unwrap(), c(0.3, -0.7));
        assert_eq!(parse_complex("1e-3+2E+1i").unwrap(), c(1e-3, 20.0));
        assert_eq!(parse_complex("-2.5i").unwrap(), c(0.0, -2.5));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("1-i").unwrap(), c(1.0, -1.0));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("1+2j").is_err());
        for z in [c(0.3, -0.7), c(-1.0, 0.0), c(1e-9, 3e20)] {
            assert_eq!(parse_complex(&fmt_complex(z)).unwrap(), z);
        }
    }

    #[test]
    fn float_format_round_trips() {
        for x in [
            0.0,
            1.0,
            -0.5,
            0.1,
            1e-12,
            123456.789,
            6.02e23,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_float(1e-12), "1e-12");
        assert_eq!(fmt_float(0.25), "0.25");
    }

    #[test]
    fn initial_specs() {
        assert_eq!(
            "delta".parse::<InitialSpec>().unwrap(),
            InitialSpec::Delta(None)
        );
        assert_eq!(
            "eigen:3".parse::<InitialSpec>().unwrap(),
            InitialSpec::Eigen(3)
        );
        assert!("eigen".parse::<InitialSpec>().is_err());
        assert!("gauss".parse::<InitialSpec>().is_err());
        let cfg = small(SchemeKind::S2);
        let g = cfg.initial_vector().unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-14);
        assert_eq!(g, cfg.initial_vector().unwrap());
        let other = RunConfig {
            seed: 8,
            ..cfg.clone()
        }
        .initial_vector()
        .unwrap();
        assert_ne!(g, other);
    }

    #[test]
    fn file_initial_vector() {
        let dir = std::env::temp_dir().join(format!("oexp-init-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("v.txt");
        std::fs::write(&path, "# comment\n1\n\n0.5-0.5i\n2i\n0\n").unwrap();
        let cfg = RunConfig {
            n: 4,
            initial: InitialSpec::File(path.clone()),
            ..RunConfig::default()
        };
        let g = cfg.initial_vector().unwrap();
        assert_eq!(g[1], Complex64::new(0.5, -0.5));
        let cfg = RunConfig { n: 5, ..cfg };
        assert!(cfg.initial_vector().is_err());
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn evolve_csv_shape() {
        let out = cmd_evolve(&RunConfig {
            steps: 0,
            ..small(SchemeKind::S1)
        })
        .unwrap();
        assert_eq!(out, "step,time,rel_error,norm\n0,0,0,1\n");
        let out = cmd_evolve(&small(SchemeKind::Exact)).unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 7);
        for l in &lines[1..] {
            let err: f64 = l.split(',').nth(2).unwrap().parse().unwrap();
            assert!(err <= 1e-10);
        }
        let echoed = cmd_evolve(&RunConfig {
            echo: true,
            ..small(SchemeKind::S2)
        })
        .unwrap();
        assert!(echoed.starts_with("# n=16\n"));
        assert!(echoed.contains("# alpha=-1+0i\n"));
    }

    #[test]
    fn convergence_rejects_bad_ladders() {
        let base = ConvergenceConfig {
            base: small(SchemeKind::S2),
            schemes: vec![SchemeKind::S2],
            horizon: 1.0,
            dts: vec![0.1, 0.2],
        };
        assert!(convergence_table(&base).is_err());
        let uneven = ConvergenceConfig {
            dts: vec![0.3],
            ..base.clone()
        };
        assert!(convergence_table(&uneven).is_err());
        let ok = ConvergenceConfig {
            dts: vec![0.25, 0.125],
            ..base
        };
        let rows = convergence_table(&ok).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].observed_order.is_none() && rows[1].observed_order.is_some());
    }

    #[test]
    fn boundary_choice_parsing() {
        assert_eq!(
            "Neumann".parse::<BoundaryChoice>().unwrap().extension,
            ExtensionSpec::neumann()
        );
        let b: BoundaryChoice = "third:0.3:-0.7".parse().unwrap();
        assert_eq!(
            b.extension,
            ExtensionSpec::third_kind(Complex64::new(0.3, 0.0), Complex64::new(-0.7, 0.0))
        );
        assert!("robin".parse::<BoundaryChoice>().is_err());
    }

    #[test]
    fn spectrum_rows() {
        let out = cmd_spectrum(0.5, 8, Equation::Diffusion, 1, false).unwrap();
        assert_eq!(out.lines().count(), 9);
        assert!(out
            .lines()
            .skip(1)
            .filter(|l| l.contains(",odd,"))
            .all(|l| l.ends_with(",1")));
        let out = cmd_spectrum(0.5, 8, Equation::Schrodinger, 1, false).unwrap();
        assert_eq!(out.lines().count(), 9);
    }
}
