use nalgebra::DVector;
use num_complex::Complex64;
use oexp::analysis::one_step_error;
use oexp::experiments::{fig2_series, random_unit, Equation, RunConfig};
use oexp::steppers::{step, step_matrix};
use oexp::{EvolutionProblem, ExtensionSpec, SchemeKind};

fn slope(dts: &[f64], errs: &[f64]) -> f64 {
    let xs: Vec<f64> = dts.iter().map(|d| d.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let cov: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    cov / var
}

#[test]
fn local_slopes_at_sixteen_points() {
    let p = EvolutionProblem::diffusion(16, &ExtensionSpec::dirichlet()).unwrap();
    let g = random_unit(p.domain(), 4);
    let dts: Vec<f64> = (4..=10).map(|k| 0.5f64.powi(k)).collect();
    let errs = |s| -> Vec<f64> {
        dts.iter()
            .map(|&t| one_step_error(&p, s, t, &g).unwrap())
            .collect()
    };
    assert!((slope(&dts, &errs(SchemeKind::S1)) - 2.0).abs() < 0.15);
    assert!((slope(&dts, &errs(SchemeKind::S2)) - 3.0).abs() < 0.15);
    let euler = errs(SchemeKind::Euler);
    assert!((slope(&dts, &euler) - 2.0).abs() < 0.15);

    // Euler's leading constant is ½‖A²g‖.
    let a = p.generator_matrix();
    let x = DVector::from_column_slice(g.values());
    let constant = 0.5 * (&a * (&a * x)).norm();
    let t = dts[dts.len() - 1];
    let ratio = euler[euler.len() - 1] / (constant * t * t);
    assert!((ratio - 1.0).abs() < 0.1, "{ratio}");
}

#[test]
fn schrodinger_step_matrices_are_unitary() {
    let p = EvolutionProblem::schrodinger(24, &ExtensionSpec::dirichlet()).unwrap();
    for s in [SchemeKind::S1, SchemeKind::S2, SchemeKind::CrankNicolson] {
        for t in [0.1, 0.5, 3.0] {
            let m = step_matrix(&p, s, t).unwrap();
            let defect = m.adjoint() * &m - nalgebra::DMatrix::<Complex64>::identity(24, 24);
            assert!(defect.iter().all(|v| v.norm() < 1e-11), "{s} t={t}");
        }
    }
}

#[test]
fn euler_contracts_only_below_a_threshold() {
    let p = EvolutionProblem::diffusion(16, &ExtensionSpec::dirichlet()).unwrap();
    let g = random_unit(p.domain(), 12);
    let grows = |t: f64| step(&p, SchemeKind::Euler, t, &g).unwrap().norm() > g.norm();
    let (mut lo, mut hi) = (0.0, 2.0);
    assert!(!grows(1e-3) && grows(hi));
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if grows(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // |1 + tμ| ≤ 1 on every mode needs t ≤ 2/|μ_min| ≈ 0.5; a generic g
    // tolerates a little more before its norm grows.
    assert!(lo > 0.5 && lo < 1.0, "{lo}");
    for s in [SchemeKind::S1, SchemeKind::S2, SchemeKind::CrankNicolson] {
        for t in [1e-3, lo, 10.0 * lo] {
            assert!(step(&p, s, t, &g).unwrap().norm() <= g.norm() * (1.0 + 1e-14));
        }
    }
}

#[test]
fn s2_stays_below_cn_on_long_schrodinger_runs() {
    let cfg = RunConfig {
        n: 128,
        dt: 0.5,
        steps: 4000,
        equation: Equation::Schrodinger,
        seed: 1,
        ..RunConfig::default()
    };
    let rows = fig2_series(&cfg).unwrap();
    assert_eq!(rows.len(), 4001);
    assert!(rows.iter().all(|r| r.s2 <= r.cn));
    assert_eq!(rows[0].s2, 0.0);
}
