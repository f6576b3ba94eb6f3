use num_complex::Complex64;
use oexp::analysis::{
    dirichlet_mode, dirichlet_mu, dispersion_solve, dispersion_solve_schrodinger, spectrum_report,
};
use oexp::dense::{eigenvalues, multiset_distance};
use oexp::steppers::{step, step_matrix};
use oexp::{EvolutionProblem, ExtensionSpec, SchemeKind};

#[test]
fn s1_and_s2_spectra_coincide() {
    for n in [8, 16, 30] {
        let p = EvolutionProblem::diffusion(n, &ExtensionSpec::dirichlet()).unwrap();
        let a = eigenvalues(&step_matrix(&p, SchemeKind::S1, 0.5).unwrap()).unwrap();
        let b = eigenvalues(&step_matrix(&p, SchemeKind::S2, 0.5).unwrap()).unwrap();
        assert!(multiset_distance(&a, &b).unwrap() < 1e-10);
    }
}

#[test]
fn odd_harmonics_are_invariant_under_s2() {
    for equation_scale in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
        let n = 20;
        let p = EvolutionProblem::new(
            &oexp::Stencil::laplacian(),
            &ExtensionSpec::dirichlet(),
            oexp::DomainSpec::new(n).unwrap(),
            equation_scale,
        )
        .unwrap();
        for j in (1..n).step_by(2) {
            let phi = dirichlet_mode(j, n).unwrap();
            let want = phi.scaled((equation_scale * 0.7 * dirichlet_mu(j, n)).exp());
            assert!(step(&p, SchemeKind::S2, 0.7, &phi).unwrap().distance(&want) < 1e-11);
        }
    }
}

#[test]
fn report_gate_and_layout() {
    let r = spectrum_report(0.5, 64).unwrap();
    assert_eq!(r.even.len(), 32);
    assert!(r.gate_distance.unwrap() < 1e-8);
    assert!(r.odd_exact.iter().all(|&b| b));
    for (j, row) in r.even.iter().enumerate() {
        assert_eq!(row.j, j);
        assert_eq!(row.mu, dirichlet_mu(2 * j, 64));
    }
}

#[test]
fn unitary_roots_track_real_roots() {
    // Not a theorem: the two root sets are close for small steps and drift
    // apart as t grows. Record the gap at two steps.
    let n = 16;
    let gap = |t: f64| {
        let a = dispersion_solve(t, n).unwrap();
        let b = dispersion_solve_schrodinger(t, n).unwrap();
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    };
    let small = gap(0.05);
    let large = gap(0.5);
    assert!(small < large);
    assert!(small < 0.05, "{small}");
}

#[test]
fn dense_schrodinger_spectrum_has_exact_odd_part() {
    let n = 8;
    let t = 0.5;
    let p = EvolutionProblem::schrodinger(n, &ExtensionSpec::dirichlet()).unwrap();
    let dense = eigenvalues(&step_matrix(&p, SchemeKind::S2, t).unwrap()).unwrap();
    for j in (1..n).step_by(2) {
        let want = Complex64::new(0.0, t * dirichlet_mu(j, n)).exp();
        let nearest = dense
            .iter()
            .map(|z| (z - want).norm())
            .fold(f64::INFINITY, f64::min);
        assert!(nearest < 1e-10);
    }
    assert!(dispersion_solve_schrodinger(t, n).is_ok());
}
