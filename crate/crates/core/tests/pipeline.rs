use ptphase::bipartite::{bipartite_covariance, build_moments_matrix, separability_report, symplectic_eigenvalues};
use ptphase::infoprofile::{kurtosis, moments, negativity_volume, quadrature_moments};
use ptphase::wigner::{sample_field, wigner_component_oracle, wigner_total, wigner_total_oracle};
use ptphase::{Grid, PTParams, TwoLevelState};

#[test]
fn field_moments_agree_with_closed_forms() {
    let params = PTParams::new(3).unwrap();
    let state = TwoLevelState::Pure { theta: 0.6, phi: 0.3 };
    let grid = Grid::symmetric(7.0, 281, 9.0, 301).unwrap();
    let field = sample_field(&params, &state, 0.2, &grid).unwrap();
    assert!((field.normalization() - 1.0).abs() < 1e-6);
    assert!((field.purity() - 1.0).abs() < 1e-5);

    let exact = moments(&params, &state, 0.2, 4).unwrap();
    let quad = quadrature_moments(&params, &state, 0.2).unwrap();
    assert!((exact.var_s() - quad.var_s()).abs() < 1e-8);
    assert!((exact.var_q() - quad.var_q()).abs() < 1e-8);
    assert!(negativity_volume(&field) > 0.0);
}

#[test]
fn closed_form_total_matches_oracle() {
    let params = PTParams::new(2).unwrap();
    for state in [TwoLevelState::Pure { theta: 0.3, phi: 1.1 }, TwoLevelState::Mixed { theta: 0.9 }] {
        for &(s, q) in &[(0.0, 0.0), (0.4, -1.3), (-2.1, 0.7)] {
            let a = wigner_total(&params, &state, 0.5, s, q).unwrap();
            let b = wigner_total_oracle(&params, &state, 0.5, s, q).unwrap();
            assert!((a - b).abs() < 1e-8, "{state:?} ({s},{q}): {a} vs {b}");
        }
    }
    let w11 = wigner_component_oracle(&params, 1, 1, 0.0, 0.0).unwrap();
    assert!((w11.re + std::f64::consts::FRAC_1_PI).abs() < 1e-9);
}

#[test]
fn excited_state_kurtosis_approaches_harmonic_limit() {
    let mut last = f64::INFINITY;
    for l in [5, 12, 20] {
        let params = PTParams::new(l).unwrap();
        let k = kurtosis(&moments(&params, &TwoLevelState::excited(), 0.0, 4).unwrap()).unwrap();
        assert!(k.ratio_s < last && k.ratio_s > 1.5);
        last = k.ratio_s;
    }
}

#[test]
fn separability_stack_is_consistent() {
    let params = PTParams::new(2).unwrap();
    let cov = bipartite_covariance(&params).unwrap();
    let sp = symplectic_eigenvalues(&cov).unwrap();
    assert!(sp.d_minus >= 0.5 && sp.d_tilde_minus >= 0.5);

    let m = build_moments_matrix(&params, false).unwrap();
    let pt = build_moments_matrix(&params, true).unwrap();
    assert!(m.is_hermitian(1e-12) && pt.is_hermitian(1e-12));
    assert!((m.partial_transpose().det() - pt.det()).abs() < 1e-12);

    let report = separability_report(&params).unwrap();
    assert!(report.uncertainty_ok);
    assert!((report.det_m_ppt - pt.det()).abs() < 1e-12);
}
