use approx::assert_abs_diff_eq;
use qdet_core::analytic::{collective_variance, mean_collective_spin, phase_expectation};
use qdet_core::oracle::{
    collective_variance_independent, evolved_sigma_z, oracle_phase_expectation,
    oracle_phase_expectation_for_state, reduced_signal_state,
};
use qdet_core::DetectorParams;

const THETAS: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 3.0];
const ETAS: [f64; 3] = [0.5, 0.9, 1.0];
const GUIDES: [usize; 3] = [1, 2, 4];
const F_BARS: [f64; 3] = [0.0, 0.2, 1.0];

#[test]
fn verify_grid_agrees_with_closed_form() {
    let mut worst = 0.0f64;
    for n in 0..=1 {
        for &theta in &THETAS {
            for &eta in &ETAS {
                for &guides in &GUIDES {
                    for &f_bar in &F_BARS {
                        let o = oracle_phase_expectation(n, theta, eta, guides, f_bar, None).unwrap();
                        assert!(o.cutoff <= 40);
                        let a = phase_expectation(n, theta, eta, guides, (1.0 - eta) * f_bar);
                        worst = worst.max((o.value - a.value).norm());
                    }
                }
            }
        }
    }
    assert!(worst < 1e-8, "max error {worst:e}");
}

#[test]
fn spec_points() {
    let o = oracle_phase_expectation(0, 0.7, 0.8, 2, 1.5, Some(60)).unwrap();
    let a = phase_expectation(0, 0.7, 0.8, 2, 0.3);
    assert!((o.value - a.value).norm() < 1e-10);

    let o = oracle_phase_expectation(1, 0.7, 0.8, 2, 0.5, Some(40)).unwrap();
    let a = phase_expectation(1, 0.7, 0.8, 2, 0.1);
    assert!((o.value - a.value).norm() < 1e-10);

    let o = oracle_phase_expectation(1, 1.0, 0.7, 3, 0.25 / 0.3, None).unwrap();
    let a = phase_expectation(1, 1.0, 0.7, 3, 0.25);
    assert!((o.value - a.value).norm() < 1e-10);
}

#[test]
fn mixed_signal_decomposes() {
    let (theta, eta, f_bar, d) = (0.9, 0.6, 0.4, 45);
    for guides in [2, 3, 5] {
        let mixed = reduced_signal_state(1, guides, d).unwrap();
        let lhs = oracle_phase_expectation_for_state(&mixed, theta, eta, f_bar, d).unwrap();
        let vac = oracle_phase_expectation(0, theta, eta, 1, f_bar, Some(d)).unwrap().value;
        let one = oracle_phase_expectation(1, theta, eta, 1, f_bar, Some(d)).unwrap().value;
        let w = 1.0 / guides as f64;
        assert!((lhs - ((1.0 - w) * vac + w * one)).norm() < 1e-12);
    }
}

#[test]
fn collective_spin_matches_oracle() {
    let params = DetectorParams::new(2, 5, 0.5, 0.1, 0.9).unwrap();
    let (f_t, eta) = (0.2, 0.9);
    let f_bar = f_t / (1.0 - eta);
    let per_qubit = evolved_sigma_z(1, &params, f_bar, None).unwrap();
    let total = 0.5 * params.total_qubits() as f64 * per_qubit;
    assert_abs_diff_eq!(total, mean_collective_spin(&params, f_t, 1), epsilon = 1e-8);

    let single = DetectorParams::new(1, 1, 0.5, 0.1, 0.9).unwrap();
    let s = evolved_sigma_z(1, &single, 0.2, Some(40)).unwrap();
    let a = 0.1f64.sin() * phase_expectation(1, 0.5, 0.9, 1, 0.1 * 0.2).sin_part();
    assert_abs_diff_eq!(s, a, epsilon = 1e-10);
}

#[test]
fn variance_leading_order() {
    let delta = 0.05;
    let params = DetectorParams::new(1, 3, 0.5, delta, 0.9).unwrap();
    let exact = collective_variance_independent(1, &params, 0.2, None).unwrap();
    assert!((exact - collective_variance(&params)).abs() <= delta);
}
