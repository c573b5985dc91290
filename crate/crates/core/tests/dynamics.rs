mod common;

use std::f64::consts::FRAC_1_SQRT_2;

use boseq::dynamics::{
    decay_rate, default_dt, evolve_lindblad, evolve_lindblad_exact, evolve_unitary, LindbladSpec,
};
use boseq::spin::{
    coherent_qubit_state, operator_product, spin_operator, Axis, DensityMatrix, RegisterState,
};
use boseq::{Error, C64};
use common::*;
use proptest::prelude::*;

fn register(seed: &[(f64, f64)], n: usize) -> RegisterState {
    let sites: Vec<_> = seed
        .iter()
        .map(|&(c, p)| {
            let half = c.acos() / 2.0;
            coherent_qubit_state(C64::new(half.cos(), 0.0), C64::from_polar(half.sin(), p), n)
                .unwrap()
        })
        .collect();
    RegisterState::product(&sites).unwrap()
}

fn site_seed() -> impl Strategy<Value = (f64, f64)> {
    (-1.0f64..1.0, 0.0..std::f64::consts::TAU)
}

#[test]
fn sx_rotation_matches_closed_form() {
    // e^{-i S^x t} takes |k = N> to |cos t, -i sin t>>
    let n = 4;
    let up = RegisterState::fock(n, &[n]).unwrap();
    let sx = spin_operator(Axis::X, n).unwrap();
    for t in [0.1, 0.7, 2.0] {
        let out = evolve_unitary(&up, &sx, t).unwrap();
        let want = coherent(C64::new(f64::cos(t), 0.0), C64::new(0.0, -f64::sin(t)), n);
        assert!((fidelity(out.amps(), &want) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn synthetic_decay_is_recovered() {
    let times: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
    let values: Vec<f64> = times.iter().map(|t| -3.0 * (-0.37 * t).exp()).collect();
    assert!((decay_rate(&times, &values).unwrap() - 0.37).abs() < 1e-12);
    assert!(matches!(
        decay_rate(&times[..5], &values[..5]),
        Err(Error::Fit(_))
    ));
}

#[test]
fn step_size_guard() {
    let spec = LindbladSpec::dephasing(1.0, 1, 1).unwrap();
    let rho = DensityMatrix::from_pure(&RegisterState::fock(1, &[0]).unwrap());
    assert!(matches!(
        evolve_lindblad(&rho, &spec, 1.0, 0.5),
        Err(Error::StepSize(_))
    ));
    assert!(LindbladSpec::dephasing(-1.0, 1, 1).is_err());
}

#[test]
fn dephasing_leaves_populations_alone() {
    let n = 3;
    let psi = register(&[(0.3, 1.1)], n);
    let spec = LindbladSpec::dephasing(0.2, 1, n).unwrap();
    let rho = DensityMatrix::from_pure(&psi);
    let out = evolve_lindblad(&rho, &spec, 2.0, default_dt(&spec, 2.0)).unwrap();
    for k in 0..=n {
        let d = (out.entries()[(k, k)] - rho.entries()[(k, k)]).norm();
        assert!(d < 1e-12);
    }
    // coherences decay as exp(-4 gamma (k - k')^2 t)
    let want = rho.entries()[(0, 2)] * (-4.0 * 0.2 * 4.0 * 2.0f64).exp();
    assert!((out.entries()[(0, 2)] - want).norm() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn unitary_evolution_preserves_norm_and_reverses(
        s1 in site_seed(), s2 in site_seed(), n in 1usize..5, t in -3.0f64..3.0
    ) {
        let psi = register(&[s1, s2], n);
        let h = operator_product(&[(Axis::X, 1), (Axis::Z, 2)], 2, n).unwrap();
        let out = evolve_unitary(&psi, &h, t).unwrap();
        prop_assert!((out.norm() - 1.0).abs() < 1e-12);
        let back = evolve_unitary(&out, &h, -t).unwrap();
        prop_assert!((back.fidelity(&psi) - 1.0).abs() < 1e-10);
    }
}

proptest! {
    // each case builds and exponentiates a dense superoperator
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn lindblad_keeps_a_density_matrix(
        s1 in site_seed(), s2 in site_seed(), n in 1usize..3, gamma in 0.0f64..0.3
    ) {
        let psi = register(&[s1, s2], n);
        let h = operator_product(&[(Axis::X, 1), (Axis::X, 2)], 2, n).unwrap();
        let spec = LindbladSpec::new(
            gamma,
            LindbladSpec::dephasing(gamma, 2, n).unwrap().couplings,
            Some(h),
        ).unwrap();
        let rho = DensityMatrix::from_pure(&psi);
        let t = 1.5;
        let stepped = evolve_lindblad(&rho, &spec, t, default_dt(&spec, t)).unwrap();
        prop_assert!((stepped.trace() - C64::new(1.0, 0.0)).norm() < 1e-10);
        prop_assert!(stepped.hermiticity_defect() < 1e-10);
        prop_assert!(stepped.eigenvalues().iter().all(|&l| l > -1e-9));
        let exact = evolve_lindblad_exact(&rho, &spec, t).unwrap();
        prop_assert!((stepped.entries() - exact.entries()).norm() < 1e-8);
    }
}

#[test]
fn plus_state_sx_decays_at_four_gamma() {
    let n = 2;
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let psi = RegisterState::product(&[coherent_qubit_state(h, h, n).unwrap()]).unwrap();
    let spec = LindbladSpec::dephasing(0.1, 1, n).unwrap();
    let rho = DensityMatrix::from_pure(&psi);
    let sx = spin_operator(Axis::X, n).unwrap();
    let out = evolve_lindblad_exact(&rho, &spec, 3.0).unwrap();
    let v = out.expectation(&sx).unwrap().re / n as f64;
    assert!((v - (-0.4f64 * 3.0).exp()).abs() < 1e-12);
}
