mod common;

use std::f64::consts::PI;

use boseq::algolab::{
    build_grover_hamiltonian, cnot_correction, default_grover_t_max, default_oracle_time,
    grover_initial_state, run_cnot_analogue, run_deutsch, run_entangler, run_grover,
    run_grover_with_solution, Classification, OracleKind,
};
use boseq::Error;
use common::*;

#[test]
fn entangler_trajectory_tracks_oracle() {
    let times: Vec<f64> = (0..=40).map(|i| i as f64 * PI / 80.0).collect();
    for n in [1, 3, 8] {
        let run = run_entangler(n, &times).unwrap();
        let bits = run.trajectory.column("entropy_bits").unwrap();
        for (t, s) in times.iter().zip(bits) {
            let want = schmidt_entropy(&entangler_state(n, *t), n + 1, n + 1);
            assert!((s - want).abs() < 1e-9, "N={n} t={t}");
        }
        let want = entangler_state(n, PI / (4.0 * n as f64));
        assert!((fidelity(run.entangled.amps(), &want) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn cnot_branches_are_equally_likely() {
    for n in [1, 2, 6] {
        let r = run_cnot_analogue(n).unwrap();
        let p = 0.5f64.powi(n as i32);
        assert!((r.probability_empty - p).abs() < 1e-12);
        assert!((r.probability_full - p).abs() < 1e-12);
        assert!(cnot_correction(n).unwrap().hermiticity_defect() == 0.0);
    }
}

#[test]
fn deutsch_site_two_is_untouched() {
    for n in [1, 3] {
        for kind in OracleKind::ALL {
            let out = run_deutsch(kind, n, default_oracle_time(n)).unwrap();
            assert!((out.site2_fidelity - 1.0).abs() < 1e-12);
            assert!((out.overlap_plus + out.overlap_minus - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn deutsch_is_periodic_in_the_oracle_time() {
    // balanced oracles repeat every pi/N on site 1
    let n = 3;
    let t = default_oracle_time(n) + PI / n as f64;
    let out = run_deutsch(OracleKind::Bal01, n, t).unwrap();
    assert_eq!(out.classification, Classification::Balanced);
    assert!(matches!(
        run_deutsch(OracleKind::Bal01, n, -1.0),
        Err(Error::Argument(_))
    ));
}

#[test]
fn grover_frequency_estimates() {
    for m in [1, 2] {
        for n in [1, 3] {
            let r = run_grover(m, n, default_grover_t_max(m, n), 400).unwrap();
            let want = n as f64 / 2f64.powf(m as f64 / 2.0);
            assert!((r.omega_commutator - want).abs() < 1e-9 * want);
            assert!((r.omega_est - PI / (2.0 * r.t_peak)).abs() < 1e-12);
            let col = r.trajectory.column("sz_over_N_site1").unwrap();
            assert!(col[0].abs() < 1e-12, "starts on the equator");
        }
    }
}

#[test]
fn grover_solution_bits_mirror_sites() {
    let (m, n) = (2, 2);
    let t = default_grover_t_max(m, n);
    let ones = run_grover(m, n, t, 200).unwrap();
    let mixed = run_grover_with_solution(m, n, &[true, false], t, 200).unwrap();
    let a = ones.trajectory.column("sz_over_N_site2").unwrap();
    let b = mixed.trajectory.column("sz_over_N_site2").unwrap();
    for (x, y) in a.iter().zip(b) {
        assert!((x + y).abs() < 1e-10);
    }
    assert!((ones.t_peak - mixed.t_peak).abs() < 1e-9);
}

#[test]
fn grover_inputs_are_validated() {
    assert!(run_grover(2, 2, 1.0, 50).is_err());
    assert!(run_grover(2, 2, -1.0, 200).is_err());
    assert!(build_grover_hamiltonian(2, 2, &[true]).is_err());
    let h = build_grover_hamiltonian(2, 2, &[true, true]).unwrap();
    assert!(h.hermiticity_defect() < 1e-14);
    let x = grover_initial_state(2, 2).unwrap();
    assert_eq!(x.dim(), 9);
    // a window too short for a full rise has no interior peak
    assert!(matches!(run_grover(2, 1, 0.5, 200), Err(Error::NoPeak)));
}
