//! Gate constructions and small algorithms on bosonic qubit registers.

mod deutsch;
mod grover;

pub use deutsch::{
    default_oracle_time, run_deutsch, Classification, DeutschOutcome, OracleKind,
    AMBIGUITY_THRESHOLD,
};
pub use grover::{
    build_grover_hamiltonian, default_grover_t_max, grover_initial_state, grover_second_derivative,
    run_grover, run_grover_with_solution, GroverResult,
};

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::dynamics::{evolve_unitary, Trajectory};
use crate::entanglement::{entangler_setup, entropy_trajectory};
use crate::spin::{
    coherent_qubit_state, embed, operator_sum, spin_operator, Axis, Operator, QubitAmplitudes,
    RegisterState,
};
use crate::{Result, C64};

/// `pi / 4N`, the entangling time of `S^z_1 S^z_2`.
pub fn entangling_time(n_bosons: usize) -> f64 {
    PI / (4.0 * n_bosons as f64)
}

#[derive(Debug, Clone)]
pub struct EntanglerRun {
    /// `entropy_bits` and `entropy_norm` of site 1.
    pub trajectory: Trajectory,
    /// The register at `t = pi / 4N`.
    pub entangled: RegisterState,
}

/// Evolves `|1/sqrt2, 1/sqrt2>>^{⊗2}` under `S^z_1 S^z_2`.
pub fn run_entangler(n_bosons: usize, t_grid: &[f64]) -> Result<EntanglerRun> {
    let trajectory = entropy_trajectory(n_bosons, t_grid)?;
    let (psi, zz) = entangler_setup(n_bosons)?;
    let entangled = evolve_unitary(&psi, &zz, entangling_time(n_bosons))?;
    Ok(EntanglerRun {
        trajectory,
        entangled,
    })
}

/// Site-1 states left after projecting site 2 of the CNOT-analogue output.
#[derive(Debug, Clone)]
pub struct CnotReport {
    pub output: RegisterState,
    /// Site 1 given `k_2 = 0`, and its fidelity with `|1/sqrt2, 1/sqrt2>>`.
    pub site1_given_empty: QubitAmplitudes,
    pub fidelity_plus: f64,
    pub probability_empty: f64,
    /// Site 1 given `k_2 = N`, and its fidelity with `|-1/sqrt2, 1/sqrt2>>`.
    pub site1_given_full: QubitAmplitudes,
    pub fidelity_minus: f64,
    pub probability_full: f64,
}

/// `N S^z_1 - N S^z_2 + N^2`, applied after the entangler to complete the gate.
pub fn cnot_correction(n_bosons: usize) -> Result<Operator> {
    let n = n_bosons as f64;
    let z = spin_operator(Axis::Z, n_bosons)?;
    let dim = (n_bosons + 1) * (n_bosons + 1);
    operator_sum(&[
        (C64::new(n, 0.0), embed(&z, 1, 2, n_bosons)?),
        (C64::new(-n, 0.0), embed(&z, 2, 2, n_bosons)?),
        (C64::new(n * n, 0.0), Operator::identity(dim)),
    ])
}

/// Entangles for `pi / 4N`, applies [`cnot_correction`] for another `pi / 4N`,
/// then post-selects site 2 on its two extremal Fock states.
pub fn run_cnot_analogue(n_bosons: usize) -> Result<CnotReport> {
    let t = entangling_time(n_bosons);
    let (psi, zz) = entangler_setup(n_bosons)?;
    let entangled = evolve_unitary(&psi, &zz, t)?;
    let output = evolve_unitary(&entangled, &cnot_correction(n_bosons)?, t)?;

    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let plus = coherent_qubit_state(h, h, n_bosons)?;
    let minus = coherent_qubit_state(-h, h, n_bosons)?;
    let (empty, probability_empty) = output.condition_on(2, 0)?;
    let (full, probability_full) = output.condition_on(2, n_bosons)?;
    let site1_given_empty = empty.as_qubit()?;
    let site1_given_full = full.as_qubit()?;
    Ok(CnotReport {
        fidelity_plus: site1_given_empty.fidelity(&plus),
        fidelity_minus: site1_given_full.fidelity(&minus),
        output,
        site1_given_empty,
        probability_empty,
        site1_given_full,
        probability_full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qubit_entangler_gives_y_like_states() {
        let run = run_entangler(1, &[0.0, PI / 4.0]).unwrap();
        assert!(run.trajectory.column("entropy_bits").unwrap()[0].abs() < 1e-12);
        // k2 = 1 (S^z_2 = +1): site 1 rotated by e^{-i S^z pi/4}
        let (s, _) = run.entangled.condition_on(2, 1).unwrap();
        let q = s.as_qubit().unwrap();
        let ph = |x: f64| C64::from_polar(FRAC_1_SQRT_2, x);
        let expected =
            QubitAmplitudes::from_amplitudes(1, vec![ph(PI / 4.0), ph(-PI / 4.0)]).unwrap();
        assert!((q.fidelity(&expected) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cnot_analogue_small_n() {
        for n in [1, 3] {
            let r = run_cnot_analogue(n).unwrap();
            assert!((r.fidelity_plus - 1.0).abs() < 1e-9);
            assert!((r.fidelity_minus - 1.0).abs() < 1e-9);
            let p = 0.5f64.powi(n as i32);
            assert!((r.probability_empty - p).abs() < 1e-12);
        }
    }
}
