use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use crate::dynamics::evolve_unitary;
use crate::spin::{
    coherent_qubit_state, embed, operator_product, operator_sum, spin_operator, Axis, Operator,
    QubitAmplitudes, RegisterState,
};
use crate::{Error, Result, C64};

/// A measurement is accepted only if the winning overlap reaches this value.
pub const AMBIGUITY_THRESHOLD: f64 = 0.99;

/// The four one-bit functions as diagonal oracle Hamiltonians.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OracleKind {
    /// `f = (0, 0)`: `H = 0`.
    Const0,
    /// `f = (1, 1)`: `H = 2N S^z_2`.
    Const1,
    /// `f = (0, 1)`: `H = S^z_1 S^z_2 + N S^z_2 - N^2`.
    Bal01,
    /// `f = (1, 0)`: `H = -S^z_1 S^z_2 + N S^z_2 - N^2`.
    Bal10,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    Constant,
    Balanced,
}

impl OracleKind {
    pub const ALL: [OracleKind; 4] = [
        OracleKind::Const0,
        OracleKind::Const1,
        OracleKind::Bal01,
        OracleKind::Bal10,
    ];

    /// `(f(0), f(1))`.
    pub fn truth_table(self) -> (u8, u8) {
        match self {
            OracleKind::Const0 => (0, 0),
            OracleKind::Const1 => (1, 1),
            OracleKind::Bal01 => (0, 1),
            OracleKind::Bal10 => (1, 0),
        }
    }

    pub fn expected(self) -> Classification {
        let (a, b) = self.truth_table();
        if a == b {
            Classification::Constant
        } else {
            Classification::Balanced
        }
    }

    /// The oracle Hamiltonian on a two-site register.
    pub fn hamiltonian(self, n_bosons: usize) -> Result<Operator> {
        let n = n_bosons as f64;
        let dim = (n_bosons + 1) * (n_bosons + 1);
        let z2 = embed(&spin_operator(Axis::Z, n_bosons)?, 2, 2, n_bosons)?;
        let zz = || operator_product(&[(Axis::Z, 1), (Axis::Z, 2)], 2, n_bosons);
        let shift = Operator::identity(dim);
        let re = |x: f64| C64::new(x, 0.0);
        match self {
            OracleKind::Const0 => Ok(Operator::zeros(dim)),
            OracleKind::Const1 => Ok(z2.scaled(re(2.0 * n))),
            OracleKind::Bal01 => {
                operator_sum(&[(re(1.0), zz()?), (re(n), z2), (re(-n * n), shift)])
            }
            OracleKind::Bal10 => {
                operator_sum(&[(re(-1.0), zz()?), (re(n), z2), (re(-n * n), shift)])
            }
        }
    }

    /// The two-qubit oracle as `.bsched` text, evolved for the qubit time `pi/4`.
    pub fn qubit_schedule(self) -> String {
        let block = match self {
            OracleKind::Const0 => "term 0.0 I\n",
            OracleKind::Const1 => "term 2.0 Z2\n",
            OracleKind::Bal01 => "term 1.0 Z1 Z2\nterm 1.0 Z2\nterm -1.0 I\n",
            OracleKind::Bal10 => "term -1.0 Z1 Z2\nterm 1.0 Z2\nterm -1.0 I\n",
        };
        format!("# Deutsch oracle {self}\nqubits 2\n{block}evolve pi/4\n")
    }
}

impl FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "CONST0" => Ok(OracleKind::Const0),
            "CONST1" => Ok(OracleKind::Const1),
            "BAL01" => Ok(OracleKind::Bal01),
            "BAL10" => Ok(OracleKind::Bal10),
            _ => Err(Error::Argument(format!(
                "unknown oracle '{s}' (expected CONST0, CONST1, BAL01 or BAL10)"
            ))),
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleKind::Const0 => "CONST0",
            OracleKind::Const1 => "CONST1",
            OracleKind::Bal01 => "BAL01",
            OracleKind::Bal10 => "BAL10",
        })
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::Constant => "constant",
            Classification::Balanced => "balanced",
        })
    }
}

/// `pi / 2N`: the balanced oracles then flip the relative sign of site 1.
pub fn default_oracle_time(n_bosons: usize) -> f64 {
    PI / (2.0 * n_bosons as f64)
}

#[derive(Debug, Clone)]
pub struct DeutschOutcome {
    pub classification: Classification,
    /// `|<1/sqrt2, 1/sqrt2 | site 1>|^2`.
    pub overlap_plus: f64,
    /// `|<1/sqrt2, -1/sqrt2 | site 1>|^2`.
    pub overlap_minus: f64,
    /// Fidelity of site 2 with its starting state `|1, 0>>`.
    pub site2_fidelity: f64,
    pub site1: QubitAmplitudes,
}

impl DeutschOutcome {
    pub fn winning_overlap(&self) -> f64 {
        self.overlap_plus.max(self.overlap_minus)
    }
}

/// Prepares `|1/sqrt2, 1/sqrt2>> |1, 0>>`, applies the oracle for `t_oracle`
/// and measures site 1 against `|1/sqrt2, ±1/sqrt2>>`.
///
/// Returns [`Error::AmbiguousOutcome`] unless one overlap reaches
/// [`AMBIGUITY_THRESHOLD`].
pub fn run_deutsch(oracle: OracleKind, n_bosons: usize, t_oracle: f64) -> Result<DeutschOutcome> {
    if !(t_oracle > 0.0 && t_oracle.is_finite()) {
        return Err(Error::Argument(format!(
            "oracle time {t_oracle} must be positive"
        )));
    }
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let plus = coherent_qubit_state(h, h, n_bosons)?;
    let minus = coherent_qubit_state(h, -h, n_bosons)?;
    let up = QubitAmplitudes::fock(n_bosons, n_bosons)?;
    let psi = RegisterState::product(&[plus.clone(), up.clone()])?;
    let out = evolve_unitary(&psi, &oracle.hamiltonian(n_bosons)?, t_oracle)?;

    // diagonal oracles leave site 2 in |k = N> up to a phase
    let (site1, p_up) = out.condition_on(2, n_bosons)?;
    let site1 = site1.as_qubit()?;
    let overlap_plus = site1.fidelity(&plus).powi(2);
    let overlap_minus = site1.fidelity(&minus).powi(2);
    if overlap_plus.max(overlap_minus) < AMBIGUITY_THRESHOLD {
        return Err(Error::AmbiguousOutcome {
            overlap_plus,
            overlap_minus,
        });
    }
    let classification = if overlap_plus >= overlap_minus {
        Classification::Constant
    } else {
        Classification::Balanced
    };
    Ok(DeutschOutcome {
        classification,
        overlap_plus,
        overlap_minus,
        site2_fidelity: p_up.sqrt(),
        site1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_oracles_classified_at_default_time() {
        for n in [1, 2, 4] {
            for kind in OracleKind::ALL {
                let out = run_deutsch(kind, n, default_oracle_time(n)).unwrap();
                assert_eq!(out.classification, kind.expected(), "{kind} N={n}");
                assert!(out.winning_overlap() > 1.0 - 1e-9);
                assert!((out.site2_fidelity - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn constant_zero_leaves_site_one_alone() {
        let out = run_deutsch(OracleKind::Const0, 3, 0.7).unwrap();
        assert!((out.overlap_plus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_time_is_ambiguous() {
        let n = 1;
        match run_deutsch(OracleKind::Bal01, n, PI / (4.0 * n as f64)) {
            Err(Error::AmbiguousOutcome {
                overlap_plus,
                overlap_minus,
            }) => {
                assert!((overlap_plus - 0.5).abs() < 1e-12);
                assert!((overlap_minus - 0.5).abs() < 1e-12);
            }
            other => panic!("expected ambiguity, got {other:?}"),
        }
    }

    #[test]
    fn oracle_names_round_trip() {
        for kind in OracleKind::ALL {
            assert_eq!(kind.to_string().parse::<OracleKind>().unwrap(), kind);
        }
        assert!("bal01".parse::<OracleKind>().is_ok());
        assert!("BAL11".parse::<OracleKind>().is_err());
    }
}
