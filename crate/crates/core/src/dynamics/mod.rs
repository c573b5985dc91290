//! Unitary and Lindblad-form time evolution.

mod lindblad;
mod loss;

pub use lindblad::{
    default_dt, evolve_lindblad, evolve_lindblad_exact, lindblad_trajectory, superoperator,
    LindbladSpec, EXACT_SUPEROPERATOR_MAX_DIM2,
};
pub use loss::{particle_loss_couplings, Mode, ParticleLoss, TwoModeFockSpace};

use nalgebra::DVector;

use crate::spin::{Operator, RegisterState};
use crate::{Error, Result, C64};

/// Sampled observables on a common time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub labels: Vec<String>,
    /// One column per label, each as long as `times`.
    pub columns: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, labels: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if times.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Argument(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        if labels.len() != columns.len() {
            return Err(Error::Argument(format!(
                "{} labels for {} columns",
                labels.len(),
                columns.len()
            )));
        }
        if let Some(c) = columns.iter().find(|c| c.len() != times.len()) {
            return Err(Error::Dimension {
                expected: times.len(),
                found: c.len(),
            });
        }
        Ok(Trajectory {
            times,
            labels,
            columns,
        })
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn column(&self, label: &str) -> Option<&[f64]> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.columns[i].as_slice())
    }
}

/// `e^{-iHt} x` for a Hermitian `H`. Diagonal operators take an exact phase
/// path; anything else goes through the operator's cached eigendecomposition.
pub fn evolve_amplitudes(x: &[C64], h: &Operator, t: f64) -> Result<Vec<C64>> {
    if h.dim() != x.len() {
        return Err(Error::Dimension {
            expected: x.len(),
            found: h.dim(),
        });
    }
    if let Some(d) = h.as_diagonal() {
        h.ensure_hermitian()?;
        return Ok(d
            .iter()
            .zip(x)
            .map(|(e, a)| a * C64::from_polar(1.0, -e.re * t))
            .collect());
    }
    let eig = h.eigen()?;
    let v = &eig.vectors;
    let mut coeffs = v.adjoint() * DVector::from_column_slice(x);
    for (c, &lambda) in coeffs.iter_mut().zip(&eig.values) {
        *c *= C64::from_polar(1.0, -lambda * t);
    }
    Ok((v * coeffs).as_slice().to_vec())
}

/// `e^{-iHt} |psi>`.
pub fn evolve_unitary(state: &RegisterState, h: &Operator, t: f64) -> Result<RegisterState> {
    let amps = evolve_amplitudes(state.amps(), h, t)?;
    Ok(RegisterState::from_raw(
        state.n_bosons(),
        state.n_sites(),
        amps,
    ))
}

/// Least-squares decay rate `-d ln|v| / dt` of the first column.
pub fn correlator_decay_rate(trajectory: &Trajectory) -> Result<f64> {
    let values = trajectory
        .columns
        .first()
        .ok_or_else(|| Error::Fit("trajectory has no columns".into()))?;
    decay_rate(&trajectory.times, values)
}

/// Least-squares decay rate `-d ln|v| / dt` of a sampled series.
pub fn decay_rate(times: &[f64], values: &[f64]) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::Dimension {
            expected: times.len(),
            found: values.len(),
        });
    }
    if times.len() < 10 {
        return Err(Error::Fit(format!(
            "need at least 10 samples, got {}",
            times.len()
        )));
    }
    if let Some(v) = values.iter().find(|v| v.abs() < 1e-13) {
        return Err(Error::Fit(format!("sample magnitude {v:e} below 1e-13")));
    }
    let n = times.len() as f64;
    let ys: Vec<f64> = values.iter().map(|v| v.abs().ln()).collect();
    let mt = times.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = times
        .iter()
        .zip(&ys)
        .map(|(t, y)| (t - mt) * (y - my))
        .sum();
    let sxx: f64 = times.iter().map(|t| (t - mt).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("all sample times coincide".into()));
    }
    Ok(-sxy / sxx)
}
