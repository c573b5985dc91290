use nalgebra::{DMatrix, DVector};

use super::{Operator, RegisterState};
use crate::{Error, Result, C64};

/// Density matrix over a register or an enlarged space.
///
/// [`DensityMatrix::new`] checks Hermiticity and unit trace to 1e-10. Evolution
/// under non-Hermitian couplings can leave the Hermitian set, so results of
/// such runs are built with [`DensityMatrix::from_matrix_unchecked`].
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    entries: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::Dimension {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        let rho = DensityMatrix { entries };
        let defect = rho.hermiticity_defect();
        if defect > 1e-10 {
            return Err(Error::NonHermitian(defect));
        }
        let tr = rho.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > 1e-10 {
            return Err(Error::Argument(format!("density matrix trace {tr} != 1")));
        }
        Ok(rho)
    }

    pub fn from_matrix_unchecked(entries: DMatrix<C64>) -> Self {
        DensityMatrix { entries }
    }

    pub fn from_pure(state: &RegisterState) -> Self {
        Self::from_vector(state.amps())
    }

    /// `|v><v|` for a normalized vector.
    pub fn from_vector(v: &[C64]) -> Self {
        let v = DVector::from_column_slice(v);
        DensityMatrix {
            entries: &v * v.adjoint(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint())
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max)
    }

    /// `Tr(op rho)`.
    pub fn expectation(&self, op: &Operator) -> Result<C64> {
        if op.dim() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: op.dim(),
            });
        }
        let d = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        // (O rho)_ii = (O rho[:, i])_i
        for i in 0..d {
            let col: Vec<C64> = self.entries.column(i).iter().copied().collect();
            acc += op.apply(&col)[i];
        }
        Ok(acc)
    }

    /// Eigenvalues of the Hermitian part, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let h = (&self.entries + self.entries.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// `<psi| rho |psi>`.
    pub fn fidelity_with_pure(&self, state: &[C64]) -> f64 {
        let v = DVector::from_column_slice(state);
        (v.adjoint() * &self.entries * &v)[(0, 0)].re
    }
}
