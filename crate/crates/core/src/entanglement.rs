//! Reduced density matrices and von Neumann entropy of register bipartitions.

use nalgebra::DMatrix;

use crate::dynamics::{evolve_unitary, Trajectory};
use crate::spin::{
    coherent_qubit_state, operator_product, Axis, DensityMatrix, Operator, RegisterState,
};
use crate::{Error, Result, C64};

/// Sites kept after a partial trace; the rest are traced out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartitionSpec {
    keep_sites: Vec<usize>,
    traced_sites: Vec<usize>,
}

impl BipartitionSpec {
    pub fn new(keep_sites: Vec<usize>, n_sites: usize) -> Result<Self> {
        let mut seen = vec![false; n_sites];
        for &s in &keep_sites {
            if s == 0 || s > n_sites {
                return Err(Error::Argument(format!("site {s} outside 1..={n_sites}")));
            }
            if std::mem::replace(&mut seen[s - 1], true) {
                return Err(Error::DuplicateSite(s));
            }
        }
        let traced_sites = (1..=n_sites).filter(|s| !seen[s - 1]).collect();
        Ok(BipartitionSpec {
            keep_sites,
            traced_sites,
        })
    }

    pub fn keep_sites(&self) -> &[usize] {
        &self.keep_sites
    }

    pub fn traced_sites(&self) -> &[usize] {
        &self.traced_sites
    }

    fn n_sites(&self) -> usize {
        self.keep_sites.len() + self.traced_sites.len()
    }
}

/// Coefficient matrix `Psi[i, j]` with `i` indexing the kept sites and `j` the traced ones.
fn coefficient_matrix(state: &RegisterState, spec: &BipartitionSpec) -> Result<DMatrix<C64>> {
    if spec.n_sites() != state.n_sites() {
        return Err(Error::Dimension {
            expected: state.n_sites(),
            found: spec.n_sites(),
        });
    }
    let d = state.n_bosons() + 1;
    let dk = d.pow(spec.keep_sites.len() as u32);
    let dt = d.pow(spec.traced_sites.len() as u32);
    let mut psi = DMatrix::zeros(dk, dt);
    for (idx, &amp) in state.amps().iter().enumerate() {
        let group = |sites: &[usize]| {
            sites
                .iter()
                .fold(0, |acc, &s| acc * d + state.site_index(idx, s))
        };
        psi[(group(&spec.keep_sites), group(&spec.traced_sites))] = amp;
    }
    Ok(psi)
}

/// Partial trace over `spec.traced_sites`, by index grouping on the flat layout.
pub fn reduced_density(state: &RegisterState, spec: &BipartitionSpec) -> Result<DensityMatrix> {
    let psi = coefficient_matrix(state, spec)?;
    let rho = &psi * psi.adjoint();
    let rho = (&rho + rho.adjoint()) * C64::new(0.5, 0.0);
    DensityMatrix::new(rho)
}

/// `-Tr(rho log2 rho)` in bits.
///
/// Eigenvalues in `[-1e-8, 1e-12]` count as zero; anything more negative is an error.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    let defect = rho.hermiticity_defect();
    if defect > 1e-10 {
        return Err(Error::NonHermitian(defect));
    }
    let ev = rho.eigenvalues();
    if let Some(&min) = ev.first() {
        if min < -1e-8 {
            return Err(Error::NegativeEigenvalue(min));
        }
    }
    let s: f64 = ev
        .into_iter()
        .filter(|&l| l > 1e-12)
        .map(|l| -l * l.log2())
        .sum();
    // a pure state gives -1 * log2(1 - eps), which can round below zero
    Ok(s.max(0.0))
}

/// Entropy of the reduced state of `keep_sites`.
pub fn entanglement_entropy(state: &RegisterState, keep_sites: &[usize]) -> Result<f64> {
    let spec = BipartitionSpec::new(keep_sites.to_vec(), state.n_sites())?;
    von_neumann_entropy(&reduced_density(state, &spec)?)
}

/// The two-site product `|1/sqrt2, 1/sqrt2>>^{⊗2}` and `S^z_1 S^z_2`.
pub(crate) fn entangler_setup(n_bosons: usize) -> Result<(RegisterState, Operator)> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = coherent_qubit_state(C64::new(h, 0.0), C64::new(h, 0.0), n_bosons)?;
    let psi = RegisterState::product(&[plus.clone(), plus])?;
    let zz = operator_product(&[(Axis::Z, 1), (Axis::Z, 2)], 2, n_bosons)?;
    Ok((psi, zz))
}

/// Site-1 entanglement of `e^{-i S^z_1 S^z_2 t} |1/sqrt2, 1/sqrt2>>^{⊗2}` on a time grid.
///
/// Columns: `entropy_bits` and `entropy_norm` (divided by `log2(N+1)`).
pub fn entropy_trajectory(n_bosons: usize, t_grid: &[f64]) -> Result<Trajectory> {
    let (psi, zz) = entangler_setup(n_bosons)?;
    let emax = ((n_bosons + 1) as f64).log2();
    let mut bits = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let state = evolve_unitary(&psi, &zz, t)?;
        bits.push(entanglement_entropy(&state, &[1])?);
    }
    let norm = bits.iter().map(|e| e / emax).collect();
    Trajectory::new(
        t_grid.to_vec(),
        vec!["entropy_bits".into(), "entropy_norm".into()],
        vec![bits, norm],
    )
}
