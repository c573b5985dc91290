use nalgebra::{DMatrix, DVector};

use super::Trajectory;
use crate::spin::{embed, spin_operator, Axis, DensityMatrix, Operator};
use crate::{Error, Result, C64};

/// Largest `dim^2` for which [`evolve_lindblad_exact`] builds the superoperator.
pub const EXACT_SUPEROPERATOR_MAX_DIM2: usize = 4096;

/// Generator `d rho/dt = -i[H, rho] - gamma sum_n [A_n, [A_n, rho]]`.
///
/// The double commutator is applied literally for every coupling, including
/// non-Hermitian ones such as mode annihilators.
#[derive(Debug, Clone)]
pub struct LindbladSpec {
    pub gamma: f64,
    pub couplings: Vec<Operator>,
    pub hamiltonian: Option<Operator>,
}

impl LindbladSpec {
    pub fn new(
        gamma: f64,
        couplings: Vec<Operator>,
        hamiltonian: Option<Operator>,
    ) -> Result<Self> {
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::Argument(format!("gamma must be >= 0, got {gamma}")));
        }
        let dim = couplings
            .first()
            .map(Operator::dim)
            .or_else(|| hamiltonian.as_ref().map(Operator::dim));
        if let Some(d) = dim {
            for op in couplings.iter().chain(hamiltonian.iter()) {
                if op.dim() != d {
                    return Err(Error::Dimension {
                        expected: d,
                        found: op.dim(),
                    });
                }
            }
        }
        if let Some(h) = &hamiltonian {
            h.ensure_hermitian()?;
        }
        Ok(LindbladSpec {
            gamma,
            couplings,
            hamiltonian,
        })
    }

    /// Dephasing with `A_n = S^z_n` on every site of an `M`-site register.
    pub fn dephasing(gamma: f64, n_sites: usize, n_bosons: usize) -> Result<Self> {
        let sz = spin_operator(Axis::Z, n_bosons)?;
        let couplings = (1..=n_sites)
            .map(|site| embed(&sz, site, n_sites, n_bosons))
            .collect::<Result<Vec<_>>>()?;
        Self::new(gamma, couplings, None)
    }

    pub fn dim(&self) -> Option<usize> {
        self.couplings
            .first()
            .or(self.hamiltonian.as_ref())
            .map(Operator::dim)
    }

    pub fn couplings_hermitian(&self) -> bool {
        self.couplings.iter().all(Operator::hermitian_hint)
    }

    fn check_dim(&self, rho: &DensityMatrix) -> Result<()> {
        match self.dim() {
            Some(d) if d != rho.dim() => Err(Error::Dimension {
                expected: rho.dim(),
                found: d,
            }),
            _ => Ok(()),
        }
    }
}

fn row_sum_norm(m: &DMatrix<C64>) -> f64 {
    m.row_iter()
        .map(|r| r.iter().map(|v| v.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Default step: `min(1e-2/gamma, t/1000)`, further reduced if needed to keep
/// the explicit integrator inside its stability region.
pub fn default_dt(spec: &LindbladSpec, t: f64) -> f64 {
    let mut dt = t / 1000.0;
    if spec.gamma > 0.0 {
        dt = dt.min(1e-2 / spec.gamma);
    }
    // crude bound on the generator's spectral radius
    let mut radius = 0.0;
    for a in &spec.couplings {
        radius += 4.0 * spec.gamma * row_sum_norm(&a.to_dense()).powi(2);
    }
    if let Some(h) = &spec.hamiltonian {
        radius += 2.0 * row_sum_norm(&h.to_dense());
    }
    if radius > 0.0 {
        dt = dt.min(1.0 / radius);
    }
    if dt > 0.0 {
        dt
    } else {
        1e-3
    }
}

struct Generator {
    gamma: f64,
    a: Vec<DMatrix<C64>>,
    a2: Vec<DMatrix<C64>>,
    h: Option<DMatrix<C64>>,
}

impl Generator {
    fn new(spec: &LindbladSpec) -> Self {
        let a: Vec<DMatrix<C64>> = spec.couplings.iter().map(Operator::to_dense).collect();
        let a2 = a.iter().map(|m| m * m).collect();
        Generator {
            gamma: spec.gamma,
            a,
            a2,
            h: spec.hamiltonian.as_ref().map(Operator::to_dense),
        }
    }

    fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
        if let Some(h) = &self.h {
            let comm = h * rho - rho * h;
            out -= comm * C64::new(0.0, 1.0);
        }
        if self.gamma > 0.0 {
            let g = C64::new(self.gamma, 0.0);
            for (a, a2) in self.a.iter().zip(&self.a2) {
                // [A,[A,rho]] = A^2 rho - 2 A rho A + rho A^2
                let dc = a2 * rho - (a * rho * a) * C64::new(2.0, 0.0) + rho * a2;
                out -= dc * g;
            }
        }
        out
    }

    fn rk4_step(&self, rho: &DMatrix<C64>, h: f64) -> DMatrix<C64> {
        let half = C64::new(h / 2.0, 0.0);
        let full = C64::new(h, 0.0);
        let k1 = self.apply(rho);
        let k2 = self.apply(&(rho + &k1 * half));
        let k3 = self.apply(&(rho + &k2 * half));
        let k4 = self.apply(&(rho + &k3 * full));
        rho + (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(h / 6.0, 0.0)
    }
}

fn check_step(spec: &LindbladSpec, dt: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Argument(format!("dt must be positive, got {dt}")));
    }
    if spec.gamma * dt > 1e-2 * (1.0 + 1e-12) {
        return Err(Error::StepSize(spec.gamma * dt));
    }
    Ok(())
}

fn wrap(spec: &LindbladSpec, m: DMatrix<C64>) -> DensityMatrix {
    // Hermitian couplings keep rho Hermitian; re-symmetrize to stop roundoff drift.
    if spec.couplings_hermitian() {
        DensityMatrix::from_matrix_unchecked((&m + m.adjoint()) * C64::new(0.5, 0.0))
    } else {
        DensityMatrix::from_matrix_unchecked(m)
    }
}

/// Integrates the generator over `[0, t]` with fixed classical RK4 steps no
/// longer than `dt` (the step is shrunk so the final time is hit exactly).
pub fn evolve_lindblad(
    rho: &DensityMatrix,
    spec: &LindbladSpec,
    t: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    spec.check_dim(rho)?;
    check_step(spec, dt)?;
    if t < 0.0 {
        return Err(Error::Argument("negative evolution time".into()));
    }
    let gen = Generator::new(spec);
    let steps = (t / dt).ceil().max(1.0) as usize;
    let h = t / steps as f64;
    let mut m = rho.entries().clone();
    if t > 0.0 {
        for _ in 0..steps {
            m = gen.rk4_step(&m, h);
        }
    }
    Ok(wrap(spec, m))
}

/// Samples `Re Tr(O rho(t))` for each observable at the requested times.
pub fn lindblad_trajectory(
    rho: &DensityMatrix,
    spec: &LindbladSpec,
    times: &[f64],
    dt: f64,
    observables: &[(String, Operator)],
) -> Result<Trajectory> {
    spec.check_dim(rho)?;
    check_step(spec, dt)?;
    if times.first().is_some_and(|&t| t < 0.0) {
        return Err(Error::Argument("negative sample time".into()));
    }
    let gen = Generator::new(spec);
    let mut columns = vec![Vec::with_capacity(times.len()); observables.len()];
    let mut m = rho.entries().clone();
    let mut now = 0.0;
    for (i, &target) in times.iter().enumerate() {
        if i > 0 && target <= times[i - 1] {
            return Err(Error::Argument(
                "sample times must be strictly increasing".into(),
            ));
        }
        let span = target - now;
        if span > 0.0 {
            let steps = (span / dt).ceil().max(1.0) as usize;
            let h = span / steps as f64;
            for _ in 0..steps {
                m = gen.rk4_step(&m, h);
            }
            now = target;
        }
        let snapshot = wrap(spec, m.clone());
        for (col, (_, op)) in columns.iter_mut().zip(observables) {
            col.push(snapshot.expectation(op)?.re);
        }
    }
    Trajectory::new(
        times.to_vec(),
        observables.iter().map(|(l, _)| l.clone()).collect(),
        columns,
    )
}

/// Column-stacked superoperator `L` with `vec(d rho/dt) = L vec(rho)`.
pub fn superoperator(spec: &LindbladSpec, dim: usize) -> DMatrix<C64> {
    let id = DMatrix::<C64>::identity(dim, dim);
    let mut l = DMatrix::zeros(dim * dim, dim * dim);
    // vec(A X B) = (B^T ⊗ A) vec(X)
    if let Some(h) = &spec.hamiltonian {
        let h = h.to_dense();
        l -= (id.kronecker(&h) - h.transpose().kronecker(&id)) * C64::new(0.0, 1.0);
    }
    for a in &spec.couplings {
        let a = a.to_dense();
        let a2 = &a * &a;
        let dc = id.kronecker(&a2) - a.transpose().kronecker(&a) * C64::new(2.0, 0.0)
            + a2.transpose().kronecker(&id);
        l -= dc * C64::new(spec.gamma, 0.0);
    }
    l
}

/// `rho(t) = exp(L t) rho(0)` through a dense matrix exponential; an oracle
/// for the stepping integrator on small systems.
pub fn evolve_lindblad_exact(
    rho: &DensityMatrix,
    spec: &LindbladSpec,
    t: f64,
) -> Result<DensityMatrix> {
    spec.check_dim(rho)?;
    let d = rho.dim();
    if d * d > EXACT_SUPEROPERATOR_MAX_DIM2 {
        return Err(Error::DimensionCap {
            dim: d * d,
            cap: EXACT_SUPEROPERATOR_MAX_DIM2,
        });
    }
    let prop = (superoperator(spec, d) * C64::new(t, 0.0)).exp();
    let v = prop * DVector::from_column_slice(rho.entries().as_slice());
    Ok(wrap(spec, DMatrix::from_column_slice(d, d, v.as_slice())))
}
