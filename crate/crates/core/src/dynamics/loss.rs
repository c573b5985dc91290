use std::collections::HashMap;

use super::LindbladSpec;
use crate::spin::{register_dim, Axis, DensityMatrix, Operator, RegisterState};
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    A,
    B,
}

/// Two-mode Fock space of one site with `n_a + n_b <= N`.
///
/// States are ordered by total boson number, then by descending `n_a`:
/// `|00>, |10>, |01>, |20>, |11>, |02>, ...`.
#[derive(Debug, Clone)]
pub struct TwoModeFockSpace {
    max_bosons: usize,
    states: Vec<(usize, usize)>,
    index: HashMap<(usize, usize), usize>,
}

impl TwoModeFockSpace {
    pub fn new(max_bosons: usize) -> Self {
        let states: Vec<(usize, usize)> = (0..=max_bosons)
            .flat_map(|total| (0..=total).rev().map(move |na| (na, total - na)))
            .collect();
        let index = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        TwoModeFockSpace {
            max_bosons,
            states,
            index,
        }
    }

    /// `(N+1)(N+2)/2`.
    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[(usize, usize)] {
        &self.states
    }

    pub fn index_of(&self, n_a: usize, n_b: usize) -> Option<usize> {
        self.index.get(&(n_a, n_b)).copied()
    }

    pub fn annihilator(&self, mode: Mode) -> Operator {
        let t = self
            .states
            .iter()
            .enumerate()
            .filter_map(|(col, &(na, nb))| {
                let (target, n) = match mode {
                    Mode::A if na > 0 => ((na - 1, nb), na),
                    Mode::B if nb > 0 => ((na, nb - 1), nb),
                    _ => return None,
                };
                Some((self.index[&target], col, C64::new((n as f64).sqrt(), 0.0)))
            })
            .collect();
        Operator::from_triplets(self.dim(), t)
    }

    /// Schwinger operator on the enlarged space; it conserves `n_a + n_b`.
    pub fn spin_operator(&self, axis: Axis) -> Operator {
        if axis == Axis::Z {
            return Operator::from_real_diagonal(
                self.states.iter().map(|&(na, nb)| na as f64 - nb as f64),
            );
        }
        // a^dag b: (na, nb) -> (na + 1, nb - 1)
        let mut t = Vec::new();
        for (col, &(na, nb)) in self.states.iter().enumerate() {
            if nb == 0 {
                continue;
            }
            let row = self.index[&(na + 1, nb - 1)];
            let v = (((na + 1) * nb) as f64).sqrt();
            match axis {
                Axis::X => {
                    t.push((row, col, C64::new(v, 0.0)));
                    t.push((col, row, C64::new(v, 0.0)));
                }
                Axis::Y => {
                    t.push((row, col, C64::new(0.0, -v)));
                    t.push((col, row, C64::new(0.0, v)));
                }
                Axis::Z => unreachable!(),
            }
        }
        Operator::from_triplets(self.dim(), t)
    }

    fn max_bosons(&self) -> usize {
        self.max_bosons
    }
}

/// Particle-loss couplings `a_n`, `b_n` on the enlarged multi-site Fock space,
/// together with the embedding of fixed-`N` register states into it.
#[derive(Debug, Clone)]
pub struct ParticleLoss {
    n_sites: usize,
    site_space: TwoModeFockSpace,
    couplings: Vec<Operator>,
}

/// Builds `a_n` and `b_n` for every listed site of an `M`-site register with
/// per-site boson cutoff `N`.
pub fn particle_loss_couplings(
    n_bosons: usize,
    n_sites: usize,
    sites: &[usize],
) -> Result<ParticleLoss> {
    if n_bosons < 1 {
        return Err(Error::Argument("boson number N must be at least 1".into()));
    }
    let site_space = TwoModeFockSpace::new(n_bosons);
    let per_site = site_space.dim();
    // cap check on the enlarged dimension
    register_dim(per_site - 1, n_sites)?;
    let loss = ParticleLoss {
        n_sites,
        site_space,
        couplings: Vec::new(),
    };
    let mut couplings = Vec::with_capacity(2 * sites.len());
    for &site in sites {
        for mode in [Mode::A, Mode::B] {
            couplings.push(loss.annihilator(mode, site)?);
        }
    }
    Ok(ParticleLoss { couplings, ..loss })
}

impl ParticleLoss {
    pub fn dim(&self) -> usize {
        self.site_space.dim().pow(self.n_sites as u32)
    }

    pub fn site_space(&self) -> &TwoModeFockSpace {
        &self.site_space
    }

    pub fn couplings(&self) -> &[Operator] {
        &self.couplings
    }

    fn embed_site(&self, op: &Operator, site: usize) -> Result<Operator> {
        if site == 0 || site > self.n_sites {
            return Err(Error::Argument(format!(
                "site {site} outside 1..={}",
                self.n_sites
            )));
        }
        let id = Operator::identity(self.site_space.dim());
        let mut out = Operator::identity(1);
        for s in 1..=self.n_sites {
            out = out.kron(if s == site { op } else { &id });
        }
        Ok(out)
    }

    pub fn annihilator(&self, mode: Mode, site: usize) -> Result<Operator> {
        self.embed_site(&self.site_space.annihilator(mode), site)
    }

    pub fn spin_operator(&self, axis: Axis, site: usize) -> Result<Operator> {
        self.embed_site(&self.site_space.spin_operator(axis), site)
    }

    /// Maps register `|k_1 ... k_M>` to `(n_a, n_b) = (k_n, N - k_n)` on each site.
    pub fn embed_state(&self, state: &RegisterState) -> Result<Vec<C64>> {
        let n = self.site_space.max_bosons();
        if state.n_bosons() != n || state.n_sites() != self.n_sites {
            return Err(Error::Dimension {
                expected: (n + 1).pow(self.n_sites as u32),
                found: state.dim(),
            });
        }
        let d = self.site_space.dim();
        let mut out = vec![C64::new(0.0, 0.0); self.dim()];
        for (idx, &amp) in state.amps().iter().enumerate() {
            let mut flat = 0;
            for site in 1..=self.n_sites {
                let k = state.site_index(idx, site);
                flat = flat * d + self.site_space.index[&(k, n - k)];
            }
            out[flat] = amp;
        }
        Ok(out)
    }

    pub fn embed_density(&self, state: &RegisterState) -> Result<DensityMatrix> {
        Ok(DensityMatrix::from_vector(&self.embed_state(state)?))
    }

    pub fn into_spec(self, gamma: f64) -> Result<LindbladSpec> {
        LindbladSpec::new(gamma, self.couplings, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{default_dt, evolve_lindblad};
    use crate::spin::{coherent_qubit_state, expectation};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn single_boson_ladder() {
        let space = TwoModeFockSpace::new(1);
        assert_eq!(space.states(), &[(0, 0), (1, 0), (0, 1)]);
        let a = space.annihilator(Mode::A).to_dense();
        let one = C64::new(1.0, 0.0);
        // |10> -> |00>, everything else -> 0
        assert_eq!(a[(0, 1)], one);
        assert_eq!(a.iter().filter(|v| v.norm() > 0.0).count(), 1);
    }

    #[test]
    fn dimension_is_triangular() {
        for n in 1..6 {
            assert_eq!(TwoModeFockSpace::new(n).dim(), (n + 1) * (n + 2) / 2);
        }
    }

    #[test]
    fn embedding_preserves_spin_expectations() {
        let n = 3;
        let q = coherent_qubit_state(C64::new(0.6, 0.0), C64::new(0.0, 0.8), n).unwrap();
        let reg = RegisterState::product(&[q.clone(), q]).unwrap();
        let loss = particle_loss_couplings(n, 2, &[1, 2]).unwrap();
        let rho = loss.embed_density(&reg).unwrap();
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let big = rho
                .expectation(&loss.spin_operator(axis, 2).unwrap())
                .unwrap();
            let small_op =
                crate::spin::embed(&crate::spin::spin_operator(axis, n).unwrap(), 2, 2, n).unwrap();
            let small = expectation(&reg, &small_op).unwrap();
            assert!((big - small).norm() < 1e-12);
        }
    }

    #[test]
    fn loss_generator_preserves_trace() {
        let n = 2;
        let q = coherent_qubit_state(
            C64::new(FRAC_1_SQRT_2, 0.0),
            C64::new(FRAC_1_SQRT_2, 0.0),
            n,
        )
        .unwrap();
        let reg = RegisterState::product(&[q]).unwrap();
        let loss = particle_loss_couplings(n, 1, &[1]).unwrap();
        let rho0 = loss.embed_density(&reg).unwrap();
        let spec = loss.into_spec(0.3).unwrap();
        let t = 2.0;
        let rho = evolve_lindblad(&rho0, &spec, t, default_dt(&spec, t)).unwrap();
        assert!((rho.trace() - C64::new(1.0, 0.0)).norm() < 1e-8);
    }
}
