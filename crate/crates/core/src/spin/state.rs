use std::sync::atomic::{AtomicUsize, Ordering};

use super::{binomial, Axis};
use crate::{Error, Result, C64};

/// Default upper bound on register dimension.
pub const DEFAULT_DIM_CAP: usize = 250_000;

static DIM_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DIM_CAP);

pub fn dim_cap() -> usize {
    DIM_CAP.load(Ordering::Relaxed)
}

/// Overrides the process-wide dimension cap.
pub fn set_dim_cap(cap: usize) {
    DIM_CAP.store(cap, Ordering::Relaxed);
}

/// `(N+1)^M`, refusing anything above [`dim_cap`].
pub fn register_dim(n_bosons: usize, n_sites: usize) -> Result<usize> {
    let cap = dim_cap();
    let mut dim = 1usize;
    for _ in 0..n_sites {
        dim = dim
            .checked_mul(n_bosons + 1)
            .filter(|&d| d <= cap)
            .ok_or(Error::DimensionCap {
                dim: (n_bosons + 1).saturating_pow(n_sites as u32),
                cap,
            })?;
    }
    Ok(dim)
}

pub(crate) fn check_n(n_bosons: usize) -> Result<()> {
    if n_bosons < 1 {
        return Err(Error::Argument("boson number N must be at least 1".into()));
    }
    Ok(())
}

fn norm_sqr(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Amplitudes of one bosonic qubit over the Fock basis `|k>`, `k` = bosons in mode `a`.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitAmplitudes {
    n_bosons: usize,
    amps: Vec<C64>,
}

impl QubitAmplitudes {
    pub fn from_amplitudes(n_bosons: usize, amps: Vec<C64>) -> Result<Self> {
        check_n(n_bosons)?;
        if amps.len() != n_bosons + 1 {
            return Err(Error::Dimension {
                expected: n_bosons + 1,
                found: amps.len(),
            });
        }
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > 1e-9 {
            return Err(Error::Normalization { norm: n2 });
        }
        let s = n2.sqrt().recip();
        Ok(QubitAmplitudes {
            n_bosons,
            amps: amps.into_iter().map(|a| a * s).collect(),
        })
    }

    /// The `S^z` eigenstate with `k` bosons in mode `a`.
    pub fn fock(n_bosons: usize, k: usize) -> Result<Self> {
        check_n(n_bosons)?;
        if k > n_bosons {
            return Err(Error::Argument(format!("k = {k} exceeds N = {n_bosons}")));
        }
        let mut amps = vec![C64::new(0.0, 0.0); n_bosons + 1];
        amps[k] = C64::new(1.0, 0.0);
        Ok(QubitAmplitudes { n_bosons, amps })
    }

    /// Extremal eigenstate of `S^axis` with eigenvalue `+N` (`positive`) or `-N`.
    pub fn axis_eigenstate(n_bosons: usize, axis: Axis, positive: bool) -> Result<Self> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (a, b) = match (axis, positive) {
            (Axis::Z, true) => (C64::new(1.0, 0.0), C64::new(0.0, 0.0)),
            (Axis::Z, false) => (C64::new(0.0, 0.0), C64::new(1.0, 0.0)),
            (Axis::X, true) => (C64::new(h, 0.0), C64::new(h, 0.0)),
            (Axis::X, false) => (C64::new(h, 0.0), C64::new(-h, 0.0)),
            // <S^y> = N(-i a* b + i a b*) = +N for b = i a
            (Axis::Y, true) => (C64::new(h, 0.0), C64::new(0.0, h)),
            (Axis::Y, false) => (C64::new(h, 0.0), C64::new(0.0, -h)),
        };
        coherent_qubit_state(a, b, n_bosons)
    }

    pub fn n_bosons(&self) -> usize {
        self.n_bosons
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &QubitAmplitudes) -> f64 {
        inner(&self.amps, &other.amps).norm()
    }
}

/// `|alpha, beta>> = (alpha a^dag + beta b^dag)^N |0> / sqrt(N!)`, expanded as
/// `amps[k] = sqrt(C(N,k)) alpha^k beta^(N-k)`.
pub fn coherent_qubit_state(alpha: C64, beta: C64, n_bosons: usize) -> Result<QubitAmplitudes> {
    check_n(n_bosons)?;
    let norm = alpha.norm_sqr() + beta.norm_sqr();
    if (norm - 1.0).abs() >= 1e-9 {
        return Err(Error::Normalization { norm });
    }
    let amps: Vec<C64> = (0..=n_bosons)
        .map(|k| {
            alpha.powu(k as u32) * beta.powu((n_bosons - k) as u32) * binomial(n_bosons, k).sqrt()
        })
        .collect();
    let s = norm_sqr(&amps).sqrt().recip();
    Ok(QubitAmplitudes {
        n_bosons,
        amps: amps.into_iter().map(|a| a * s).collect(),
    })
}

/// Pure state of `M` bosonic qubits, site 1 the slowest-varying index.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    n_bosons: usize,
    n_sites: usize,
    amps: Vec<C64>,
}

impl RegisterState {
    /// Wraps raw amplitudes; they must have norm 1 within 1e-9 and are renormalized exactly.
    pub fn from_amplitudes(n_bosons: usize, n_sites: usize, amps: Vec<C64>) -> Result<Self> {
        check_n(n_bosons)?;
        let dim = register_dim(n_bosons, n_sites)?;
        if amps.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                found: amps.len(),
            });
        }
        let n2 = norm_sqr(&amps);
        if (n2 - 1.0).abs() > 1e-9 {
            return Err(Error::Normalization { norm: n2 });
        }
        let s = n2.sqrt().recip();
        Ok(RegisterState {
            n_bosons,
            n_sites,
            amps: amps.into_iter().map(|a| a * s).collect(),
        })
    }

    pub(crate) fn from_raw(n_bosons: usize, n_sites: usize, amps: Vec<C64>) -> Self {
        RegisterState {
            n_bosons,
            n_sites,
            amps,
        }
    }

    /// Tensor product of single-qubit states, first entry = site 1.
    pub fn product(sites: &[QubitAmplitudes]) -> Result<Self> {
        let first = sites
            .first()
            .ok_or_else(|| Error::Argument("a register needs at least one site".into()))?;
        let n = first.n_bosons;
        if let Some(bad) = sites.iter().find(|q| q.n_bosons != n) {
            return Err(Error::Dimension {
                expected: n + 1,
                found: bad.n_bosons + 1,
            });
        }
        register_dim(n, sites.len())?;
        let mut amps = vec![C64::new(1.0, 0.0)];
        for q in sites {
            amps = amps
                .iter()
                .flat_map(|a| q.amps.iter().map(move |b| a * b))
                .collect();
        }
        Ok(RegisterState {
            n_bosons: n,
            n_sites: sites.len(),
            amps,
        })
    }

    /// Product of Fock states `|k_1>|k_2>...`.
    pub fn fock(n_bosons: usize, ks: &[usize]) -> Result<Self> {
        let sites = ks
            .iter()
            .map(|&k| QubitAmplitudes::fock(n_bosons, k))
            .collect::<Result<Vec<_>>>()?;
        Self::product(&sites)
    }

    pub fn n_bosons(&self) -> usize {
        self.n_bosons
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    pub fn inner(&self, other: &RegisterState) -> C64 {
        inner(&self.amps, &other.amps)
    }

    /// Phase-invariant fidelity `|<self|other>|`.
    pub fn fidelity(&self, other: &RegisterState) -> f64 {
        self.inner(other).norm()
    }

    /// Fock index of `site` (1-based) within flat index `idx`.
    pub fn site_index(&self, idx: usize, site: usize) -> usize {
        let d = self.n_bosons + 1;
        let stride = d.pow((self.n_sites - site) as u32);
        (idx / stride) % d
    }

    fn check_site(&self, site: usize) -> Result<()> {
        if site == 0 || site > self.n_sites {
            return Err(Error::Argument(format!(
                "site {site} outside 1..={}",
                self.n_sites
            )));
        }
        Ok(())
    }

    /// State of the other sites conditioned on `site` being found in `|k>`,
    /// renormalized, together with the outcome probability.
    pub fn condition_on(&self, site: usize, k: usize) -> Result<(RegisterState, f64)> {
        self.check_site(site)?;
        if self.n_sites < 2 {
            return Err(Error::Argument(
                "conditioning needs at least two sites".into(),
            ));
        }
        if k > self.n_bosons {
            return Err(Error::Argument(format!(
                "k = {k} exceeds N = {}",
                self.n_bosons
            )));
        }
        let rest: Vec<C64> = (0..self.dim())
            .filter(|&i| self.site_index(i, site) == k)
            .map(|i| self.amps[i])
            .collect();
        let p = norm_sqr(&rest);
        if p < 1e-14 {
            return Err(Error::ZeroProbability(p));
        }
        let s = p.sqrt().recip();
        Ok((
            RegisterState {
                n_bosons: self.n_bosons,
                n_sites: self.n_sites - 1,
                amps: rest.into_iter().map(|a| a * s).collect(),
            },
            p,
        ))
    }

    /// Single-site view of a one-site register.
    pub fn as_qubit(&self) -> Result<QubitAmplitudes> {
        if self.n_sites != 1 {
            return Err(Error::Argument(format!(
                "register has {} sites, expected 1",
                self.n_sites
            )));
        }
        Ok(QubitAmplitudes {
            n_bosons: self.n_bosons,
            amps: self.amps.clone(),
        })
    }
}

/// Projects `site` onto the Fock state `|k>`; returns the renormalized
/// post-selected state and the outcome probability.
pub fn project_site(state: &RegisterState, site: usize, k: usize) -> Result<(RegisterState, f64)> {
    state.check_site(site)?;
    if k > state.n_bosons {
        return Err(Error::Argument(format!(
            "k = {k} exceeds N = {}",
            state.n_bosons
        )));
    }
    let projected: Vec<C64> = state
        .amps
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            if state.site_index(i, site) == k {
                a
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    let p = norm_sqr(&projected);
    if p < 1e-14 {
        return Err(Error::ZeroProbability(p));
    }
    let s = p.sqrt().recip();
    Ok((
        RegisterState {
            n_bosons: state.n_bosons,
            n_sites: state.n_sites,
            amps: projected.into_iter().map(|a| a * s).collect(),
        },
        p,
    ))
}
