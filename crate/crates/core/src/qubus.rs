//! Two bosonic qubits coupled through a shared photon mode.
//!
//! Each site carries three modes `a`, `b`, `c` holding exactly `N` bosons. The
//! qubit lives in `a`/`b`; `c` is an auxiliary level reached from `b` by
//! absorbing a bus photon and from `a` by a classical pulse. Site states are
//! ordered lexicographically in `(n_a, n_b, n_c)`; the full space is
//! `site 1 ⊗ site 2 ⊗ photon(0..=cutoff)` with the photon index fastest.
//!
//! Energies: `b` sits at `-omega0/2`, `c` at `+omega0/2`. The pulse is described
//! in its own rotating frame, which places `a` at `omega0/2 - delta_pulse` so that
//! the `a -> c` drive is detuned by `delta_pulse` (see [`BusParams::pulse_detuning`]).

use std::collections::HashMap;

use crate::spin::{
    dim_cap, embed_product, lowering_operator, raising_operator, Operator, RegisterState,
};
use crate::{Error, Result, C64};

/// Maximum photon-cutoff occupation tolerated before the truncation is refused.
pub const CUTOFF_POPULATION_TOL: f64 = 1e-3;

/// Number of evenly spaced samples used to monitor photon populations.
const MONITOR_SAMPLES: usize = 64;

#[derive(Debug, Clone, PartialEq)]
pub struct BusParams {
    /// `b -> c` transition energy.
    pub omega0: f64,
    /// Photon energy.
    pub omega: f64,
    /// Site-bus coupling.
    pub g: f64,
    /// Pulse amplitude on `a <-> c`.
    pub pulse: f64,
    pub n_bosons: usize,
    pub photon_cutoff: usize,
    pub t_final: f64,
    /// Detuning of the pulse from the bare `c` level. `None` picks
    /// [`BusParams::default_pulse_detuning`].
    pub pulse_detuning: Option<f64>,
}

impl BusParams {
    /// Parameters in the frame rotating at the photon frequency (`omega = 0`),
    /// cutoff 2 and the default pulse detuning.
    pub fn with_detuning(n_bosons: usize, delta: f64, g: f64, pulse: f64, t_final: f64) -> Self {
        BusParams {
            omega0: delta,
            omega: 0.0,
            g,
            pulse,
            n_bosons,
            photon_cutoff: 2,
            t_final,
            pulse_detuning: None,
        }
    }

    /// `Delta = omega0 - omega`.
    pub fn delta(&self) -> f64 {
        self.omega0 - self.omega
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_bosons < 1 {
            return Err(Error::Argument("boson number N must be at least 1".into()));
        }
        if self.photon_cutoff < 1 {
            return Err(Error::Cutoff(format!(
                "photon cutoff {} must be at least 1",
                self.photon_cutoff
            )));
        }
        let finite = [self.omega0, self.omega, self.g, self.pulse, self.t_final];
        if finite.iter().any(|v| !v.is_finite()) {
            return Err(Error::Argument("bus parameters must be finite".into()));
        }
        if self.delta() <= 0.0 {
            return Err(Error::Argument(format!(
                "detuning omega0 - omega = {} must be positive",
                self.delta()
            )));
        }
        if self.t_final < 0.0 {
            return Err(Error::Argument("t_final must be non-negative".into()));
        }
        if let Some(d) = self.pulse_detuning {
            if !d.is_finite() {
                return Err(Error::Argument("pulse detuning must be finite".into()));
            }
        }
        Ok(())
    }

    /// Human-readable notes about parameters outside the elimination regime.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        let scale = 5.0 * self.g.abs() * (self.n_bosons as f64).sqrt();
        if self.delta() < scale {
            out.push(format!(
                "detuning {} is below 5 g sqrt(N) = {scale}; the effective model is not expected to hold",
                self.delta()
            ));
        }
        out
    }

    /// Effective exchange constant `g^2 Omega / Delta^2`.
    pub fn effective_coupling(&self) -> f64 {
        self.g * self.g * self.pulse / (self.delta() * self.delta())
    }

    /// Pulse detuning measured from the bus-dressed `c` level.
    ///
    /// Two-photon exchange through `c` and the bus has amplitude
    /// `g^2 Omega^2 / (delta^2 Delta)` per `a`-`b` transfer (in single-boson
    /// units). Choosing `delta = sqrt(Omega Delta) / 2` makes it equal to
    /// `g^2 Omega / Delta^2` in `S^±` units.
    pub fn default_pulse_detuning(&self) -> f64 {
        (self.pulse.abs() * self.delta()).sqrt() / 2.0
    }

    /// Pulse detuning from the bare `c` level. The bus pushes `c` down by
    /// `g^2 N / (Delta - delta)`; the default rule compensates for that shift.
    pub fn pulse_detuning(&self) -> f64 {
        match self.pulse_detuning {
            Some(d) => d,
            None => {
                let dp = self.default_pulse_detuning();
                dp - self.g * self.g * self.n_bosons as f64 / (self.delta() - dp)
            }
        }
    }

    fn level_energies(&self) -> [f64; 3] {
        let half = self.omega0 / 2.0;
        [half - self.pulse_detuning(), -half, half]
    }
}

/// Basis bookkeeping for the bus space.
#[derive(Debug, Clone)]
pub struct BusSpace {
    n_bosons: usize,
    photon_cutoff: usize,
    site_states: Vec<[usize; 3]>,
    site_index: HashMap<[usize; 3], usize>,
}

impl BusSpace {
    pub fn new(n_bosons: usize, photon_cutoff: usize) -> Result<Self> {
        let mut site_states = Vec::new();
        for na in 0..=n_bosons {
            for nb in 0..=n_bosons - na {
                site_states.push([na, nb, n_bosons - na - nb]);
            }
        }
        debug_assert!(site_states.windows(2).all(|w| w[0] < w[1]));
        let site_index = site_states
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i))
            .collect();
        let space = BusSpace {
            n_bosons,
            photon_cutoff,
            site_states,
            site_index,
        };
        if space.dim() > dim_cap() {
            return Err(Error::DimensionCap {
                dim: space.dim(),
                cap: dim_cap(),
            });
        }
        Ok(space)
    }

    /// Per-site occupations `(n_a, n_b, n_c)`, ascending lexicographically.
    pub fn site_states(&self) -> &[[usize; 3]] {
        &self.site_states
    }

    pub fn site_dim(&self) -> usize {
        self.site_states.len()
    }

    pub fn photon_levels(&self) -> usize {
        self.photon_cutoff + 1
    }

    pub fn dim(&self) -> usize {
        self.site_dim() * self.site_dim() * self.photon_levels()
    }

    pub fn index(&self, site1: [usize; 3], site2: [usize; 3], photons: usize) -> Option<usize> {
        if photons > self.photon_cutoff {
            return None;
        }
        let i1 = *self.site_index.get(&site1)?;
        let i2 = *self.site_index.get(&site2)?;
        Some((i1 * self.site_dim() + i2) * self.photon_levels() + photons)
    }

    /// `(site1, site2, photons)` of a flat index.
    pub fn decompose(&self, idx: usize) -> ([usize; 3], [usize; 3], usize) {
        let p = idx % self.photon_levels();
        let rest = idx / self.photon_levels();
        (
            self.site_states[rest / self.site_dim()],
            self.site_states[rest % self.site_dim()],
            p,
        )
    }

    /// Flat bus index of register basis state `|k_1, k_2>` (c empty, photon vacuum).
    fn register_index(&self, k1: usize, k2: usize) -> usize {
        let n = self.n_bosons;
        self.index([k1, n - k1, 0], [k2, n - k2, 0], 0)
            .expect("register states lie in the bus space")
    }
}

/// Amplitudes over a [`BusSpace`].
#[derive(Debug, Clone)]
pub struct BusState {
    space: BusSpace,
    amps: Vec<C64>,
}

impl BusState {
    /// Places a two-site register state into the bus space with `c` empty and
    /// no photons.
    pub fn embed(register: &RegisterState, space: &BusSpace) -> Result<Self> {
        if register.n_sites() != 2 || register.n_bosons() != space.n_bosons {
            return Err(Error::Dimension {
                expected: (space.n_bosons + 1).pow(2),
                found: register.dim(),
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); space.dim()];
        for (idx, &a) in register.amps().iter().enumerate() {
            let k1 = register.site_index(idx, 1);
            let k2 = register.site_index(idx, 2);
            amps[space.register_index(k1, k2)] = a;
        }
        Ok(BusState {
            space: space.clone(),
            amps,
        })
    }

    pub fn space(&self) -> &BusSpace {
        &self.space
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    /// Register component (c empty, photon vacuum), not renormalized.
    pub fn project(&self) -> RegisterState {
        let n = self.space.n_bosons;
        let mut out = Vec::with_capacity((n + 1) * (n + 1));
        for k1 in 0..=n {
            for k2 in 0..=n {
                out.push(self.amps[self.space.register_index(k1, k2)]);
            }
        }
        RegisterState::from_raw(n, 2, out)
    }

    /// Probability of each photon number `0..=cutoff`.
    pub fn photon_distribution(&self) -> Vec<f64> {
        let levels = self.space.photon_levels();
        let mut dist = vec![0.0; levels];
        for (i, a) in self.amps.iter().enumerate() {
            dist[i % levels] += a.norm_sqr();
        }
        dist
    }
}

fn site_ladder(space: &BusSpace, from: usize, to: usize) -> Vec<(usize, usize, f64)> {
    // to^dag from on one site
    let mut out = Vec::new();
    for (col, s) in space.site_states.iter().enumerate() {
        if s[from] == 0 {
            continue;
        }
        let mut t = *s;
        t[from] -= 1;
        t[to] += 1;
        let v = ((s[from] * t[to]) as f64).sqrt();
        out.push((space.site_index[&t], col, v));
    }
    out
}

fn build_on(space: &BusSpace, params: &BusParams, pulse: f64) -> Operator {
    let sd = space.site_dim();
    let pl = space.photon_levels();
    let [ea, eb, ec] = params.level_energies();
    let mut t: Vec<(usize, usize, C64)> = Vec::new();
    let re = |v: f64| C64::new(v, 0.0);

    for idx in 0..space.dim() {
        let (s1, s2, p) = space.decompose(idx);
        let e = |s: [usize; 3]| ea * s[0] as f64 + eb * s[1] as f64 + ec * s[2] as f64;
        let diag = e(s1) + e(s2) + params.omega * p as f64;
        if diag != 0.0 {
            t.push((idx, idx, re(diag)));
        }
    }

    let flat = |i1: usize, i2: usize, p: usize| (i1 * sd + i2) * pl + p;
    let mut hop = |pairs: &[(usize, usize, f64)], site: usize, dp: isize, coupling: f64| {
        if coupling == 0.0 {
            return;
        }
        for &(row, col, v) in pairs {
            for other in 0..sd {
                for p in 0..pl {
                    let q = p as isize + dp;
                    if q < 0 || q as usize >= pl {
                        continue;
                    }
                    let q = q as usize;
                    // photon factor: p^dag raises p -> p+1 with sqrt(p+1); p lowers with sqrt(p)
                    let pf = match dp {
                        1 => ((p + 1) as f64).sqrt(),
                        -1 => (p as f64).sqrt(),
                        _ => 1.0,
                    };
                    let (r, c) = if site == 1 {
                        (flat(row, other, q), flat(col, other, p))
                    } else {
                        (flat(other, row, q), flat(other, col, p))
                    };
                    let amp = re(coupling * v * pf);
                    t.push((r, c, amp));
                    t.push((c, r, amp));
                }
            }
        }
    };

    // g F^+ p, with F^+ = c^dag b; its adjoint g F^- p^dag comes from the mirror entry
    let c_from_b = site_ladder(space, 1, 2);
    // Omega c^dag a plus Hermitian conjugate
    let c_from_a = site_ladder(space, 0, 2);
    for site in [1, 2] {
        hop(&c_from_b, site, -1, params.g);
        hop(&c_from_a, site, 0, pulse);
    }
    Operator::from_triplets(space.dim(), t)
}

/// Full Hamiltonian on the bus space: level energies, photon energy,
/// `g Σ (F^-_n p^dag + F^+_n p)` and `Omega Σ (c^dag_n a_n + h.c.)`.
pub fn build_bus_hamiltonian(params: &BusParams) -> Result<Operator> {
    params.validate()?;
    let space = BusSpace::new(params.n_bosons, params.photon_cutoff)?;
    Ok(build_on(&space, params, params.pulse))
}

/// `g^2 Omega / Delta^2 (S^+_1 S^-_2 + S^-_1 S^+_2)` on the two-site register.
pub fn effective_hamiltonian(params: &BusParams) -> Result<Operator> {
    params.validate()?;
    let n = params.n_bosons;
    let (up, down) = (raising_operator(n)?, lowering_operator(n)?);
    let forward = embed_product(&[(1, up.clone()), (2, down.clone())], 2, n)?;
    let backward = embed_product(&[(1, down), (2, up)], 2, n)?;
    Ok(forward
        .add(&backward)?
        .scaled(C64::new(params.effective_coupling(), 0.0)))
}

/// Outcome of running the full and effective models side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct BusComparison {
    /// `|<effective|projected>|`, with the projected full-model state taken as is.
    pub fidelity: f64,
    /// Population outside the register subspace at the final time.
    pub leaked_population: f64,
    /// Largest probability of at least one photon over the monitored samples.
    pub max_photon_population: f64,
    /// Largest probability of the top photon level over the monitored samples.
    pub cutoff_population: f64,
}

impl BusComparison {
    pub fn infidelity(&self) -> f64 {
        1.0 - self.fidelity
    }
}

struct Propagator {
    vectors: nalgebra::DMatrix<C64>,
    values: Vec<f64>,
    coeffs: nalgebra::DVector<C64>,
}

impl Propagator {
    fn new(h: &Operator, x: &[C64]) -> Result<Self> {
        let eig = h.eigen()?;
        let coeffs = eig.vectors.adjoint() * nalgebra::DVector::from_column_slice(x);
        Ok(Propagator {
            vectors: eig.vectors.clone(),
            values: eig.values.clone(),
            coeffs,
        })
    }

    fn at(&self, t: f64) -> Vec<C64> {
        let mut c = self.coeffs.clone();
        for (ci, &l) in c.iter_mut().zip(&self.values) {
            *ci *= C64::from_polar(1.0, -l * t);
        }
        (&self.vectors * c).as_slice().to_vec()
    }
}

/// Evolves the embedded `initial` under the full bus Hamiltonian for time `t`,
/// and compares the register projection with evolution under
/// [`effective_hamiltonian`].
///
/// The bare `a`/`b` level phases are removed from the projected state before
/// comparing, so both sides live in the same interaction picture.
pub fn compare_effective(
    params: &BusParams,
    initial: &RegisterState,
    t: f64,
) -> Result<BusComparison> {
    params.validate()?;
    if !(0.0..=params.t_final).contains(&t) {
        return Err(Error::Argument(format!(
            "comparison time {t} outside [0, {}]",
            params.t_final
        )));
    }
    let space = BusSpace::new(params.n_bosons, params.photon_cutoff)?;
    let start = BusState::embed(initial, &space)?;
    let h = build_on(&space, params, params.pulse);
    let prop = Propagator::new(&h, &start.amps)?;

    let mut max_photon: f64 = 0.0;
    let mut cutoff: f64 = 0.0;
    let mut last = start.clone();
    for i in 0..=MONITOR_SAMPLES {
        let s = t * i as f64 / MONITOR_SAMPLES as f64;
        let state = BusState {
            space: space.clone(),
            amps: prop.at(s),
        };
        let dist = state.photon_distribution();
        max_photon = max_photon.max(1.0 - dist[0]);
        cutoff = cutoff.max(dist[space.photon_cutoff]);
        last = state;
    }
    if cutoff > CUTOFF_POPULATION_TOL {
        return Err(Error::Cutoff(format!(
            "population {cutoff:e} reached photon level {}",
            space.photon_cutoff
        )));
    }

    let n = params.n_bosons;
    let [ea, eb, _] = params.level_energies();
    let projected = last.project();
    let mut amps = projected.amps().to_vec();
    for (idx, a) in amps.iter_mut().enumerate() {
        let k1 = projected.site_index(idx, 1);
        let k2 = projected.site_index(idx, 2);
        let e = ea * (k1 + k2) as f64 + eb * (2 * n - k1 - k2) as f64;
        *a *= C64::from_polar(1.0, e * t);
    }
    let leaked = 1.0 - amps.iter().map(|a| a.norm_sqr()).sum::<f64>();

    let heff = effective_hamiltonian(params)?;
    let reference = crate::dynamics::evolve_amplitudes(initial.amps(), &heff, t)?;
    let overlap: C64 = reference.iter().zip(&amps).map(|(r, a)| r.conj() * a).sum();
    Ok(BusComparison {
        fidelity: overlap.norm(),
        leaked_population: leaked.max(0.0),
        max_photon_population: max_photon,
        cutoff_population: cutoff,
    })
}

/// One constant-amplitude stretch of the pulse.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSegment {
    pub pulse: f64,
    pub duration: f64,
}

/// Evolves a bus state through piecewise-constant pulse segments. The pulse
/// detuning stays the one implied by `params`.
pub fn evolve_segments(
    params: &BusParams,
    state: &BusState,
    segments: &[PulseSegment],
) -> Result<BusState> {
    params.validate()?;
    let space = state.space.clone();
    if space.n_bosons != params.n_bosons || space.photon_cutoff != params.photon_cutoff {
        return Err(Error::Argument(
            "bus state does not match parameters".into(),
        ));
    }
    let mut amps = state.amps.clone();
    for seg in segments {
        if !(seg.duration >= 0.0 && seg.duration.is_finite() && seg.pulse.is_finite()) {
            return Err(Error::Argument(format!("invalid pulse segment {seg:?}")));
        }
        let h = build_on(&space, params, seg.pulse);
        amps = crate::dynamics::evolve_amplitudes(&amps, &h, seg.duration)?;
    }
    Ok(BusState { space, amps })
}

/// Short-time exchange rate of the full model: starting from `|k_1=1, k_2=0>`,
/// returns `asin(sqrt(P)) / t` where `P` is the population transferred to
/// `|0, 1>`. The effective model gives `4 N g^2 Omega / Delta^2`.
pub fn exchange_rate(params: &BusParams, t: f64) -> Result<f64> {
    params.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Argument(format!("time {t} must be positive")));
    }
    let n = params.n_bosons;
    let space = BusSpace::new(n, params.photon_cutoff)?;
    let start = BusState::embed(&RegisterState::fock(n, &[1, 0])?, &space)?;
    let h = build_on(&space, params, params.pulse);
    let amps = crate::dynamics::evolve_amplitudes(&start.amps, &h, t)?;
    let p = amps[space.register_index(0, 1)].norm_sqr();
    Ok(p.sqrt().min(1.0).asin() / t)
}
