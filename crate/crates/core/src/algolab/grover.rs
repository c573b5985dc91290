use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::dynamics::{evolve_amplitudes, Trajectory};
use crate::spin::{
    coherent_qubit_state, embed, expectation, register_dim, spin_operator, Axis, Operator,
    RegisterState,
};
use crate::{Error, Result, C64};

/// Sampled Grover oscillation and the two frequency estimates.
#[derive(Debug, Clone)]
pub struct GroverResult {
    /// Columns `sz_over_N_site1 ..= sz_over_N_siteM`.
    pub trajectory: Trajectory,
    /// Time of the first maximum of `<S^z_1>/N`, refined by a parabola through
    /// the sample and its neighbours.
    pub t_peak: f64,
    /// `pi / (2 t_peak)`.
    pub omega_est: f64,
    /// `sqrt(f''(0) / 2)` with `f = <S^z_1>/N`, from the double commutator.
    pub omega_commutator: f64,
}

/// `(1 + sign S^axis / N) / 2` on one site: the projector-like factor whose
/// top eigenvalue 1 sits on the extremal coherent state.
fn half_shifted(
    axis: Axis,
    sign: f64,
    site: usize,
    n_sites: usize,
    n_bosons: usize,
) -> Result<Operator> {
    let s = spin_operator(axis, n_bosons)?.scaled(C64::new(sign / n_bosons as f64, 0.0));
    let f = s
        .add(&Operator::identity(n_bosons + 1))?
        .scaled(C64::new(0.5, 0.0));
    embed(&f, site, n_sites, n_bosons)
}

fn product_over_sites(axis: Axis, signs: &[f64], n_bosons: usize) -> Result<Operator> {
    let m = signs.len();
    let mut acc: Option<Operator> = None;
    for (i, &sign) in signs.iter().enumerate() {
        let f = half_shifted(axis, sign, i + 1, m, n_bosons)?;
        acc = Some(match acc {
            None => f,
            Some(a) => a.matmul(&f)?,
        });
    }
    Ok(acc.expect("at least one site"))
}

/// `N^2 prod_n (1 + S^x_n/N)/2 + N^2 prod_n (1 + s_n S^z_n/N)/2`, where
/// `s_n = +1` for a `true` solution bit and `-1` otherwise.
pub fn build_grover_hamiltonian(
    n_sites: usize,
    n_bosons: usize,
    solution: &[bool],
) -> Result<Operator> {
    if n_sites < 1 {
        return Err(Error::Argument("Grover needs at least one site".into()));
    }
    if solution.len() != n_sites {
        return Err(Error::Dimension {
            expected: n_sites,
            found: solution.len(),
        });
    }
    register_dim(n_bosons, n_sites)?;
    let n2 = C64::new((n_bosons * n_bosons) as f64, 0.0);
    let x = product_over_sites(Axis::X, &vec![1.0; n_sites], n_bosons)?;
    let signs: Vec<f64> = solution
        .iter()
        .map(|&b| if b { 1.0 } else { -1.0 })
        .collect();
    let z = product_over_sites(Axis::Z, &signs, n_bosons)?;
    Ok(x.add(&z)?.scaled(n2))
}

/// `prod_n |1/sqrt2, 1/sqrt2>>_n`.
pub fn grover_initial_state(n_sites: usize, n_bosons: usize) -> Result<RegisterState> {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let plus = coherent_qubit_state(h, h, n_bosons)?;
    RegisterState::product(&vec![plus; n_sites])
}

/// `d^2 <S^z_site / N> / dt^2` at `t = 0`, i.e. `-<[H, [H, S^z_site / N]]>`.
pub fn grover_second_derivative(h: &Operator, state: &RegisterState, site: usize) -> Result<f64> {
    let z = embed(
        &spin_operator(Axis::Z, state.n_bosons())?,
        site,
        state.n_sites(),
        state.n_bosons(),
    )?
    .scaled(C64::new(1.0 / state.n_bosons() as f64, 0.0));
    let inner = h.commutator(&z)?;
    let outer = h.commutator(&inner)?;
    Ok(-expectation(state, &outer)?.re)
}

/// `1.5 pi sqrt(2^M) / N`.
pub fn default_grover_t_max(n_sites: usize, n_bosons: usize) -> f64 {
    1.5 * PI * 2f64.powf(n_sites as f64 / 2.0) / n_bosons as f64
}

/// First interior local maximum, refined by quadratic interpolation.
fn first_peak(times: &[f64], values: &[f64]) -> Result<f64> {
    for i in 1..values.len().saturating_sub(1) {
        let (y0, y1, y2) = (values[i - 1], values[i], values[i + 1]);
        if y1 > y0 && y1 >= y2 {
            let curvature = y0 - 2.0 * y1 + y2;
            let dt = times[i] - times[i - 1];
            let shift = if curvature < 0.0 {
                0.5 * (y0 - y2) / curvature * dt
            } else {
                0.0
            };
            return Ok(times[i] + shift);
        }
    }
    Err(Error::NoPeak)
}

/// Evolves `|X>` under the Grover Hamiltonian with the all-ones solution and
/// samples `<S^z_n>/N` at `steps + 1` evenly spaced times on `[0, t_max]`.
pub fn run_grover(
    n_sites: usize,
    n_bosons: usize,
    t_max: f64,
    steps: usize,
) -> Result<GroverResult> {
    run_grover_with_solution(n_sites, n_bosons, &vec![true; n_sites], t_max, steps)
}

pub fn run_grover_with_solution(
    n_sites: usize,
    n_bosons: usize,
    solution: &[bool],
    t_max: f64,
    steps: usize,
) -> Result<GroverResult> {
    if steps < 100 {
        return Err(Error::Argument(format!(
            "need at least 100 steps, got {steps}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::Argument(format!("t_max {t_max} must be positive")));
    }
    let h = build_grover_hamiltonian(n_sites, n_bosons, solution)?;
    let psi = grover_initial_state(n_sites, n_bosons)?;
    let d = n_bosons + 1;
    let n = n_bosons as f64;

    let times: Vec<f64> = (0..=steps)
        .map(|i| t_max * i as f64 / steps as f64)
        .collect();
    let mut columns = vec![Vec::with_capacity(times.len()); n_sites];
    for &t in &times {
        let amps = evolve_amplitudes(psi.amps(), &h, t)?;
        let mut acc = vec![0.0; n_sites];
        for (idx, a) in amps.iter().enumerate() {
            let p = a.norm_sqr();
            let mut rest = idx;
            for site in (0..n_sites).rev() {
                let k = rest % d;
                rest /= d;
                acc[site] += p * (2.0 * k as f64 - n);
            }
        }
        for (col, v) in columns.iter_mut().zip(acc) {
            col.push(v / n);
        }
    }

    let t_peak = first_peak(&times, &columns[0])?;
    let d2 = grover_second_derivative(&h, &psi, 1)?;
    let labels = (1..=n_sites)
        .map(|s| format!("sz_over_N_site{s}"))
        .collect();
    Ok(GroverResult {
        trajectory: Trajectory::new(times, labels, columns)?,
        t_peak,
        omega_est: PI / (2.0 * t_peak),
        omega_commutator: (d2 / 2.0).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    #[test]
    fn single_qubit_two_projector_spectrum() {
        let h = build_grover_hamiltonian(1, 1, &[true]).unwrap();
        let mut ev = h.eigen().unwrap().values.clone();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] - (1.0 - FRAC_1_SQRT_2)).abs() < 1e-12);
        assert!((ev[1] - (1.0 + FRAC_1_SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn qubit_case_is_sum_of_projectors() {
        for m in 1..=3 {
            let h = build_grover_hamiltonian(m, 1, &vec![true; m]).unwrap();
            let x = grover_initial_state(m, 1).unwrap();
            let xv = DVector::from_column_slice(x.amps());
            let mut proj = &xv * xv.adjoint();
            // |ANS> is all k = 1, the last flat index
            let last = proj.nrows() - 1;
            proj[(last, last)] += C64::new(1.0, 0.0);
            let diff = (h.to_dense() - proj)
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            assert!(diff < 1e-10, "M={m}: {diff}");
        }
    }

    #[test]
    fn second_derivative_matches_formula() {
        for m in 1..=2 {
            for n in [1, 2, 5] {
                let h = build_grover_hamiltonian(m, n, &vec![true; m]).unwrap();
                let psi = grover_initial_state(m, n).unwrap();
                let d2 = grover_second_derivative(&h, &psi, 1).unwrap();
                let expected = 2.0 * (n * n) as f64 / 2f64.powi(m as i32);
                assert!((d2 / expected - 1.0).abs() < 1e-10, "M={m} N={n}: {d2}");
            }
        }
    }

    #[test]
    fn qubit_grover_reaches_solution() {
        let r = run_grover(1, 1, default_grover_t_max(1, 1), 400).unwrap();
        let z = r.trajectory.column("sz_over_N_site1").unwrap();
        assert!(z.iter().cloned().fold(f64::MIN, f64::max) > 0.99);
        // H = |+><+| + |1><1| has gap sqrt2, so <Z> first peaks at pi / sqrt2
        assert!((r.t_peak - PI / 2f64.sqrt()).abs() < 1e-4, "{}", r.t_peak);
    }

    #[test]
    fn peak_search() {
        let t: Vec<f64> = (0..=100).map(|i| i as f64 * 0.05).collect();
        let v: Vec<f64> = t.iter().map(|x| -(x - 2.01f64).powi(2)).collect();
        assert!((first_peak(&t, &v).unwrap() - 2.01).abs() < 1e-12);
        let mono: Vec<f64> = t.clone();
        assert!(matches!(first_peak(&t, &mono), Err(Error::NoPeak)));
    }
}
