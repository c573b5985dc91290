//! Fock-basis states, Schwinger-boson spin operators and their multi-site
//! composition.
//!
//! Conventions used throughout the crate:
//!
//! * `|k>` holds `k` bosons in mode `a` and `N - k` in mode `b`, so
//!   `S^z |k> = (2k - N) |k>` and `|1, 0>>` is `k = N`.
//! * Registers are ordered with site 1 as the slowest-varying index, i.e. the
//!   flat index is `sum_n k_n (N+1)^(M-n)`.
//! * `S^x = a^dag b + b^dag a`, `S^y = -i a^dag b + i b^dag a`, `S^z = a^dag a - b^dag b`,
//!   so `[S^i, S^j] = 2i eps_ijk S^k` and `S^+ = S^x + i S^y = 2 a^dag b`.

mod density;
mod operator;
pub mod sparse;
mod state;

use std::fmt;
use std::str::FromStr;

pub use density::DensityMatrix;
pub use operator::{HermitianEigen, Operator, HERMITIAN_TOL};
pub use state::{
    coherent_qubit_state, dim_cap, project_site, register_dim, set_dim_cap, QubitAmplitudes,
    RegisterState, DEFAULT_DIM_CAP,
};

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            "z" | "Z" => Ok(Axis::Z),
            other => Err(Error::Argument(format!("unknown axis '{other}'"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::X => "x",
            Axis::Y => "y",
            Axis::Z => "z",
        })
    }
}

/// Binomial coefficient as a float; exact for the sizes used here.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `a^dag b` on the `(N+1)`-dimensional space: `<k+1| a^dag b |k> = sqrt((k+1)(N-k))`.
fn a_dag_b(n: usize) -> Vec<(usize, usize, f64)> {
    (0..n)
        .map(|k| (k + 1, k, (((k + 1) * (n - k)) as f64).sqrt()))
        .collect()
}

/// Schwinger spin operator `S^axis` for `N` bosons.
pub fn spin_operator(axis: Axis, n_bosons: usize) -> Result<Operator> {
    state::check_n(n_bosons)?;
    let d = n_bosons + 1;
    Ok(match axis {
        Axis::Z => Operator::from_real_diagonal((0..d).map(|k| 2.0 * k as f64 - n_bosons as f64)),
        Axis::X => Operator::from_triplets(
            d,
            a_dag_b(n_bosons)
                .into_iter()
                .flat_map(|(r, c, v)| [(r, c, C64::new(v, 0.0)), (c, r, C64::new(v, 0.0))])
                .collect(),
        ),
        Axis::Y => Operator::from_triplets(
            d,
            a_dag_b(n_bosons)
                .into_iter()
                .flat_map(|(r, c, v)| [(r, c, C64::new(0.0, -v)), (c, r, C64::new(0.0, v))])
                .collect(),
        ),
    })
}

/// `S^+ = S^x + i S^y = 2 a^dag b`.
pub fn raising_operator(n_bosons: usize) -> Result<Operator> {
    state::check_n(n_bosons)?;
    Ok(Operator::from_triplets(
        n_bosons + 1,
        a_dag_b(n_bosons)
            .into_iter()
            .map(|(r, c, v)| (r, c, C64::new(2.0 * v, 0.0)))
            .collect(),
    ))
}

/// `S^- = (S^+)^dag`.
pub fn lowering_operator(n_bosons: usize) -> Result<Operator> {
    Ok(raising_operator(n_bosons)?.adjoint())
}

/// Places a single-site operator on `site` (1-based) of an `M`-site register.
pub fn embed(op: &Operator, site: usize, n_sites: usize, n_bosons: usize) -> Result<Operator> {
    embed_product(&[(site, op.clone())], n_sites, n_bosons)
}

/// Kronecker product of single-site operators on distinct sites, identity elsewhere.
pub fn embed_product(
    factors: &[(usize, Operator)],
    n_sites: usize,
    n_bosons: usize,
) -> Result<Operator> {
    state::check_n(n_bosons)?;
    let d = n_bosons + 1;
    register_dim(n_bosons, n_sites)?;
    let mut slots: Vec<Option<&Operator>> = vec![None; n_sites];
    for (site, op) in factors {
        if *site == 0 || *site > n_sites {
            return Err(Error::Argument(format!(
                "site {site} outside 1..={n_sites}"
            )));
        }
        if op.dim() != d {
            return Err(Error::Dimension {
                expected: d,
                found: op.dim(),
            });
        }
        if slots[site - 1].is_some() {
            return Err(Error::DuplicateSite(*site));
        }
        slots[site - 1] = Some(op);
    }
    let id = Operator::identity(d);
    let mut out = Operator::identity(1);
    for slot in slots {
        out = out.kron(slot.unwrap_or(&id));
    }
    Ok(out)
}

/// `prod_n S^(axis_n)_(site_n)` on an `M`-site register.
pub fn operator_product(
    ops: &[(Axis, usize)],
    n_sites: usize,
    n_bosons: usize,
) -> Result<Operator> {
    let factors = ops
        .iter()
        .map(|&(axis, site)| Ok((site, spin_operator(axis, n_bosons)?)))
        .collect::<Result<Vec<_>>>()?;
    embed_product(&factors, n_sites, n_bosons)
}

/// `sum_i c_i O_i`.
pub fn operator_sum(terms: &[(C64, Operator)]) -> Result<Operator> {
    let (first, rest) = terms
        .split_first()
        .ok_or_else(|| Error::Argument("operator_sum needs at least one term".into()))?;
    if !(first.0.re.is_finite() && first.0.im.is_finite()) {
        return Err(Error::Argument("non-finite coefficient".into()));
    }
    let mut acc = first.1.scaled(first.0);
    for (c, op) in rest {
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(Error::Argument("non-finite coefficient".into()));
        }
        acc = acc.add(&op.scaled(*c))?;
    }
    Ok(acc)
}

/// `<psi| op |psi>`.
pub fn expectation(state: &RegisterState, op: &Operator) -> Result<C64> {
    if op.dim() != state.dim() {
        return Err(Error::Dimension {
            expected: state.dim(),
            found: op.dim(),
        });
    }
    Ok(state::inner(state.amps(), &op.apply(state.amps())))
}

/// `(<S^2> - <S>^2) / N^2` for `S = S^axis_site`.
pub fn spin_variance(state: &RegisterState, axis: Axis, site: usize) -> Result<f64> {
    let n = state.n_bosons();
    let s = embed(&spin_operator(axis, n)?, site, state.n_sites(), n)?;
    let s_psi = s.apply(state.amps());
    let mean = state::inner(state.amps(), &s_psi).re;
    let second: f64 = s_psi.iter().map(|v| v.norm_sqr()).sum();
    Ok((second - mean * mean) / (n * n) as f64)
}
