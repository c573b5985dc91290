//! Reference computations written directly from the closed forms, sharing no
//! code with the library beyond the complex type.
#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use rand::Rng;

pub fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `sqrt(C(N,k)) alpha^k beta^(N-k)` for `k = 0..=N`.
pub fn coherent(alpha: C64, beta: C64, n: usize) -> Vec<C64> {
    (0..=n)
        .map(|k| alpha.powu(k as u32) * beta.powu((n - k) as u32) * binom(n, k).sqrt())
        .collect()
}

pub fn kron(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x * y))
        .collect()
}

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn fidelity(a: &[C64], b: &[C64]) -> f64 {
    inner(a, b).norm()
}

/// Uniformly random Bloch-sphere amplitudes with random global phase.
pub fn random_qubit(rng: &mut impl Rng) -> (C64, C64) {
    let cos_theta: f64 = rng.random_range(-1.0..1.0);
    let half = cos_theta.acos() / 2.0;
    let p1: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let p2: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    (
        C64::from_polar(half.cos(), p1),
        C64::from_polar(half.sin(), p2),
    )
}

/// `e^{-i (2k1-N)(2k2-N) t} |+>|+>` written out amplitude by amplitude.
pub fn entangler_state(n: usize, t: f64) -> Vec<C64> {
    let c = |k: usize| (binom(n, k) / 2f64.powi(n as i32)).sqrt();
    let s = |k: usize| 2.0 * k as f64 - n as f64;
    let mut out = Vec::with_capacity((n + 1) * (n + 1));
    for k1 in 0..=n {
        for k2 in 0..=n {
            out.push(C64::from_polar(c(k1) * c(k2), -s(k1) * s(k2) * t));
        }
    }
    out
}

/// Entropy in bits of the first factor of a `d1 x d2` bipartite pure state,
/// from its Schmidt coefficients.
pub fn schmidt_entropy(amps: &[C64], d1: usize, d2: usize) -> f64 {
    let psi = DMatrix::from_row_slice(d1, d2, amps);
    let sv = psi.svd(false, false).singular_values;
    sv.iter()
        .map(|s| s * s)
        .filter(|&p| p > 1e-14)
        .map(|p| -p * p.log2())
        .sum()
}

pub fn sz_dense(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r == c {
            C64::new(2.0 * r as f64 - n as f64, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `a^dag b + b^dag a` with `k` counting bosons in `a`.
pub fn sx_dense(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n + 1, n + 1, |r, c| {
        let (lo, hi) = (r.min(c), r.max(c));
        if hi == lo + 1 {
            C64::new(((lo + 1) as f64 * (n - lo) as f64).sqrt(), 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// `-i a^dag b + i b^dag a`.
pub fn sy_dense(n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r == c + 1 {
            C64::new(0.0, -((r as f64) * (n - c) as f64).sqrt())
        } else if c == r + 1 {
            C64::new(0.0, ((c as f64) * (n - r) as f64).sqrt())
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// Places `op` on `site` (1-based) of `m` sites, site 1 slowest.
pub fn on_site(op: &DMatrix<C64>, site: usize, m: usize) -> DMatrix<C64> {
    let d = op.nrows();
    let id = DMatrix::<C64>::identity(d, d);
    let mut acc = DMatrix::<C64>::identity(1, 1);
    for s in 1..=m {
        acc = acc.kronecker(if s == site { op } else { &id });
    }
    acc
}

pub fn expect_dense(op: &DMatrix<C64>, psi: &[C64]) -> C64 {
    let v = nalgebra::DVector::from_column_slice(psi);
    (v.adjoint() * op * &v)[(0, 0)]
}
