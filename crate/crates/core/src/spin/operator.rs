use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};

use super::sparse::CsrMatrix;
use crate::{Error, Result, C64};

/// Tolerance used when an operator claims to be Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub(crate) enum Repr {
    Diagonal(Vec<C64>),
    Sparse(CsrMatrix),
    Dense(DMatrix<C64>),
}

/// Eigendecomposition `H = V diag(values) V^dagger` of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

/// A square complex operator on a register (or enlarged) Hilbert space.
///
/// Diagonal operators are stored as their diagonal, ladder-type operators in
/// CSR form, and anything else densely. The eigendecomposition of a Hermitian
/// operator is computed on first use and cached on the value, so clones made
/// after that share the result.
#[derive(Clone)]
pub struct Operator {
    repr: Repr,
    hermitian_hint: bool,
    eig: OnceLock<Arc<HermitianEigen>>,
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.repr {
            Repr::Diagonal(_) => "diagonal",
            Repr::Sparse(_) => "sparse",
            Repr::Dense(_) => "dense",
        };
        f.debug_struct("Operator")
            .field("dim", &self.dim())
            .field("repr", &kind)
            .field("hermitian_hint", &self.hermitian_hint)
            .finish()
    }
}

impl Operator {
    fn from_repr(repr: Repr, hermitian_hint: bool) -> Self {
        Operator {
            repr,
            hermitian_hint,
            eig: OnceLock::new(),
        }
    }

    pub fn from_diagonal(diag: Vec<C64>) -> Self {
        let herm = diag.iter().all(|d| d.im.abs() < HERMITIAN_TOL);
        Self::from_repr(Repr::Diagonal(diag), herm)
    }

    pub fn from_real_diagonal(diag: impl IntoIterator<Item = f64>) -> Self {
        Self::from_repr(
            Repr::Diagonal(diag.into_iter().map(|d| C64::new(d, 0.0)).collect()),
            true,
        )
    }

    pub fn from_sparse(m: CsrMatrix) -> Self {
        if m.is_diagonal() {
            return Self::from_diagonal(m.diagonal());
        }
        let mut op = Self::from_repr(Repr::Sparse(m), false);
        op.hermitian_hint = op.hermiticity_defect() < HERMITIAN_TOL;
        op
    }

    pub fn from_dense(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        let mut op = Self::from_repr(Repr::Dense(m), false);
        op.hermitian_hint = op.hermiticity_defect() < HERMITIAN_TOL;
        Ok(op)
    }

    pub fn from_triplets(dim: usize, triplets: Vec<(usize, usize, C64)>) -> Self {
        Self::from_sparse(CsrMatrix::from_triplets(dim, triplets))
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_real_diagonal(std::iter::repeat_n(1.0, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_real_diagonal(std::iter::repeat_n(0.0, dim))
    }

    pub fn dim(&self) -> usize {
        match &self.repr {
            Repr::Diagonal(d) => d.len(),
            Repr::Sparse(m) => m.dim(),
            Repr::Dense(m) => m.nrows(),
        }
    }

    pub fn hermitian_hint(&self) -> bool {
        self.hermitian_hint
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(self.repr, Repr::Diagonal(_))
    }

    /// The diagonal, when the operator is stored as one.
    pub fn as_diagonal(&self) -> Option<&[C64]> {
        match &self.repr {
            Repr::Diagonal(d) => Some(d),
            _ => None,
        }
    }

    pub(crate) fn to_csr(&self) -> CsrMatrix {
        match &self.repr {
            Repr::Diagonal(d) => CsrMatrix::from_triplets(
                d.len(),
                d.iter().enumerate().map(|(i, &v)| (i, i, v)).collect(),
            ),
            Repr::Sparse(m) => m.clone(),
            Repr::Dense(m) => CsrMatrix::from_dense(m),
        }
    }

    pub fn to_dense(&self) -> DMatrix<C64> {
        match &self.repr {
            Repr::Diagonal(d) => DMatrix::from_diagonal(&DVector::from_column_slice(d)),
            Repr::Sparse(m) => m.to_dense(),
            Repr::Dense(m) => m.clone(),
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> C64 {
        match &self.repr {
            Repr::Diagonal(d) => {
                if r == c {
                    d[r]
                } else {
                    C64::new(0.0, 0.0)
                }
            }
            Repr::Sparse(m) => m.get(r, c),
            Repr::Dense(m) => m[(r, c)],
        }
    }

    /// `op |x>`.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.dim(), "operator/vector dimension mismatch");
        match &self.repr {
            Repr::Diagonal(d) => d.iter().zip(x).map(|(a, b)| a * b).collect(),
            Repr::Sparse(m) => m.matvec(x),
            Repr::Dense(m) => (m * DVector::from_column_slice(x)).as_slice().to_vec(),
        }
    }

    pub fn adjoint(&self) -> Operator {
        let repr = match &self.repr {
            Repr::Diagonal(d) => Repr::Diagonal(d.iter().map(|v| v.conj()).collect()),
            Repr::Sparse(m) => Repr::Sparse(m.adjoint()),
            Repr::Dense(m) => Repr::Dense(m.adjoint()),
        };
        Self::from_repr(repr, self.hermitian_hint)
    }

    pub fn scaled(&self, s: C64) -> Operator {
        let repr = match &self.repr {
            Repr::Diagonal(d) => Repr::Diagonal(d.iter().map(|v| v * s).collect()),
            Repr::Sparse(m) => Repr::Sparse(m.scaled(s)),
            Repr::Dense(m) => Repr::Dense(m * s),
        };
        Self::from_repr(repr, self.hermitian_hint && s.im == 0.0)
    }

    /// Kronecker product `self ⊗ other`; `self` is the slower-varying factor.
    pub fn kron(&self, other: &Operator) -> Operator {
        let herm = self.hermitian_hint && other.hermitian_hint;
        match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) => {
                let d = a
                    .iter()
                    .flat_map(|x| b.iter().map(move |y| x * y))
                    .collect();
                Self::from_repr(Repr::Diagonal(d), herm)
            }
            _ => Self::from_repr(Repr::Sparse(self.to_csr().kron(&other.to_csr())), herm),
        }
    }

    /// Entrywise sum of two operators of equal dimension.
    pub fn add(&self, other: &Operator) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let herm = self.hermitian_hint && other.hermitian_hint;
        let repr = match (&self.repr, &other.repr) {
            (Repr::Diagonal(a), Repr::Diagonal(b)) => {
                Repr::Diagonal(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Repr::Dense(a), _) => Repr::Dense(a + other.to_dense()),
            (_, Repr::Dense(b)) => Repr::Dense(self.to_dense() + b),
            _ => {
                let t = self
                    .to_csr()
                    .triplets()
                    .chain(other.to_csr().triplets())
                    .collect();
                let m = CsrMatrix::from_triplets(self.dim(), t);
                if m.is_diagonal() {
                    Repr::Diagonal(m.diagonal())
                } else {
                    Repr::Sparse(m)
                }
            }
        };
        Ok(Self::from_repr(repr, herm))
    }

    /// Matrix product `self * other`.
    pub fn matmul(&self, other: &Operator) -> Result<Operator> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if let (Repr::Diagonal(a), Repr::Diagonal(b)) = (&self.repr, &other.repr) {
            return Ok(Self::from_diagonal(
                a.iter().zip(b).map(|(x, y)| x * y).collect(),
            ));
        }
        Operator::from_dense(self.to_dense() * other.to_dense())
    }

    /// `[self, other] = self*other - other*self`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        let ab = self.matmul(other)?;
        let ba = other.matmul(self)?;
        ab.add(&ba.scaled(C64::new(-1.0, 0.0)))
    }

    /// `max |A - A^dagger|` over entries.
    pub fn hermiticity_defect(&self) -> f64 {
        match &self.repr {
            Repr::Diagonal(d) => d.iter().map(|v| 2.0 * v.im.abs()).fold(0.0, f64::max),
            Repr::Sparse(m) => m
                .triplets()
                .map(|(r, c, v)| (v - m.get(c, r).conj()).norm())
                .fold(0.0, f64::max),
            Repr::Dense(m) => (m - m.adjoint())
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max),
        }
    }

    pub fn max_abs(&self) -> f64 {
        match &self.repr {
            Repr::Diagonal(d) => d.iter().map(|v| v.norm()).fold(0.0, f64::max),
            Repr::Sparse(m) => m.max_abs(),
            Repr::Dense(m) => m.iter().map(|v| v.norm()).fold(0.0, f64::max),
        }
    }

    /// Entrywise max-norm distance to another operator.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        Ok(self.add(&other.scaled(C64::new(-1.0, 0.0)))?.max_abs())
    }

    /// Errors unless the operator is Hermitian to [`HERMITIAN_TOL`] relative to its scale.
    pub fn ensure_hermitian(&self) -> Result<()> {
        let defect = self.hermiticity_defect();
        if defect > HERMITIAN_TOL * self.max_abs().max(1.0) {
            return Err(Error::NonHermitian(defect));
        }
        Ok(())
    }

    /// Cached eigendecomposition of a Hermitian operator.
    pub fn eigen(&self) -> Result<Arc<HermitianEigen>> {
        if let Some(e) = self.eig.get() {
            return Ok(e.clone());
        }
        self.ensure_hermitian()?;
        let e = Arc::new(match &self.repr {
            Repr::Diagonal(d) => HermitianEigen {
                values: d.iter().map(|v| v.re).collect(),
                vectors: DMatrix::identity(d.len(), d.len()),
            },
            _ => {
                let m = self.to_dense();
                // symmetrize to remove roundoff-level anti-Hermitian parts
                let m = (&m + m.adjoint()) * C64::new(0.5, 0.0);
                let se = m.symmetric_eigen();
                HermitianEigen {
                    values: se.eigenvalues.iter().copied().collect(),
                    vectors: se.eigenvectors,
                }
            }
        });
        Ok(self.eig.get_or_init(|| e).clone())
    }

    /// Largest eigenvalue magnitude (spectral norm) of a Hermitian operator.
    pub fn spectral_norm(&self) -> Result<f64> {
        Ok(self
            .eigen()?
            .values
            .iter()
            .map(|v| v.abs())
            .fold(0.0, f64::max))
    }
}
