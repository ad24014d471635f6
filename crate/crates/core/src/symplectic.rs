//! Real-matrix utilities on phase space: the symplectic form, the matrix
//! exponential, commutators and symplecticity tests.
//!
//! Quadratures are interleaved, `R = (q1, p1, ..., qn, pn)`, everywhere in
//! the crate.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real matrix used for `A`, `S`, `G`, `Omega`, `V` and covariance matrices.
pub type RealMatrix = DMatrix<f64>;

/// Number of bosonic modes. Phase-space matrices are `2n x 2n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct ModeCount(usize);

impl ModeCount {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroModes);
        }
        Ok(Self(n))
    }

    /// Infers the mode count from a square matrix of even dimension.
    pub fn of_matrix(m: &RealMatrix) -> Result<Self> {
        let (r, c) = m.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(Error::Shape {
                expected: "non-empty square matrix of even dimension".into(),
                found: format!("{r}x{c}"),
            });
        }
        Ok(Self(r / 2))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Phase-space dimension `2n`.
    pub fn dim(self) -> usize {
        2 * self.0
    }

    /// Dimension `n(2n+1)` of the full symplectic algebra.
    pub fn algebra_dim(self) -> usize {
        self.0 * (2 * self.0 + 1)
    }
}

impl TryFrom<usize> for ModeCount {
    type Error = Error;
    fn try_from(n: usize) -> Result<Self> {
        Self::new(n)
    }
}

impl From<ModeCount> for usize {
    fn from(n: ModeCount) -> usize {
        n.0
    }
}

impl std::fmt::Display for ModeCount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Block-diagonal symplectic form with `n` copies of `[[0, 1], [-1, 0]]`.
pub fn symplectic_form(n: ModeCount) -> RealMatrix {
    let mut omega = RealMatrix::zeros(n.dim(), n.dim());
    for j in 0..n.get() {
        omega[(2 * j, 2 * j + 1)] = 1.0;
        omega[(2 * j + 1, 2 * j)] = -1.0;
    }
    omega
}

pub(crate) fn ensure_square(m: &RealMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape {
            expected: "square matrix".into(),
            found: format!("{}x{}", m.nrows(), m.ncols()),
        });
    }
    Ok(())
}

pub(crate) fn ensure_same_shape(x: &RealMatrix, y: &RealMatrix) -> Result<()> {
    if x.shape() != y.shape() {
        return Err(Error::Shape {
            expected: format!("{}x{}", x.nrows(), x.ncols()),
            found: format!("{}x{}", y.nrows(), y.ncols()),
        });
    }
    Ok(())
}

pub(crate) fn ensure_finite(m: &RealMatrix) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

/// `||S Omega S^T - Omega||_F`.
pub fn symplectic_defect(s: &RealMatrix) -> Result<f64> {
    let n = ModeCount::of_matrix(s)?;
    let omega = symplectic_form(n);
    Ok((s * &omega * s.transpose() - omega).norm())
}

pub fn is_symplectic(s: &RealMatrix, tol: f64) -> Result<bool> {
    Ok(symplectic_defect(s)? <= tol)
}

/// `XY - YX`.
pub fn commutator(x: &RealMatrix, y: &RealMatrix) -> Result<RealMatrix> {
    ensure_square(x)?;
    ensure_same_shape(x, y)?;
    Ok(x * y - y * x)
}

/// `exp(G t)` by scaling and squaring with a Padé core.
pub fn expm(g: &RealMatrix, t: f64) -> Result<RealMatrix> {
    ensure_square(g)?;
    ensure_finite(g)?;
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    if t == 0.0 {
        return Ok(RealMatrix::identity(g.nrows(), g.ncols()));
    }
    let out = (g * t).exp();
    ensure_finite(&out)?;
    Ok(out)
}

/// Frobenius distance `||S - 1||_F`.
pub fn identity_distance(s: &RealMatrix) -> f64 {
    (s - RealMatrix::identity(s.nrows(), s.ncols())).norm()
}

/// Row-major nested vectors, the serialized form of matrices.
pub fn matrix_rows(m: &RealMatrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// `serialize_with` adapter writing a matrix as a list of rows.
pub fn serialize_rows<S: serde::Serializer>(m: &RealMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(matrix_rows(m))
}

/// Largest absolute entry of `M - M^T`.
pub(crate) fn asymmetry(m: &RealMatrix) -> f64 {
    (m - m.transpose()).amax()
}

/// Ascending eigenvalues and matching eigenvectors of a symmetric matrix.
pub(crate) fn sorted_symmetric_eigen(m: &RealMatrix) -> (Vec<f64>, RealMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..m.nrows()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = RealMatrix::from_fn(m.nrows(), m.ncols(), |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub(crate) fn smallest_eigenvalue(m: &RealMatrix) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.min()
}

/// Spectral norm of a symmetric matrix.
pub(crate) fn symmetric_spectral_norm(m: &RealMatrix) -> f64 {
    SymmetricEigen::new(m.clone()).eigenvalues.amax()
}

/// Applies `f` to the eigenvalues of a symmetric matrix.
pub(crate) fn symmetric_function(m: &RealMatrix, f: impl Fn(f64) -> f64) -> RealMatrix {
    let (values, q) = sorted_symmetric_eigen(m);
    let mut scaled = q.clone();
    for (j, v) in values.iter().enumerate() {
        let fv = f(*v);
        scaled.column_mut(j).scale_mut(fv);
    }
    scaled * q.transpose()
}
