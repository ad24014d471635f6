//! Williamson normal form `A = V D V^T` of positive-definite Hamiltonians and
//! spectral certificates for `A Omega`.

use faer::Mat;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::QuadraticHamiltonian;
use crate::symplectic::{sorted_symmetric_eigen, symmetric_function, symplectic_defect, symplectic_form, ModeCount, RealMatrix};

/// Default relative threshold for positive definiteness.
pub const DEFAULT_DEFINITENESS_TOL: f64 = 1e-10;

/// Reconstruction residual allowed, relative to `||A||_F`.
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Eigenvector-matrix condition number above which `A Omega` is reported
/// non-diagonalizable.
pub const CONDITION_CAP: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct WilliamsonDecomposition {
    pub n: ModeCount,
    /// Symplectic `V` with `A = V D V^T`.
    pub v: RealMatrix,
    /// Symplectic eigenvalues, ascending.
    pub nu: Vec<f64>,
    /// `||A - V D V^T||_F`.
    pub residual: f64,
    /// `||V Omega V^T - Omega||_F`.
    pub symplectic_defect: f64,
}

impl WilliamsonDecomposition {
    /// `diag(nu1, nu1, ..., nun, nun)`.
    pub fn normal_form(&self) -> RealMatrix {
        RealMatrix::from_fn(self.n.dim(), self.n.dim(), |r, c| if r == c { self.nu[r / 2] } else { 0.0 })
    }

    pub fn reconstruct(&self) -> RealMatrix {
        &self.v * self.normal_form() * self.v.transpose()
    }
}

/// Eigen-spectrum of `A Omega` for symmetric `A` of any signature.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumCertificate {
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
    /// `max_real_part <= tol * max(1, ||A Omega||_F)`.
    pub purely_imaginary: bool,
    pub diagonalizable: bool,
    /// 2-norm condition number of the unit-column eigenvector matrix (infinite if singular).
    pub diagonalizer_condition: f64,
}

fn to_faer(m: &RealMatrix) -> Mat<f64> {
    Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn eigenvalues_of(m: &RealMatrix) -> Result<Vec<Complex64>> {
    to_faer(m).eigenvalues().map_err(|_| Error::Eigen)
}

/// Symplectic eigenvalues of a positive-definite symmetric matrix from the
/// spectrum `{+-i nu_j}` of `A Omega`.
pub fn symplectic_spectrum(a: &RealMatrix, what: &str, tol: f64) -> Result<Vec<f64>> {
    let h = QuadraticHamiltonian::new(a.clone(), what)?;
    h.require_positive_definite(tol)?;
    let a_omega = a * symplectic_form(h.modes());
    let mut imag: Vec<f64> = eigenvalues_of(&a_omega)?.iter().map(|z| z.im.abs()).collect();
    imag.sort_by(f64::total_cmp);
    Ok(imag.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect())
}

pub fn symplectic_eigenvalues(h: &QuadraticHamiltonian, tol: f64) -> Result<Vec<f64>> {
    symplectic_spectrum(h.matrix(), h.label(), tol)
}

/// Williamson decomposition via `K = A^{1/2} Omega A^{1/2}`.
///
/// With `O^T K O = diag(nu_j J)`, `J = [[0, 1], [-1, 0]]`, the matrix
/// `V = A^{1/2} O D^{-1/2}` is symplectic and `A = V D V^T`.
pub fn williamson_decompose(h: &QuadraticHamiltonian, tol: f64) -> Result<WilliamsonDecomposition> {
    h.require_positive_definite(tol)?;
    let n = h.modes();
    let dim = n.dim();
    let a = h.matrix();
    let omega = symplectic_form(n);
    let root = symmetric_function(a, f64::sqrt);
    let k = &root * &omega * &root;
    let k = (&k - k.transpose()) * 0.5;

    // K^T K has eigenvalues nu_j^2, each twice. Within each eigenspace, pair a
    // fresh vector x with K x / nu; the pair spans a K-invariant plane.
    // Projections of the momentum axes are tried first so that diagonal
    // inputs yield diagonal V.
    let (values, vecs) = sorted_symmetric_eigen(&(k.transpose() * &k));
    let scale = values.last().copied().unwrap_or(0.0).max(f64::MIN_POSITIVE);
    let mut o = RealMatrix::zeros(dim, dim);
    let mut filled = 0;
    let mut start = 0;
    while start < dim && filled < dim {
        let mut end = start + 1;
        while end < dim && values[end] - values[start] <= 1e-8 * scale {
            end += 1;
        }
        let space = vecs.columns(start, end - start).into_owned();
        let mut candidates: Vec<nalgebra::DVector<f64>> = (0..n.get())
            .map(|j| {
                let mut e = nalgebra::DVector::zeros(dim);
                e[2 * j + 1] = 1.0;
                &space * (space.transpose() * e)
            })
            .filter(|x| x.norm() > 1e-3)
            .collect();
        candidates.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
        candidates.extend(space.column_iter().map(|c| c.into_owned()));
        for mut x in candidates {
            if filled == dim {
                break;
            }
            let before = x.norm();
            for _ in 0..2 {
                for j in 0..filled {
                    let col = o.column(j);
                    let proj = col.dot(&x);
                    x.axpy(-proj, &col, 1.0);
                }
            }
            let norm = x.norm();
            if norm < 0.5 * before {
                continue;
            }
            x /= norm;
            let kx = &k * &x;
            let nu = kx.norm();
            o.set_column(filled, &(kx / nu));
            o.set_column(filled + 1, &x);
            filled += 2;
        }
        start = end;
    }
    if filled != dim {
        return Err(Error::Eigen);
    }

    let canonical = o.transpose() * &k * &o;
    let nu: Vec<f64> = (0..n.get()).map(|j| canonical[(2 * j, 2 * j + 1)]).collect();
    let mut scaled = o;
    for (j, &v) in nu.iter().enumerate() {
        let s = v.sqrt().recip();
        scaled.column_mut(2 * j).scale_mut(s);
        scaled.column_mut(2 * j + 1).scale_mut(s);
    }
    let v = &root * scaled;
    let mut dec = WilliamsonDecomposition { n, v, nu, residual: 0.0, symplectic_defect: 0.0 };
    dec.residual = (a - dec.reconstruct()).norm();
    dec.symplectic_defect = symplectic_defect(&dec.v)?;
    let bound = RESIDUAL_TOL * a.norm();
    if dec.residual > bound {
        return Err(Error::Residual { residual: dec.residual, tol: bound });
    }
    Ok(dec)
}

fn complex_condition(w: &Mat<Complex64>) -> f64 {
    match w.singular_values() {
        Ok(s) => {
            let max = s.iter().copied().fold(0.0, f64::max);
            let min = s.iter().copied().fold(f64::INFINITY, f64::min);
            if min == 0.0 || !min.is_finite() {
                f64::INFINITY
            } else {
                max / min
            }
        }
        Err(_) => f64::INFINITY,
    }
}

/// Eigenvalues of `A Omega`, their largest real part and a diagonalizability verdict.
/// Definiteness is not required.
pub fn spectrum_certificate(h: &QuadraticHamiltonian, tol: f64) -> Result<SpectrumCertificate> {
    let a_omega = h.matrix() * symplectic_form(h.modes());
    let evd = to_faer(&a_omega).eigen().map_err(|_| Error::Eigen)?;
    let eigenvalues: Vec<Complex64> = (0..a_omega.nrows()).map(|i| evd.S()[i]).collect();
    let max_real_part = eigenvalues.iter().map(|z| z.re.abs()).fold(0.0, f64::max);

    let u = evd.U();
    let mut w = Mat::<Complex64>::zeros(u.nrows(), u.ncols());
    for j in 0..u.ncols() {
        let norm = (0..u.nrows()).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt();
        for i in 0..u.nrows() {
            w[(i, j)] = if norm > 0.0 { u[(i, j)] / norm } else { u[(i, j)] };
        }
    }
    let condition = complex_condition(&w);
    Ok(SpectrumCertificate {
        eigenvalues,
        max_real_part,
        purely_imaginary: max_real_part <= tol * a_omega.norm().max(1.0),
        diagonalizable: condition.is_finite() && condition <= CONDITION_CAP,
        diagonalizer_condition: condition,
    })
}
