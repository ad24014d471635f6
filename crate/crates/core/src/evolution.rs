//! Piecewise-constant control of `dS/dt = -A(f, t) Omega S` and the induced
//! action `sigma -> S sigma S^T` on covariance matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hamiltonian::QuadraticHamiltonian;
use crate::symplectic::{expm, symplectic_defect, symplectic_form, ModeCount, RealMatrix};
use crate::williamson::{symplectic_spectrum, DEFAULT_DEFINITENESS_TOL};

/// Symplecticity required of propagators fed to [`evolve_covariance`].
pub const COVARIANCE_SYMPLECTIC_TOL: f64 = 1e-8;

/// Drift `A0` plus switchable controls `A1..Am`.
#[derive(Debug, Clone)]
pub struct ControlModel {
    drift: QuadraticHamiltonian,
    controls: Vec<QuadraticHamiltonian>,
}

impl ControlModel {
    pub fn new(drift: QuadraticHamiltonian, controls: Vec<QuadraticHamiltonian>) -> Result<Self> {
        let n = drift.modes();
        if let Some(bad) = controls.iter().find(|c| c.modes() != n) {
            return Err(Error::Shape { expected: format!("{n} modes"), found: format!("{} modes", bad.modes()) });
        }
        Ok(Self { drift, controls })
    }

    pub fn modes(&self) -> ModeCount {
        self.drift.modes()
    }

    pub fn drift(&self) -> &QuadraticHamiltonian {
        &self.drift
    }

    pub fn controls(&self) -> &[QuadraticHamiltonian] {
        &self.controls
    }

    /// `A0 + sum_k f_k A_k`.
    pub fn hamiltonian_at(&self, f: &[f64]) -> Result<RealMatrix> {
        if f.len() != self.controls.len() {
            return Err(Error::Schedule(format!(
                "expected {} control values, got {}",
                self.controls.len(),
                f.len()
            )));
        }
        let mut a = self.drift.matrix().clone();
        for (fk, c) in f.iter().zip(&self.controls) {
            if !fk.is_finite() {
                return Err(Error::Schedule("control value is not finite".into()));
            }
            a += c.matrix() * *fk;
        }
        Ok(a)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub duration: f64,
    pub controls: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ControlSchedule {
    pub segments: Vec<Segment>,
}

impl ControlSchedule {
    pub fn new(segments: Vec<Segment>) -> Self {
        Self { segments }
    }

    pub fn then(mut self, other: &ControlSchedule) -> Self {
        self.segments.extend(other.segments.iter().cloned());
        self
    }
}

/// `S = exp(-A_N Omega d_N) ... exp(-A_1 Omega d_1)`; later segments act on the left.
pub fn propagate(model: &ControlModel, schedule: &ControlSchedule) -> Result<RealMatrix> {
    let n = model.modes();
    let omega = symplectic_form(n);
    let mut s = RealMatrix::identity(n.dim(), n.dim());
    for (i, seg) in schedule.segments.iter().enumerate() {
        if !(seg.duration > 0.0 && seg.duration.is_finite()) {
            return Err(Error::Schedule(format!("segment {i} has non-positive duration {}", seg.duration)));
        }
        let a = model.hamiltonian_at(&seg.controls).map_err(|e| match e {
            Error::Schedule(msg) => Error::Schedule(format!("segment {i}: {msg}")),
            other => other,
        })?;
        s = expm(&(-(a * &omega)), seg.duration)? * s;
    }
    Ok(s)
}

/// `||S Omega S^T - Omega||_F`.
pub fn audit_symplecticity(s: &RealMatrix) -> Result<f64> {
    symplectic_defect(s)
}

/// Gaussian covariance matrix, vacuum `= 1/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceState {
    sigma: RealMatrix,
}

impl CovarianceState {
    /// Wraps a symmetric matrix without checking the uncertainty relation.
    pub fn new(sigma: RealMatrix) -> Result<Self> {
        let h = QuadraticHamiltonian::new(sigma, "covariance")?;
        Ok(Self { sigma: h.matrix().clone() })
    }

    /// Also requires `sigma + i Omega / 2 >= 0` within `tol`.
    pub fn new_physical(sigma: RealMatrix, tol: f64) -> Result<Self> {
        let state = Self::new(sigma)?;
        let lowest = state.uncertainty_eigenvalue();
        if lowest < -tol {
            return Err(Error::NotPositiveDefinite { what: "sigma + i Omega / 2".into(), eigenvalue: lowest });
        }
        Ok(state)
    }

    pub fn vacuum(n: ModeCount) -> Self {
        Self { sigma: RealMatrix::identity(n.dim(), n.dim()) * 0.5 }
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.sigma
    }

    pub fn modes(&self) -> ModeCount {
        ModeCount::of_matrix(&self.sigma).expect("validated on construction")
    }

    /// Smallest eigenvalue of the Hermitian matrix `sigma + i Omega / 2`.
    pub fn uncertainty_eigenvalue(&self) -> f64 {
        let omega = symplectic_form(self.modes());
        let m = nalgebra::DMatrix::<Complex64>::from_fn(self.sigma.nrows(), self.sigma.ncols(), |r, c| {
            Complex64::new(self.sigma[(r, c)], 0.5 * omega[(r, c)])
        });
        nalgebra::SymmetricEigen::new(m).eigenvalues.min()
    }

    pub fn symplectic_eigenvalues(&self) -> Result<Vec<f64>> {
        symplectic_spectrum(&self.sigma, "covariance", DEFAULT_DEFINITENESS_TOL)
    }

    /// The 2x2 block of mode `j` (1-based).
    pub fn mode_block(&self, j: usize) -> RealMatrix {
        self.sigma.view((2 * (j - 1), 2 * (j - 1)), (2, 2)).into_owned()
    }
}

/// `sigma -> S sigma S^T` for symplectic `S`.
pub fn evolve_covariance(state: &CovarianceState, s: &RealMatrix) -> Result<CovarianceState> {
    if s.shape() != state.sigma.shape() {
        return Err(Error::Shape {
            expected: format!("{0}x{0}", state.sigma.nrows()),
            found: format!("{}x{}", s.nrows(), s.ncols()),
        });
    }
    let defect = symplectic_defect(s)?;
    if defect > COVARIANCE_SYMPLECTIC_TOL {
        return Err(Error::NotSymplectic { defect });
    }
    let out = s * &state.sigma * s.transpose();
    Ok(CovarianceState { sigma: (&out + out.transpose()) * 0.5 })
}
