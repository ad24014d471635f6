//! Dynamical recurrence of `S(t) = exp(-A Omega t)` for positive-definite `A`.
//!
//! With `A Omega = W D' W^{-1}`, `D' = diag(+-i nu_j)`, the propagator
//! distance obeys `||S(t) - 1||_F <= K ||E(t) - 1||_F` where
//! `K = ||W||_F ||W^{-1}||_F` and `||E(t) - 1||_F` is the quasi-periodic
//! [`mode_distance`]. The search screens a time grid with the mode distance
//! and refines promising cells against the true propagator distance.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::QuadraticHamiltonian;
use crate::symplectic::{expm, identity_distance};
use crate::williamson::{williamson_decompose, WilliamsonDecomposition, DEFAULT_DEFINITENESS_TOL};

pub const DEFAULT_GRID_POINTS_PER_PERIOD: usize = 16;

/// Default horizon, in units of the longest mode period.
pub const DEFAULT_HORIZON_PERIODS: f64 = 1e5;

const GOLDEN_ITERATIONS: usize = 200;

/// `sqrt(2 sum_k |exp(-i nu_k t) - 1|^2) = sqrt(8 sum_k sin^2(nu_k t / 2))`.
pub fn mode_distance(nu: &[f64], t: f64) -> f64 {
    (8.0 * nu.iter().map(|v| (0.5 * v * t).sin().powi(2)).sum::<f64>()).sqrt()
}

/// `K = ||W||_F ||W^{-1}||_F` with `W = V U`, where `U` is the block-unitary
/// diagonalizer of `D Omega`.
pub fn conditioning_bound(h: &QuadraticHamiltonian) -> Result<f64> {
    let dec = williamson_decompose(h, DEFAULT_DEFINITENESS_TOL)?;
    conditioning_bound_from(&dec)
}

pub fn conditioning_bound_from(dec: &WilliamsonDecomposition) -> Result<f64> {
    let w = diagonalizer(dec);
    let inv = w.clone().try_inverse().ok_or(Error::Eigen)?;
    Ok(w.norm() * inv.norm())
}

/// `W = V U` with `U = blockdiag((1/sqrt 2) [[1, 1], [i, -i]])`, so that
/// `A Omega = W diag(+i nu_1, -i nu_1, ...) W^{-1}`.
pub fn diagonalizer(dec: &WilliamsonDecomposition) -> DMatrix<Complex64> {
    let dim = dec.n.dim();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut u = DMatrix::<Complex64>::zeros(dim, dim);
    for j in 0..dec.n.get() {
        let (q, p) = (2 * j, 2 * j + 1);
        u[(q, q)] = Complex64::new(s, 0.0);
        u[(q, p)] = Complex64::new(s, 0.0);
        u[(p, q)] = Complex64::new(0.0, s);
        u[(p, p)] = Complex64::new(0.0, -s);
    }
    dec.v.map(|x| Complex64::new(x, 0.0)) * u
}

#[derive(Debug, Clone)]
pub struct RecurrenceQuery {
    pub hamiltonian: QuadraticHamiltonian,
    pub epsilon: f64,
    /// Recurrence must happen strictly after this time.
    pub after: f64,
    pub t_max: f64,
    pub grid_points_per_period: usize,
}

impl RecurrenceQuery {
    /// Query with the default grid density and a horizon of
    /// `DEFAULT_HORIZON_PERIODS` longest periods.
    pub fn new(hamiltonian: QuadraticHamiltonian, epsilon: f64, after: f64) -> Result<Self> {
        let nu = williamson_decompose(&hamiltonian, DEFAULT_DEFINITENESS_TOL)?.nu;
        let t_max = after + DEFAULT_HORIZON_PERIODS * TAU / nu[0];
        Ok(Self { hamiltonian, epsilon, after, t_max, grid_points_per_period: DEFAULT_GRID_POINTS_PER_PERIOD })
    }

    pub fn with_horizon(mut self, t_max: f64) -> Self {
        self.t_max = t_max;
        self
    }

    pub fn with_grid_points(mut self, points: usize) -> Self {
        self.grid_points_per_period = points;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!("epsilon must be positive, got {}", self.epsilon)));
        }
        if !(self.after >= 0.0 && self.after.is_finite()) {
            return Err(Error::InvalidParameter(format!("start time must be non-negative, got {}", self.after)));
        }
        if !(self.t_max > self.after && self.t_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "horizon {} must exceed start time {}",
                self.t_max, self.after
            )));
        }
        if self.grid_points_per_period < 8 {
            return Err(Error::InvalidParameter(format!(
                "need at least 8 grid points per period, got {}",
                self.grid_points_per_period
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecurrenceResult {
    pub found: bool,
    pub tau: f64,
    pub achieved_distance: f64,
    pub mode_distance_at_tau: f64,
    #[serde(rename = "conditioning_bound")]
    pub k: f64,
    pub best_distance_seen: f64,
    pub symplectic_eigenvalues: Vec<f64>,
}

/// Golden-section minimization of `f` on `(lo, hi)`; endpoints are never evaluated.
fn golden_min(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_ITERATIONS {
        if hi - lo <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Finds `tau > after` with `||exp(-A Omega tau) - 1||_F < epsilon`.
///
/// Grid points `k h`, `h = (2 pi / nu_max) / grid_points_per_period`, whose
/// mode distance could dip below `epsilon / K` inside the cell are refined:
/// first the mode distance is minimized locally, then the true distance.
/// Exhausting the horizon gives `found = false`.
pub fn find_recurrence(query: &RecurrenceQuery) -> Result<RecurrenceResult> {
    query.validate()?;
    let h = &query.hamiltonian;
    let dec = williamson_decompose(h, DEFAULT_DEFINITENESS_TOL)?;
    let k = conditioning_bound_from(&dec)?;
    let nu = dec.nu.clone();
    let g = h.generator().into_matrix();
    let true_distance = |t: f64| -> f64 { expm(&g, t).map(|s| identity_distance(&s)).unwrap_or(f64::INFINITY) };

    let nu_max = nu.iter().copied().fold(0.0, f64::max);
    let step = TAU / nu_max / query.grid_points_per_period as f64;
    // Lipschitz constant of the mode distance: ||E'(t)||_F = sqrt(2 sum nu^2).
    let lipschitz = (2.0 * nu.iter().map(|v| v * v).sum::<f64>()).sqrt();
    let threshold = query.epsilon / k;
    let margin = lipschitz * step;

    let mut best_true = f64::INFINITY;
    let mut best_grid = (f64::NAN, f64::INFINITY);
    let mut index = (query.after / step).floor() as u64 + 1;
    loop {
        let t = index as f64 * step;
        if t > query.t_max {
            break;
        }
        let md = mode_distance(&nu, t);
        if md < best_grid.1 {
            best_grid = (t, md);
        }
        if md < threshold + margin {
            let lo = (t - step).max(query.after);
            let hi = (t + step).min(query.t_max);
            let (t_mode, md_min) = golden_min(lo, hi, |x| mode_distance(&nu, x));
            if md_min < threshold {
                let half = 0.25 * step;
                let (t_true, d_true) = golden_min((t_mode - half).max(query.after), (t_mode + half).min(query.t_max), true_distance);
                let d_mode = true_distance(t_mode);
                let (tau, achieved) = if d_true <= d_mode { (t_true, d_true) } else { (t_mode, d_mode) };
                best_true = best_true.min(achieved);
                if achieved < query.epsilon && tau > query.after {
                    return Ok(RecurrenceResult {
                        found: true,
                        tau,
                        achieved_distance: achieved,
                        mode_distance_at_tau: mode_distance(&nu, tau),
                        k,
                        best_distance_seen: best_true,
                        symplectic_eigenvalues: nu,
                    });
                }
            }
            // skip the rest of this cell's neighbourhood
            index += 1;
        }
        index += 1;
    }

    let (t_best, _) = best_grid;
    if t_best.is_finite() {
        best_true = best_true.min(true_distance(t_best));
    }
    Ok(RecurrenceResult {
        found: false,
        tau: t_best,
        achieved_distance: if t_best.is_finite() { true_distance(t_best) } else { f64::INFINITY },
        mode_distance_at_tau: best_grid.1,
        k,
        best_distance_seen: best_true,
        symplectic_eigenvalues: nu,
    })
}

/// Minimum of `||exp(-A Omega t) - 1||_F` over `t = T i / samples`, `i = 1..=samples`.
/// `A` only needs to be symmetric.
pub fn non_recurrence_witness(h: &QuadraticHamiltonian, horizon: f64, samples: usize) -> Result<f64> {
    if samples == 0 || !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidParameter("need a positive horizon and at least one sample".into()));
    }
    let g = h.generator().into_matrix();
    let mut best = f64::INFINITY;
    for i in 1..=samples {
        let t = horizon * i as f64 / samples as f64;
        best = best.min(identity_distance(&expm(&g, t)?));
    }
    Ok(best)
}
