//! Lie-algebra closure of a set of symplectic generators and the rank criterion.
//!
//! Generators are vectorized (row-major, length `(2n)^2`) and kept in an
//! orthonormal basis under the Frobenius inner product. New directions are
//! found by bracketing the most recently added basis elements with every seed
//! generator. A candidate is accepted when its component orthogonal to the
//! current span exceeds `tol` times a reference norm: `||g||` for a seed and
//! `||s||` for a bracket `[b, s]` with unit `b`. Measuring against the
//! operands rather than the candidate itself keeps roundoff from vanishing
//! brackets out of the basis.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hamiltonian::SymplecticGenerator;
use crate::symplectic::{symplectic_form, ModeCount, RealMatrix};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Rejected candidates with relative residual above `tol * NEAR_TOL_WINDOW`
/// are reported as borderline.
const NEAR_TOL_WINDOW: f64 = 1e-3;

pub fn default_max_rounds(n: ModeCount) -> usize {
    2 * n.algebra_dim()
}

#[derive(Debug, Clone)]
pub struct LieSubspace {
    n: ModeCount,
    basis: Vec<SymplecticGenerator>,
    vectors: Vec<DVector<f64>>,
    closed: bool,
    rounds: usize,
    tol: f64,
    borderline: Vec<f64>,
}

impl LieSubspace {
    pub fn modes(&self) -> ModeCount {
        self.n
    }

    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }

    /// Orthonormalized basis, as generators.
    pub fn basis(&self) -> &[SymplecticGenerator] {
        &self.basis
    }

    /// Orthonormalized basis, vectorized row-major.
    pub fn orthonormal_vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    /// Number of bracket rounds performed.
    pub fn bracket_depth_reached(&self) -> usize {
        self.rounds
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// Relative residuals of rejected candidates that fell within three decades below `tol`.
    pub fn borderline_residuals(&self) -> &[f64] {
        &self.borderline
    }

    /// Relative norm of the part of `v` outside the span. `v` is overwritten by that part.
    fn orthogonalize(&self, v: &mut DVector<f64>) -> f64 {
        let start = v.norm();
        if start == 0.0 {
            return 0.0;
        }
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for q in &self.vectors {
                let c = q.dot(v);
                v.axpy(-c, q, 1.0);
            }
        }
        v.norm() / start
    }

    fn try_insert(&mut self, candidate: &RealMatrix, reference: f64, source: impl FnOnce() -> String) -> bool {
        let norm = candidate.norm();
        if norm == 0.0 || !norm.is_finite() || !(reference > 0.0) {
            return false;
        }
        let mut v = vectorize(candidate) / norm;
        let residual = self.orthogonalize(&mut v) * norm / reference;
        if residual > self.tol {
            v /= v.norm();
            let g = devectorize(&v, self.n.dim());
            self.basis.push(SymplecticGenerator::from_parts(self.n, g, source()));
            self.vectors.push(v);
            true
        } else {
            if residual > self.tol * NEAR_TOL_WINDOW {
                self.borderline.push(residual);
            }
            false
        }
    }
}

fn vectorize(m: &RealMatrix) -> DVector<f64> {
    DVector::from_iterator(m.len(), m.transpose().iter().copied())
}

fn devectorize(v: &DVector<f64>, dim: usize) -> RealMatrix {
    RealMatrix::from_row_slice(dim, dim, v.as_slice())
}

/// Breadth-first Lie closure of `generators`.
///
/// Stops with `closed = true` when a round adds nothing or the dimension
/// reaches `n(2n+1)`, and with `closed = false` after `max_rounds` rounds.
pub fn closure(generators: &[SymplecticGenerator], tol: f64, max_rounds: usize) -> Result<LieSubspace> {
    let first = generators
        .first()
        .ok_or_else(|| Error::InvalidParameter("closure needs at least one generator".into()))?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::InvalidParameter(format!("closure tolerance must lie in (0, 1), got {tol}")));
    }
    let n = first.modes();
    if let Some(bad) = generators.iter().find(|g| g.modes() != n) {
        return Err(Error::Shape { expected: format!("{n} modes"), found: format!("{} modes", bad.modes()) });
    }

    let full = n.algebra_dim();
    let mut sub = LieSubspace {
        n,
        basis: Vec::new(),
        vectors: Vec::new(),
        closed: false,
        rounds: 0,
        tol,
        borderline: Vec::new(),
    };

    let mut frontier = Vec::new();
    for g in generators {
        if sub.try_insert(g.matrix(), g.matrix().norm(), || g.source().to_string()) {
            frontier.push(sub.dimension() - 1);
        }
    }

    loop {
        if frontier.is_empty() || sub.dimension() == full {
            sub.closed = true;
            break;
        }
        if sub.rounds == max_rounds {
            break;
        }
        sub.rounds += 1;
        let mut next = Vec::new();
        for &i in &frontier {
            for (k, seed) in generators.iter().enumerate() {
                let b = sub.basis[i].matrix();
                let candidate = b * seed.matrix() - seed.matrix() * b;
                if sub.try_insert(&candidate, seed.matrix().norm(), || format!("[b{i}, s{k}]")) {
                    next.push(sub.dimension() - 1);
                    if sub.dimension() == full {
                        break;
                    }
                }
            }
            if sub.dimension() == full {
                break;
            }
        }
        frontier = next;
    }
    Ok(sub)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankReport {
    pub dimension_found: usize,
    pub dimension_full: usize,
    pub rank_criterion_met: bool,
    pub closed: bool,
    pub residual_spectrum: Vec<f64>,
}

pub fn rank_criterion(sub: &LieSubspace) -> RankReport {
    let dimension_full = sub.n.algebra_dim();
    let mut residual_spectrum = sub.borderline.clone();
    residual_spectrum.sort_by(|a, b| b.total_cmp(a));
    RankReport {
        dimension_found: sub.dimension(),
        dimension_full,
        rank_criterion_met: sub.dimension() == dimension_full,
        closed: sub.closed,
        residual_spectrum,
    }
}

/// True if the component of `g` outside the span is at most `tol * ||g||`.
pub fn contains(sub: &LieSubspace, g: &SymplecticGenerator, tol: f64) -> Result<bool> {
    if g.modes() != sub.n {
        return Err(Error::Shape { expected: format!("{} modes", sub.n), found: format!("{} modes", g.modes()) });
    }
    let norm = g.matrix().norm();
    if norm == 0.0 {
        return Ok(true);
    }
    let mut v = vectorize(g.matrix()) / norm;
    Ok(sub.orthogonalize(&mut v) <= tol)
}

/// True if every basis element commutes with `Omega` to `tol`, i.e. the
/// subalgebra is passive (number conserving).
pub fn passivity_check(sub: &LieSubspace, tol: f64) -> bool {
    max_passivity_defect(sub) <= tol
}

/// Largest `||G Omega - Omega G||_F` over the orthonormal basis.
pub fn max_passivity_defect(sub: &LieSubspace) -> f64 {
    let omega = symplectic_form(sub.n);
    sub.basis
        .iter()
        .map(|g| (g.matrix() * &omega - &omega * g.matrix()).norm())
        .fold(0.0, f64::max)
}
