//! Uniform harmonic-oscillator chain controlled through its first site.
//!
//! Drift `H0 = omega sum_j a_j^+ a_j + g1 sum_j (a_j a_{j+1}^+ + h.c.)
//! + g2 sum_j (a_j a_{j+1} + h.c.)`, controls `H1 = omega1 a_1^+ a_1` and
//! `H2 = chi (a_1^2 + a_1^+2)`.

mod forms;
mod identities;

pub use forms::ModeForm;
pub use identities::{
    verify_supplemental_identities, verify_with_coefficients, IdentityCoefficients, IdentityRecord, IdentityReport,
};

use serde::{Deserialize, Serialize};

use crate::closure::{closure, default_max_rounds, max_passivity_defect, rank_criterion, RankReport};
use crate::error::{Error, Result};
use crate::evolution::ControlModel;
use crate::hamiltonian::{from_terms, HamiltonianTerm, QuadraticHamiltonian, SymplecticGenerator};
use crate::symplectic::ModeCount;
use crate::williamson::DEFAULT_DEFINITENESS_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainSpec {
    pub n: ModeCount,
    pub omega: f64,
    pub g1: f64,
    pub g2: f64,
    pub omega1: f64,
    pub chi: f64,
}

impl ChainSpec {
    pub fn new(n: usize, omega: f64, g1: f64, g2: f64, omega1: f64, chi: f64) -> Result<Self> {
        let spec = Self { n: ModeCount::new(n)?, omega, g1, g2, omega1, chi };
        spec.validate()?;
        Ok(spec)
    }

    /// `omega = omega1 = chi = 1`, `g1 = g2 = 0.2`.
    pub fn canonical(n: usize) -> Result<Self> {
        Self::new(n, 1.0, 0.2, 0.2, 1.0, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("omega", self.omega), ("g1", self.g1), ("g2", self.g2), ("omega1", self.omega1), ("chi", self.chi)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite")));
            }
        }
        if !(self.omega > 0.0) {
            return Err(Error::InvalidParameter(format!("omega must be positive, got {}", self.omega)));
        }
        Ok(())
    }

    /// Renormalized couplings `(g1 / omega, g2 / omega)`.
    pub fn g_tilde(&self) -> (f64, f64) {
        (self.g1 / self.omega, self.g2 / self.omega)
    }
}

/// Which control Hamiltonians act on site 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ControlSet {
    /// Rotation `H1` and squeezing `H2`.
    Full,
    /// Rotation `H1` only.
    RotationOnly,
}

pub(crate) fn drift_terms(spec: &ChainSpec) -> Vec<HamiltonianTerm> {
    let n = spec.n.get();
    let mut terms: Vec<_> = (1..=n).map(|j| HamiltonianTerm::number(j, spec.omega)).collect();
    for j in 1..n {
        terms.push(HamiltonianTerm::hop(j, j + 1, spec.g1));
        terms.push(HamiltonianTerm::pair(j, j + 1, spec.g2));
    }
    terms
}

pub fn build_chain(spec: &ChainSpec) -> Result<ControlModel> {
    spec.validate()?;
    let n = spec.n;
    let drift = from_terms(n, &drift_terms(spec), "H0")?;
    let rotation = from_terms(n, &[HamiltonianTerm::number(1, spec.omega1)], "H1")?;
    let squeeze = from_terms(n, &[HamiltonianTerm::squeeze(1, spec.chi)], "H2")?;
    ControlModel::new(drift, vec![rotation, squeeze])
}

/// Generators of the drift and the selected controls.
pub fn chain_generators(spec: &ChainSpec, controls: ControlSet) -> Result<Vec<SymplecticGenerator>> {
    let model = build_chain(spec)?;
    let mut gens = vec![model.drift().generator()];
    let used = match controls {
        ControlSet::Full => model.controls(),
        ControlSet::RotationOnly => &model.controls()[..1],
    };
    gens.extend(used.iter().map(QuadraticHamiltonian::generator));
    Ok(gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PositivityCheck {
    /// `g~1 + g~2 < 1/2` with both positive.
    pub sufficient: bool,
    /// Smallest eigenvalue of the drift is positive.
    pub actual: bool,
    pub min_eigenvalue: f64,
}

pub fn positivity_condition(spec: &ChainSpec) -> Result<PositivityCheck> {
    let drift = from_terms(spec.n, &drift_terms(spec), "H0")?;
    let (t1, t2) = spec.g_tilde();
    let min_eigenvalue = drift.min_eigenvalue();
    Ok(PositivityCheck { sufficient: t1 > 0.0 && t2 > 0.0 && t1 + t2 < 0.5, actual: min_eigenvalue > 0.0, min_eigenvalue })
}

/// Weights of the combinations `H0`, `H0 + alpha H1`, `H0 + beta H1 + delta H2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TripleParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
}

impl Default for TripleParams {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 1.0, delta: 0.5 }
    }
}

impl TripleParams {
    /// `alpha omega1 > 0` and `0 < delta chi < beta omega1`.
    pub fn validate(&self, spec: &ChainSpec) -> Result<()> {
        for (name, v) in [("alpha", self.alpha), ("beta", self.beta), ("delta", self.delta)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite")));
            }
        }
        let a = self.alpha * spec.omega1;
        if !(a > 0.0) {
            return Err(Error::Constraint(format!("alpha omega1 = {a} must be positive")));
        }
        let (d, b) = (self.delta * spec.chi, self.beta * spec.omega1);
        if !(d > 0.0) {
            return Err(Error::Constraint(format!("delta chi = {d} must be positive")));
        }
        if !(d < b) {
            return Err(Error::Constraint(format!("delta chi = {d} must be below beta omega1 = {b}")));
        }
        Ok(())
    }
}

/// The three combinations, each checked positive definite.
pub fn positive_triple(spec: &ChainSpec, p: &TripleParams) -> Result<[QuadraticHamiltonian; 3]> {
    p.validate(spec)?;
    let model = build_chain(spec)?;
    let (h0, h1, h2) = (model.drift(), &model.controls()[0], &model.controls()[1]);
    let triple = [
        h0.clone().with_label("H0"),
        QuadraticHamiltonian::linear_combination(&[(1.0, h0), (p.alpha, h1)], "H0 + alpha H1")?,
        QuadraticHamiltonian::linear_combination(&[(1.0, h0), (p.beta, h1), (p.delta, h2)], "H0 + beta H1 + delta H2")?,
    ];
    for h in &triple {
        h.require_positive_definite(DEFAULT_DEFINITENESS_TOL)?;
    }
    Ok(triple)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Controllable,
    RankOnly,
    NotEstablished,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TripleOutcome {
    pub params: TripleParams,
    pub valid: bool,
    pub min_eigenvalues: Vec<f64>,
    pub closure_dimension: Option<usize>,
    pub closure_matches: bool,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ControllabilityReport {
    pub spec: ChainSpec,
    pub controls: ControlSet,
    pub tolerance: f64,
    pub rank: RankReport,
    pub bracket_depth: usize,
    pub passive: bool,
    pub max_passivity_defect: f64,
    pub positivity: PositivityCheck,
    pub triple: TripleOutcome,
    pub verdict: Verdict,
}

/// Closure, rank test, positivity and the positive triple for one chain.
pub fn controllability_report(spec: &ChainSpec, controls: ControlSet, p: &TripleParams, tol: f64) -> Result<ControllabilityReport> {
    let gens = chain_generators(spec, controls)?;
    let rounds = default_max_rounds(spec.n);
    let sub = closure(&gens, tol, rounds)?;
    let rank = rank_criterion(&sub);
    let defect = max_passivity_defect(&sub);
    let positivity = positivity_condition(spec)?;

    let triple = match controls {
        ControlSet::RotationOnly => TripleOutcome {
            params: *p,
            valid: false,
            min_eigenvalues: Vec::new(),
            closure_dimension: None,
            closure_matches: false,
            failure: Some("no squeezing control, the triple is not defined".into()),
        },
        ControlSet::Full => match positive_triple(spec, p) {
            Ok(hs) => {
                let tg: Vec<_> = hs.iter().map(QuadraticHamiltonian::generator).collect();
                let dim = closure(&tg, tol, rounds)?.dimension();
                TripleOutcome {
                    params: *p,
                    valid: true,
                    min_eigenvalues: hs.iter().map(QuadraticHamiltonian::min_eigenvalue).collect(),
                    closure_dimension: Some(dim),
                    closure_matches: dim == sub.dimension(),
                    failure: None,
                }
            }
            Err(e @ (Error::Constraint(_) | Error::NotPositiveDefinite { .. })) => TripleOutcome {
                params: *p,
                valid: false,
                min_eigenvalues: Vec::new(),
                closure_dimension: None,
                closure_matches: false,
                failure: Some(e.to_string()),
            },
            Err(e) => return Err(e),
        },
    };

    let verdict = match (rank.rank_criterion_met, triple.valid && triple.closure_matches) {
        (true, true) => Verdict::Controllable,
        (true, false) => Verdict::RankOnly,
        _ => Verdict::NotEstablished,
    };
    Ok(ControllabilityReport {
        spec: *spec,
        controls,
        tolerance: tol,
        bracket_depth: sub.bracket_depth_reached(),
        passive: defect <= tol,
        max_passivity_defect: defect,
        rank,
        positivity,
        triple,
        verdict,
    })
}
