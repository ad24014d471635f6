//! Command implementations. Each returns the results payload and an exit
//! status; input problems surface as errors and map to status 2.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand};
use gaussctl::closure::{closure, default_max_rounds, max_passivity_defect, rank_criterion, DEFAULT_TOL};
use gaussctl::evolution::{audit_symplecticity, evolve_covariance, propagate, CovarianceState, Segment};
use gaussctl::recurrence::{find_recurrence, RecurrenceQuery, DEFAULT_GRID_POINTS_PER_PERIOD};
use gaussctl::symplectic::matrix_rows;
use gaussctl::williamson::{spectrum_certificate, williamson_decompose, DEFAULT_DEFINITENESS_TOL};
use gaussctl::{
    controllability_report, verify_supplemental_identities, ChainSpec, ControlSchedule, ControlSet, Error, TripleParams,
    Verdict,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::model::{matrix_from_rows, parse, ModelDocument, ResolvedModel, ScheduleDocument};
use crate::report::digest;

pub const AFFIRMATIVE: u8 = 0;
pub const NEGATIVE: u8 = 1;

#[derive(Debug, Subcommand, Serialize)]
#[serde(untagged)]
pub enum Command {
    /// Lie closure of drift and controls, and the rank test.
    Rank(RankArgs),
    /// Williamson normal form of one Hamiltonian.
    Williamson(WilliamsonArgs),
    /// Search for a recurrence time of exp(-A Omega t).
    Recur(RecurArgs),
    /// Propagate a piecewise-constant control schedule.
    Evolve(EvolveArgs),
    /// Controllability of the oscillator chain driven at site 1.
    Chain(ChainArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct RankArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Relative tolerance for new closure directions.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Bracket rounds; defaults to 2 n (2n + 1).
    #[arg(long)]
    pub max_rounds: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct WilliamsonArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub hamiltonian: String,
    /// Definiteness tolerance, relative to the spectral norm.
    #[arg(long, default_value_t = DEFAULT_DEFINITENESS_TOL)]
    pub tol: f64,
    /// Tolerance for the purely-imaginary spectrum verdict.
    #[arg(long, default_value_t = 1e-9)]
    pub spectrum_tol: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct RecurArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub hamiltonian: String,
    #[arg(long)]
    pub epsilon: f64,
    /// The recurrence must happen after this time.
    #[arg(long = "t-min")]
    pub t_min: f64,
    /// Search horizon; defaults to t-min plus 1e5 longest periods.
    #[arg(long = "t-max")]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS_PER_PERIOD)]
    pub grid_points: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct EvolveArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub schedule: PathBuf,
    /// Largest acceptable symplecticity defect of the propagator.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Require the initial covariance to satisfy sigma + i Omega / 2 >= 0.
    #[arg(long)]
    pub check_physical: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ChainArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.2)]
    pub g1: f64,
    #[arg(long, default_value_t = 0.2)]
    pub g2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub chi: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub delta: f64,
    /// Drop the squeezing control.
    #[arg(long)]
    pub rotation_only: bool,
    /// Require the commutator identity chain (needs n >= 3 and g1 = g2).
    #[arg(long)]
    pub identities: bool,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub identity_tol: f64,
}

pub struct Outcome {
    pub results: Value,
    pub tolerances: Value,
    pub input_digest: String,
    pub status: u8,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Rank(_) => "rank",
            Command::Williamson(_) => "williamson",
            Command::Recur(_) => "recur",
            Command::Evolve(_) => "evolve",
            Command::Chain(_) => "chain",
        }
    }

    pub fn run(&self) -> Result<Outcome> {
        match self {
            Command::Rank(a) => rank(a),
            Command::Williamson(a) => williamson(a),
            Command::Recur(a) => recur(a),
            Command::Evolve(a) => evolve(a),
            Command::Chain(a) => chain(a),
        }
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_model(path: &Path) -> Result<(Vec<u8>, ResolvedModel)> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
    let doc: ModelDocument = parse(text).with_context(|| format!("invalid model {}", path.display()))?;
    let model = doc.resolve().with_context(|| format!("invalid model {}", path.display()))?;
    Ok((bytes, model))
}

fn positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        bail!("--{name} must be a positive number, got {v}");
    }
    Ok(())
}

/// Failures of an analysis precondition: reported with status 1.
fn precondition(e: &Error) -> Option<Value> {
    match e {
        Error::NotPositiveDefinite { what, eigenvalue } => {
            Some(json!({ "error": e.to_string(), "subject": what, "smallest_eigenvalue": eigenvalue }))
        }
        Error::Residual { .. } | Error::Eigen => Some(json!({ "error": e.to_string() })),
        _ => None,
    }
}

fn rank(a: &RankArgs) -> Result<Outcome> {
    positive("tol", a.tol)?;
    let (bytes, model) = load_model(&a.model)?;
    let mut gens = vec![model.drift().generator()];
    gens.extend(model.controls().iter().map(|h| h.generator()));
    let rounds = a.max_rounds.unwrap_or_else(|| default_max_rounds(model.modes));
    let sub = closure(&gens, a.tol, rounds)?;
    let report = rank_criterion(&sub);
    let passive = (!report.rank_criterion_met).then(|| max_passivity_defect(&sub) <= a.tol);
    let status = if report.rank_criterion_met { AFFIRMATIVE } else { NEGATIVE };
    Ok(Outcome {
        results: json!({
            "modes": model.modes.get(),
            "generators": std::iter::once(model.drift()).chain(model.controls()).map(|h| h.label()).collect::<Vec<_>>(),
            "rank": report,
            "bracket_depth": sub.bracket_depth_reached(),
            "passive": passive,
            "max_passivity_defect": max_passivity_defect(&sub),
        }),
        tolerances: json!({ "closure_tol": a.tol, "max_rounds": rounds, "passivity_tol": a.tol }),
        input_digest: digest([bytes.as_slice()]),
        status,
    })
}

fn williamson(a: &WilliamsonArgs) -> Result<Outcome> {
    positive("tol", a.tol)?;
    positive("spectrum-tol", a.spectrum_tol)?;
    let (bytes, model) = load_model(&a.model)?;
    let h = model.get(&a.hamiltonian)?;
    let certificate = spectrum_certificate(h, a.spectrum_tol)?;
    let tolerances = json!({
        "definiteness_tol": a.tol,
        "residual_tol_relative": gaussctl::williamson::RESIDUAL_TOL,
        "spectrum_tol": a.spectrum_tol,
    });
    let (results, status) = match williamson_decompose(h, a.tol) {
        Ok(dec) => (
            json!({
                "hamiltonian": h.label(),
                "nu": dec.nu,
                "v": matrix_rows(&dec.v),
                "residual": dec.residual,
                "symplectic_defect": dec.symplectic_defect,
                "spectrum_certificate": certificate,
            }),
            AFFIRMATIVE,
        ),
        Err(e) => match precondition(&e) {
            Some(mut v) => {
                v["hamiltonian"] = json!(h.label());
                v["spectrum_certificate"] = serde_json::to_value(&certificate)?;
                (v, NEGATIVE)
            }
            None => return Err(e.into()),
        },
    };
    Ok(Outcome { results, tolerances, input_digest: digest([bytes.as_slice()]), status })
}

fn recur(a: &RecurArgs) -> Result<Outcome> {
    positive("epsilon", a.epsilon)?;
    if !(a.t_min >= 0.0 && a.t_min.is_finite()) {
        bail!("--t-min must be a non-negative number, got {}", a.t_min);
    }
    let (bytes, model) = load_model(&a.model)?;
    let h = model.get(&a.hamiltonian)?.clone();
    let label = h.label().to_string();
    let query = match RecurrenceQuery::new(h, a.epsilon, a.t_min) {
        Ok(q) => q.with_grid_points(a.grid_points),
        Err(e) => {
            let mut v = precondition(&e).ok_or(e)?;
            v["hamiltonian"] = json!(label);
            return Ok(Outcome {
                results: v,
                tolerances: json!({ "epsilon": a.epsilon, "definiteness_tol": DEFAULT_DEFINITENESS_TOL }),
                input_digest: digest([bytes.as_slice()]),
                status: NEGATIVE,
            });
        }
    };
    let query = match a.t_max {
        Some(t) => query.with_horizon(t),
        None => query,
    };
    let result = find_recurrence(&query).map_err(|e| match e {
        Error::InvalidParameter(m) => anyhow::anyhow!("invalid search parameters: {m}"),
        other => other.into(),
    })?;
    Ok(Outcome {
        results: json!({
            "hamiltonian": label,
            "t_min": query.after,
            "t_max": query.t_max,
            "recurrence": result,
        }),
        tolerances: json!({
            "epsilon": a.epsilon,
            "grid_points_per_period": query.grid_points_per_period,
            "definiteness_tol": DEFAULT_DEFINITENESS_TOL,
        }),
        input_digest: digest([bytes.as_slice()]),
        status: AFFIRMATIVE,
    })
}

fn evolve(a: &EvolveArgs) -> Result<Outcome> {
    positive("tol", a.tol)?;
    let (model_bytes, model) = load_model(&a.model)?;
    let sched_bytes = read(&a.schedule)?;
    let text = std::str::from_utf8(&sched_bytes).with_context(|| format!("{} is not UTF-8", a.schedule.display()))?;
    let doc: ScheduleDocument = parse(text).with_context(|| format!("invalid schedule {}", a.schedule.display()))?;
    let control_model = model.control_model()?;
    let schedule = ControlSchedule::new(
        doc.segments.iter().map(|s| Segment { duration: s.duration, controls: s.controls.clone() }).collect(),
    );
    let s = propagate(&control_model, &schedule).with_context(|| format!("schedule {} does not fit the model", a.schedule.display()))?;
    let defect = audit_symplecticity(&s)?;
    let mut status = if defect <= a.tol { AFFIRMATIVE } else { NEGATIVE };

    let covariance = match &doc.initial_covariance {
        None => Value::Null,
        Some(rows) => {
            let sigma = matrix_from_rows(rows, "initial_covariance")?;
            if sigma.nrows() != model.modes.dim() {
                bail!("initial_covariance: expected {0}x{0}, got {1}x{1}", model.modes.dim(), sigma.nrows());
            }
            let state = if a.check_physical {
                match CovarianceState::new_physical(sigma, a.tol) {
                    Ok(s) => s,
                    Err(e) => {
                        let v = precondition(&e).ok_or(e)?;
                        return Ok(Outcome {
                            results: json!({ "initial_covariance": v }),
                            tolerances: json!({ "symplectic_tol": a.tol, "physicality_tol": a.tol }),
                            input_digest: digest([model_bytes.as_slice(), sched_bytes.as_slice()]),
                            status: NEGATIVE,
                        });
                    }
                }
            } else {
                CovarianceState::new(sigma).context("initial_covariance")?
            };
            match evolve_covariance(&state, &s) {
                Ok(out) => json!({
                    "initial_symplectic_eigenvalues": state.symplectic_eigenvalues().ok(),
                    "final": matrix_rows(out.matrix()),
                    "final_symplectic_eigenvalues": out.symplectic_eigenvalues().ok(),
                    "uncertainty_eigenvalue": out.uncertainty_eigenvalue(),
                }),
                Err(e) => {
                    status = NEGATIVE;
                    json!({ "error": e.to_string() })
                }
            }
        }
    };

    let total: f64 = schedule.segments.iter().fold(0.0, |t, s| t + s.duration);
    Ok(Outcome {
        results: json!({
            "segments": schedule.segments.len(),
            "total_duration": total,
            "propagator": matrix_rows(&s),
            "symplectic_defect": defect,
            "audit_pass": defect <= a.tol,
            "covariance": covariance,
        }),
        tolerances: json!({ "symplectic_tol": a.tol, "covariance_symplectic_tol": gaussctl::evolution::COVARIANCE_SYMPLECTIC_TOL }),
        input_digest: digest([model_bytes.as_slice(), sched_bytes.as_slice()]),
        status,
    })
}

fn chain(a: &ChainArgs) -> Result<Outcome> {
    positive("tol", a.tol)?;
    positive("identity-tol", a.identity_tol)?;
    let spec = ChainSpec::new(a.n, a.omega, a.g1, a.g2, a.omega1, a.chi).context("invalid chain flags")?;
    let params = TripleParams { alpha: a.alpha, beta: a.beta, delta: a.delta };
    let controls = if a.rotation_only { ControlSet::RotationOnly } else { ControlSet::Full };

    let applicable = spec.n.get() >= 3 && a.g1 == a.g2;
    let identities = if a.identities || applicable {
        Some(verify_supplemental_identities(&spec, a.identity_tol).context("--identities")?)
    } else {
        None
    };
    let report = controllability_report(&spec, controls, &params, a.tol).context("invalid chain flags")?;

    let identities_ok = identities.as_ref().is_none_or(|r| r.all_pass);
    let status = if report.verdict == Verdict::Controllable && identities_ok { AFFIRMATIVE } else { NEGATIVE };
    let canonical = serde_json::to_vec(&json!({ "spec": spec, "triple": params, "controls": controls }))?;
    Ok(Outcome {
        results: json!({ "controllability": report, "identities": identities }),
        tolerances: json!({ "closure_tol": a.tol, "passivity_tol": a.tol, "identity_tol": a.identity_tol, "definiteness_tol": DEFAULT_DEFINITENESS_TOL }),
        input_digest: digest([canonical.as_slice()]),
        status,
    })
}
