//! The two-site bracket chain that builds every generator of `sp(4)` on sites
//! 1 and 2 from `iH0`, `iH1`, `iH2`, plus the bracket that moves a two-site
//! coupling one site further along the chain.
//!
//! Each identity has the form `lhs = scale * rhs`, where `rhs` is a fixed
//! mode-operator expression from [`ModeForm`]. The named operator handed on
//! to later identities is `lhs / scale`, so the chain stays exact for any
//! `omega`, `g`, `omega1`, `chi`; at `omega = omega1 = chi = 1` most scales
//! reduce to 1. Two scales differ from the unit-parameter folklore and were
//! checked symbolically: `T_b` carries `-omega1` and `S_b^(2)` carries `2`.

use serde::Serialize;

use super::forms::ModeForm;
use super::ChainSpec;
use crate::error::{Error, Result};
use crate::hamiltonian::{from_terms, HamiltonianTerm};
use crate::symplectic::{serialize_rows, symplectic_form, RealMatrix};

/// Every number appearing in the identity chain. Defaults come from
/// [`IdentityCoefficients::for_spec`]; tests perturb single entries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCoefficients {
    pub sa1_half: f64,
    pub sa1_scale: f64,
    pub o1_scale: f64,
    pub o2_scale: f64,
    pub ra_half: f64,
    pub ra_o2_weight: f64,
    pub ra_scale: f64,
    pub ta_ra_weight: f64,
    pub ta_scale: f64,
    pub sa2_sa1_weight: f64,
    pub sa2_scale: f64,
    pub tb_ra_weight: f64,
    pub tb_scale: f64,
    pub o3_ra_weight: f64,
    pub o3_scale: f64,
    pub rb_half: f64,
    pub rb_scale: f64,
    pub p2_half: f64,
    pub p2_h1_weight: f64,
    pub p2_scale: f64,
    pub sb2_scale: f64,
    pub long_range_scale: f64,
}

impl IdentityCoefficients {
    pub fn for_spec(spec: &ChainSpec) -> Self {
        let (w, g, w1, chi) = (spec.omega, spec.g1, spec.omega1, spec.chi);
        Self {
            sa1_half: 0.5,
            sa1_scale: w1 * chi,
            o1_scale: g * w1,
            o2_scale: w1,
            ra_half: 0.5,
            // the g dependence of [O1, iH0] cancels against 2 omega O2
            ra_o2_weight: 2.0 * w,
            ra_scale: w * w1,
            ta_ra_weight: 1.0,
            ta_scale: 1.0,
            sa2_sa1_weight: 1.0,
            sa2_scale: 1.0,
            tb_ra_weight: 1.0,
            tb_scale: -w1,
            o3_ra_weight: 2.0,
            o3_scale: w1,
            rb_half: 0.5,
            rb_scale: 1.0,
            p2_half: 0.5,
            p2_h1_weight: 2.0 / w1,
            p2_scale: 1.0,
            sb2_scale: 2.0,
            long_range_scale: 1.0,
        }
    }

    /// `(name, value)` for every coefficient, mutable.
    pub fn entries_mut(&mut self) -> Vec<(&'static str, &mut f64)> {
        vec![
            ("sa1_half", &mut self.sa1_half),
            ("sa1_scale", &mut self.sa1_scale),
            ("o1_scale", &mut self.o1_scale),
            ("o2_scale", &mut self.o2_scale),
            ("ra_half", &mut self.ra_half),
            ("ra_o2_weight", &mut self.ra_o2_weight),
            ("ra_scale", &mut self.ra_scale),
            ("ta_ra_weight", &mut self.ta_ra_weight),
            ("ta_scale", &mut self.ta_scale),
            ("sa2_sa1_weight", &mut self.sa2_sa1_weight),
            ("sa2_scale", &mut self.sa2_scale),
            ("tb_ra_weight", &mut self.tb_ra_weight),
            ("tb_scale", &mut self.tb_scale),
            ("o3_ra_weight", &mut self.o3_ra_weight),
            ("o3_scale", &mut self.o3_scale),
            ("rb_half", &mut self.rb_half),
            ("rb_scale", &mut self.rb_scale),
            ("p2_half", &mut self.p2_half),
            ("p2_h1_weight", &mut self.p2_h1_weight),
            ("p2_scale", &mut self.p2_scale),
            ("sb2_scale", &mut self.sb2_scale),
            ("long_range_scale", &mut self.long_range_scale),
        ]
    }

    /// Name of the identity a coefficient belongs to.
    pub fn identity_of(coefficient: &str) -> &'static str {
        match coefficient.split('_').next().unwrap_or("") {
            "sa1" => "S_a1",
            "o1" => "O_1",
            "o2" => "O_2",
            "ra" => "R_a",
            "ta" => "T_a",
            "sa2" => "S_a2",
            "tb" => "T_b",
            "o3" => "O_3",
            "rb" => "R_b",
            "p2" => "P_2",
            "sb2" => "S_b2",
            _ => "long_range",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityRecord {
    pub name: &'static str,
    pub statement: &'static str,
    #[serde(serialize_with = "serialize_rows")]
    pub lhs: RealMatrix,
    #[serde(serialize_with = "serialize_rows")]
    pub rhs: RealMatrix,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityReport {
    pub records: Vec<IdentityRecord>,
    pub all_pass: bool,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl IdentityReport {
    pub fn record(&self, name: &str) -> Option<&IdentityRecord> {
        self.records.iter().find(|r| r.name == name)
    }
}

/// Verifies the identity chain with the coefficients implied by `spec`.
pub fn verify_supplemental_identities(spec: &ChainSpec, tol: f64) -> Result<IdentityReport> {
    verify_with_coefficients(spec, &IdentityCoefficients::for_spec(spec), tol)
}

/// As [`verify_supplemental_identities`] with explicit coefficients.
pub fn verify_with_coefficients(spec: &ChainSpec, c: &IdentityCoefficients, tol: f64) -> Result<IdentityReport> {
    spec.validate()?;
    if spec.n.get() < 3 {
        return Err(Error::InvalidParameter(format!(
            "the identity chain needs at least 3 modes for the long-range bracket, got {}",
            spec.n
        )));
    }
    if (spec.g1 - spec.g2).abs() > 1e-12 * spec.g1.abs().max(spec.g2.abs()) {
        return Err(Error::Constraint(format!(
            "the identity chain is stated for equal hopping and pairing couplings, got g1 = {} and g2 = {}",
            spec.g1, spec.g2
        )));
    }
    for (name, v) in [("g", spec.g1), ("omega1", spec.omega1), ("chi", spec.chi)] {
        if v == 0.0 {
            return Err(Error::InvalidParameter(format!("{name} must be non-zero for the identity chain")));
        }
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {tol}")));
    }

    let n = spec.n;
    let omega = symplectic_form(n);
    // [iH_A, iH_B] = iH_C with C = B Omega A - A Omega B
    let br = |a: &RealMatrix, b: &RealMatrix| -> RealMatrix { b * &omega * a - a * &omega * b };
    let form = |f: ModeForm| f.matrix(n);

    let h0 = super::drift_terms(spec);
    let h0 = from_terms(n, &h0, "H0")?.matrix().clone();
    let h1 = from_terms(n, &[HamiltonianTerm::number(1, spec.omega1)], "H1")?.matrix().clone();
    let h2 = from_terms(n, &[HamiltonianTerm::squeeze(1, spec.chi)], "H2")?.matrix().clone();

    let mut records = Vec::new();
    let mut check = |name, statement, lhs: RealMatrix, scale: f64, rhs: RealMatrix| -> RealMatrix {
        let expected = &rhs * scale;
        let residual = (&lhs - &expected).norm();
        let normalized = &lhs / scale;
        records.push(IdentityRecord { name, statement, lhs, rhs: expected, residual });
        normalized
    };

    let sa1 = check(
        "S_a1",
        "1/2 [iH2, iH1] = omega1 chi (a1^+2 - a1^2)",
        br(&h2, &h1) * c.sa1_half,
        c.sa1_scale,
        form(ModeForm::SingleSqueeze(1)),
    );
    let o1 = check(
        "O_1",
        "[iH0, iH1] = g omega1 ((a1^+ a2^+ - a1 a2) - (a1 a2^+ - a1^+ a2))",
        br(&h0, &h1),
        c.o1_scale,
        form(ModeForm::TwoModeSqueeze(1, 2)) - form(ModeForm::Exchange(1, 2)),
    );
    let o2 = check(
        "O_2",
        "[iH1, O_1] = omega1 i (a1^+ a2^+ + a1 a2 + a1^+ a2 + a1 a2^+)",
        br(&h1, &o1),
        c.o2_scale,
        form(ModeForm::Pair(1, 2)) + form(ModeForm::Hop(1, 2)),
    );
    let ra = check(
        "R_a",
        "1/2 [[O_1, iH0] + 2 omega O_2, iH1] = omega omega1 (a1^+ a2 - a1 a2^+)",
        br(&(br(&o1, &h0) + &o2 * c.ra_o2_weight), &h1) * c.ra_half,
        c.ra_scale,
        -form(ModeForm::Exchange(1, 2)),
    );
    let ta = check(
        "T_a",
        "O_1 - R_a = a1^+ a2^+ - a1 a2",
        &o1 - &ra * c.ta_ra_weight,
        c.ta_scale,
        form(ModeForm::TwoModeSqueeze(1, 2)),
    );
    let sa2 = check(
        "S_a2",
        "[T_a, R_a] + S_a1 = a2^+2 - a2^2",
        br(&ta, &ra) + &sa1 * c.sa2_sa1_weight,
        c.sa2_scale,
        form(ModeForm::SingleSqueeze(2)),
    );
    check(
        "T_b",
        "[O_1 - R_a, iH1] = -omega1 i (a1^+ a2^+ + a1 a2)",
        br(&(&o1 - &ra * c.tb_ra_weight), &h1),
        c.tb_scale,
        form(ModeForm::Pair(1, 2)),
    );
    let o3 = check(
        "O_3",
        "[iH1, O_1 - 2 R_a] = omega1 i (a1^+ a2^+ + a1 a2 - a1^+ a2 - a1 a2^+)",
        br(&h1, &(&o1 - &ra * c.o3_ra_weight)),
        c.o3_scale,
        form(ModeForm::Pair(1, 2)) - form(ModeForm::Hop(1, 2)),
    );
    let rb = check(
        "R_b",
        "1/2 (O_2 - O_3) = i (a1^+ a2 + a1 a2^+)",
        (&o2 - &o3) * c.rb_half,
        c.rb_scale,
        form(ModeForm::Hop(1, 2)),
    );
    let p2 = check(
        "P_2",
        "1/2 ((2 / omega1) iH1 + [R_b, R_a]) = i a2^+ a2",
        (&h1 * c.p2_h1_weight + br(&rb, &ra)) * c.p2_half,
        c.p2_scale,
        form(ModeForm::Number(2)),
    );
    check(
        "S_b2",
        "[P_2, S_a2] = 2 i (a2^+2 + a2^2)",
        br(&p2, &sa2),
        c.sb2_scale,
        form(ModeForm::Squeeze(2)),
    );
    check(
        "long_range",
        "[i (a2^+ a3 + a2 a3^+), a1 a2^+ - a1^+ a2] = i (a1^+ a3 + a1 a3^+)",
        br(&form(ModeForm::Hop(2, 3)), &form(ModeForm::Exchange(1, 2))),
        c.long_range_scale,
        form(ModeForm::Hop(1, 3)),
    );

    let max_residual = records.iter().map(|r| r.residual).fold(0.0, f64::max);
    Ok(IdentityReport { all_pass: max_residual <= tol, max_residual, records, tolerance: tol })
}
