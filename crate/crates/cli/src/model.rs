//! Model and schedule documents.

use std::collections::HashMap;

use anyhow::{anyhow, bail, Context, Result};
use gaussctl::hamiltonian::HamiltonianTerm;
use gaussctl::{build_chain, from_terms, ChainSpec, ControlModel, ModeCount, QuadraticHamiltonian, RealMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modes: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub hamiltonians: Vec<HamiltonianDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub controls: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chain: Option<ChainDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianDoc {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub terms: Option<Vec<TermDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
}

/// One term of the dictionary; mode indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TermDoc {
    Number { mode: usize, coeff: f64 },
    Hop { modes: [usize; 2], coeff: f64 },
    Pair { modes: [usize; 2], coeff: f64 },
    Squeeze { mode: usize, coeff: f64 },
}

impl From<&TermDoc> for HamiltonianTerm {
    fn from(t: &TermDoc) -> Self {
        match *t {
            TermDoc::Number { mode, coeff } => HamiltonianTerm::number(mode, coeff),
            TermDoc::Hop { modes: [j, k], coeff } => HamiltonianTerm::hop(j, k, coeff),
            TermDoc::Pair { modes: [j, k], coeff } => HamiltonianTerm::pair(j, k, coeff),
            TermDoc::Squeeze { mode, coeff } => HamiltonianTerm::squeeze(mode, coeff),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainDoc {
    pub n: usize,
    pub omega: f64,
    pub g1: f64,
    pub g2: f64,
    pub omega1: f64,
    pub chi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScheduleDocument {
    pub segments: Vec<SegmentDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_covariance: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentDoc {
    pub duration: f64,
    pub controls: Vec<f64>,
}

/// Parses JSON, naming the offending field on failure.
pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        anyhow!("{}: {}", if path == "." { "document".to_string() } else { path }, e.into_inner())
    })?;
    de.end().map_err(|e| anyhow!("document: {e}"))?;
    Ok(value)
}

pub fn matrix_from_rows(rows: &[Vec<f64>], field: &str) -> Result<RealMatrix> {
    let r = rows.len();
    if let Some((i, row)) = rows.iter().enumerate().find(|(_, row)| row.len() != r) {
        bail!("{field}[{i}]: expected {r} entries for a square matrix, got {}", row.len());
    }
    Ok(RealMatrix::from_fn(r, r, |i, j| rows[i][j]))
}

/// A document with every name resolved.
#[derive(Debug, Clone)]
pub struct ResolvedModel {
    pub modes: ModeCount,
    pub hamiltonians: Vec<QuadraticHamiltonian>,
    pub drift: usize,
    pub controls: Vec<usize>,
}

impl ResolvedModel {
    pub fn get(&self, name: &str) -> Result<&QuadraticHamiltonian> {
        self.hamiltonians
            .iter()
            .find(|h| h.label() == name)
            .ok_or_else(|| anyhow!("--hamiltonian: no Hamiltonian named `{name}` in the model"))
    }

    pub fn drift(&self) -> &QuadraticHamiltonian {
        &self.hamiltonians[self.drift]
    }

    pub fn controls(&self) -> Vec<&QuadraticHamiltonian> {
        self.controls.iter().map(|&i| &self.hamiltonians[i]).collect()
    }

    pub fn control_model(&self) -> Result<ControlModel> {
        Ok(ControlModel::new(self.drift().clone(), self.controls().into_iter().cloned().collect())?)
    }
}

impl ModelDocument {
    pub fn resolve(&self) -> Result<ResolvedModel> {
        if let Some(c) = &self.chain {
            if !self.hamiltonians.is_empty() || self.drift.is_some() || !self.controls.is_empty() {
                bail!("chain: the chain shorthand cannot be combined with hamiltonians, drift or controls");
            }
            if let Some(m) = self.modes {
                if m != c.n {
                    bail!("modes: {m} disagrees with chain.n = {}", c.n);
                }
            }
            let spec = ChainSpec::new(c.n, c.omega, c.g1, c.g2, c.omega1, c.chi).context("chain")?;
            let model = build_chain(&spec).context("chain")?;
            let mut hamiltonians = vec![model.drift().clone()];
            hamiltonians.extend(model.controls().iter().cloned());
            return Ok(ResolvedModel { modes: spec.n, hamiltonians, drift: 0, controls: vec![1, 2] });
        }

        let modes = ModeCount::new(self.modes.ok_or_else(|| anyhow!("modes: missing field"))?).context("modes")?;
        let mut index = HashMap::new();
        let mut hamiltonians = Vec::with_capacity(self.hamiltonians.len());
        for (i, doc) in self.hamiltonians.iter().enumerate() {
            let field = format!("hamiltonians[{i}]");
            if doc.name.is_empty() {
                bail!("{field}.name: must not be empty");
            }
            if index.insert(doc.name.clone(), i).is_some() {
                bail!("{field}.name: duplicate name `{}`", doc.name);
            }
            let h = match (&doc.terms, &doc.matrix) {
                (Some(terms), None) => {
                    let terms: Vec<HamiltonianTerm> = terms.iter().map(Into::into).collect();
                    from_terms(modes, &terms, doc.name.clone()).with_context(|| format!("{field}.terms"))?
                }
                (None, Some(rows)) => {
                    let a = matrix_from_rows(rows, &format!("{field}.matrix"))?;
                    if a.nrows() != modes.dim() {
                        bail!("{field}.matrix: expected {0}x{0} for {modes} modes, got {1}x{1}", modes.dim(), a.nrows());
                    }
                    QuadraticHamiltonian::new(a, doc.name.clone()).with_context(|| format!("{field}.matrix"))?
                }
                _ => bail!("{field}: exactly one of `terms` or `matrix` is required"),
            };
            hamiltonians.push(h);
        }
        let lookup = |name: &str, field: &str| -> Result<usize> {
            index.get(name).copied().ok_or_else(|| anyhow!("{field}: unknown Hamiltonian `{name}`"))
        };
        let drift = lookup(self.drift.as_deref().ok_or_else(|| anyhow!("drift: missing field"))?, "drift")?;
        let controls = self
            .controls
            .iter()
            .enumerate()
            .map(|(i, c)| lookup(c, &format!("controls[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        Ok(ResolvedModel { modes, hamiltonians, drift, controls })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const TWO_MODE: &str = r#"{
        "modes": 2,
        "hamiltonians": [
            {"name": "H0", "terms": [
                {"kind": "number", "mode": 1, "coeff": 1.0},
                {"kind": "number", "mode": 2, "coeff": 1.0},
                {"kind": "hop", "modes": [1, 2], "coeff": 0.2}
            ]},
            {"name": "H1", "terms": [{"kind": "squeeze", "mode": 1, "coeff": 1.0}]},
            {"name": "M", "matrix": [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]}
        ],
        "drift": "H0",
        "controls": ["H1"]
    }"#;

    #[test]
    fn parses_and_resolves() {
        let doc: ModelDocument = parse(TWO_MODE).unwrap();
        let m = doc.resolve().unwrap();
        assert_eq!(m.hamiltonians.len(), 3);
        assert_eq!(m.drift().label(), "H0");
        assert_eq!(m.drift().matrix()[(0, 2)], 0.2);
        assert_eq!(m.get("M").unwrap().matrix(), &RealMatrix::identity(4, 4));
        assert!(m.get("nope").is_err());
    }

    #[test]
    fn chain_shorthand() {
        let doc: ModelDocument = parse(r#"{"chain": {"n": 2, "omega": 1, "g1": 0.2, "g2": 0.2, "omega1": 1, "chi": 1}}"#).unwrap();
        let m = doc.resolve().unwrap();
        assert_eq!(m.controls().len(), 2);
        assert_eq!(m.drift().matrix()[(0, 2)], 0.4);
    }

    fn error_of(text: &str) -> String {
        match parse::<ModelDocument>(text).and_then(|d| d.resolve()) {
            Ok(_) => panic!("expected an error"),
            Err(e) => format!("{e:#}"),
        }
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = error_of(r#"{"modes": 1, "hamiltonians": [{"name": "H", "terms": [{"kind": "displace", "mode": 1, "coeff": 1}]}], "drift": "H"}"#);
        assert!(e.contains("hamiltonians[0].terms[0]") && e.contains("displace"), "{e}");
        let e = error_of(r#"{"modes": 1, "hamiltonians": [{"name": "H", "terms": []}, {"name": "H", "terms": []}], "drift": "H"}"#);
        assert!(e.contains("hamiltonians[1].name") && e.contains("duplicate"), "{e}");
        let e = error_of(r#"{"modes": 1, "hamiltonians": [{"name": "H", "terms": []}], "drift": "G"}"#);
        assert!(e.starts_with("drift"), "{e}");
        let e = error_of(r#"{"modes": 1, "hamiltonians": [{"name": "H", "matrix": [[1, 2], [0, 1]]}], "drift": "H"}"#);
        assert!(e.contains("hamiltonians[0].matrix") && e.contains("symmetric"), "{e}");
        let e = error_of(r#"{"modes": 1, "hamiltonians": [{"name": "H", "terms": [{"kind": "number", "mode": 2, "coeff": 1}]}], "drift": "H"}"#);
        assert!(e.contains("hamiltonians[0].terms") && e.contains("out of range"), "{e}");
        let e = error_of(r#"{"modes": 1, "hamiltonians": [], "drift": "H", "extra": 1}"#);
        assert!(e.contains("extra"), "{e}");
        let e = error_of(r#"{"modes": 1,"#);
        assert!(e.contains("line 1"), "{e}");
    }
}
