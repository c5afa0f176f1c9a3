//! Stateless operations: checking scripts, proving and countermodel search.

use std::time::Duration;

use secav_core::hilbert::{check_w_proof, parse_w_proof, AxiomSet};
use secav_core::natded::check_nd_proof;
use secav_core::prover::{prove, Assessment, SearchBudget};
use secav_core::script::{detect_kind, parse_nd_script, parse_sc_script, render_sc_script, ScriptKind};
use secav_core::semantics::{countermodel_search, disjunction_reading, SearchOutcome};
use secav_core::sequent::check_proof;
use secav_core::syntax::{parse_formula_any, Formula};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::ApiError;

pub fn kind_label(kind: ScriptKind) -> &'static str {
    match kind {
        ScriptKind::Sequent => "sc",
        ScriptKind::NaturalDeduction => "nd",
        ScriptKind::Hilbert => "w",
    }
}

pub fn parse_kind(label: &str) -> Option<ScriptKind> {
    match label {
        "sc" => Some(ScriptKind::Sequent),
        "nd" => Some(ScriptKind::NaturalDeduction),
        "w" => Some(ScriptKind::Hilbert),
        _ => None,
    }
}

/// A checked script: its format, verdict label and the serialized report.
#[derive(Clone, Debug, PartialEq)]
pub struct Checked {
    pub kind: ScriptKind,
    pub verdict: &'static str,
    pub report: Value,
}

/// Checks a script in any of the three formats. `kind` overrides detection;
/// `axioms` is used for Hilbert proofs only.
pub fn check_script(text: &str, kind: Option<ScriptKind>, axioms: &AxiomSet) -> Result<Checked, ApiError> {
    let kind = kind
        .or_else(|| detect_kind(text))
        .ok_or_else(|| ApiError::new(400, "ParseError", "cannot tell the script format from its first line"))?;
    let (verdict, report) = match kind {
        ScriptKind::Sequent => {
            let r = check_proof(&parse_sc_script(text)?);
            (r.verdict.label(), serde_json::to_value(&r))
        }
        ScriptKind::NaturalDeduction => {
            let r = check_nd_proof(&parse_nd_script(text)?);
            (r.verdict.label(), serde_json::to_value(&r))
        }
        ScriptKind::Hilbert => {
            let r = check_w_proof(&parse_w_proof(text)?, axioms);
            (r.verdict.label(), serde_json::to_value(&r))
        }
    };
    let mut report = report.map_err(|e| ApiError::internal(e.to_string()))?;
    report["format"] = json!(kind_label(kind));
    Ok(Checked { kind, verdict, report })
}

/// Optional search limits in a request; missing fields take defaults and
/// everything is clamped to the server's limits.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetRequest {
    pub max_gamma: Option<usize>,
    pub max_expansions: Option<u64>,
    pub deadline_ms: Option<u64>,
}

impl BudgetRequest {
    pub fn resolve(&self, ceiling: Duration) -> SearchBudget {
        let d = SearchBudget::default();
        SearchBudget {
            max_gamma: self.max_gamma.unwrap_or(d.max_gamma).min(64),
            max_expansions: self.max_expansions.unwrap_or(d.max_expansions).min(50_000_000),
            deadline: self.deadline_ms.map_or(d.deadline, Duration::from_millis).min(ceiling),
        }
    }
}

pub fn parse_sequent(formulas: &[String]) -> Result<Vec<Formula>, ApiError> {
    if formulas.is_empty() {
        return Err(ApiError::bad_request("the sequent is empty"));
    }
    formulas.iter().map(|f| parse_formula_any(f).map_err(ApiError::from)).collect()
}

/// Runs the prover. A proof is returned only after the kernel accepts it.
pub fn prove_sequent(sequent: &[Formula], budget: &SearchBudget) -> Result<Value, ApiError> {
    Ok(match prove(sequent, budget) {
        Assessment::Proved(pf) => {
            let report = check_proof(&pf);
            if !report.verdict.is_complete() {
                return Err(ApiError::internal(format!("prover output rejected by the kernel: {}", report.verdict.label())));
            }
            json!({ "verdict": "Proved", "steps": report.steps, "script": render_sc_script(&pf) })
        }
        Assessment::LikelyUnprovable(model) => match model {
            Some(m) => json!({ "verdict": "LikelyUnprovable", "model": m.to_json() }),
            None => json!({ "verdict": "LikelyUnprovable" }),
        },
        Assessment::Unknown => json!({ "verdict": "Unknown" }),
    })
}

/// Searches for a finite interpretation falsifying the disjunction of the
/// given formulas.
pub fn find_countermodel(sequent: &[Formula], max_size: usize, budget: u64) -> Value {
    match countermodel_search(&disjunction_reading(sequent), max_size, budget) {
        SearchOutcome::Found(c) => json!({ "outcome": "Found", "model": c.model.to_json(), "environment": c.environment.values }),
        SearchOutcome::Exhausted => json!({ "outcome": "Exhausted", "max_size": max_size }),
        SearchOutcome::BudgetExceeded => json!({ "outcome": "BudgetExceeded" }),
        SearchOutcome::Cancelled => json!({ "outcome": "Cancelled" }),
    }
}
