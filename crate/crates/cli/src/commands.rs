use std::io::Read;
use std::path::Path;
use std::time::Duration;

use secav_core::cancel::CancelToken;
use secav_core::derivation::{Derivation, Verdict};
use secav_core::hilbert::{check_w_proof, parse_prop, parse_w_proof, render_w_proof, search_proof_with, AxiomSet};
use secav_core::natded::{check_nd_proof, to_sequent};
use secav_core::prover::{prove_with, Assessment, SearchBudget};
use secav_core::script::{detect_kind, parse_nd_script, parse_sc_script, render_nd_script, render_sc_script, ScriptKind};
use secav_core::semantics::{countermodel_search_with, SearchOutcome};
use secav_core::sequent::check_proof;
use secav_core::syntax::{parse_formula_any, render_formula, Formula, Notation};
use secav_service::ops::kind_label;
use secav_service::ApiError;
use serde_json::{json, Value};

use crate::exit;

/// What a command produced: the exit code, text for stdout and the same
/// result as JSON for `--json`.
#[derive(Debug)]
pub struct Report {
    pub exit: u8,
    pub text: String,
    pub data: Value,
}

/// A command that could not run; `error` is reported in the envelope format.
#[derive(Debug)]
pub struct Failure {
    pub exit: u8,
    pub error: ApiError,
}

impl From<ApiError> for Failure {
    fn from(error: ApiError) -> Failure {
        let exit = if error.code == "ParseError" { exit::PARSE_ERROR } else { exit::USAGE };
        Failure { exit, error }
    }
}

fn parse_failure(e: impl std::fmt::Display) -> Failure {
    Failure { exit: exit::PARSE_ERROR, error: ApiError::new(400, "ParseError", e.to_string()) }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { exit: exit::USAGE, error: ApiError::bad_request(message) }
}

pub type Outcome = Result<Report, Failure>;

/// Reads a file, or standard input for `-`.
pub fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// A bundled axiom set by name, or an axiom file.
pub fn load_axioms(spec: Option<&str>) -> Result<AxiomSet, Failure> {
    match spec {
        None | Some("system-w") => Ok(AxiomSet::system_w()),
        Some("fallback") => Ok(AxiomSet::fallback()),
        Some(path) => {
            let text = read_input(Path::new(path))?;
            AxiomSet::parse(&text).map_err(|e| Failure { exit: exit::PARSE_ERROR, error: ApiError::new(400, "AxiomError", format!("{path}: {e}")) })
        }
    }
}

fn verdict_text<E: std::fmt::Display>(v: &Verdict<E>, steps: usize) -> String {
    match v {
        Verdict::Complete => format!("Complete ({steps} steps)\n"),
        Verdict::Incomplete { open } => format!("Incomplete: {open} open goal(s) ({steps} steps)\n"),
        Verdict::Invalid { path, error } => format!("Invalid at node {path:?}: {error}\n"),
    }
}

pub fn check(text: &str, kind: Option<ScriptKind>, axioms: &AxiomSet) -> Outcome {
    let kind = kind.or_else(|| detect_kind(text)).ok_or_else(|| parse_failure("cannot tell the script format from its first line"))?;
    macro_rules! finish {
        ($r:expr) => {{
            let r = $r;
            let mut data = serde_json::to_value(&r).expect("reports serialize");
            data["format"] = json!(kind_label(kind));
            Report { exit: exit::for_verdict(&r.verdict), text: verdict_text(&r.verdict, r.steps), data }
        }};
    }
    Ok(match kind {
        ScriptKind::Sequent => finish!(check_proof(&parse_sc_script(text).map_err(parse_failure)?)),
        ScriptKind::NaturalDeduction => finish!(check_nd_proof(&parse_nd_script(text).map_err(parse_failure)?)),
        ScriptKind::Hilbert => finish!(check_w_proof(&parse_w_proof(text).map_err(parse_failure)?, axioms)),
    })
}

/// Rewrites a script in canonical layout, or each formula line of a plain
/// file in the requested notation.
pub fn fmt(text: &str, notation: Notation) -> Outcome {
    let out = match detect_kind(text) {
        Some(ScriptKind::Sequent) => render_sc_script(&parse_sc_script(text).map_err(parse_failure)?),
        Some(ScriptKind::NaturalDeduction) => render_nd_script(&parse_nd_script(text).map_err(parse_failure)?),
        Some(ScriptKind::Hilbert) => render_w_proof(&parse_w_proof(text).map_err(parse_failure)?),
        None => {
            let mut out = String::new();
            for (i, line) in text.lines().enumerate() {
                let t = line.trim();
                if t.is_empty() || t.starts_with('#') {
                    out.push_str(line);
                } else {
                    let p = parse_formula_any(t).map_err(|e| parse_failure(format!("line {}: {e}", i + 1)))?;
                    out.push_str(&render_formula(&p, notation));
                }
                out.push('\n');
            }
            out
        }
    };
    Ok(Report { exit: exit::OK, data: json!({ "text": out }), text: out })
}

fn parse_sequent(formulas: &[String]) -> Result<Vec<Formula>, Failure> {
    formulas.iter().map(|f| parse_formula_any(f).map_err(|e| parse_failure(format!("`{f}`: {e}")))).collect()
}

pub fn budget(expansions: Option<u64>, deadline: Option<f64>) -> Result<SearchBudget, Failure> {
    let mut b = SearchBudget::default();
    if let Some(n) = expansions {
        b.max_expansions = n;
    }
    if let Some(s) = deadline {
        if !(s.is_finite() && s > 0.0) {
            return Err(usage("--deadline must be a positive number of seconds"));
        }
        b.deadline = Duration::from_secs_f64(s);
    }
    Ok(b)
}

/// Prover result as a report; proofs are re-checked before they are shown.
fn assessment_report(a: &Assessment, open_script: String) -> Outcome {
    let exit = exit::for_assessment(a);
    Ok(match a {
        Assessment::Proved(pf) => {
            let r = check_proof(pf);
            if !r.verdict.is_complete() {
                return Err(Failure { exit: exit::INVALID, error: ApiError::internal("prover output rejected by the kernel") });
            }
            let script = render_sc_script(pf);
            Report { exit, data: json!({ "verdict": "Proved", "steps": r.steps, "script": script }), text: script }
        }
        Assessment::LikelyUnprovable(model) => {
            let model = model.as_ref().map(|m| m.to_json());
            let mut text = String::from("LikelyUnprovable: a branch saturated without closing\n");
            if let Some(m) = &model {
                text.push_str(&format!("falsified by {m}\n"));
            }
            Report { exit, data: json!({ "verdict": "LikelyUnprovable", "model": model, "goal": open_script }), text }
        }
        Assessment::Unknown => Report {
            exit,
            data: json!({ "verdict": "Unknown", "goal": open_script }),
            text: "Unknown: budget exhausted\n".into(),
        },
    })
}

pub fn prove(formulas: &[String], budget: &SearchBudget, cancel: &CancelToken) -> Outcome {
    let seq = parse_sequent(formulas)?;
    let a = prove_with(&seq, budget, cancel);
    assessment_report(&a, render_sc_script(&Derivation::open(seq)))
}

pub fn countermodel(formula: &str, max_size: usize, evaluations: u64, cancel: &CancelToken) -> Outcome {
    let p = parse_formula_any(formula).map_err(parse_failure)?;
    if max_size == 0 {
        return Err(usage("--max-size must be at least 1"));
    }
    let o = countermodel_search_with(&p, max_size, evaluations, cancel);
    let exit = exit::for_search(&o);
    Ok(match o {
        SearchOutcome::Found(c) => {
            let data = json!({ "outcome": "Found", "model": c.model.to_json(), "environment": c.environment.values });
            let text = serde_json::to_string_pretty(&data["model"]).expect("models serialize") + "\n";
            Report { exit, text, data }
        }
        SearchOutcome::Exhausted => Report {
            exit,
            text: format!("no countermodel with at most {max_size} elements\n"),
            data: json!({ "outcome": "Exhausted", "max_size": max_size }),
        },
        SearchOutcome::BudgetExceeded => Report { exit, text: "budget exhausted\n".into(), data: json!({ "outcome": "BudgetExceeded" }) },
        SearchOutcome::Cancelled => Report { exit, text: "cancelled\n".into(), data: json!({ "outcome": "Cancelled" }) },
    })
}

/// Turns the root of a natural deduction script into a sequent and asks the
/// prover for a sequent calculus proof of it.
pub fn translate(text: &str, budget: &SearchBudget, cancel: &CancelToken) -> Outcome {
    let pf = parse_nd_script(text).map_err(parse_failure)?;
    let seq = to_sequent(&pf.conclusion);
    let open = render_sc_script(&Derivation::open(seq.clone()));
    let a = prove_with(&seq, budget, cancel);
    let mut report = assessment_report(&a, open.clone())?;
    report.data["sequent"] = json!(seq.iter().map(|p| render_formula(p, Notation::Abstract)).collect::<Vec<_>>());
    if !a.is_proved() {
        report.text = format!("{open}{}", report.text);
    }
    Ok(report)
}

pub fn w_search(formula: &str, depth: usize, axioms: &AxiomSet, cancel: &CancelToken) -> Outcome {
    let goal = parse_prop(formula).map_err(parse_failure)?;
    match search_proof_with(&goal, axioms, depth, cancel) {
        Some(pf) => {
            let r = check_w_proof(&pf, axioms);
            if !r.verdict.is_complete() {
                return Err(Failure { exit: exit::INVALID, error: ApiError::internal("search output rejected by the checker") });
            }
            let text = render_w_proof(&pf);
            Ok(Report { exit: exit::OK, data: json!({ "found": true, "lines": pf.lines.len(), "proof": text }), text })
        }
        None if cancel.is_cancelled() => Ok(Report { exit: exit::UNKNOWN, text: "cancelled\n".into(), data: json!({ "found": false }) }),
        None => Ok(Report {
            exit: exit::INCOMPLETE,
            text: format!("no proof found up to depth {depth}\n"),
            data: json!({ "found": false, "depth": depth }),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_switches_notation() {
        let r = fmt("# c\nImp (Pre ''p'' []) Falsity\n", Notation::Standard).unwrap();
        assert_eq!(r.text, "# c\n~p\n");
        let r = fmt("~p\n", Notation::Abstract).unwrap();
        assert_eq!(r.text, "Imp (Pre ''p'' []) Falsity\n");
        assert_eq!(fmt("p -->\n", Notation::Abstract).err().unwrap().exit, exit::PARSE_ERROR);
    }

    #[test]
    fn prove_p_implies_p() {
        let r = prove(&["p --> p".into()], &SearchBudget::default(), &CancelToken::new()).unwrap();
        assert_eq!(r.exit, 0);
        assert_eq!(r.data["steps"], 3);
    }

    #[test]
    fn cancelled_prover_is_unknown() {
        let c = CancelToken::new();
        c.cancel();
        let r = prove(&["forall x. P(x) --> P(f(x))".into()], &SearchBudget::default(), &c).unwrap();
        assert_eq!(r.exit, exit::UNKNOWN);
    }

    #[test]
    fn countermodel_example() {
        let r = countermodel("(p \\/ q) --> p", 1, 1_000, &CancelToken::new()).unwrap();
        assert_eq!(r.exit, 0);
        assert_eq!(r.data["model"]["size"], 1);
    }

    #[test]
    fn w_search_finds_identity() {
        let r = w_search("p --> p", 8, &AxiomSet::fallback(), &CancelToken::new()).unwrap();
        assert_eq!(r.exit, 0);
        let again = check(&r.text, None, &AxiomSet::fallback()).unwrap();
        assert_eq!(again.exit, 0);
    }
}
