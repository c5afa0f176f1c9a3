//! Proof trees shared by the sequent calculus and natural deduction, and the
//! node-by-node checker that certifies them.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// A calculus given by backward rule application: a rule applied to a
/// conclusion yields the premises still to be proved.
pub trait Calculus {
    type Judgment: Clone + PartialEq + fmt::Debug;
    type Rule: Clone + PartialEq + fmt::Debug + RuleName;
    type Error: Clone + fmt::Debug + fmt::Display + ErrorCode;

    fn apply(&self, conclusion: &Self::Judgment, rule: &Self::Rule) -> Result<Vec<Self::Judgment>, Self::Error>;

    /// Error reported when a node's stated premises differ from what the rule produces.
    fn premise_mismatch(&self, expected: usize, found: usize) -> Self::Error;
}

pub trait RuleName {
    /// Canonical rule name as written in scripts.
    fn name(&self) -> &'static str;
}

/// Stable machine-readable name of an error variant.
pub trait ErrorCode {
    fn code(&self) -> &'static str;
}

/// A node of a (possibly partial) derivation. Nodes without a step are open
/// goals.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation<J, R> {
    pub conclusion: J,
    pub step: Option<Step<J, R>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Step<J, R> {
    pub rule: R,
    pub premises: Vec<Derivation<J, R>>,
}

impl<J, R> Derivation<J, R> {
    pub fn open(conclusion: J) -> Derivation<J, R> {
        Derivation { conclusion, step: None }
    }

    pub fn by(conclusion: J, rule: R, premises: Vec<Derivation<J, R>>) -> Derivation<J, R> {
        Derivation { conclusion, step: Some(Step { rule, premises }) }
    }

    /// Number of rule applications.
    pub fn steps(&self) -> usize {
        match &self.step {
            None => 0,
            Some(s) => 1 + s.premises.iter().map(Derivation::steps).sum::<usize>(),
        }
    }

    /// Paths (premise indices from the root) to the open goals, depth-first,
    /// leftmost premise first.
    pub fn open_goals(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.collect_open(&mut path, &mut out);
        out
    }

    fn collect_open(&self, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        match &self.step {
            None => out.push(path.clone()),
            Some(s) => {
                for (i, p) in s.premises.iter().enumerate() {
                    path.push(i);
                    p.collect_open(path, out);
                    path.pop();
                }
            }
        }
    }

    pub fn node(&self, path: &[usize]) -> Option<&Derivation<J, R>> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.step.as_ref()?.premises.get(i)?.node(rest),
        }
    }

    pub fn node_mut(&mut self, path: &[usize]) -> Option<&mut Derivation<J, R>> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.step.as_mut()?.premises.get_mut(i)?.node_mut(rest),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict<E> {
    Complete,
    Incomplete { open: usize },
    Invalid { path: Vec<usize>, error: E },
}

impl<E> Verdict<E> {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Complete => "Complete",
            Verdict::Incomplete { .. } => "Incomplete",
            Verdict::Invalid { .. } => "Invalid",
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Verdict::Complete)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport<E> {
    pub verdict: Verdict<E>,
    /// Rule applications in the checked object.
    pub steps: usize,
    /// How often each rule was used.
    pub rules: BTreeMap<String, usize>,
}

impl<E: ErrorCode + fmt::Display> Serialize for CheckReport<E> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CheckReport", 5)?;
        st.serialize_field("verdict", self.verdict.label())?;
        st.serialize_field("steps", &self.steps)?;
        st.serialize_field("rules", &self.rules)?;
        match &self.verdict {
            Verdict::Complete => {}
            Verdict::Incomplete { open } => st.serialize_field("open", open)?,
            Verdict::Invalid { path, error } => {
                st.serialize_field("path", path)?;
                st.serialize_field(
                    "error",
                    &serde_json::json!({ "code": error.code(), "message": error.to_string() }),
                )?;
            }
        }
        st.end()
    }
}

/// Checks every node of `pf` against `calculus`.
///
/// The first failing node in preorder determines an `Invalid` verdict;
/// otherwise open goals make the derivation `Incomplete`.
pub fn check<C: Calculus>(calculus: &C, pf: &Derivation<C::Judgment, C::Rule>) -> CheckReport<C::Error> {
    let mut report = CheckReport { verdict: Verdict::Complete, steps: 0, rules: BTreeMap::new() };
    let mut open = 0;
    let mut path = Vec::new();
    let mut first_error = None;
    walk(calculus, pf, &mut path, &mut report, &mut open, &mut first_error);
    report.verdict = match first_error {
        Some((path, error)) => Verdict::Invalid { path, error },
        None if open > 0 => Verdict::Incomplete { open },
        None => Verdict::Complete,
    };
    report
}

fn walk<C: Calculus>(
    calculus: &C,
    node: &Derivation<C::Judgment, C::Rule>,
    path: &mut Vec<usize>,
    report: &mut CheckReport<C::Error>,
    open: &mut usize,
    first_error: &mut Option<(Vec<usize>, C::Error)>,
) {
    let Some(step) = &node.step else {
        *open += 1;
        return;
    };
    report.steps += 1;
    *report.rules.entry(step.rule.name().to_string()).or_default() += 1;
    if first_error.is_none() {
        match calculus.apply(&node.conclusion, &step.rule) {
            Err(e) => *first_error = Some((path.clone(), e)),
            Ok(expected) => {
                let stated: Vec<&C::Judgment> = step.premises.iter().map(|p| &p.conclusion).collect();
                if expected.len() != stated.len() || expected.iter().zip(&stated).any(|(e, s)| e != *s) {
                    let at = expected
                        .iter()
                        .zip(&stated)
                        .position(|(e, s)| e != *s)
                        .unwrap_or(expected.len().min(stated.len()));
                    *first_error = Some((path.clone(), calculus.premise_mismatch(expected.len(), at)));
                }
            }
        }
    }
    for (i, p) in step.premises.iter().enumerate() {
        path.push(i);
        walk(calculus, p, path, report, open, first_error);
        path.pop();
    }
}

/// What a partially specified rule still needs before it can be applied.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    None,
    Term,
    Constant,
    Sequent,
    Formula,
    FormulaPair,
    FormulaAndConstant,
    FormulaAndTerm,
}

/// A rule offered for a goal, possibly with its parameters left open.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleTemplate<R> {
    pub name: &'static str,
    pub witness: Witness,
    /// A ready-to-apply instance: the rule itself when no witness is needed,
    /// or one with a suggested fresh constant.
    pub suggestion: Option<R>,
}
