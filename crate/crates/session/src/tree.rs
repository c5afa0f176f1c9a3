use std::fmt;

use secav_core::derivation::{CheckReport, Derivation, ErrorCode, RuleName, RuleTemplate, Step, Verdict, Witness};
use secav_core::natded::{apply_nd_rule, applicable_nd_rules, check_nd_proof, to_sequent, NdProof, NdRule};
use secav_core::script::{
    parse_nd_rule, parse_sc_rule, render_judgment, render_nd_rule, render_nd_script, render_sc_rule, render_sc_script,
};
use secav_core::sequent::{apply_rule, applicable_rules, check_proof, DisplaySequent, ScProof, ScRule, Sequent};
use serde::{Deserialize, Serialize};

use crate::error::SessionError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    /// One-sided sequent calculus.
    Sc,
    /// Natural deduction.
    Nd,
}

impl System {
    pub fn label(self) -> &'static str {
        match self {
            System::Sc => "sc",
            System::Nd => "nd",
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for System {
    type Err = String;

    fn from_str(s: &str) -> Result<System, String> {
        match s {
            "sc" => Ok(System::Sc),
            "nd" => Ok(System::Nd),
            other => Err(format!("unknown system `{other}`")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Sc(ScRule),
    Nd(NdRule),
}

impl Rule {
    /// Parses rule text as it appears after `by:` in a script.
    pub fn parse(system: System, text: &str) -> Result<Rule, SessionError> {
        Ok(match system {
            System::Sc => Rule::Sc(parse_sc_rule(text)?),
            System::Nd => Rule::Nd(parse_nd_rule(text)?),
        })
    }

    pub fn render(&self) -> String {
        match self {
            Rule::Sc(r) => render_sc_rule(r),
            Rule::Nd(r) => render_nd_rule(r),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Rule::Sc(r) => r.name(),
            Rule::Nd(r) => r.name(),
        }
    }

    pub fn system(&self) -> System {
        match self {
            Rule::Sc(_) => System::Sc,
            Rule::Nd(_) => System::Nd,
        }
    }
}

/// A partial derivation in either calculus.
#[derive(Clone, Debug, PartialEq)]
pub enum Tree {
    Sc(ScProof),
    Nd(NdProof),
}

impl Tree {
    pub fn system(&self) -> System {
        match self {
            Tree::Sc(_) => System::Sc,
            Tree::Nd(_) => System::Nd,
        }
    }

    pub fn open_goals(&self) -> Vec<Vec<usize>> {
        match self {
            Tree::Sc(t) => t.open_goals(),
            Tree::Nd(t) => t.open_goals(),
        }
    }

    pub fn steps(&self) -> usize {
        match self {
            Tree::Sc(t) => t.steps(),
            Tree::Nd(t) => t.steps(),
        }
    }

    /// The tree in script form; open goals are written as `open`.
    pub fn script(&self) -> String {
        match self {
            Tree::Sc(t) => render_sc_script(t),
            Tree::Nd(t) => render_nd_script(t),
        }
    }

    /// Kernel verdict as (label, open goals, steps, error code of an invalid node).
    pub fn verdict(&self) -> (&'static str, usize, usize, Option<&'static str>) {
        fn summarize<E: ErrorCode>(r: CheckReport<E>) -> (&'static str, usize, usize, Option<&'static str>) {
            let open = match &r.verdict {
                Verdict::Incomplete { open } => *open,
                _ => 0,
            };
            let code = match &r.verdict {
                Verdict::Invalid { error, .. } => Some(error.code()),
                _ => None,
            };
            (r.verdict.label(), open, r.steps, code)
        }
        match self {
            Tree::Sc(t) => summarize(check_proof(t)),
            Tree::Nd(t) => summarize(check_nd_proof(t)),
        }
    }

    /// Display text of the open goal at `path`.
    pub fn goal_text(&self, path: &[usize]) -> Option<String> {
        match self {
            Tree::Sc(t) => t.node(path).map(|n| DisplaySequent(&n.conclusion).to_string()),
            Tree::Nd(t) => t.node(path).map(|n| render_judgment(&n.conclusion)),
        }
    }

    /// The sequent whose provability decides the goal at `path`; natural
    /// deduction goals are translated.
    pub fn goal_sequent(&self, path: &[usize]) -> Option<Sequent> {
        match self {
            Tree::Sc(t) => t.node(path).map(|n| n.conclusion.clone()),
            Tree::Nd(t) => t.node(path).map(|n| to_sequent(&n.conclusion)),
        }
    }

    pub(crate) fn templates(&self, path: &[usize]) -> Vec<(&'static str, Witness, Option<Rule>)> {
        fn lift<R>(ts: Vec<RuleTemplate<R>>, wrap: fn(R) -> Rule) -> Vec<(&'static str, Witness, Option<Rule>)> {
            ts.into_iter().map(|t| (t.name, t.witness, t.suggestion.map(wrap))).collect()
        }
        match self {
            Tree::Sc(t) => t.node(path).map_or_else(Vec::new, |n| lift(applicable_rules(&n.conclusion), Rule::Sc)),
            Tree::Nd(t) => t.node(path).map_or_else(Vec::new, |n| lift(applicable_nd_rules(&n.conclusion), Rule::Nd)),
        }
    }

    /// Applies `rule` to the open goal at `path`, returning the extended tree.
    pub(crate) fn apply(&self, path: &[usize], rule: &Rule) -> Result<Tree, SessionError> {
        match (self, rule) {
            (Tree::Sc(t), Rule::Sc(r)) => {
                let mut t = t.clone();
                let node = t.node_mut(path).expect("path of an open goal");
                let premises = apply_rule(&node.conclusion, r)?;
                node.step = Some(Step { rule: r.clone(), premises: premises.into_iter().map(Derivation::open).collect() });
                Ok(Tree::Sc(t))
            }
            (Tree::Nd(t), Rule::Nd(r)) => {
                let mut t = t.clone();
                let node = t.node_mut(path).expect("path of an open goal");
                let premises = apply_nd_rule(&node.conclusion, r)?;
                node.step = Some(Step { rule: r.clone(), premises: premises.into_iter().map(Derivation::open).collect() });
                Ok(Tree::Nd(t))
            }
            (tree, rule) => Err(SessionError::WrongSystem {
                expected: rule.system().label(),
                found: tree.system().label(),
            }),
        }
    }
}
