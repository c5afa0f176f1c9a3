//! Natural deduction over the judgment "goal follows from an ordered list of
//! assumptions", applied backwards.

use std::fmt;

use thiserror::Error;

use crate::derivation::{self, Calculus, CheckReport, Derivation, ErrorCode, RuleName, RuleTemplate, Witness};
use crate::sequent::{suggest_fresh, Sequent};
use crate::syntax::{fresh_constant, instantiate, member, Formula, Name, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NdJudgment {
    pub goal: Formula,
    pub assumptions: Vec<Formula>,
}

impl NdJudgment {
    pub fn new(goal: Formula, assumptions: Vec<Formula>) -> NdJudgment {
        NdJudgment { goal, assumptions }
    }

    fn with(&self, goal: Formula) -> NdJudgment {
        NdJudgment { goal, assumptions: self.assumptions.clone() }
    }

    fn assuming(&self, goal: Formula, extra: Formula) -> NdJudgment {
        let mut assumptions = Vec::with_capacity(self.assumptions.len() + 1);
        assumptions.push(extra);
        assumptions.extend_from_slice(&self.assumptions);
        NdJudgment { goal, assumptions }
    }
}

impl fmt::Display for NdJudgment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |- [", self.goal)?;
        for (i, a) in self.assumptions.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

pub type NdProof = Derivation<NdJudgment, NdRule>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NdRule {
    Assume,
    Boole,
    /// Antecedent of the implication being eliminated.
    ImpE(Formula),
    ImpI,
    DisE(Formula, Formula),
    DisI1,
    DisI2,
    /// Right conjunct of the eliminated conjunction.
    ConE1(Formula),
    /// Left conjunct of the eliminated conjunction.
    ConE2(Formula),
    ConI,
    /// Body of the eliminated existential and the constant naming its witness.
    ExiE(Formula, Name),
    ExiI(Term),
    /// Body of the eliminated universal and the instantiating term.
    UniE(Formula, Term),
    UniI(Name),
}

pub const ND_RULE_NAMES: [&str; 14] = [
    "Assume", "Boole", "ImpE", "ImpI", "DisE", "DisI1", "DisI2", "ConE1", "ConE2", "ConI", "ExiE", "ExiI", "UniE",
    "UniI",
];

impl RuleName for NdRule {
    fn name(&self) -> &'static str {
        match self {
            NdRule::Assume => "Assume",
            NdRule::Boole => "Boole",
            NdRule::ImpE(_) => "ImpE",
            NdRule::ImpI => "ImpI",
            NdRule::DisE(..) => "DisE",
            NdRule::DisI1 => "DisI1",
            NdRule::DisI2 => "DisI2",
            NdRule::ConE1(_) => "ConE1",
            NdRule::ConE2(_) => "ConE2",
            NdRule::ConI => "ConI",
            NdRule::ExiE(..) => "ExiE",
            NdRule::ExiI(_) => "ExiI",
            NdRule::UniE(..) => "UniE",
            NdRule::UniI(_) => "UniI",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NdError {
    #[error("{rule} does not apply to the goal {goal}")]
    GoalMismatch { rule: &'static str, goal: Formula },
    #[error("constant {0} is not fresh")]
    FreshnessViolation(Name),
    #[error("the goal is not the stated instance of the universal")]
    WitnessMismatch,
    #[error("the goal is not among the assumptions")]
    NotAnAssumption,
    #[error("the stated premises do not match the rule (expected {expected}, first difference at {at})")]
    PremiseMismatch { expected: usize, at: usize },
}

impl ErrorCode for NdError {
    fn code(&self) -> &'static str {
        match self {
            NdError::GoalMismatch { .. } => "GoalMismatch",
            NdError::FreshnessViolation(_) => "FreshnessViolation",
            NdError::WitnessMismatch => "WitnessMismatch",
            NdError::NotAnAssumption => "NotAnAssumption",
            NdError::PremiseMismatch { .. } => "PremiseMismatch",
        }
    }
}

pub fn apply_nd_rule(j: &NdJudgment, r: &NdRule) -> Result<Vec<NdJudgment>, NdError> {
    use Formula::*;
    let goal = &j.goal;
    let z = &j.assumptions;
    let mismatch = || NdError::GoalMismatch { rule: r.name(), goal: goal.clone() };
    let constant = |c: &Name| Term::Fun(c.clone(), vec![]);
    match r {
        NdRule::Assume => {
            if member(goal, z) {
                Ok(vec![])
            } else {
                Err(NdError::NotAnAssumption)
            }
        }
        NdRule::Boole => Ok(vec![j.assuming(Falsity, Formula::neg(goal.clone()))]),
        NdRule::ImpE(p) => Ok(vec![j.with(Formula::imp(p.clone(), goal.clone())), j.with(p.clone())]),
        NdRule::ImpI => match goal {
            Imp(p, q) => Ok(vec![j.assuming((**q).clone(), (**p).clone())]),
            _ => Err(mismatch()),
        },
        NdRule::DisE(p, q) => Ok(vec![
            j.with(Formula::dis(p.clone(), q.clone())),
            j.assuming(goal.clone(), p.clone()),
            j.assuming(goal.clone(), q.clone()),
        ]),
        NdRule::DisI1 => match goal {
            Dis(p, _) => Ok(vec![j.with((**p).clone())]),
            _ => Err(mismatch()),
        },
        NdRule::DisI2 => match goal {
            Dis(_, q) => Ok(vec![j.with((**q).clone())]),
            _ => Err(mismatch()),
        },
        NdRule::ConE1(q) => Ok(vec![j.with(Formula::con(goal.clone(), q.clone()))]),
        NdRule::ConE2(p) => Ok(vec![j.with(Formula::con(p.clone(), goal.clone()))]),
        NdRule::ConI => match goal {
            Con(p, q) => Ok(vec![j.with((**p).clone()), j.with((**q).clone())]),
            _ => Err(mismatch()),
        },
        NdRule::ExiE(p, c) => {
            let scope: Vec<Formula> = [goal.clone(), p.clone()].into_iter().chain(z.iter().cloned()).collect();
            if !fresh_constant(c.as_str(), &scope) {
                return Err(NdError::FreshnessViolation(c.clone()));
            }
            Ok(vec![j.with(Formula::exi(p.clone())), j.assuming(goal.clone(), instantiate(p, &constant(c)))])
        }
        NdRule::ExiI(t) => match goal {
            Exi(p) => Ok(vec![j.with(instantiate(p, t))]),
            _ => Err(mismatch()),
        },
        NdRule::UniE(p, t) => {
            if instantiate(p, t) != *goal {
                return Err(NdError::WitnessMismatch);
            }
            Ok(vec![j.with(Formula::uni(p.clone()))])
        }
        NdRule::UniI(c) => match goal {
            Uni(p) => {
                let scope: Vec<Formula> = std::iter::once((**p).clone()).chain(z.iter().cloned()).collect();
                if !fresh_constant(c.as_str(), &scope) {
                    return Err(NdError::FreshnessViolation(c.clone()));
                }
                Ok(vec![j.with(instantiate(p, &constant(c)))])
            }
            _ => Err(mismatch()),
        },
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct NaturalDeduction;

impl Calculus for NaturalDeduction {
    type Judgment = NdJudgment;
    type Rule = NdRule;
    type Error = NdError;

    fn apply(&self, j: &NdJudgment, r: &NdRule) -> Result<Vec<NdJudgment>, NdError> {
        apply_nd_rule(j, r)
    }

    fn premise_mismatch(&self, expected: usize, at: usize) -> NdError {
        NdError::PremiseMismatch { expected, at }
    }
}

pub fn check_nd_proof(pf: &NdProof) -> CheckReport<NdError> {
    derivation::check(&NaturalDeduction, pf)
}

/// Rules applicable to `j`, in table order. Elimination rules and Boole fit
/// any goal; introduction rules need the matching goal shape; Assume is
/// offered only when the goal is an assumption.
pub fn applicable_nd_rules(j: &NdJudgment) -> Vec<RuleTemplate<NdRule>> {
    use Formula::*;
    let goal = &j.goal;
    let ready = |r: NdRule| RuleTemplate { name: r.name(), witness: Witness::None, suggestion: Some(r) };
    let needs = |name: &'static str, witness: Witness| RuleTemplate { name, witness, suggestion: None };
    let mut out = Vec::new();
    if member(goal, &j.assumptions) {
        out.push(ready(NdRule::Assume));
    }
    out.push(ready(NdRule::Boole));
    out.push(needs("ImpE", Witness::Formula));
    if matches!(goal, Imp(..)) {
        out.push(ready(NdRule::ImpI));
    }
    out.push(needs("DisE", Witness::FormulaPair));
    if matches!(goal, Dis(..)) {
        out.push(ready(NdRule::DisI1));
        out.push(ready(NdRule::DisI2));
    }
    out.push(needs("ConE1", Witness::Formula));
    out.push(needs("ConE2", Witness::Formula));
    if matches!(goal, Con(..)) {
        out.push(ready(NdRule::ConI));
    }
    out.push(needs("ExiE", Witness::FormulaAndConstant));
    if matches!(goal, Exi(_)) {
        out.push(needs("ExiI", Witness::Term));
    }
    out.push(needs("UniE", Witness::FormulaAndTerm));
    if let Uni(p) = goal {
        let scope: Vec<Formula> = std::iter::once((**p).clone()).chain(j.assumptions.iter().cloned()).collect();
        let c = suggest_fresh(&scope);
        out.push(RuleTemplate { name: "UniI", witness: Witness::Constant, suggestion: Some(NdRule::UniI(c)) });
    }
    out
}

/// The sequent image of a judgment: the goal followed by the negated assumptions.
pub fn to_sequent(j: &NdJudgment) -> Sequent {
    std::iter::once(j.goal.clone()).chain(j.assumptions.iter().cloned().map(Formula::neg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::Verdict;

    fn p() -> Formula {
        Formula::atom("p")
    }

    fn q() -> Formula {
        Formula::atom("q")
    }

    fn ok(goal: Formula, z: Vec<Formula>) -> NdJudgment {
        NdJudgment::new(goal, z)
    }

    #[test]
    fn assume_finds_assumption() {
        assert_eq!(apply_nd_rule(&ok(p(), vec![q(), p()]), &NdRule::Assume).unwrap(), vec![]);
        assert_eq!(apply_nd_rule(&ok(p(), vec![q()]), &NdRule::Assume).unwrap_err(), NdError::NotAnAssumption);
    }

    #[test]
    fn imp_intro_adds_assumption() {
        let out = apply_nd_rule(&ok(Formula::imp(p(), q()), vec![]), &NdRule::ImpI).unwrap();
        assert_eq!(out, vec![ok(q(), vec![p()])]);
    }

    #[test]
    fn boole_negates_goal() {
        let out = apply_nd_rule(&ok(p(), vec![q()]), &NdRule::Boole).unwrap();
        assert_eq!(out, vec![ok(Formula::Falsity, vec![Formula::neg(p()), q()])]);
    }

    #[test]
    fn uni_intro_freshness() {
        let body = Formula::pre("P", vec![Term::Var(0)]);
        let j = ok(Formula::uni(body), vec![Formula::pre("Q", vec![Term::constant("c")])]);
        assert_eq!(
            apply_nd_rule(&j, &NdRule::UniI(Name::new("c"))).unwrap_err(),
            NdError::FreshnessViolation(Name::new("c"))
        );
        let out = apply_nd_rule(&j, &NdRule::UniI(Name::new("d"))).unwrap();
        assert_eq!(out[0].goal, Formula::pre("P", vec![Term::constant("d")]));
    }

    #[test]
    fn uni_elim_checks_instance() {
        let body = Formula::pre("P", vec![Term::Var(0)]);
        let a = Term::constant("a");
        let j = ok(Formula::pre("P", vec![a.clone()]), vec![]);
        let out = apply_nd_rule(&j, &NdRule::UniE(body.clone(), a)).unwrap();
        assert_eq!(out, vec![ok(Formula::uni(body.clone()), vec![])]);
        assert_eq!(
            apply_nd_rule(&j, &NdRule::UniE(body, Term::constant("b"))).unwrap_err(),
            NdError::WitnessMismatch
        );
    }

    #[test]
    fn exi_elim_freshness_covers_goal_body_and_assumptions() {
        let body = Formula::pre("P", vec![Term::Var(0)]);
        let goal = Formula::pre("Q", vec![Term::constant("c")]);
        let j = ok(goal, vec![]);
        assert!(matches!(
            apply_nd_rule(&j, &NdRule::ExiE(body.clone(), Name::new("c"))),
            Err(NdError::FreshnessViolation(_))
        ));
        let out = apply_nd_rule(&j, &NdRule::ExiE(body.clone(), Name::new("d"))).unwrap();
        assert_eq!(out[1].assumptions, vec![Formula::pre("P", vec![Term::constant("d")])]);
    }

    #[test]
    fn dis_elim_branches() {
        let j = ok(p(), vec![]);
        let out = apply_nd_rule(&j, &NdRule::DisE(q(), p())).unwrap();
        assert_eq!(out, vec![ok(Formula::dis(q(), p()), vec![]), ok(p(), vec![q()]), ok(p(), vec![p()])]);
    }

    #[test]
    fn checks_imp_p_p() {
        let pf = NdProof::by(
            ok(Formula::imp(p(), p()), vec![]),
            NdRule::ImpI,
            vec![NdProof::by(ok(p(), vec![p()]), NdRule::Assume, vec![])],
        );
        let report = check_nd_proof(&pf);
        assert_eq!(report.verdict, Verdict::Complete);
        assert_eq!(report.steps, 2);
        assert_eq!(check_nd_proof(&NdProof::open(ok(p(), vec![]))).verdict, Verdict::Incomplete { open: 1 });
    }

    #[test]
    fn applicable_examples() {
        let names = |j: &NdJudgment| applicable_nd_rules(j).iter().map(|t| t.name).collect::<Vec<_>>();
        let mut got = names(&ok(Formula::imp(p(), q()), vec![]));
        got.sort();
        let mut want = vec!["ImpI", "Boole", "ImpE", "ConE1", "ConE2", "DisE", "UniE", "ExiE"];
        want.sort();
        assert_eq!(got, want);
        assert!(names(&ok(p(), vec![p()])).contains(&"Assume"));
        let f = names(&ok(Formula::Falsity, vec![]));
        assert!(!f.contains(&"Assume") && f.contains(&"Boole"));
    }

    #[test]
    fn sequent_image() {
        let a = Formula::atom("a");
        let b = Formula::atom("b");
        assert_eq!(
            to_sequent(&ok(p(), vec![a.clone(), b.clone()])),
            vec![p(), Formula::neg(a), Formula::neg(b)]
        );
        assert_eq!(to_sequent(&ok(p(), vec![])), vec![p()]);
        assert_eq!(
            to_sequent(&ok(Formula::Falsity, vec![p(), Formula::neg(p())])),
            vec![Formula::Falsity, Formula::neg(p()), Formula::neg(Formula::neg(p()))]
        );
    }
}
