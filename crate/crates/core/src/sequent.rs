//! One-sided sequent calculus: sequents are formula lists read disjunctively
//! and every rule works on the first formula.

use std::fmt;

use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use crate::derivation::{self, Calculus, CheckReport, Derivation, ErrorCode, RuleName, RuleTemplate, Witness};
use crate::syntax::{ext, fresh_constant, instantiate, member, Formula, Name, Term};

pub type Sequent = Vec<Formula>;
pub type ScProof = Derivation<Sequent, ScRule>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScRule {
    Basic,
    AlphaDis,
    AlphaImp,
    AlphaCon,
    BetaCon,
    BetaImp,
    BetaDis,
    GammaExi(Term),
    GammaUni(Term),
    DeltaUni(Name),
    DeltaExi(Name),
    Extra,
    Ext(Sequent),
    NegNeg,
}

/// Canonical rule names in table order.
pub const RULE_NAMES: [&str; 14] = [
    "Basic", "AlphaDis", "AlphaImp", "AlphaCon", "BetaCon", "BetaImp", "BetaDis", "GammaExi", "GammaUni",
    "DeltaUni", "DeltaExi", "Extra", "Ext", "NegNeg",
];

/// Maps a rule name or one of its short synonyms (`AlImp`, `GaExi`, `DeUni`,
/// `Neg`, ...) to the canonical name.
pub fn canonical_rule_name(s: &str) -> Option<&'static str> {
    let long = if let Some(rest) = s.strip_prefix("Al").filter(|r| !r.starts_with("pha")) {
        format!("Alpha{rest}")
    } else if let Some(rest) = s.strip_prefix("Be").filter(|r| !r.starts_with("ta")) {
        format!("Beta{rest}")
    } else if let Some(rest) = s.strip_prefix("Ga").filter(|r| !r.starts_with("mma")) {
        format!("Gamma{rest}")
    } else if let Some(rest) = s.strip_prefix("De").filter(|r| !r.starts_with("lta")) {
        format!("Delta{rest}")
    } else if s == "Neg" {
        "NegNeg".to_string()
    } else {
        s.to_string()
    };
    RULE_NAMES.iter().copied().find(|n| *n == long)
}

impl RuleName for ScRule {
    fn name(&self) -> &'static str {
        match self {
            ScRule::Basic => "Basic",
            ScRule::AlphaDis => "AlphaDis",
            ScRule::AlphaImp => "AlphaImp",
            ScRule::AlphaCon => "AlphaCon",
            ScRule::BetaCon => "BetaCon",
            ScRule::BetaImp => "BetaImp",
            ScRule::BetaDis => "BetaDis",
            ScRule::GammaExi(_) => "GammaExi",
            ScRule::GammaUni(_) => "GammaUni",
            ScRule::DeltaUni(_) => "DeltaUni",
            ScRule::DeltaExi(_) => "DeltaExi",
            ScRule::Extra => "Extra",
            ScRule::Ext(_) => "Ext",
            ScRule::NegNeg => "NegNeg",
        }
    }
}

impl ScRule {
    /// Rules that the calculus treats as admissible or derived rather than primitive.
    pub fn is_primitive(&self) -> bool {
        !matches!(self, ScRule::Ext(_) | ScRule::NegNeg)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("{rule} does not apply to a sequent headed by {head}")]
    HeadMismatch { rule: &'static str, head: Formula },
    #[error("{0} needs a nonempty sequent")]
    EmptySequent(&'static str),
    #[error("constant {0} is not fresh")]
    FreshnessViolation(Name),
    #[error("the sequent does not contain every formula of the Ext target")]
    NotAnExtension,
    #[error("the negation of the head does not occur in the tail")]
    NotBasic,
    #[error("the head does not occur in the tail")]
    NotMember,
    #[error("{0} is not allowed when checking with primitive rules only")]
    NotPrimitive(&'static str),
    #[error("the stated premises do not match the rule (expected {expected}, first difference at {at})")]
    PremiseMismatch { expected: usize, at: usize },
}

impl ErrorCode for RuleError {
    fn code(&self) -> &'static str {
        match self {
            RuleError::HeadMismatch { .. } => "HeadMismatch",
            RuleError::EmptySequent(_) => "EmptySequent",
            RuleError::FreshnessViolation(_) => "FreshnessViolation",
            RuleError::NotAnExtension => "NotAnExtension",
            RuleError::NotBasic => "NotBasic",
            RuleError::NotMember => "NotMember",
            RuleError::NotPrimitive(_) => "NotPrimitive",
            RuleError::PremiseMismatch { .. } => "PremiseMismatch",
        }
    }
}

fn cons(p: Formula, z: &[Formula]) -> Sequent {
    let mut v = Vec::with_capacity(z.len() + 1);
    v.push(p);
    v.extend_from_slice(z);
    v
}

fn cons2(p: Formula, q: Formula, z: &[Formula]) -> Sequent {
    let mut v = Vec::with_capacity(z.len() + 2);
    v.push(p);
    v.push(q);
    v.extend_from_slice(z);
    v
}

/// Backward rule application: the premises that prove `s` by `r`.
pub fn apply_rule(s: &[Formula], r: &ScRule) -> Result<Vec<Sequent>, RuleError> {
    premises(s, r).map(SmallVec::into_vec)
}

/// [`apply_rule`] without the outer allocation.
pub(crate) fn premises(s: &[Formula], r: &ScRule) -> Result<SmallVec<[Sequent; 2]>, RuleError> {
    if let ScRule::Ext(target) = r {
        return if ext(s, target) { Ok(smallvec![target.clone()]) } else { Err(RuleError::NotAnExtension) };
    }
    let rule = r.name();
    let (head, z) = s.split_first().ok_or(RuleError::EmptySequent(rule))?;
    let mismatch = || RuleError::HeadMismatch { rule, head: head.clone() };
    use Formula::*;
    match r {
        ScRule::Basic => {
            if z.iter().any(|q| q.is_negation_of(head)) {
                Ok(SmallVec::new())
            } else {
                Err(RuleError::NotBasic)
            }
        }
        ScRule::AlphaDis => match head {
            Dis(p, q) => Ok(smallvec![cons2((**p).clone(), (**q).clone(), z)]),
            _ => Err(mismatch()),
        },
        ScRule::AlphaImp => match head {
            Imp(p, q) => Ok(smallvec![cons2(Formula::neg_shared(p.clone()), (**q).clone(), z)]),
            _ => Err(mismatch()),
        },
        ScRule::AlphaCon => match head.negated() {
            Some(Con(p, q)) => Ok(smallvec![cons2(Formula::neg_shared(p.clone()), Formula::neg_shared(q.clone()), z)]),
            _ => Err(mismatch()),
        },
        ScRule::BetaCon => match head {
            Con(p, q) => Ok(smallvec![cons((**p).clone(), z), cons((**q).clone(), z)]),
            _ => Err(mismatch()),
        },
        ScRule::BetaImp => match head.negated() {
            Some(Imp(p, q)) => Ok(smallvec![cons((**p).clone(), z), cons(Formula::neg_shared(q.clone()), z)]),
            _ => Err(mismatch()),
        },
        ScRule::BetaDis => match head.negated() {
            Some(Dis(p, q)) => {
                Ok(smallvec![cons(Formula::neg_shared(p.clone()), z), cons(Formula::neg_shared(q.clone()), z)])
            }
            _ => Err(mismatch()),
        },
        ScRule::GammaExi(t) => match head {
            Exi(p) => Ok(smallvec![cons(instantiate(p, t), z)]),
            _ => Err(mismatch()),
        },
        ScRule::GammaUni(t) => match head.negated() {
            Some(Uni(p)) => Ok(smallvec![cons(Formula::neg(instantiate(p, t)), z)]),
            _ => Err(mismatch()),
        },
        ScRule::DeltaUni(c) => match head {
            Uni(p) => {
                if !fresh_constant(c.as_str(), s) {
                    return Err(RuleError::FreshnessViolation(c.clone()));
                }
                Ok(smallvec![cons(instantiate(p, &Term::Fun(c.clone(), vec![])), z)])
            }
            _ => Err(mismatch()),
        },
        ScRule::DeltaExi(c) => match head.negated() {
            Some(Exi(p)) => {
                if !fresh_constant(c.as_str(), s) {
                    return Err(RuleError::FreshnessViolation(c.clone()));
                }
                Ok(smallvec![cons(Formula::neg(instantiate(p, &Term::Fun(c.clone(), vec![]))), z)])
            }
            _ => Err(mismatch()),
        },
        ScRule::Extra => {
            if member(head, z) {
                Ok(smallvec![z.to_vec()])
            } else {
                Err(RuleError::NotMember)
            }
        }
        ScRule::NegNeg => match head.negated().and_then(Formula::negated) {
            Some(p) => Ok(smallvec![cons(p.clone(), z)]),
            None => Err(mismatch()),
        },
        ScRule::Ext(_) => unreachable!(),
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CheckMode {
    #[default]
    Full,
    /// Rejects the admissible Ext rule and the derived NegNeg rule.
    PrimitiveOnly,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SequentCalculus {
    pub mode: CheckMode,
}

impl Calculus for SequentCalculus {
    type Judgment = Sequent;
    type Rule = ScRule;
    type Error = RuleError;

    fn apply(&self, s: &Sequent, r: &ScRule) -> Result<Vec<Sequent>, RuleError> {
        if self.mode == CheckMode::PrimitiveOnly && !r.is_primitive() {
            return Err(RuleError::NotPrimitive(r.name()));
        }
        apply_rule(s, r)
    }

    fn premise_mismatch(&self, expected: usize, at: usize) -> RuleError {
        RuleError::PremiseMismatch { expected, at }
    }
}

pub fn check_proof(pf: &ScProof) -> CheckReport<RuleError> {
    derivation::check(&SequentCalculus::default(), pf)
}

pub fn check_proof_with(pf: &ScProof, mode: CheckMode) -> CheckReport<RuleError> {
    derivation::check(&SequentCalculus { mode }, pf)
}

/// Lowest `sk<k>` constant not occurring in `ps`.
pub fn suggest_fresh(ps: &[Formula]) -> Name {
    (0..)
        .map(|k| format!("sk{k}"))
        .find(|c| fresh_constant(c, ps))
        .map(|c| Name::new(&c))
        .expect("some index is unused")
}

/// Rules that can be applied to `s`, in table order. Witness-carrying rules
/// are returned as templates; δ-templates suggest a fresh constant.
pub fn applicable_rules(s: &[Formula]) -> Vec<RuleTemplate<ScRule>> {
    let mut out = Vec::new();
    let ready = |r: ScRule| RuleTemplate { name: r.name(), witness: Witness::None, suggestion: Some(r) };
    if let Some((head, z)) = s.split_first() {
        use Formula::*;
        let neg = head.negated();
        if z.iter().any(|q| q.is_negation_of(head)) {
            out.push(ready(ScRule::Basic));
        }
        if matches!(head, Dis(..)) {
            out.push(ready(ScRule::AlphaDis));
        }
        if matches!(head, Imp(..)) {
            out.push(ready(ScRule::AlphaImp));
        }
        if matches!(neg, Some(Con(..))) {
            out.push(ready(ScRule::AlphaCon));
        }
        if matches!(head, Con(..)) {
            out.push(ready(ScRule::BetaCon));
        }
        if matches!(neg, Some(Imp(..))) {
            out.push(ready(ScRule::BetaImp));
        }
        if matches!(neg, Some(Dis(..))) {
            out.push(ready(ScRule::BetaDis));
        }
        if matches!(head, Exi(_)) {
            out.push(RuleTemplate { name: "GammaExi", witness: Witness::Term, suggestion: None });
        }
        if matches!(neg, Some(Uni(_))) {
            out.push(RuleTemplate { name: "GammaUni", witness: Witness::Term, suggestion: None });
        }
        if matches!(head, Uni(_)) {
            let c = suggest_fresh(s);
            out.push(RuleTemplate { name: "DeltaUni", witness: Witness::Constant, suggestion: Some(ScRule::DeltaUni(c)) });
        }
        if matches!(neg, Some(Exi(_))) {
            let c = suggest_fresh(s);
            out.push(RuleTemplate { name: "DeltaExi", witness: Witness::Constant, suggestion: Some(ScRule::DeltaExi(c)) });
        }
        if member(head, z) {
            out.push(ready(ScRule::Extra));
        }
    }
    out.push(RuleTemplate { name: "Ext", witness: Witness::Sequent, suggestion: None });
    if let Some(head) = s.first() {
        if head.negated().and_then(Formula::negated).is_some() {
            out.push(ready(ScRule::NegNeg));
        }
    }
    out
}

/// Replaces the derived NegNeg step on `Neg (Neg p) # z` by primitive steps
/// plus Ext, leaving `p # z` as the single open goal.
pub fn expand_negneg(s: &[Formula]) -> Result<ScProof, RuleError> {
    let (head, z) = s.split_first().ok_or(RuleError::EmptySequent("NegNeg"))?;
    let p = head
        .negated()
        .and_then(Formula::negated)
        .ok_or_else(|| RuleError::HeadMismatch { rule: "NegNeg", head: head.clone() })?;
    let after_alpha = cons2(head.clone(), Formula::Falsity, z);
    let left = cons2(p.clone(), Formula::Falsity, z);
    let right = cons2(Formula::truth(), Formula::Falsity, z);
    let goal = cons(p.clone(), z);
    let basic = cons2(Formula::Falsity, Formula::truth(), z);
    Ok(Derivation::by(
        s.to_vec(),
        ScRule::AlphaImp,
        vec![Derivation::by(
            after_alpha,
            ScRule::BetaImp,
            vec![
                Derivation::by(left, ScRule::Ext(goal.clone()), vec![Derivation::open(goal)]),
                Derivation::by(
                    right,
                    ScRule::Ext(basic.clone()),
                    vec![Derivation::by(basic, ScRule::Basic, vec![])],
                ),
            ],
        )],
    ))
}

/// Displays a sequent as a bracketed list in abstract notation.
pub struct DisplaySequent<'a>(pub &'a [Formula]);

impl fmt::Display for DisplaySequent<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}
