//! Tableau proof search producing sequent-calculus derivations.
//!
//! The search runs on lightweight signed references into the input and
//! records the moves it makes. Only when every branch closes are the moves
//! replayed through [`apply_rule`] to build the derivation, so whatever the
//! prover returns can be re-checked with
//! [`check_proof`](crate::sequent::check_proof).

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use smallvec::SmallVec;
use typed_arena::Arena;

use crate::cancel::CancelToken;
use crate::derivation::Derivation;
use crate::semantics::{countermodel_search_with, disjunction_reading, eval_formula, eval_term, Environment, Model, SearchOutcome};
use crate::sequent::{premises, ScProof, ScRule, Sequent};
use crate::syntax::{instantiate, Formula, Name, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// γ-instantiations allowed along one branch at the deepest iteration.
    pub max_gamma: usize,
    /// Search steps taken, summed over all iterations.
    pub max_expansions: u64,
    pub deadline: Duration,
}

impl Default for SearchBudget {
    fn default() -> SearchBudget {
        SearchBudget { max_gamma: 16, max_expansions: 2_000_000, deadline: Duration::from_secs(10) }
    }
}

impl SearchBudget {
    /// Small budget for background checks in interactive sessions.
    pub fn interactive() -> SearchBudget {
        SearchBudget { max_gamma: 6, max_expansions: 20_000, deadline: Duration::from_millis(200) }
    }

    pub fn with_expansions(mut self, n: u64) -> SearchBudget {
        self.max_expansions = n;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Assessment {
    Proved(ScProof),
    /// A branch was fully expanded without closing. The model, when
    /// present, falsifies the sequent.
    LikelyUnprovable(Option<Model>),
    Unknown,
}

impl Assessment {
    pub fn label(&self) -> &'static str {
        match self {
            Assessment::Proved(_) => "Proved",
            Assessment::LikelyUnprovable(_) => "LikelyUnprovable",
            Assessment::Unknown => "Unknown",
        }
    }

    pub fn is_proved(&self) -> bool {
        matches!(self, Assessment::Proved(_))
    }
}

pub fn prove(s: &[Formula], budget: &SearchBudget) -> Assessment {
    prove_with(s, budget, &CancelToken::new())
}

pub fn assess_subgoal(s: &[Formula], budget: &SearchBudget) -> Assessment {
    prove(s, budget)
}

/// Iterative deepening on the per-branch γ limit, starting from zero. Without
/// quantifiers a single pass decides the sequent.
pub fn prove_with(s: &[Formula], budget: &SearchBudget, cancel: &CancelToken) -> Assessment {
    let arena = Arena::with_capacity(1);
    let root: Seq = s.iter().map(Signed::of).collect();
    let mut search = Search {
        arena: &arena,
        budget,
        cancel,
        start: Instant::now(),
        expansions: 0,
        limit: 0,
        moves: Vec::with_capacity(16),
        picks: Vec::with_capacity(16),
        leaf: Seq::new(),
    };
    loop {
        if cancel.is_cancelled() {
            return Assessment::Unknown;
        }
        search.moves.clear();
        search.picks.clear();
        match search.branch(root.clone(), root.len(), 0, &mut Used::default()) {
            Ok(()) => return Assessment::Proved(replay(s.to_vec(), &search.moves, &search.picks, &mut 0)),
            Err(Stop::Saturated) => return Assessment::LikelyUnprovable(countermodel(s, &search.leaf, cancel)),
            Err(Stop::Limit) if search.limit < budget.max_gamma => search.limit += 1,
            Err(Stop::Cancelled) => return Assessment::Unknown,
            Err(Stop::Limit | Stop::OutOfBudget) => {
                return match search_countermodel(s, 20_000, cancel) {
                    Some(m) => Assessment::LikelyUnprovable(Some(m)),
                    None => Assessment::Unknown,
                }
            }
        }
    }
}

/// A formula on a branch, either as it stands or negated. Formulas of the
/// shape `Neg p` are always held as `p` with the sign set, so structural
/// equality of signed references matches equality of the formulas.
#[derive(Clone, Copy)]
struct Signed<'a> {
    neg: bool,
    base: &'a Formula,
}

impl<'a> Signed<'a> {
    fn of(f: &'a Formula) -> Signed<'a> {
        match f {
            Formula::Imp(p, q) if **q == Formula::Falsity => Signed { neg: true, base: p },
            _ => Signed { neg: false, base: f },
        }
    }

    fn negation(p: &'a Formula) -> Signed<'a> {
        Signed { neg: true, base: p }
    }

    fn same(self, other: Signed<'_>) -> bool {
        self.neg == other.neg && (std::ptr::eq(self.base, other.base) || *self.base == *other.base)
    }

    /// True iff `other` is the negation of `self`.
    fn refuted_by(self, other: Signed<'_>) -> bool {
        other.neg && Signed::of(other.base).same(self)
    }

    fn is_falsity(self) -> bool {
        !self.neg && *self.base == Formula::Falsity
    }
}

type Seq<'a> = SmallVec<[Signed<'a>; 8]>;

enum Stop {
    /// A branch on which no rule applies any more; the leaf is kept in
    /// `Search::leaf`.
    Saturated,
    /// The γ limit of this iteration was reached.
    Limit,
    OutOfBudget,
    Cancelled,
}

/// One step of a closed search, in depth-first order. Ext targets are
/// positions into the current sequent, stored in `Search::picks`.
enum Move {
    Basic,
    Ext { from: usize, len: usize },
    Rule(ScRule),
}

/// Terms already used to instantiate each γ-formula on the current branch.
#[derive(Clone, Default)]
struct Used<'a>(Vec<(Signed<'a>, Vec<Term>)>);

impl<'a> Used<'a> {
    fn get(&self, g: Signed<'_>) -> Option<&[Term]> {
        self.0.iter().find(|(h, _)| h.same(g)).map(|(_, ts)| ts.as_slice())
    }

    fn record(&mut self, g: Signed<'a>, t: Term) {
        match self.0.iter_mut().find(|(h, _)| h.same(g)) {
            Some((_, ts)) => ts.push(t),
            None => self.0.push((g, vec![t])),
        }
    }
}

struct Search<'a, 'b> {
    arena: &'a Arena<Formula>,
    budget: &'b SearchBudget,
    cancel: &'b CancelToken,
    start: Instant,
    expansions: u64,
    limit: usize,
    moves: Vec<Move>,
    picks: Vec<u16>,
    leaf: Seq<'a>,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Class {
    Alpha,
    Delta,
    Beta,
    Gamma,
    Literal,
}

fn classify(p: Signed<'_>, falsity_present: bool) -> (Class, Option<ScRule>) {
    use Formula::*;
    if !p.neg {
        return match p.base {
            Dis(..) => (Class::Alpha, Some(ScRule::AlphaDis)),
            Imp(..) => (Class::Alpha, Some(ScRule::AlphaImp)),
            Con(..) => (Class::Beta, Some(ScRule::BetaCon)),
            Exi(_) => (Class::Gamma, None),
            Uni(_) => (Class::Delta, None),
            Falsity | Pre(..) => (Class::Literal, None),
        };
    }
    match p.base {
        Con(..) => (Class::Alpha, Some(ScRule::AlphaCon)),
        Dis(..) => (Class::Beta, Some(ScRule::BetaDis)),
        Imp(..) => (Class::Beta, Some(ScRule::BetaImp)),
        Uni(_) => (Class::Gamma, None),
        Exi(_) => (Class::Delta, None),
        Pre(..) => (Class::Literal, None),
        // Truth unfolds once to put Falsity next to it, then closes.
        Falsity if falsity_present => (Class::Literal, None),
        Falsity => (Class::Alpha, Some(ScRule::AlphaImp)),
    }
}

enum Closure {
    Head,
    /// Positions of a formula and its negation.
    Pair(usize, usize),
}

/// Looks for a complementary pair with at least one member among the first
/// `fresh` formulas.
fn closure(s: &[Signed<'_>], fresh: usize) -> Option<Closure> {
    let (head, tail) = s.split_first()?;
    if fresh > 0 && tail.iter().any(|q| head.refuted_by(*q)) {
        return Some(Closure::Head);
    }
    for (j, q) in s.iter().enumerate() {
        if q.neg {
            let p = Signed::of(q.base);
            let candidates = if j < fresh { s } else { &s[..fresh.min(s.len())] };
            if let Some(i) = candidates.iter().position(|x| x.same(p)) {
                return Some(Closure::Pair(i, j));
            }
        }
    }
    None
}

fn body(f: &Formula) -> &Formula {
    match f {
        Formula::Exi(p) | Formula::Uni(p) => p,
        _ => unreachable!("quantified by classification"),
    }
}

impl<'a> Search<'a, '_> {
    fn tick(&mut self) -> Result<(), Stop> {
        self.expansions += 1;
        if self.expansions > self.budget.max_expansions {
            return Err(Stop::OutOfBudget);
        }
        if self.expansions % 512 == 0 {
            if self.cancel.is_cancelled() {
                return Err(Stop::Cancelled);
            }
            if self.start.elapsed() > self.budget.deadline {
                return Err(Stop::OutOfBudget);
            }
        }
        Ok(())
    }

    fn ext(&mut self, s: &[Signed<'a>], picks: impl IntoIterator<Item = usize>) -> Result<Seq<'a>, Stop> {
        self.tick()?;
        let from = self.picks.len();
        let mut out = Seq::new();
        for i in picks {
            self.picks.push(i as u16);
            out.push(s[i]);
        }
        self.moves.push(Move::Ext { from, len: out.len() });
        Ok(out)
    }

    fn keep(&mut self, f: Formula) -> &'a Formula {
        self.arena.alloc(f)
    }

    /// Expands one branch. `fresh` counts the formulas at the front of
    /// `seq` that were added by the last step; older pairs are known not to
    /// be complementary.
    fn branch(&mut self, seq: Seq<'a>, mut fresh: usize, mut gammas: usize, used: &mut Used<'a>) -> Result<(), Stop> {
        let mut cur = seq;
        loop {
            self.tick()?;
            match closure(&cur, fresh) {
                Some(Closure::Head) => {
                    self.moves.push(Move::Basic);
                    return Ok(());
                }
                Some(Closure::Pair(i, j)) => {
                    self.ext(&cur, [i, j])?;
                    self.moves.push(Move::Basic);
                    return Ok(());
                }
                None => {}
            }
            let falsity_present = cur.iter().any(|p| p.is_falsity());
            let mut best: Option<(Class, usize, Option<ScRule>)> = None;
            for (i, p) in cur.iter().enumerate() {
                let (class, rule) = classify(*p, falsity_present);
                if class != Class::Literal && best.as_ref().is_none_or(|b| class < b.0) {
                    best = Some((class, i, rule));
                }
            }
            let Some((class, idx, rule)) = best else {
                self.leaf = cur;
                return Err(Stop::Saturated);
            };
            if class == Class::Gamma {
                if gammas >= self.limit {
                    return Err(Stop::Limit);
                }
                let Some((idx, term)) = self.next_gamma(&cur, used) else {
                    if has_function_symbols(&cur) {
                        return Err(Stop::Limit);
                    }
                    self.leaf = cur;
                    return Err(Stop::Saturated);
                };
                let g = cur[idx];
                let mut picks: SmallVec<[usize; 8]> = SmallVec::new();
                picks.push(idx);
                for (i, p) in cur.iter().enumerate() {
                    if !p.same(g) && !picks.iter().any(|&k| cur[k].same(*p)) {
                        picks.push(i);
                    }
                }
                picks.push(idx);
                cur = self.ext(&cur, picks)?;
                let inst = self.keep(instantiate(body(g.base), &term));
                let rule = if g.neg {
                    cur[0] = Signed::negation(inst);
                    ScRule::GammaUni(term.clone())
                } else {
                    cur[0] = Signed::of(inst);
                    ScRule::GammaExi(term.clone())
                };
                used.record(g, term);
                gammas += 1;
                fresh = 1;
                self.tick()?;
                self.moves.push(Move::Rule(rule));
                continue;
            }
            if idx != 0 || cur[1..].iter().any(|p| p.same(cur[0])) {
                let mut picks: SmallVec<[usize; 8]> = SmallVec::new();
                picks.push(idx);
                for (i, p) in cur.iter().enumerate() {
                    if !picks.iter().any(|&k| cur[k].same(*p)) {
                        picks.push(i);
                    }
                }
                cur = self.ext(&cur, picks)?;
            }
            let head = cur[0];
            let (p, q): (&Formula, &Formula) = match head.base {
                Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => (p, q),
                f => (f, f),
            };
            let split = |cur: &mut Seq<'a>, left: Signed<'a>, right: Signed<'a>| {
                let mut other = cur.clone();
                cur[0] = left;
                other[0] = right;
                other
            };
            let (rule, right) = match rule {
                Some(ScRule::AlphaDis) => {
                    cur[0] = Signed::of(p);
                    cur.insert(1, Signed::of(q));
                    (ScRule::AlphaDis, None)
                }
                Some(ScRule::AlphaImp) => {
                    cur[0] = Signed::negation(p);
                    cur.insert(1, Signed::of(q));
                    (ScRule::AlphaImp, None)
                }
                Some(ScRule::AlphaCon) => {
                    cur[0] = Signed::negation(p);
                    cur.insert(1, Signed::negation(q));
                    (ScRule::AlphaCon, None)
                }
                Some(ScRule::BetaCon) => (ScRule::BetaCon, Some(split(&mut cur, Signed::of(p), Signed::of(q)))),
                Some(ScRule::BetaImp) => (ScRule::BetaImp, Some(split(&mut cur, Signed::of(p), Signed::negation(q)))),
                Some(ScRule::BetaDis) => {
                    (ScRule::BetaDis, Some(split(&mut cur, Signed::negation(p), Signed::negation(q))))
                }
                Some(_) => unreachable!("classification yields propositional rules"),
                None => {
                    let c = fresh_name(&cur);
                    let inst = self.keep(instantiate(body(head.base), &Term::Fun(c.clone(), vec![])));
                    if head.neg {
                        cur[0] = Signed::negation(inst);
                        (ScRule::DeltaExi(c), None)
                    } else {
                        cur[0] = Signed::of(inst);
                        (ScRule::DeltaUni(c), None)
                    }
                }
            };
            self.moves.push(Move::Rule(rule));
            match right {
                None => fresh = if class == Class::Alpha { 2 } else { 1 },
                Some(right) => {
                    let mut used_right = used.clone();
                    self.branch(cur, 1, gammas, used)?;
                    return self.branch(right, 1, gammas, &mut used_right);
                }
            }
        }
    }

    /// The first γ-formula with an unused term, and that term. Terms are
    /// tried by nesting depth up to the current limit.
    fn next_gamma(&self, s: &[Signed<'a>], used: &Used<'a>) -> Option<(usize, Term)> {
        let universe = herbrand_terms(s, used, self.limit);
        for (i, p) in s.iter().enumerate() {
            if classify(*p, false).0 != Class::Gamma {
                continue;
            }
            let done = used.get(*p);
            if let Some(t) = universe.iter().find(|t| done.is_none_or(|d| !d.contains(t))) {
                return Some((i, t.clone()));
            }
        }
        None
    }
}

/// Rebuilds the derivation for a closed search by applying each recorded
/// rule with the kernel. Ext targets are taken from the current sequent, so
/// they are extensions by construction.
fn replay(seq: Sequent, moves: &[Move], picks: &[u16], at: &mut usize) -> ScProof {
    let mut chain: SmallVec<[(Sequent, ScRule); 8]> = SmallVec::new();
    let mut cur = seq;
    let leaf = loop {
        let m = &moves[*at];
        *at += 1;
        match m {
            Move::Basic => {
                premises(&cur, &ScRule::Basic).expect("search closed this sequent");
                break Derivation::by(cur, ScRule::Basic, vec![]);
            }
            Move::Ext { from, len } => {
                let target: Sequent = picks[*from..from + len].iter().map(|&i| cur[i as usize].clone()).collect();
                chain.push((cur, ScRule::Ext(target.clone())));
                cur = target;
            }
            Move::Rule(rule) => {
                let mut next = premises(&cur, rule).expect("search follows the kernel");
                if next.len() == 1 {
                    chain.push((cur, rule.clone()));
                    cur = next.pop().expect("one premise");
                    continue;
                }
                let right = next.pop().expect("two premises");
                let left = next.pop().expect("two premises");
                let left = replay(left, moves, picks, at);
                let right = replay(right, moves, picks, at);
                break Derivation::by(cur, rule.clone(), vec![left, right]);
            }
        }
    };
    chain.into_iter().rev().fold(leaf, |node, (concl, rule)| Derivation::by(concl, rule, vec![node]))
}

/// The lowest `sk<k>` not occurring in `s`, matching
/// [`suggest_fresh`](crate::sequent::suggest_fresh).
fn fresh_name(s: &[Signed<'_>]) -> Name {
    (0..)
        .map(|k| format!("sk{k}"))
        .find(|c| !s.iter().any(|p| p.base.mentions_function(c)))
        .map(|c| Name::new(&c))
        .expect("some index is unused")
}

fn has_function_symbols(s: &[Signed<'_>]) -> bool {
    s.iter().any(|p| p.base.functions().iter().any(|(_, a)| *a > 0))
}

/// Closed terms over the branch's symbols, ordered by nesting depth and
/// then by construction order, up to `max_depth`.
fn herbrand_terms(s: &[Signed<'_>], used: &Used<'_>, max_depth: usize) -> Vec<Term> {
    let mut constants = BTreeSet::new();
    let mut functions = BTreeSet::new();
    for p in s {
        for (n, a) in p.base.functions() {
            if a == 0 {
                constants.insert(n);
            } else {
                functions.insert((n, a));
            }
        }
    }
    for (_, terms) in &used.0 {
        for t in terms {
            collect_constants(t, &mut constants);
        }
    }
    let mut terms: Vec<Term> = constants.into_iter().map(|c| Term::Fun(c, vec![])).collect();
    if terms.is_empty() {
        terms.push(Term::Fun(fresh_name(s), vec![]));
    }
    let mut frontier_start = 0;
    'layers: for _ in 0..max_depth {
        if functions.is_empty() {
            break;
        }
        let known = terms.len();
        for (f, arity) in &functions {
            let mut idx = vec![0usize; *arity];
            loop {
                // Only tuples that use at least one term from the last layer.
                if idx.iter().any(|&i| i >= frontier_start) {
                    if terms.len() >= MAX_TERMS {
                        break 'layers;
                    }
                    let args = idx.iter().map(|&i| terms[i].clone()).collect();
                    terms.push(Term::Fun(f.clone(), args));
                }
                if !step(&mut idx, known) {
                    break;
                }
            }
        }
        frontier_start = known;
    }
    terms
}

/// Size cap on the term universe of one γ step.
const MAX_TERMS: usize = 256;

/// Advances `idx` to the next tuple over `0..base`; false after the last.
fn step(idx: &mut [usize], base: usize) -> bool {
    for i in idx.iter_mut().rev() {
        *i += 1;
        if *i < base {
            return true;
        }
        *i = 0;
    }
    false
}

fn collect_constants(t: &Term, out: &mut BTreeSet<Name>) {
    if let Term::Fun(n, args) = t {
        if args.is_empty() {
            out.insert(n.clone());
        }
        for a in args {
            collect_constants(a, out);
        }
    }
}

fn falsifies(m: &Model, s: &[Formula]) -> bool {
    let env = Environment::default();
    s.iter().all(|p| eval_formula(p, m, &env) == Ok(false))
}

type Symbols<'f> = Vec<(&'f Name, usize)>;

fn symbols<'f>(p: &'f Formula, functions: &mut Symbols<'f>, predicates: &mut Symbols<'f>) {
    fn term<'f>(t: &'f Term, functions: &mut Symbols<'f>) {
        if let Term::Fun(n, args) = t {
            functions.push((n, args.len()));
            args.iter().for_each(|a| term(a, functions));
        }
    }
    match p {
        Formula::Falsity => {}
        Formula::Pre(n, args) => {
            predicates.push((n, args.len()));
            args.iter().for_each(|a| term(a, functions));
        }
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
            symbols(a, functions, predicates);
            symbols(b, functions, predicates);
        }
        Formula::Exi(a) | Formula::Uni(a) => symbols(a, functions, predicates),
    }
}

fn atoms_of<'f>(p: &'f Formula, out: &mut SmallVec<[&'f Name; 8]>) -> bool {
    match p {
        Formula::Falsity => true,
        Formula::Pre(n, args) if args.is_empty() => {
            out.push(n);
            true
        }
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => atoms_of(a, out) && atoms_of(b, out),
        _ => false,
    }
}

fn value(p: &Formula, atom: &impl Fn(&Name) -> bool) -> bool {
    match p {
        Formula::Falsity => false,
        Formula::Pre(n, _) => atom(n),
        Formula::Imp(a, b) => !value(a, atom) || value(b, atom),
        Formula::Dis(a, b) => value(a, atom) || value(b, atom),
        Formula::Con(a, b) => value(a, atom) && value(b, atom),
        Formula::Exi(_) | Formula::Uni(_) => unreachable!("checked by atoms_of"),
    }
}

/// Propositional case of [`countermodel`]: a one-element model where an
/// atom holds iff its negation is on the leaf.
fn propositional_countermodel(root: &[Formula], leaf: &[Signed<'_>]) -> Option<Model> {
    let mut atoms = SmallVec::new();
    if !root.iter().all(|p| atoms_of(p, &mut atoms)) {
        return None;
    }
    atoms.sort_unstable();
    atoms.dedup();
    let holds = |n: &Name| leaf.iter().any(|q| q.neg && matches!(q.base, Formula::Pre(m, args) if args.is_empty() && m == n));
    if root.iter().any(|p| value(p, &holds)) {
        return None;
    }
    Some(Model::valuation(atoms.into_iter().map(|n| (n.clone(), holds(n)))))
}

/// A model read off an open leaf: constants denote themselves (or everything
/// collapses to one element when proper functions occur) and a predicate
/// holds exactly where the leaf contains its negation. Returned only if it
/// falsifies `root`; otherwise falls back to enumeration.
fn countermodel(root: &[Formula], leaf: &[Signed<'_>], cancel: &CancelToken) -> Option<Model> {
    if let Some(m) = propositional_countermodel(root, leaf) {
        return Some(m);
    }
    let mut functions = Vec::new();
    let mut predicates = Vec::new();
    for p in root.iter().chain(leaf.iter().map(|p| p.base)) {
        symbols(p, &mut functions, &mut predicates);
    }
    functions.sort_unstable();
    functions.dedup();
    predicates.sort_unstable();
    predicates.dedup();
    let constants: Vec<&Name> = functions.iter().filter(|(_, a)| *a == 0).map(|(n, _)| *n).collect();
    let collapse = functions.iter().any(|(_, a)| *a > 0);
    let size = if collapse { 1 } else { constants.len().max(1) };
    let mut m = Model::new(size);
    for (n, a) in &functions {
        let table = if *a == 0 && !collapse {
            vec![constants.iter().position(|c| c == n).expect("collected")]
        } else {
            vec![0; size.pow(*a as u32)]
        };
        m = m.with_function((*n).clone(), *a, table)?;
    }
    let base = m.clone();
    for (n, a) in &predicates {
        let holds: Vec<Vec<usize>> = leaf
            .iter()
            .filter(|q| q.neg)
            .filter_map(|q| match q.base {
                Formula::Pre(m, args) if m == *n && args.len() == *a => {
                    args.iter().map(|t| eval_term(t, &base, &Environment::default()).ok()).collect()
                }
                _ => None,
            })
            .collect();
        m = m.with_predicate((*n).clone(), *a, holds)?;
    }
    if falsifies(&m, root) {
        Some(m)
    } else {
        search_countermodel(root, 100_000, cancel)
    }
}

fn search_countermodel(root: &[Formula], budget: u64, cancel: &CancelToken) -> Option<Model> {
    match countermodel_search_with(&disjunction_reading(root), 3, budget, cancel) {
        SearchOutcome::Found(cm) if falsifies(&cm.model, root) => Some(cm.model),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivation::{RuleName, Verdict};
    use crate::sequent::check_proof;
    use crate::syntax::{parse_formula, Notation};

    fn std(s: &str) -> Formula {
        parse_formula(s, Notation::Standard).unwrap()
    }

    fn rules_of(pf: &ScProof, out: &mut Vec<&'static str>) {
        if let Some(step) = &pf.step {
            out.push(step.rule.name());
            for p in &step.premises {
                rules_of(p, out);
            }
        }
    }

    #[test]
    fn identity_has_canonical_proof() {
        let Assessment::Proved(pf) = prove(&[std("p --> p")], &SearchBudget::default()) else { panic!() };
        let mut rules = Vec::new();
        rules_of(&pf, &mut rules);
        assert_eq!(rules, ["AlphaImp", "Ext", "Basic"]);
        assert_eq!(check_proof(&pf).verdict, Verdict::Complete);
    }

    #[test]
    fn atom_gets_countermodel() {
        let Assessment::LikelyUnprovable(Some(m)) = prove(&[std("p")], &SearchBudget::default()) else { panic!() };
        assert_eq!(m.size(), 1);
        assert_eq!(m.predicate_holds("p", 0, &[]), Some(false));
        assert!(matches!(prove(&[Formula::Falsity], &SearchBudget::interactive()), Assessment::LikelyUnprovable(_)));
    }

    #[test]
    fn closes_basic_and_truth() {
        let p = std("p");
        assert!(prove(&[p.clone(), Formula::neg(p)], &SearchBudget::interactive()).is_proved());
        let Assessment::Proved(pf) = prove(&[Formula::truth()], &SearchBudget::default()) else { panic!() };
        assert_eq!(check_proof(&pf).verdict, Verdict::Complete);
        let Assessment::Proved(pf) = prove(&[std("~~p --> p")], &SearchBudget::default()) else { panic!() };
        assert_eq!(check_proof(&pf).verdict, Verdict::Complete);
    }

    #[test]
    fn proves_first_order_examples() {
        for f in [
            "(forall x. P(x)) --> P(a)",
            "exists x. P(x) --> (forall y. P(y))",
            "(forall x. P(x) /\\ Q(x)) --> (forall x. P(x)) /\\ (forall x. Q(x))",
            "(exists x. forall y. R(x, y)) --> (forall y. exists x. R(x, y))",
            "(forall x. ~r(x) --> r(f(x))) --> (exists x. r(x) /\\ r(f(f(x))))",
        ] {
            let a = prove(&[std(f)], &SearchBudget::default());
            let Assessment::Proved(pf) = a else { panic!("{f}: {}", a.label()) };
            assert_eq!(check_proof(&pf).verdict, Verdict::Complete, "{f}");
        }
    }

    #[test]
    fn refutes_first_order_non_theorems() {
        for f in ["exists x. P(x)", "(forall y. exists x. R(x, y)) --> (exists x. forall y. R(x, y))", "P(a) --> P(b)"] {
            match prove(&[std(f)], &SearchBudget::default().with_expansions(50_000)) {
                Assessment::LikelyUnprovable(Some(m)) => assert!(falsifies(&m, &[std(f)]), "{f}"),
                Assessment::Unknown => {}
                other => panic!("{f}: {}", other.label()),
            }
        }
        assert!(matches!(prove(&[std("exists x. P(x)")], &SearchBudget::default()), Assessment::LikelyUnprovable(Some(_))));
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let f = std("(forall x. ~r(x) --> r(f(x))) --> (exists x. r(x) /\\ r(f(f(x))))");
        assert_eq!(prove(&[f], &SearchBudget::default().with_expansions(10)), Assessment::Unknown);
    }

    #[test]
    fn deterministic() {
        let f = std("(forall x. ~r(x) --> r(f(x))) --> (exists x. r(x) /\\ r(f(f(x))))");
        assert_eq!(prove(&[f.clone()], &SearchBudget::default()), prove(&[f], &SearchBudget::default()));
    }
}
