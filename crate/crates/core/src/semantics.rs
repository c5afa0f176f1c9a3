//! Tarskian semantics over finite domains `{0, .., size-1}`, exhaustive
//! countermodel search and a truth-table validity oracle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use smallvec::{smallvec, SmallVec};
use thiserror::Error;

use crate::cancel::CancelToken;
use crate::syntax::{Formula, Name, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("no interpretation for symbol `{0}` of arity {1}")]
    MissingSymbol(Name, usize),
}

/// Finite interpretation of function and predicate symbols.
///
/// A function table of arity `k` has `size^k` entries indexed by the
/// argument tuple read as a base-`size` number, first argument most
/// significant.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ModelJson", try_from = "ModelJson")]
pub struct Model {
    size: usize,
    functions: BTreeMap<(Name, usize), Vec<usize>>,
    predicates: BTreeMap<(Name, usize), BTreeSet<Vec<usize>>>,
}

impl Model {
    /// An empty model. Panics on `size == 0`; first-order domains are nonempty.
    pub fn new(size: usize) -> Model {
        assert!(size >= 1, "domains are nonempty");
        Model { size, functions: BTreeMap::new(), predicates: BTreeMap::new() }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// The one-element model of a propositional valuation: each atom is a
    /// 0-ary predicate holding iff its flag is set.
    pub fn valuation(atoms: impl IntoIterator<Item = (Name, bool)>) -> Model {
        let mut predicates = BTreeMap::new();
        for (n, v) in atoms {
            let mut holds = BTreeSet::new();
            if v {
                holds.insert(Vec::new());
            }
            predicates.insert((n, 0), holds);
        }
        Model { size: 1, functions: BTreeMap::new(), predicates }
    }

    /// Installs a total function table. Returns `None` if the table has the
    /// wrong length or mentions elements outside the domain.
    pub fn with_function(mut self, name: impl Into<Name>, arity: usize, table: Vec<usize>) -> Option<Model> {
        if table.len() != self.size.checked_pow(arity as u32)? || table.iter().any(|&d| d >= self.size) {
            return None;
        }
        self.functions.insert((name.into(), arity), table);
        Some(self)
    }

    /// Installs a predicate as the set of tuples on which it holds.
    pub fn with_predicate(mut self, name: impl Into<Name>, arity: usize, holds: impl IntoIterator<Item = Vec<usize>>) -> Option<Model> {
        let holds: BTreeSet<Vec<usize>> = holds.into_iter().collect();
        if holds.iter().any(|t| t.len() != arity || t.iter().any(|&d| d >= self.size)) {
            return None;
        }
        self.predicates.insert((name.into(), arity), holds);
        Some(self)
    }

    pub fn function_table(&self, name: &str, arity: usize) -> Option<&[usize]> {
        self.functions.get(&(Name::new(name), arity)).map(Vec::as_slice)
    }

    pub fn predicate_holds(&self, name: &str, arity: usize, args: &[usize]) -> Option<bool> {
        self.predicates.get(&(Name::new(name), arity)).map(|s| s.contains(args))
    }

    fn table_index(&self, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("models serialize")
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    size: usize,
    functions: Vec<FunctionJson>,
    predicates: Vec<PredicateJson>,
}

#[derive(Serialize, Deserialize)]
struct FunctionJson {
    name: Name,
    arity: usize,
    table: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PredicateJson {
    name: Name,
    arity: usize,
    holds: Vec<Vec<usize>>,
}

impl From<Model> for ModelJson {
    fn from(m: Model) -> ModelJson {
        ModelJson {
            size: m.size,
            functions: m
                .functions
                .into_iter()
                .map(|((name, arity), table)| FunctionJson { name, arity, table })
                .collect(),
            predicates: m
                .predicates
                .into_iter()
                .map(|((name, arity), holds)| PredicateJson { name, arity, holds: holds.into_iter().collect() })
                .collect(),
        }
    }
}

impl TryFrom<ModelJson> for Model {
    type Error = String;

    fn try_from(j: ModelJson) -> Result<Model, String> {
        if j.size == 0 {
            return Err("model size must be at least 1".into());
        }
        let mut m = Model::new(j.size);
        for f in j.functions {
            m = m
                .with_function(f.name.as_str(), f.arity, f.table)
                .ok_or_else(|| format!("bad table for function `{}`", f.name))?;
        }
        for p in j.predicates {
            m = m
                .with_predicate(p.name.as_str(), p.arity, p.holds)
                .ok_or_else(|| format!("bad tuples for predicate `{}`", p.name))?;
        }
        Ok(m)
    }
}

/// Values of de Bruijn variables: `Var i` denotes `values[i]`, or element 0
/// when `i` is out of range.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub values: Vec<usize>,
}

impl Environment {
    pub fn new(values: Vec<usize>) -> Environment {
        Environment { values }
    }

    pub fn get(&self, i: usize) -> usize {
        self.values.get(i).copied().unwrap_or(0)
    }

    /// The environment with `d` bound to index 0 and everything else shifted.
    pub fn prepend(&self, d: usize) -> Environment {
        let mut values = Vec::with_capacity(self.values.len() + 1);
        values.push(d);
        values.extend_from_slice(&self.values);
        Environment { values }
    }
}

pub fn eval_term(t: &Term, m: &Model, e: &Environment) -> Result<usize, SemanticsError> {
    match t {
        Term::Var(i) => Ok(e.get(*i)),
        Term::Fun(f, args) => {
            let table = m
                .functions
                .get(&(f.clone(), args.len()))
                .ok_or_else(|| SemanticsError::MissingSymbol(f.clone(), args.len()))?;
            let vals = args.iter().map(|a| eval_term(a, m, e)).collect::<Result<Vec<_>, _>>()?;
            Ok(table[m.table_index(&vals)])
        }
    }
}

pub fn eval_formula(p: &Formula, m: &Model, e: &Environment) -> Result<bool, SemanticsError> {
    Ok(match p {
        Formula::Falsity => false,
        Formula::Pre(n, args) => {
            let holds = m
                .predicates
                .get(&(n.clone(), args.len()))
                .ok_or_else(|| SemanticsError::MissingSymbol(n.clone(), args.len()))?;
            let vals = args.iter().map(|a| eval_term(a, m, e)).collect::<Result<Vec<_>, _>>()?;
            holds.contains(&vals)
        }
        Formula::Imp(a, b) => !eval_formula(a, m, e)? || eval_formula(b, m, e)?,
        Formula::Dis(a, b) => eval_formula(a, m, e)? || eval_formula(b, m, e)?,
        Formula::Con(a, b) => eval_formula(a, m, e)? && eval_formula(b, m, e)?,
        Formula::Exi(a) => {
            for d in 0..m.size {
                if eval_formula(a, m, &e.prepend(d))? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Uni(a) => {
            for d in 0..m.size {
                if !eval_formula(a, m, &e.prepend(d))? {
                    return Ok(false);
                }
            }
            true
        }
    })
}

/// The formula a one-sided sequent stands for: its members joined by `Dis`.
pub fn disjunction_reading(seq: &[Formula]) -> Formula {
    match seq.split_last() {
        None => Formula::Falsity,
        Some((last, init)) => init.iter().rev().fold(last.clone(), |acc, p| Formula::dis(p.clone(), acc)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Countermodel {
    pub model: Model,
    pub environment: Environment,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Countermodel),
    /// Every interpretation up to the size bound satisfies the formula.
    Exhausted,
    BudgetExceeded,
    Cancelled,
}

/// Enumerates finite interpretations looking for one that falsifies `p`.
///
/// Order: domain size ascending; within a size the interpretation is a digit
/// vector (function tables, then predicate tables, symbols sorted) stepped
/// lexicographically. Free variables are enumerated per interpretation.
/// `budget` bounds the number of evaluations.
pub fn countermodel_search(p: &Formula, max_size: usize, budget: u64) -> SearchOutcome {
    countermodel_search_with(p, max_size, budget, &CancelToken::new())
}

pub fn countermodel_search_with(p: &Formula, max_size: usize, budget: u64, cancel: &CancelToken) -> SearchOutcome {
    let sig = Signature::of(std::slice::from_ref(p));
    let compiled = Compiled::new(p, &sig);
    let free = p.max_free_var().map_or(0, |i| i + 1);
    let mut spent = 0u64;

    for size in 1..=max_size.max(1) {
        let func_slots: Vec<usize> = compiled.functions.iter().map(|&(_, a)| pow(size, a)).collect();
        let pred_slots: Vec<usize> = compiled.predicates.iter().map(|&(_, a)| pow(size, a)).collect();
        let func_digits: usize = func_slots.iter().sum();
        let pred_digits: usize = pred_slots.iter().sum();
        let mut digits = vec![0usize; func_digits + pred_digits];
        let radix = |i: usize| if i < func_digits { size } else { 2 };

        loop {
            if cancel.is_cancelled() {
                return SearchOutcome::Cancelled;
            }
            let interp = Interp::split(&digits, &func_slots, &pred_slots, size);
            let mut env = vec![0usize; free];
            loop {
                if spent >= budget {
                    return SearchOutcome::BudgetExceeded;
                }
                spent += 1;
                if !compiled.eval(&interp, &env) {
                    let model = interp.to_model(&compiled);
                    return SearchOutcome::Found(Countermodel { model, environment: Environment::new(env) });
                }
                if !odometer(&mut env, |_| size) {
                    break;
                }
            }
            if !odometer(&mut digits, radix) {
                break;
            }
        }
    }
    SearchOutcome::Exhausted
}

fn pow(base: usize, exp: usize) -> usize {
    base.pow(exp as u32)
}

/// Steps a digit vector to its lexicographic successor. Returns `false` on wrap-around.
fn odometer(digits: &mut [usize], radix: impl Fn(usize) -> usize) -> bool {
    for i in (0..digits.len()).rev() {
        digits[i] += 1;
        if digits[i] < radix(i) {
            return true;
        }
        digits[i] = 0;
    }
    false
}

/// Formula with symbols resolved to slot numbers, for fast repeated evaluation.
struct Compiled {
    functions: Vec<(Name, usize)>,
    predicates: Vec<(Name, usize)>,
    root: CForm,
}

enum CTerm {
    Var(usize),
    Fun(usize, Vec<CTerm>),
}

enum CForm {
    Falsity,
    Pre(usize, Vec<CTerm>),
    Imp(Box<CForm>, Box<CForm>),
    Dis(Box<CForm>, Box<CForm>),
    Con(Box<CForm>, Box<CForm>),
    Exi(Box<CForm>),
    Uni(Box<CForm>),
}

struct Interp {
    size: usize,
    functions: Vec<Vec<usize>>,
    predicates: Vec<Vec<bool>>,
}

impl Interp {
    fn split(digits: &[usize], func_slots: &[usize], pred_slots: &[usize], size: usize) -> Interp {
        let mut at = 0;
        let mut functions = Vec::with_capacity(func_slots.len());
        for &n in func_slots {
            functions.push(digits[at..at + n].to_vec());
            at += n;
        }
        let mut predicates = Vec::with_capacity(pred_slots.len());
        for &n in pred_slots {
            predicates.push(digits[at..at + n].iter().map(|&d| d == 1).collect());
            at += n;
        }
        Interp { size, functions, predicates }
    }

    fn to_model(&self, c: &Compiled) -> Model {
        let mut m = Model::new(self.size);
        for ((name, arity), table) in c.functions.iter().zip(&self.functions) {
            m.functions.insert((name.clone(), *arity), table.clone());
        }
        for ((name, arity), bits) in c.predicates.iter().zip(&self.predicates) {
            let holds = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(idx, _)| decode_tuple(idx, *arity, self.size))
                .collect();
            m.predicates.insert((name.clone(), *arity), holds);
        }
        m
    }
}

fn decode_tuple(mut idx: usize, arity: usize, size: usize) -> Vec<usize> {
    let mut out = vec![0; arity];
    for slot in out.iter_mut().rev() {
        *slot = idx % size;
        idx /= size;
    }
    out
}

impl Compiled {
    fn new(p: &Formula, sig: &Signature) -> Compiled {
        let functions: Vec<_> = sig.functions.iter().cloned().collect();
        let predicates: Vec<_> = sig.predicates.iter().cloned().collect();
        let root = compile_formula(p, &functions, &predicates);
        Compiled { functions, predicates, root }
    }

    /// `env` holds the free variables, index 0 first.
    fn eval(&self, i: &Interp, env: &[usize]) -> bool {
        let mut stack: Vec<usize> = env.iter().rev().copied().collect();
        eval_c(&self.root, i, &mut stack)
    }
}

fn slot(symbols: &[(Name, usize)], name: &Name, arity: usize) -> usize {
    symbols
        .iter()
        .position(|(n, a)| n == name && *a == arity)
        .expect("signature covers the formula")
}

fn compile_term(t: &Term, fs: &[(Name, usize)]) -> CTerm {
    match t {
        Term::Var(i) => CTerm::Var(*i),
        Term::Fun(f, args) => CTerm::Fun(slot(fs, f, args.len()), args.iter().map(|a| compile_term(a, fs)).collect()),
    }
}

fn compile_formula(p: &Formula, fs: &[(Name, usize)], ps: &[(Name, usize)]) -> CForm {
    let bin = |a: &Formula, b: &Formula| (Box::new(compile_formula(a, fs, ps)), Box::new(compile_formula(b, fs, ps)));
    match p {
        Formula::Falsity => CForm::Falsity,
        Formula::Pre(n, args) => CForm::Pre(slot(ps, n, args.len()), args.iter().map(|a| compile_term(a, fs)).collect()),
        Formula::Imp(a, b) => {
            let (a, b) = bin(a, b);
            CForm::Imp(a, b)
        }
        Formula::Dis(a, b) => {
            let (a, b) = bin(a, b);
            CForm::Dis(a, b)
        }
        Formula::Con(a, b) => {
            let (a, b) = bin(a, b);
            CForm::Con(a, b)
        }
        Formula::Exi(a) => CForm::Exi(Box::new(compile_formula(a, fs, ps))),
        Formula::Uni(a) => CForm::Uni(Box::new(compile_formula(a, fs, ps))),
    }
}

// The stack holds bound values innermost last; Var i reads stack[len - 1 - i].
fn eval_term_c(t: &CTerm, i: &Interp, stack: &[usize]) -> usize {
    match t {
        CTerm::Var(k) => {
            if *k < stack.len() {
                stack[stack.len() - 1 - k]
            } else {
                0
            }
        }
        CTerm::Fun(f, args) => {
            let idx = args.iter().fold(0, |acc, a| acc * i.size + eval_term_c(a, i, stack));
            i.functions[*f][idx]
        }
    }
}

fn eval_c(p: &CForm, i: &Interp, stack: &mut Vec<usize>) -> bool {
    match p {
        CForm::Falsity => false,
        CForm::Pre(n, args) => {
            let idx = args.iter().fold(0, |acc, a| acc * i.size + eval_term_c(a, i, stack));
            i.predicates[*n][idx]
        }
        CForm::Imp(a, b) => !eval_c(a, i, stack) || eval_c(b, i, stack),
        CForm::Dis(a, b) => eval_c(a, i, stack) || eval_c(b, i, stack),
        CForm::Con(a, b) => eval_c(a, i, stack) && eval_c(b, i, stack),
        CForm::Exi(a) => (0..i.size).any(|d| {
            stack.push(d);
            let r = eval_c(a, i, stack);
            stack.pop();
            r
        }),
        CForm::Uni(a) => (0..i.size).all(|d| {
            stack.push(d);
            let r = eval_c(a, i, stack);
            stack.pop();
            r
        }),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("formula is not propositional")]
pub struct NotPropositional;

/// Truth-table validity for formulas built from 0-ary predicates,
/// `Falsity`, `Imp`, `Dis` and `Con`. Rows are evaluated 64 at a time.
pub fn prop_valid(p: &Formula) -> Result<bool, NotPropositional> {
    let mut atoms: SmallVec<[&Name; 8]> = SmallVec::new();
    collect_atoms(p, &mut atoms)?;
    atoms.sort_unstable();
    atoms.dedup();
    if atoms.len() > 24 {
        return Err(NotPropositional);
    }
    const COLUMNS: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let rows = if atoms.len() >= 6 { u64::MAX } else { (1u64 << (1 << atoms.len())) - 1 };
    let mut columns: SmallVec<[u64; 8]> = smallvec![0; atoms.len()];
    for block in 0u64..(1u64 << atoms.len().saturating_sub(6)) {
        for (k, c) in columns.iter_mut().enumerate() {
            *c = if k < 6 { COLUMNS[k] } else if block >> (k - 6) & 1 == 1 { u64::MAX } else { 0 };
        }
        if truth_rows(p, &atoms, &columns) & rows != rows {
            return Ok(false);
        }
    }
    Ok(true)
}

fn collect_atoms<'a>(p: &'a Formula, out: &mut SmallVec<[&'a Name; 8]>) -> Result<(), NotPropositional> {
    match p {
        Formula::Falsity => Ok(()),
        Formula::Pre(n, args) if args.is_empty() => {
            out.push(n);
            Ok(())
        }
        Formula::Pre(..) | Formula::Exi(_) | Formula::Uni(_) => Err(NotPropositional),
        Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
            collect_atoms(a, out)?;
            collect_atoms(b, out)
        }
    }
}

fn truth_rows(p: &Formula, atoms: &[&Name], columns: &[u64]) -> u64 {
    match p {
        Formula::Falsity => 0,
        Formula::Pre(n, _) => columns[atoms.binary_search(&n).expect("atom collected")],
        Formula::Imp(a, b) => !truth_rows(a, atoms, columns) | truth_rows(b, atoms, columns),
        Formula::Dis(a, b) => truth_rows(a, atoms, columns) | truth_rows(b, atoms, columns),
        Formula::Con(a, b) => truth_rows(a, atoms, columns) & truth_rows(b, atoms, columns),
        Formula::Exi(_) | Formula::Uni(_) => unreachable!("checked by collect_atoms"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Notation};

    fn std(s: &str) -> Formula {
        parse_formula(s, Notation::Standard).unwrap()
    }

    #[test]
    fn eval_term_examples() {
        let m = Model::new(2)
            .with_function("a", 0, vec![0])
            .unwrap()
            .with_function("f", 1, vec![1, 0])
            .unwrap();
        assert_eq!(eval_term(&Term::Var(0), &m, &Environment::new(vec![1, 0])), Ok(1));
        assert_eq!(eval_term(&Term::constant("a"), &m, &Environment::default()), Ok(0));
        let fa = Term::fun("f", vec![Term::constant("a")]);
        assert_eq!(eval_term(&fa, &m, &Environment::default()), Ok(1));
        assert_eq!(
            eval_term(&Term::constant("b"), &m, &Environment::default()),
            Err(SemanticsError::MissingSymbol(Name::new("b"), 0))
        );
    }

    #[test]
    fn eval_formula_examples() {
        let m = Model::new(2).with_predicate("P", 1, [vec![0]]).unwrap();
        let e = Environment::default();
        assert_eq!(eval_formula(&Formula::Falsity, &m, &e), Ok(false));
        assert_eq!(eval_formula(&Formula::truth(), &m, &e), Ok(true));
        let all_p = Formula::uni(Formula::pre("P", vec![Term::Var(0)]));
        assert_eq!(eval_formula(&all_p, &m, &e), Ok(false));
        let some_p = Formula::exi(Formula::pre("P", vec![Term::Var(0)]));
        assert_eq!(eval_formula(&some_p, &m, &e), Ok(true));
    }

    #[test]
    fn out_of_range_variables_default_to_zero() {
        let m = Model::new(2).with_predicate("P", 1, [vec![0]]).unwrap();
        let open = Formula::pre("P", vec![Term::Var(5)]);
        assert_eq!(eval_formula(&open, &m, &Environment::default()), Ok(true));
    }

    #[test]
    fn countermodel_examples() {
        match countermodel_search(&std("p --> q"), 3, 1000) {
            SearchOutcome::Found(cm) => {
                assert_eq!(cm.model.size(), 1);
                assert_eq!(cm.model.predicate_holds("p", 0, &[]), Some(true));
                assert_eq!(cm.model.predicate_holds("q", 0, &[]), Some(false));
            }
            other => panic!("expected a countermodel, got {other:?}"),
        }
        assert_eq!(countermodel_search(&std("p --> p"), 2, 1000), SearchOutcome::Exhausted);
        match countermodel_search(&std("exists x. P(x)"), 3, 1000) {
            SearchOutcome::Found(cm) => {
                assert_eq!(cm.model.size(), 1);
                assert_eq!(cm.model.predicate_holds("P", 1, &[0]), Some(false));
            }
            other => panic!("expected a countermodel, got {other:?}"),
        }
    }

    #[test]
    fn countermodel_needs_two_elements() {
        // Valid in every one-element model, refuted with two.
        let f = std("(exists x. P(x)) --> forall x. P(x)");
        match countermodel_search(&f, 3, 10_000) {
            SearchOutcome::Found(cm) => {
                assert_eq!(cm.model.size(), 2);
                assert_eq!(eval_formula(&f, &cm.model, &cm.environment), Ok(false));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn countermodel_budget_and_cancel() {
        let f = std("forall x. forall y. R(x, y) \\/ ~R(x, y)");
        assert_eq!(countermodel_search(&f, 3, 5), SearchOutcome::BudgetExceeded);
        let token = CancelToken::new();
        token.cancel();
        assert_eq!(countermodel_search_with(&f, 3, 1_000_000, &token), SearchOutcome::Cancelled);
    }

    #[test]
    fn countermodel_for_open_formula_sets_environment() {
        let f = Formula::pre("P", vec![Term::Var(0)]);
        match countermodel_search(&f, 2, 100) {
            SearchOutcome::Found(cm) => {
                assert_eq!(cm.environment.values.len(), 1);
                assert_eq!(eval_formula(&f, &cm.model, &cm.environment), Ok(false));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn prop_valid_examples() {
        assert_eq!(prop_valid(&std("p --> p")), Ok(true));
        assert_eq!(prop_valid(&std("p \\/ ~p")), Ok(true));
        assert_eq!(prop_valid(&std("(p \\/ q) --> p")), Ok(false));
        assert_eq!(prop_valid(&std("forall x. P(x)")), Err(NotPropositional));
        assert_eq!(prop_valid(&std("P(a)")), Err(NotPropositional));
        assert_eq!(prop_valid(&Formula::truth()), Ok(true));
        assert_eq!(prop_valid(&Formula::Falsity), Ok(false));
    }

    #[test]
    fn model_json_is_canonical() {
        let m = Model::new(2)
            .with_predicate("q", 0, [])
            .unwrap()
            .with_predicate("p", 1, [vec![1]])
            .unwrap()
            .with_function("f", 1, vec![1, 0])
            .unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(
            s,
            r#"{"size":2,"functions":[{"name":"f","arity":1,"table":[1,0]}],"predicates":[{"name":"p","arity":1,"holds":[[1]]},{"name":"q","arity":0,"holds":[]}]}"#
        );
        let back: Model = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<Model>(r#"{"size":0,"functions":[],"predicates":[]}"#).is_err());
        assert!(serde_json::from_str::<Model>(
            r#"{"size":2,"functions":[{"name":"f","arity":1,"table":[3,0]}],"predicates":[]}"#
        )
        .is_err());
    }

    #[test]
    fn disjunction_reading_folds_right() {
        let (p, q, r) = (Formula::atom("p"), Formula::atom("q"), Formula::atom("r"));
        assert_eq!(disjunction_reading(&[]), Formula::Falsity);
        assert_eq!(disjunction_reading(&[p.clone()]), p);
        assert_eq!(
            disjunction_reading(&[p.clone(), q.clone(), r.clone()]),
            Formula::dis(p, Formula::dis(q, r))
        );
    }
}
