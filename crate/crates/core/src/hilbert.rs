//! Hilbert-style propositional calculus over implication and falsity, with
//! axiom schemas loaded as data.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::cancel::CancelToken;
use crate::derivation::{CheckReport, ErrorCode, Verdict};
use crate::script::ScriptError;
use crate::semantics::prop_valid;
use crate::syntax::{parse_formula, render_formula, Formula, Name, Notation, ParseError};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PropFormula {
    Falsity,
    Pro(Name),
    Imp(Arc<PropFormula>, Arc<PropFormula>),
}

impl PropFormula {
    pub fn pro(name: &str) -> PropFormula {
        PropFormula::Pro(Name::new(name))
    }

    pub fn imp(p: PropFormula, q: PropFormula) -> PropFormula {
        PropFormula::Imp(Arc::new(p), Arc::new(q))
    }

    pub fn truth() -> PropFormula {
        PropFormula::imp(PropFormula::Falsity, PropFormula::Falsity)
    }

    /// Number of implications.
    pub fn size(&self) -> usize {
        match self {
            PropFormula::Imp(p, q) => 1 + p.size() + q.size(),
            _ => 0,
        }
    }

    pub fn to_formula(&self) -> Formula {
        match self {
            PropFormula::Falsity => Formula::Falsity,
            PropFormula::Pro(n) => Formula::Pre(n.clone(), vec![]),
            PropFormula::Imp(p, q) => Formula::imp(p.to_formula(), q.to_formula()),
        }
    }

    /// The implicational fragment: `None` for formulas using other connectives,
    /// quantifiers or non-nullary predicates.
    pub fn from_formula(p: &Formula) -> Option<PropFormula> {
        match p {
            Formula::Falsity => Some(PropFormula::Falsity),
            Formula::Pre(n, args) if args.is_empty() => Some(PropFormula::Pro(n.clone())),
            Formula::Imp(a, b) => Some(PropFormula::imp(PropFormula::from_formula(a)?, PropFormula::from_formula(b)?)),
            _ => None,
        }
    }

    pub fn is_tautology(&self) -> bool {
        prop_valid(&self.to_formula()).expect("implicational formulas are propositional")
    }

    fn atoms(&self, out: &mut BTreeSet<Name>) {
        match self {
            PropFormula::Falsity => {}
            PropFormula::Pro(n) => {
                out.insert(n.clone());
            }
            PropFormula::Imp(p, q) => {
                p.atoms(out);
                q.atoms(out);
            }
        }
    }

    pub fn render(&self) -> String {
        render_formula(&self.to_formula(), Notation::Standard)
    }
}

impl fmt::Debug for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Parses standard notation restricted to implication and falsity.
pub fn parse_prop(text: &str) -> Result<PropFormula, ParseError> {
    let p = parse_formula(text, Notation::Standard)?;
    PropFormula::from_formula(&p)
        .ok_or_else(|| ParseError::new(0, &["formula built from atoms, `False` and `-->`"], text.trim()))
}

pub type Substitution = BTreeMap<Name, PropFormula>;

/// Names starting with an uppercase letter are metavariables.
pub fn is_metavariable(n: &Name) -> bool {
    n.as_str().starts_with(|c: char| c.is_ascii_uppercase())
}

pub fn apply_substitution(schema: &PropFormula, sub: &Substitution) -> PropFormula {
    match schema {
        PropFormula::Pro(n) if is_metavariable(n) => sub.get(n).cloned().unwrap_or_else(|| schema.clone()),
        PropFormula::Imp(p, q) => PropFormula::imp(apply_substitution(p, sub), apply_substitution(q, sub)),
        _ => schema.clone(),
    }
}

/// The substitution instantiating `schema` to `p`, if there is one.
pub fn match_schema(p: &PropFormula, schema: &PropFormula) -> Option<Substitution> {
    let mut sub = Substitution::new();
    matches_into(p, schema, &mut sub).then_some(sub)
}

fn matches_into(p: &PropFormula, schema: &PropFormula, sub: &mut Substitution) -> bool {
    match (schema, p) {
        (PropFormula::Pro(n), _) if is_metavariable(n) => match sub.get(n) {
            Some(bound) => bound == p,
            None => {
                sub.insert(n.clone(), p.clone());
                true
            }
        },
        (PropFormula::Imp(s1, s2), PropFormula::Imp(p1, p2)) => matches_into(p1, s1, sub) && matches_into(p2, s2, sub),
        _ => schema == p,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomSet {
    pub name: String,
    pub schemas: Vec<PropFormula>,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum AxiomError {
    #[error("line {line}: {source}")]
    Parse { line: usize, source: ParseError },
    #[error("line {line}: schema is not a tautology")]
    NotATautology { line: usize },
    #[error("the axiom file contains no schemas")]
    Empty,
}

pub const SYSTEM_W: &str = include_str!("../../../axioms/system-w.axioms");
pub const FALLBACK: &str = include_str!("../../../axioms/fallback.axioms");

impl AxiomSet {
    /// Reads one schema per line; `#` starts a comment and `# name: ...`
    /// labels the set. Every schema must be a tautology.
    pub fn parse(text: &str) -> Result<AxiomSet, AxiomError> {
        let mut name = String::from("unnamed");
        let mut schemas = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('#') {
                if let Some(label) = comment.trim().strip_prefix("name:") {
                    name = label.trim().to_string();
                }
                continue;
            }
            let code = line.split('#').next().unwrap_or("").trim();
            if code.is_empty() {
                continue;
            }
            let s = parse_prop(code).map_err(|source| AxiomError::Parse { line: i + 1, source })?;
            if !s.is_tautology() {
                return Err(AxiomError::NotATautology { line: i + 1 });
            }
            schemas.push(s);
        }
        if schemas.is_empty() {
            return Err(AxiomError::Empty);
        }
        Ok(AxiomSet { name, schemas })
    }

    pub fn system_w() -> AxiomSet {
        AxiomSet::parse(SYSTEM_W).expect("bundled axiom file is valid")
    }

    pub fn fallback() -> AxiomSet {
        AxiomSet::parse(FALLBACK).expect("bundled axiom file is valid")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Justification {
    /// 1-based schema index; an empty substitution asks the checker to infer it.
    Axiom { schema: usize, substitution: Substitution },
    /// Line numbers of the antecedent and of the implication.
    MP(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WLine {
    pub formula: PropFormula,
    pub justification: Justification,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WProof {
    pub lines: Vec<WLine>,
}

impl WProof {
    pub fn conclusion(&self) -> Option<&PropFormula> {
        self.lines.last().map(|l| &l.formula)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum WError {
    #[error("line {0} is not an instance of the cited axiom")]
    BadAxiomInstance(usize),
    #[error("line {0} does not follow by modus ponens from the cited lines")]
    BadMP(usize),
    #[error("line {0} cites a line that does not precede it")]
    ForwardReference(usize),
}

impl ErrorCode for WError {
    fn code(&self) -> &'static str {
        match self {
            WError::BadAxiomInstance(_) => "BadAxiomInstance",
            WError::BadMP(_) => "BadMP",
            WError::ForwardReference(_) => "ForwardReference",
        }
    }
}

fn check_line(pf: &WProof, n: usize, axioms: &AxiomSet) -> Result<(), WError> {
    let line = &pf.lines[n - 1];
    match &line.justification {
        Justification::Axiom { schema, substitution } => {
            let s = schema.checked_sub(1).and_then(|k| axioms.schemas.get(k)).ok_or(WError::BadAxiomInstance(n))?;
            let ok = if substitution.is_empty() {
                match_schema(&line.formula, s).is_some()
            } else {
                apply_substitution(s, substitution) == line.formula
            };
            if ok {
                Ok(())
            } else {
                Err(WError::BadAxiomInstance(n))
            }
        }
        Justification::MP(i, j) => {
            if *i == 0 || *j == 0 || *i >= n || *j >= n {
                return Err(WError::ForwardReference(n));
            }
            let antecedent = &pf.lines[i - 1].formula;
            match &pf.lines[j - 1].formula {
                PropFormula::Imp(a, b) if **a == *antecedent && **b == line.formula => Ok(()),
                _ => Err(WError::BadMP(n)),
            }
        }
    }
}

/// Checks every line. An empty proof is incomplete; the invalid path is the
/// 1-based number of the first bad line.
pub fn check_w_proof(pf: &WProof, axioms: &AxiomSet) -> CheckReport<WError> {
    let mut rules = BTreeMap::new();
    let mut first_error = None;
    for (k, line) in pf.lines.iter().enumerate() {
        let rule = match line.justification {
            Justification::Axiom { .. } => "Ax",
            Justification::MP(..) => "MP",
        };
        *rules.entry(rule.to_string()).or_insert(0) += 1;
        if first_error.is_none() {
            if let Err(e) = check_line(pf, k + 1, axioms) {
                first_error = Some((k + 1, e));
            }
        }
    }
    let verdict = match first_error {
        Some((n, error)) => Verdict::Invalid { path: vec![n], error },
        None if pf.lines.is_empty() => Verdict::Incomplete { open: 1 },
        None => Verdict::Complete,
    };
    CheckReport { verdict, steps: pf.lines.len(), rules }
}

/// `n. <formula>  [Ax k {A:=p, B:=q}]` or `n. <formula>  [MP i j]`, one line
/// each, numbered from 1. Blank lines and `#` comments are skipped.
pub fn parse_w_proof(text: &str) -> Result<WProof, ScriptError> {
    let mut lines = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let layout = |message: &str| ScriptError::Layout { line: no, message: message.to_string() };
        let lead = raw.len() - raw.trim_start().len();
        let (num, rest) = line.split_once('.').ok_or_else(|| layout("expected a line number"))?;
        if num.parse::<usize>().ok() != Some(lines.len() + 1) {
            return Err(layout(&format!("expected line number {}", lines.len() + 1)));
        }
        let open = rest.rfind('[').ok_or_else(|| layout("expected a justification in brackets"))?;
        let body = rest[open + 1..].strip_suffix(']').ok_or_else(|| layout("expected `]` at the end of the line"))?;
        let formula_col = lead + num.len() + 1;
        let formula = parse_prop(&rest[..open])
            .map_err(|e| ScriptError::Parse { line: no, source: e.offset(formula_col) })?;
        let justification = parse_justification(body.trim()).map_err(|m| layout(&m))?;
        lines.push(WLine { formula, justification });
    }
    Ok(WProof { lines })
}

fn parse_justification(s: &str) -> Result<Justification, String> {
    if let Some(args) = s.strip_prefix("MP") {
        let nums: Vec<usize> = args.split_whitespace().map(str::parse).collect::<Result<_, _>>().map_err(|_| "bad MP line numbers")?;
        return match nums[..] {
            [i, j] => Ok(Justification::MP(i, j)),
            _ => Err("MP cites exactly two lines".into()),
        };
    }
    let args = s.strip_prefix("Ax").ok_or("expected `Ax` or `MP`")?.trim();
    let (index, sub) = match args.split_once('{') {
        Some((k, sub)) => (k.trim(), Some(sub.strip_suffix('}').ok_or("expected `}`")?)),
        None => (args, None),
    };
    let schema = index.parse::<usize>().map_err(|_| "bad axiom number")?;
    let mut substitution = Substitution::new();
    for entry in sub.into_iter().flat_map(|s| s.split(',')).map(str::trim).filter(|e| !e.is_empty()) {
        let (var, value) = entry.split_once(":=").ok_or("expected `:=` in substitution")?;
        let var = var.trim();
        if !Name::is_valid(var) || !is_metavariable(&Name::new(var)) {
            return Err(format!("`{var}` is not a metavariable"));
        }
        let value = parse_prop(value).map_err(|e| e.to_string())?;
        substitution.insert(Name::new(var), value);
    }
    Ok(Justification::Axiom { schema, substitution })
}

pub fn render_w_proof(pf: &WProof) -> String {
    let mut out = String::new();
    for (k, line) in pf.lines.iter().enumerate() {
        let just = match &line.justification {
            Justification::MP(i, j) => format!("MP {i} {j}"),
            Justification::Axiom { schema, substitution } if substitution.is_empty() => format!("Ax {schema}"),
            Justification::Axiom { schema, substitution } => {
                let items: Vec<String> =
                    substitution.iter().map(|(v, p)| format!("{}:={}", v.as_str(), p.render())).collect();
                format!("Ax {schema} {{{}}}", items.join(", "))
            }
        };
        out.push_str(&format!("{}. {}  [{just}]\n", k + 1, line.formula.render()));
    }
    out
}

enum Origin {
    Axiom(usize, Substitution),
    MP(usize, usize),
}

/// Bounded forward search.
///
/// Level `d` instantiates every schema with substitutions whose total size
/// is at most `d / 2` implications over the goal's atoms and falsity, then
/// closes the instances under modus ponens for `d` rounds. Levels run from
/// 1 to `depth`. `None` says nothing about provability.
pub fn search_proof(goal: &PropFormula, axioms: &AxiomSet, depth: usize) -> Option<WProof> {
    search_proof_with(goal, axioms, depth, &CancelToken::new())
}

pub fn search_proof_with(goal: &PropFormula, axioms: &AxiomSet, depth: usize, cancel: &CancelToken) -> Option<WProof> {
    let mut atoms = BTreeSet::new();
    goal.atoms(&mut atoms);
    for level in 1..=depth {
        if cancel.is_cancelled() {
            return None;
        }
        if let Some(pf) = search_level(goal, axioms, &atoms, level, cancel) {
            return Some(pf);
        }
    }
    None
}

fn formulas_by_size(atoms: &BTreeSet<Name>, max: usize) -> Vec<Vec<PropFormula>> {
    let mut by_size: Vec<Vec<PropFormula>> = vec![std::iter::once(PropFormula::Falsity)
        .chain(atoms.iter().cloned().map(PropFormula::Pro))
        .collect()];
    for n in 1..=max {
        let mut layer = Vec::new();
        for left in 0..n {
            for a in &by_size[left] {
                for b in &by_size[n - 1 - left] {
                    layer.push(PropFormula::imp(a.clone(), b.clone()));
                }
            }
        }
        by_size.push(layer);
    }
    by_size
}

fn metavariables(s: &PropFormula, out: &mut BTreeSet<Name>) {
    match s {
        PropFormula::Pro(n) if is_metavariable(n) => {
            out.insert(n.clone());
        }
        PropFormula::Imp(p, q) => {
            metavariables(p, out);
            metavariables(q, out);
        }
        _ => {}
    }
}

struct Pool {
    formulas: Vec<PropFormula>,
    index: HashMap<PropFormula, usize>,
    origin: Vec<Origin>,
}

impl Pool {
    fn add(&mut self, p: PropFormula, origin: Origin) {
        if !self.index.contains_key(&p) {
            self.index.insert(p.clone(), self.formulas.len());
            self.formulas.push(p);
            self.origin.push(origin);
        }
    }
}

fn search_level(
    goal: &PropFormula,
    axioms: &AxiomSet,
    atoms: &BTreeSet<Name>,
    level: usize,
    cancel: &CancelToken,
) -> Option<WProof> {
    let budget = level / 2;
    let by_size = formulas_by_size(atoms, budget);
    let mut pool = Pool { formulas: Vec::new(), index: HashMap::new(), origin: Vec::new() };
    for (k, schema) in axioms.schemas.iter().enumerate() {
        let mut vars = BTreeSet::new();
        metavariables(schema, &mut vars);
        let vars: Vec<Name> = vars.into_iter().collect();
        let mut sub = Substitution::new();
        enumerate_substitutions(&vars, &by_size, budget, &mut sub, &mut |sub| {
            pool.add(apply_substitution(schema, sub), Origin::Axiom(k + 1, sub.clone()));
        });
        if cancel.is_cancelled() {
            return None;
        }
    }
    for _ in 0..level {
        if pool.index.contains_key(goal) {
            break;
        }
        let before = pool.formulas.len();
        for j in 0..before {
            if let PropFormula::Imp(a, b) = &pool.formulas[j] {
                if let Some(&i) = pool.index.get(&**a) {
                    let b = (**b).clone();
                    pool.add(b, Origin::MP(i, j));
                }
            }
        }
        if pool.formulas.len() == before || cancel.is_cancelled() {
            break;
        }
    }
    let target = *pool.index.get(goal)?;
    Some(extract(&pool, target))
}

fn enumerate_substitutions(
    vars: &[Name],
    by_size: &[Vec<PropFormula>],
    budget: usize,
    sub: &mut Substitution,
    emit: &mut impl FnMut(&Substitution),
) {
    let Some((v, rest)) = vars.split_first() else {
        emit(sub);
        return;
    };
    for (size, layer) in by_size.iter().enumerate().take(budget + 1) {
        for p in layer {
            sub.insert(v.clone(), p.clone());
            enumerate_substitutions(rest, by_size, budget - size, sub, emit);
        }
    }
    sub.remove(v);
}

fn extract(pool: &Pool, target: usize) -> WProof {
    let mut numbering: HashMap<usize, usize> = HashMap::new();
    let mut lines = Vec::new();
    // Iterative post-order so that premises precede their consequences.
    let mut stack = vec![(target, false)];
    while let Some((k, expanded)) = stack.pop() {
        if numbering.contains_key(&k) {
            continue;
        }
        match &pool.origin[k] {
            Origin::Axiom(schema, sub) => {
                lines.push(WLine {
                    formula: pool.formulas[k].clone(),
                    justification: Justification::Axiom { schema: *schema, substitution: sub.clone() },
                });
                numbering.insert(k, lines.len());
            }
            Origin::MP(i, j) if expanded => {
                lines.push(WLine {
                    formula: pool.formulas[k].clone(),
                    justification: Justification::MP(numbering[i], numbering[j]),
                });
                numbering.insert(k, lines.len());
            }
            Origin::MP(i, j) => {
                stack.push((k, true));
                stack.push((*j, false));
                stack.push((*i, false));
            }
        }
    }
    WProof { lines }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prop(s: &str) -> PropFormula {
        parse_prop(s).unwrap()
    }

    #[test]
    fn matches_schemas() {
        let s = prop("A --> A");
        let sub = match_schema(&prop("p --> p"), &s).unwrap();
        assert_eq!(sub[&Name::new("A")], prop("p"));
        assert_eq!(match_schema(&prop("p --> q"), &s), None);
        let sub = match_schema(&prop("(p --> False) --> (p --> False)"), &s).unwrap();
        assert_eq!(sub[&Name::new("A")], prop("p --> False"));
    }

    #[test]
    fn lowercase_atoms_in_schemas_are_literal() {
        assert!(match_schema(&prop("p --> q"), &prop("p --> A")).is_some());
        assert!(match_schema(&prop("q --> q"), &prop("p --> A")).is_none());
    }

    #[test]
    fn bundled_axiom_sets_load() {
        assert_eq!(AxiomSet::system_w().schemas.len(), 4);
        assert_eq!(AxiomSet::fallback().schemas.len(), 3);
        assert_eq!(AxiomSet::fallback().name, "fallback classical set");
        assert_eq!(AxiomSet::parse("A --> B\n"), Err(AxiomError::NotATautology { line: 1 }));
        assert_eq!(AxiomSet::parse("# only comments\n"), Err(AxiomError::Empty));
    }

    const K_S_IDENTITY: &str = "\
1. (p --> ((p --> p) --> p)) --> ((p --> (p --> p)) --> (p --> p))  [Ax 2 {A:=p, B:=p --> p, C:=p}]
2. p --> ((p --> p) --> p)  [Ax 1 {A:=p, B:=p --> p}]
3. (p --> (p --> p)) --> (p --> p)  [MP 2 1]
4. p --> (p --> p)  [Ax 1 {A:=p, B:=p}]
5. p --> p  [MP 4 3]
";

    #[test]
    fn checks_identity_proof() {
        let pf = parse_w_proof(K_S_IDENTITY).unwrap();
        assert_eq!(parse_w_proof(&render_w_proof(&pf)).unwrap(), pf);
        assert!(render_w_proof(&pf).starts_with("1. (p --> (p --> p) --> p) --> (p --> p --> p) --> p --> p  [Ax 2"));
        let report = check_w_proof(&pf, &AxiomSet::fallback());
        assert_eq!(report.verdict, Verdict::Complete);
        assert_eq!(report.steps, 5);
    }

    #[test]
    fn rejects_bad_lines() {
        let bad_mp = K_S_IDENTITY.replace("[MP 4 3]", "[MP 2 3]");
        let report = check_w_proof(&parse_w_proof(&bad_mp).unwrap(), &AxiomSet::fallback());
        assert_eq!(report.verdict, Verdict::Invalid { path: vec![5], error: WError::BadMP(5) });
        let forward = K_S_IDENTITY.replace("[MP 2 1]", "[MP 2 4]");
        let report = check_w_proof(&parse_w_proof(&forward).unwrap(), &AxiomSet::fallback());
        assert_eq!(report.verdict, Verdict::Invalid { path: vec![3], error: WError::ForwardReference(3) });
        let single = parse_w_proof("1. p  [Ax 1]").unwrap();
        let report = check_w_proof(&single, &AxiomSet::fallback());
        assert_eq!(report.verdict, Verdict::Invalid { path: vec![1], error: WError::BadAxiomInstance(1) });
    }

    #[test]
    fn parse_errors() {
        assert!(parse_w_proof("2. p  [Ax 1]").is_err());
        assert!(parse_w_proof("1. p  Ax 1").is_err());
        assert!(parse_w_proof("1. p /\\ q  [Ax 1]").is_err());
        assert!(parse_w_proof("1. p  [Ax 1 {a:=p}]").is_err());
    }

    #[test]
    fn searches_truth_and_identity() {
        for axioms in [AxiomSet::fallback(), AxiomSet::system_w()] {
            for goal in [PropFormula::truth(), prop("p --> p")] {
                let pf = search_proof(&goal, &axioms, 8).unwrap_or_else(|| panic!("{goal} in {}", axioms.name));
                assert_eq!(check_w_proof(&pf, &axioms).verdict, Verdict::Complete);
                assert_eq!(pf.conclusion(), Some(&goal));
                let text = render_w_proof(&pf);
                assert_eq!(parse_w_proof(&text).unwrap(), pf);
            }
        }
    }

    #[test]
    fn falsity_not_found() {
        assert!(search_proof(&PropFormula::Falsity, &AxiomSet::system_w(), 6).is_none());
    }
}
