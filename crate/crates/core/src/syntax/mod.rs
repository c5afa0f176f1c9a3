//! Abstract syntax of first-order terms and formulas.
//!
//! Variables are de Bruijn indices: `Var 0` refers to the nearest enclosing
//! quantifier. Constants are functions with no arguments. Negation is not a
//! constructor; `Neg p` is `Imp p Falsity` everywhere.

mod abstract_notation;
mod lexer;
mod standard;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, LazyLock};

use serde::{Deserialize, Serialize};

pub use lexer::{ParseError, Token};

pub(crate) use abstract_notation::{parse_formula_prefix, parse_term_prefix};
pub(crate) use lexer::{tokenize, Cursor, Lexeme};

/// A predicate, function or constant symbol.
#[derive(Clone, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Name(Arc<str>);

impl PartialEq for Name {
    fn eq(&self, other: &Name) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Name {
    pub fn new(s: &str) -> Name {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Whether `s` is a well-formed identifier: `[A-Za-z_][A-Za-z0-9_]*`.
    pub fn is_valid(s: &str) -> bool {
        let mut chars = s.chars();
        match chars.next() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return false,
        }
        chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Name {
        Name::new(s)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Fun(Name, Vec<Term>),
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::Fun(Name::new(name), Vec::new())
    }

    pub fn fun(name: &str, args: Vec<Term>) -> Term {
        Term::Fun(Name::new(name), args)
    }

    /// Raises every free index `>= cutoff` by `amount`.
    pub fn lift(&self, cutoff: usize, amount: usize) -> Term {
        match self {
            Term::Var(i) if *i >= cutoff => Term::Var(i + amount),
            Term::Var(i) => Term::Var(*i),
            Term::Fun(f, args) => {
                Term::Fun(f.clone(), args.iter().map(|t| t.lift(cutoff, amount)).collect())
            }
        }
    }

    fn substitute(&self, depth: usize, t: &Term) -> Term {
        match self {
            Term::Var(i) if *i < depth => Term::Var(*i),
            Term::Var(i) if *i == depth => t.lift(0, depth),
            Term::Var(i) => Term::Var(i - 1),
            Term::Fun(f, args) => {
                Term::Fun(f.clone(), args.iter().map(|a| a.substitute(depth, t)).collect())
            }
        }
    }

    pub fn mentions_function(&self, name: &str) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Fun(f, args) => f.as_str() == name || args.iter().any(|a| a.mentions_function(name)),
        }
    }

    /// Number of function applications, constants included.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Fun(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    fn collect_functions(&self, out: &mut BTreeSet<(Name, usize)>) {
        if let Term::Fun(f, args) = self {
            out.insert((f.clone(), args.len()));
            for a in args {
                a.collect_functions(out);
            }
        }
    }

    fn max_free(&self, depth: usize) -> Option<usize> {
        match self {
            Term::Var(i) if *i >= depth => Some(i - depth),
            Term::Var(_) => None,
            Term::Fun(_, args) => args.iter().filter_map(|a| a.max_free(depth)).max(),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&abstract_notation::render_term(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&abstract_notation::render_term(self))
    }
}

/// First-order formula with falsity as a primitive.
///
/// Subformulas are reference counted so that sequents and proof trees can
/// share structure; values are immutable once built.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Falsity,
    Pre(Name, Vec<Term>),
    Imp(Arc<Formula>, Arc<Formula>),
    Dis(Arc<Formula>, Arc<Formula>),
    Con(Arc<Formula>, Arc<Formula>),
    Exi(Arc<Formula>),
    Uni(Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Pre(Name::new(name), Vec::new())
    }

    pub fn pre(name: &str, args: Vec<Term>) -> Formula {
        Formula::Pre(Name::new(name), args)
    }

    pub fn imp(p: Formula, q: Formula) -> Formula {
        Formula::Imp(Arc::new(p), Arc::new(q))
    }

    pub fn dis(p: Formula, q: Formula) -> Formula {
        Formula::Dis(Arc::new(p), Arc::new(q))
    }

    pub fn con(p: Formula, q: Formula) -> Formula {
        Formula::Con(Arc::new(p), Arc::new(q))
    }

    pub fn exi(p: Formula) -> Formula {
        Formula::Exi(Arc::new(p))
    }

    pub fn uni(p: Formula) -> Formula {
        Formula::Uni(Arc::new(p))
    }

    /// `Neg p` abbreviates `Imp p Falsity`.
    pub fn neg(p: Formula) -> Formula {
        Formula::neg_shared(Arc::new(p))
    }

    /// `Neg p` for an already shared `p`.
    pub fn neg_shared(p: Arc<Formula>) -> Formula {
        static FALSITY: LazyLock<Arc<Formula>> = LazyLock::new(|| Arc::new(Formula::Falsity));
        Formula::Imp(p, FALSITY.clone())
    }

    /// `Truth` abbreviates `Neg Falsity`.
    pub fn truth() -> Formula {
        Formula::neg(Formula::Falsity)
    }

    /// The formula under a negation, if `self` has the shape `Imp p Falsity`.
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Imp(p, q) if **q == Formula::Falsity => Some(p),
            _ => None,
        }
    }

    pub fn is_negation_of(&self, p: &Formula) -> bool {
        self.negated() == Some(p)
    }

    /// Lifts free indices `>= cutoff` by `amount`.
    pub fn lift(&self, cutoff: usize, amount: usize) -> Formula {
        match self {
            Formula::Falsity => Formula::Falsity,
            Formula::Pre(n, args) => {
                Formula::Pre(n.clone(), args.iter().map(|t| t.lift(cutoff, amount)).collect())
            }
            Formula::Imp(p, q) => Formula::imp(p.lift(cutoff, amount), q.lift(cutoff, amount)),
            Formula::Dis(p, q) => Formula::dis(p.lift(cutoff, amount), q.lift(cutoff, amount)),
            Formula::Con(p, q) => Formula::con(p.lift(cutoff, amount), q.lift(cutoff, amount)),
            Formula::Exi(p) => Formula::exi(p.lift(cutoff + 1, amount)),
            Formula::Uni(p) => Formula::uni(p.lift(cutoff + 1, amount)),
        }
    }

    fn substitute(&self, depth: usize, t: &Term) -> Formula {
        match self {
            Formula::Falsity => Formula::Falsity,
            Formula::Pre(n, args) => {
                Formula::Pre(n.clone(), args.iter().map(|a| a.substitute(depth, t)).collect())
            }
            Formula::Imp(p, q) => Formula::imp(p.substitute(depth, t), q.substitute(depth, t)),
            Formula::Dis(p, q) => Formula::dis(p.substitute(depth, t), q.substitute(depth, t)),
            Formula::Con(p, q) => Formula::con(p.substitute(depth, t), q.substitute(depth, t)),
            Formula::Exi(p) => Formula::exi(p.substitute(depth + 1, t)),
            Formula::Uni(p) => Formula::uni(p.substitute(depth + 1, t)),
        }
    }

    pub fn mentions_function(&self, name: &str) -> bool {
        match self {
            Formula::Falsity => false,
            Formula::Pre(_, args) => args.iter().any(|t| t.mentions_function(name)),
            Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
                p.mentions_function(name) || q.mentions_function(name)
            }
            Formula::Exi(p) | Formula::Uni(p) => p.mentions_function(name),
        }
    }

    /// Function symbols with their arities, constants included.
    pub fn functions(&self) -> BTreeSet<(Name, usize)> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| t.collect_functions(&mut out));
        out
    }

    /// Predicate symbols with their arities.
    pub fn predicates(&self) -> BTreeSet<(Name, usize)> {
        let mut out = BTreeSet::new();
        self.collect_predicates(&mut out);
        out
    }

    fn collect_predicates(&self, out: &mut BTreeSet<(Name, usize)>) {
        match self {
            Formula::Falsity => {}
            Formula::Pre(n, args) => {
                out.insert((n.clone(), args.len()));
            }
            Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
                p.collect_predicates(out);
                q.collect_predicates(out);
            }
            Formula::Exi(p) | Formula::Uni(p) => p.collect_predicates(out),
        }
    }

    fn visit_terms(&self, f: &mut impl FnMut(&Term)) {
        match self {
            Formula::Falsity => {}
            Formula::Pre(_, args) => args.iter().for_each(|t| f(t)),
            Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
                p.visit_terms(f);
                q.visit_terms(f);
            }
            Formula::Exi(p) | Formula::Uni(p) => p.visit_terms(f),
        }
    }

    /// Highest free de Bruijn index, if any variable occurs free.
    pub fn max_free_var(&self) -> Option<usize> {
        fn go(p: &Formula, depth: usize) -> Option<usize> {
            match p {
                Formula::Falsity => None,
                Formula::Pre(_, args) => args.iter().filter_map(|t| t.max_free(depth)).max(),
                Formula::Imp(a, b) | Formula::Dis(a, b) | Formula::Con(a, b) => {
                    go(a, depth).max(go(b, depth))
                }
                Formula::Exi(a) | Formula::Uni(a) => go(a, depth + 1),
            }
        }
        go(self, 0)
    }

    pub fn is_closed(&self) -> bool {
        self.max_free_var().is_none()
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Formula::Falsity | Formula::Pre(..) => false,
            Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => {
                p.has_quantifier() || q.has_quantifier()
            }
            Formula::Exi(_) | Formula::Uni(_) => true,
        }
    }

    /// Number of constructors, atoms and falsity included.
    pub fn size(&self) -> usize {
        match self {
            Formula::Falsity => 1,
            Formula::Pre(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Imp(p, q) | Formula::Dis(p, q) | Formula::Con(p, q) => 1 + p.size() + q.size(),
            Formula::Exi(p) | Formula::Uni(p) => 1 + p.size(),
        }
    }

    /// Renders in the given notation.
    pub fn render(&self, notation: Notation) -> String {
        render_formula(self, notation)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&abstract_notation::render_formula(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&abstract_notation::render_formula(self))
    }
}

/// Concrete notations for formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Notation {
    /// Constructor syntax, e.g. `Imp (Pre ''p'' []) Falsity`.
    Abstract,
    /// Infix syntax, e.g. `~p --> q`.
    Standard,
}

impl std::str::FromStr for Notation {
    type Err = String;

    fn from_str(s: &str) -> Result<Notation, String> {
        match s {
            "abstract" => Ok(Notation::Abstract),
            "standard" => Ok(Notation::Standard),
            other => Err(format!("unknown notation `{other}`")),
        }
    }
}

pub fn parse_formula(text: &str, notation: Notation) -> Result<Formula, ParseError> {
    match notation {
        Notation::Abstract => abstract_notation::parse_formula(text),
        Notation::Standard => standard::parse_formula(text),
    }
}

/// Parses in whichever notation accepts the text, trying abstract first.
pub fn parse_formula_any(text: &str) -> Result<Formula, ParseError> {
    match abstract_notation::parse_formula(text) {
        Ok(p) => Ok(p),
        Err(abs) => standard::parse_formula(text).map_err(|std_err| {
            // Report whichever attempt got further into the input.
            if abs.position >= std_err.position {
                abs
            } else {
                std_err
            }
        }),
    }
}

pub fn render_formula(p: &Formula, notation: Notation) -> String {
    match notation {
        Notation::Abstract => abstract_notation::render_formula(p),
        Notation::Standard => standard::render_formula(p),
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    abstract_notation::parse_term(text)
}

pub fn render_term(t: &Term) -> String {
    abstract_notation::render_term(t)
}

/// Structural membership.
pub fn member(p: &Formula, z: &[Formula]) -> bool {
    z.iter().any(|q| q == p)
}

/// `y` extends `z`: every formula of `z` occurs in `y`.
pub fn ext(y: &[Formula], z: &[Formula]) -> bool {
    z.iter().all(|p| member(p, y))
}

/// Substitutes `t` for de Bruijn index 0 in the quantifier body `p`.
///
/// Under `d` further binders the replacement is `t` lifted by `d`; free
/// indices above the substituted one drop by one.
pub fn instantiate(p: &Formula, t: &Term) -> Formula {
    p.substitute(0, t)
}

/// True iff no function symbol named `c` (of any arity) occurs in `ps`.
pub fn fresh_constant(c: &str, ps: &[Formula]) -> bool {
    !ps.iter().any(|p| p.mentions_function(c))
}

/// Symbols occurring in a list of formulas, grouped by kind.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    pub functions: BTreeSet<(Name, usize)>,
    pub predicates: BTreeSet<(Name, usize)>,
}

impl Signature {
    pub fn of(ps: &[Formula]) -> Signature {
        let mut sig = Signature::default();
        for p in ps {
            sig.functions.extend(p.functions());
            sig.predicates.extend(p.predicates());
        }
        sig
    }

    /// Symbols used at more than one arity.
    pub fn arity_clashes(&self) -> Vec<Name> {
        let mut seen: BTreeMap<&Name, usize> = BTreeMap::new();
        let mut clashes = BTreeSet::new();
        for (n, a) in self.functions.iter().chain(self.predicates.iter()) {
            if let Some(prev) = seen.insert(n, *a) {
                if prev != *a {
                    clashes.insert(n.clone());
                }
            }
        }
        clashes.into_iter().collect()
    }
}

/// Names of the form `sk<digits>` are reserved for prover-generated constants.
pub fn is_reserved_name(name: &str) -> bool {
    name.strip_prefix("sk")
        .is_some_and(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
}

/// Reserved names used anywhere in `p`.
pub fn reserved_names(p: &Formula) -> Vec<Name> {
    p.functions()
        .into_iter()
        .map(|(n, _)| n)
        .chain(p.predicates().into_iter().map(|(n, _)| n))
        .filter(|n| is_reserved_name(n.as_str()))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        Formula::atom("p")
    }
    fn q() -> Formula {
        Formula::atom("q")
    }

    #[test]
    fn member_examples() {
        assert!(member(&p(), &[q(), p()]));
        assert!(!member(&p(), &[]));
        assert!(!member(&Formula::neg(p()), &[p()]));
    }

    #[test]
    fn ext_examples() {
        assert!(ext(&[p(), q()], &[q()]));
        assert!(ext(&[p()], &[p(), p()]));
        assert!(!ext(&[], &[p()]));
    }

    #[test]
    fn instantiate_examples() {
        let a = Term::constant("a");
        let body = Formula::pre("P", vec![Term::Var(0)]);
        assert_eq!(instantiate(&body, &a), Formula::pre("P", vec![a.clone()]));

        let body = Formula::pre("P", vec![Term::Var(1)]);
        assert_eq!(instantiate(&body, &a), Formula::pre("P", vec![Term::Var(0)]));

        let body = Formula::uni(Formula::pre("P", vec![Term::Var(0), Term::Var(1)]));
        assert_eq!(
            instantiate(&body, &a),
            Formula::uni(Formula::pre("P", vec![Term::Var(0), a.clone()]))
        );
    }

    #[test]
    fn instantiate_lifts_open_witness_under_binders() {
        // Substituting Var 3 under one binder must yield Var 4 there.
        let body = Formula::exi(Formula::pre("R", vec![Term::Var(0), Term::Var(1)]));
        assert_eq!(
            instantiate(&body, &Term::Var(3)),
            Formula::exi(Formula::pre("R", vec![Term::Var(0), Term::Var(4)]))
        );
    }

    #[test]
    fn fresh_constant_examples() {
        let c = Term::constant("c");
        assert!(!fresh_constant("c", &[Formula::pre("P", vec![c.clone()])]));
        assert!(fresh_constant("c", &[Formula::pre("P", vec![Term::Var(0)])]));
        assert!(!fresh_constant(
            "c",
            &[Formula::pre("P", vec![Term::fun("f", vec![c])])]
        ));
        // Any arity counts.
        assert!(!fresh_constant(
            "c",
            &[Formula::pre("P", vec![Term::fun("c", vec![Term::Var(0)])])]
        ));
    }

    #[test]
    fn abbreviations() {
        assert_eq!(Formula::truth(), Formula::imp(Formula::Falsity, Formula::Falsity));
        assert_eq!(Formula::neg(p()).negated(), Some(&p()));
        assert!(Formula::neg(p()).is_negation_of(&p()));
    }

    #[test]
    fn reserved() {
        assert!(is_reserved_name("sk0"));
        assert!(is_reserved_name("sk12"));
        assert!(!is_reserved_name("sk"));
        assert!(!is_reserved_name("skip"));
        let f = Formula::pre("P", vec![Term::constant("sk3")]);
        assert_eq!(reserved_names(&f), vec![Name::new("sk3")]);
    }

    #[test]
    fn free_variables() {
        let f = Formula::uni(Formula::pre("P", vec![Term::Var(0), Term::Var(2)]));
        assert_eq!(f.max_free_var(), Some(1));
        assert!(Formula::uni(Formula::pre("P", vec![Term::Var(0)])).is_closed());
    }
}
