#![allow(dead_code)]

use proptest::prelude::*;
use rand::Rng;
use secav_core::semantics::{Environment, Model};
use secav_core::syntax::{Formula, Term};

/// Function symbols used by the generators: (name, arity).
pub const FUNCTIONS: [(&str, usize); 4] = [("a", 0), ("b", 0), ("f", 1), ("g", 2)];
/// Predicate symbols used by the generators: (name, arity).
pub const PREDICATES: [(&str, usize); 4] = [("p", 0), ("q", 0), ("P", 1), ("R", 2)];

pub fn arb_term(depth: u32) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        (0usize..4).prop_map(Term::Var),
        Just(Term::constant("a")),
        Just(Term::constant("b")),
    ];
    leaf.prop_recursive(depth, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::fun("f", vec![t])),
            (inner.clone(), inner).prop_map(|(s, t)| Term::fun("g", vec![s, t])),
        ]
    })
}

pub fn arb_formula(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Falsity),
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        arb_term(2).prop_map(|t| Formula::pre("P", vec![t])),
        (arb_term(1), arb_term(1)).prop_map(|(s, t)| Formula::pre("R", vec![s, t])),
    ];
    leaf.prop_recursive(depth, 64, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Formula::imp(p, q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Formula::dis(p, q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Formula::con(p, q)),
            inner.clone().prop_map(Formula::exi),
            inner.prop_map(Formula::uni),
        ]
    })
}

/// Quantifier-free formulas over the atoms `p`, `q` and `r`.
pub fn arb_prop(depth: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        Just(Formula::Falsity),
        Just(Formula::atom("p")),
        Just(Formula::atom("q")),
        Just(Formula::atom("r")),
    ];
    leaf.prop_recursive(depth, 32, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Formula::imp(p, q)),
            (inner.clone(), inner.clone()).prop_map(|(p, q)| Formula::dis(p, q)),
            (inner.clone(), inner).prop_map(|(p, q)| Formula::con(p, q)),
        ]
    })
}

/// A random interpretation of the generator signature over `size` elements.
pub fn random_model(rng: &mut impl Rng, size: usize) -> Model {
    let mut m = Model::new(size);
    for (name, arity) in FUNCTIONS {
        let cells = size.pow(arity as u32);
        let table = (0..cells).map(|_| rng.gen_range(0..size)).collect();
        m = m.with_function(name, arity, table).expect("table fits");
    }
    for (name, arity) in PREDICATES {
        let holds: Vec<Vec<usize>> = tuples(size, arity).into_iter().filter(|_| rng.gen_bool(0.5)).collect();
        m = m.with_predicate(name, arity, holds).expect("tuples fit");
    }
    m
}

pub fn random_env(rng: &mut impl Rng, size: usize, len: usize) -> Environment {
    Environment::new((0..len).map(|_| rng.gen_range(0..size)).collect())
}

fn tuples(size: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..size).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}
