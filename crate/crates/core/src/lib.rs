//! Proof toolkit for classical first-order logic.
//!
//! Three calculi share one de Bruijn syntax: a one-sided sequent calculus
//! ([`sequent`]), natural deduction ([`natded`]) and a propositional Hilbert
//! system ([`hilbert`]). The kernels are small and trusted; the tableau
//! [`prover`] is not, and everything it produces is re-checked.

pub mod syntax;
pub mod cancel;
pub mod semantics;
pub mod derivation;
pub mod sequent;
pub mod natded;
pub mod script;
pub mod hilbert;
pub mod prover;
