//! Condensed detachment for the classical equivalential calculus.
//!
//! The crate covers the whole pipeline around pure-`E` formulas:
//!
//! - [`formula`]: terms, Polish notation, canonical naming, folded display.
//! - [`unify`]: substitutions and most general unifiers.
//! - [`inference`]: condensed detachment (D) and its reverse (R).
//! - [`semantics`]: truth tables and the even-occurrence criterion.
//! - [`proofs`]: proof traces, replay, and derived reverse detachment.
//! - [`catalog`]: thesis enumeration and the known shortest single axioms.
//! - [`search`]: bounded given-clause saturation with hints.

pub mod catalog;
pub mod formula;
pub mod inference;
pub mod proofs;
pub mod search;
pub mod semantics;
pub mod unify;

pub use formula::{parse_polish, print_folded, CanonicalFormula, Formula, ParseError, Var};
pub use inference::{
    condensed_detach, reverse_condensed_detach, DetachmentOutcome, Inapplicable, Rule,
};
pub use unify::{most_general_unifier, Substitution};

pub(crate) fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}
