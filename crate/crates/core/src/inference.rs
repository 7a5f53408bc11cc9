//! Condensed detachment (D) and reverse condensed detachment (R).
//!
//! `D(major, minor)`: rename the minor apart from the major, unify the major's
//! antecedent with it, and return the instantiated consequent. `R` swaps the
//! roles of antecedent and consequent. Results are canonical, so the choice of
//! fresh names never shows.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{CanonicalFormula, Formula, Var};
use crate::unify::{most_general_unifier, rename_apart, Substitution, UnifyError};

/// The two inference rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    /// From `Eαβ` and `α`, infer `β`.
    D,
    /// From `Eαβ` and `β`, infer `α`.
    R,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::D => "D",
            Rule::R => "R",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Inapplicable {
    #[error("major premiss is a bare variable")]
    BareVariableMajor,
    #[error("premisses do not unify: {0}")]
    NotUnifiable(#[from] UnifyError),
}

/// Result of one D or R step, with the sizes of the two substitution
/// instances that the step actually combined.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct DetachmentOutcome {
    #[serde(serialize_with = "crate::serialize_display")]
    pub result: CanonicalFormula,
    pub major_instance_length: usize,
    pub minor_instance_length: usize,
}

pub fn condensed_detach(
    major: &Formula,
    minor: &Formula,
) -> Result<DetachmentOutcome, Inapplicable> {
    detach(Rule::D, major, minor)
}

pub fn reverse_condensed_detach(
    major: &Formula,
    minor: &Formula,
) -> Result<DetachmentOutcome, Inapplicable> {
    detach(Rule::R, major, minor)
}

/// Applies `rule` with the given premisses.
pub fn detach(
    rule: Rule,
    major: &Formula,
    minor: &Formula,
) -> Result<DetachmentOutcome, Inapplicable> {
    Ok(detach_filtered(rule, major, minor, |_| true)?.expect("filter accepts everything"))
}

/// Like [`detach`], but skips building the result when `accept` rejects its
/// symbol length. Returns `Ok(None)` in that case.
pub fn detach_filtered(
    rule: Rule,
    major: &Formula,
    minor: &Formula,
    accept: impl Fn(usize) -> bool,
) -> Result<Option<DetachmentOutcome>, Inapplicable> {
    let (antecedent, consequent) = major.as_equiv().ok_or(Inapplicable::BareVariableMajor)?;
    let (matched, kept) = match rule {
        Rule::D => (antecedent, consequent),
        Rule::R => (consequent, antecedent),
    };
    let forbidden: BTreeSet<Var> = major.variables().into_iter().collect();
    let minor = rename_apart(minor, &forbidden);
    let sigma = most_general_unifier(matched, &minor)?;
    if !accept(instance_length(&sigma, kept)) {
        return Ok(None);
    }
    Ok(Some(DetachmentOutcome {
        result: sigma.apply(kept).canonical(),
        major_instance_length: instance_length(&sigma, major),
        minor_instance_length: instance_length(&sigma, &minor),
    }))
}

/// `symbol_length(σ(f))` without building the instance.
pub fn instance_length(sigma: &Substitution, f: &Formula) -> usize {
    let mut image_len: HashMap<&Var, usize> = HashMap::new();
    let mut total = 0;
    for node in f.preorder() {
        total += match node {
            Formula::Equiv(..) => 1,
            Formula::Var(v) => *image_len
                .entry(v)
                .or_insert_with(|| sigma.get(v).map_or(1, Formula::symbol_length)),
        };
    }
    total
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step} of the chain is inapplicable: {cause}")]
pub struct ChainError {
    pub step: usize,
    pub cause: Inapplicable,
}

/// `D(f, f)`, `D(D(f, f), f)`, … for `n` steps.
pub fn self_detach_chain(f: &Formula, n: usize) -> Result<Vec<CanonicalFormula>, ChainError> {
    let mut out = Vec::with_capacity(n);
    let mut current = f.clone();
    for step in 1..=n {
        let outcome = condensed_detach(&current, f).map_err(|cause| ChainError { step, cause })?;
        current = outcome.result.formula().clone();
        out.push(outcome.result);
    }
    Ok(out)
}
