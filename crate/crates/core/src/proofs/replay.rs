//! Deterministic replay of proof traces.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use super::trace::{Expectation, ProofTrace, StepId, StepKind};
use crate::catalog::xcb;
use crate::formula::{CanonicalFormula, Formula};
use crate::inference::{detach, Inapplicable, Rule};
use crate::semantics::is_tautology;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {id} failed: {cause}")]
    StepFailed { id: StepId, cause: Inapplicable },
    #[error("step {id}: expected {expected}, got {got}")]
    ExpectationMismatch {
        id: StepId,
        expected: String,
        got: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExpectationStatus {
    /// No expectation on this step.
    None,
    Met,
    Failed,
}

/// How a step was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepRule {
    #[serde(rename = "axiom")]
    Axiom,
    D,
    R,
}

impl std::fmt::Display for StepRule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            StepRule::Axiom => "axiom",
            StepRule::D => "D",
            StepRule::R => "R",
        })
    }
}

impl From<Rule> for StepRule {
    fn from(rule: Rule) -> Self {
        match rule {
            Rule::D => StepRule::D,
            Rule::R => StepRule::R,
        }
    }
}

/// One replayed step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub id: StepId,
    pub rule: StepRule,
    pub parents: Option<(StepId, StepId)>,
    #[serde(serialize_with = "crate::serialize_display")]
    pub formula: CanonicalFormula,
    pub folded: String,
    pub symbol_length: usize,
    pub major_instance_length: Option<usize>,
    pub minor_instance_length: Option<usize>,
    pub tautology: bool,
    pub expectation: ExpectationStatus,
    #[serde(skip)]
    failed: Vec<Expectation>,
}

impl StepRecord {
    /// Tab-separated rendering.
    pub fn tsv(&self) -> String {
        let dash = |n: Option<usize>| n.map_or("-".to_string(), |n| n.to_string());
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.id,
            self.rule,
            self.parents
                .map_or("-".to_string(), |(m, n)| format!("{m}.{n}")),
            self.formula,
            self.folded,
            self.symbol_length,
            dash(self.major_instance_length),
            dash(self.minor_instance_length),
            self.tautology,
            match self.expectation {
                ExpectationStatus::None => "-",
                ExpectationStatus::Met => "ok",
                ExpectationStatus::Failed => "FAILED",
            }
        )
    }
}

/// Per-step records of a replay, in trace order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub records: Vec<StepRecord>,
}

impl ReplayReport {
    pub fn record(&self, id: StepId) -> Option<&StepRecord> {
        self.records.iter().find(|r| r.id == id)
    }

    pub fn last(&self) -> Option<&StepRecord> {
        self.records.last()
    }

    pub fn all_tautologies(&self) -> bool {
        self.records.iter().all(|r| r.tautology)
    }

    pub fn all_expectations_met(&self) -> bool {
        self.records
            .iter()
            .all(|r| r.expectation != ExpectationStatus::Failed)
    }

    /// One tab-separated line per step.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for r in &self.records {
            let _ = writeln!(out, "{}", r.tsv());
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// The first failed expectation, as an error.
    pub fn check(&self) -> Result<(), ReplayError> {
        for r in &self.records {
            if let Some(e) = r.failed.first() {
                let got = match e {
                    Expectation::Formula(_) => r.formula.to_string(),
                    Expectation::Length(_) => format!("length {}", r.symbol_length),
                    Expectation::InstanceLengths(..) => format!(
                        "instances {}/{}",
                        r.major_instance_length.unwrap_or(0),
                        r.minor_instance_length.unwrap_or(0)
                    ),
                };
                return Err(ReplayError::ExpectationMismatch {
                    id: r.id,
                    expected: e.to_string(),
                    got,
                });
            }
        }
        Ok(())
    }
}

/// Replays every step and checks every expectation.
pub fn replay(trace: &ProofTrace) -> Result<ReplayReport, ReplayError> {
    let report = replay_report(trace)?;
    report.check()?;
    Ok(report)
}

/// Replays every step, recording expectation outcomes without failing on
/// them. Fails only when a step is inapplicable.
pub fn replay_report(trace: &ProofTrace) -> Result<ReplayReport, ReplayError> {
    let pattern = xcb();
    let mut derived: HashMap<StepId, CanonicalFormula> = HashMap::new();
    let mut records = Vec::with_capacity(trace.len());
    for step in trace.steps() {
        let (rule, formula, instances) = match &step.kind {
            StepKind::Axiom(f) => (StepRule::Axiom, f.canonical(), None),
            StepKind::Derived { rule, major, minor } => {
                let outcome = detach(*rule, derived[major].formula(), derived[minor].formula())
                    .map_err(|cause| ReplayError::StepFailed { id: step.id, cause })?;
                (
                    StepRule::from(*rule),
                    outcome.result,
                    Some((outcome.major_instance_length, outcome.minor_instance_length)),
                )
            }
        };
        let failed: Vec<Expectation> = trace
            .expectations_for(step.id)
            .iter()
            .filter(|e| !expectation_holds(e, formula.formula(), instances))
            .cloned()
            .collect();
        let expectation = if trace.expectations_for(step.id).is_empty() {
            ExpectationStatus::None
        } else if failed.is_empty() {
            ExpectationStatus::Met
        } else {
            ExpectationStatus::Failed
        };
        records.push(StepRecord {
            id: step.id,
            rule,
            parents: step.parents(),
            folded: formula.formula().folded(&pattern),
            symbol_length: formula.symbol_length(),
            major_instance_length: instances.map(|i| i.0),
            minor_instance_length: instances.map(|i| i.1),
            tautology: is_tautology(formula.formula()),
            expectation,
            formula: formula.clone(),
            failed,
        });
        derived.insert(step.id, formula);
    }
    Ok(ReplayReport { records })
}

fn expectation_holds(e: &Expectation, got: &Formula, instances: Option<(usize, usize)>) -> bool {
    match e {
        Expectation::Formula(f) => f.is_variant_of(got),
        Expectation::Length(n) => got.symbol_length() == *n,
        Expectation::InstanceLengths(a, b) => instances == Some((*a, *b)),
    }
}
