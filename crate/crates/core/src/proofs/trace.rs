//! Proof traces and their line-oriented text format.
//!
//! ```text
//! # comment
//! 1 = axiom EpEEEpqErqr
//! 2 = D1.1
//! 3 = R2.1
//! expect 2 EEEEaEEEabEcbcdEede
//! expect-length 2 19
//! expect-instances 2 31 11
//! ```
//!
//! `expect` compares up to alphabetical variance.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::formula::Formula;
use crate::inference::Rule;

pub type StepId = u32;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepKind {
    Axiom(Formula),
    Derived {
        rule: Rule,
        major: StepId,
        minor: StepId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub id: StepId,
    pub kind: StepKind,
}

impl ProofStep {
    pub fn parents(&self) -> Option<(StepId, StepId)> {
        match self.kind {
            StepKind::Axiom(_) => None,
            StepKind::Derived { major, minor, .. } => Some((major, minor)),
        }
    }
}

/// A check attached to a step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Expectation {
    /// The derived formula is a variant of this one.
    Formula(#[serde(serialize_with = "crate::serialize_display")] Formula),
    /// The derived formula has this symbol length.
    Length(usize),
    /// The step combined instances of these lengths (major, minor).
    InstanceLengths(usize, usize),
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Formula(g) => write!(f, "{g}"),
            Expectation::Length(n) => write!(f, "length {n}"),
            Expectation::InstanceLengths(a, b) => write!(f, "instances {a}/{b}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("line {line}: syntax error: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: step {id} refers to a step not defined before it")]
    ForwardReference { line: usize, id: StepId },
    #[error("line {line}: duplicate step id {id}")]
    DuplicateId { line: usize, id: StepId },
    #[error("line {line}: expectation names undefined step {id}")]
    UndefinedId { line: usize, id: StepId },
}

/// An ordered list of proof steps with optional per-step expectations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofTrace {
    steps: Vec<ProofStep>,
    ids: HashSet<StepId>,
    expectations: BTreeMap<StepId, Vec<Expectation>>,
}

impl ProofTrace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[ProofStep] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn contains(&self, id: StepId) -> bool {
        self.ids.contains(&id)
    }

    pub fn last(&self) -> Option<&ProofStep> {
        self.steps.last()
    }

    pub fn expectations(&self) -> &BTreeMap<StepId, Vec<Expectation>> {
        &self.expectations
    }

    pub fn expectations_for(&self, id: StepId) -> &[Expectation] {
        self.expectations.get(&id).map_or(&[], Vec::as_slice)
    }

    fn next_id(&self) -> StepId {
        self.steps.iter().map(|s| s.id).max().unwrap_or(0) + 1
    }

    /// Appends an axiom under the next free id.
    pub fn push_axiom(&mut self, f: Formula) -> StepId {
        let id = self.next_id();
        self.steps.push(ProofStep {
            id,
            kind: StepKind::Axiom(f),
        });
        self.ids.insert(id);
        id
    }

    /// Appends a D or R step under the next free id. Panics if a premiss is
    /// not already in the trace.
    pub fn push_derived(&mut self, rule: Rule, major: StepId, minor: StepId) -> StepId {
        assert!(
            self.contains(major) && self.contains(minor),
            "premisses must precede the step"
        );
        let id = self.next_id();
        self.steps.push(ProofStep {
            id,
            kind: StepKind::Derived { rule, major, minor },
        });
        self.ids.insert(id);
        id
    }

    /// Appends a step with an explicit id.
    pub fn insert(&mut self, step: ProofStep) -> Result<(), TraceError> {
        let line = self.steps.len() + 1;
        if self.ids.contains(&step.id) {
            return Err(TraceError::DuplicateId { line, id: step.id });
        }
        if let Some((major, minor)) = step.parents() {
            for parent in [major, minor] {
                if parent >= step.id || !self.ids.contains(&parent) {
                    return Err(TraceError::ForwardReference { line, id: step.id });
                }
            }
        }
        self.ids.insert(step.id);
        self.steps.push(step);
        Ok(())
    }

    pub fn expect(&mut self, id: StepId, expectation: Expectation) {
        self.expectations.entry(id).or_default().push(expectation);
    }

    /// True when every derived step uses condensed detachment.
    pub fn uses_only_d(&self) -> bool {
        self.steps.iter().all(|s| {
            matches!(
                s.kind,
                StepKind::Axiom(_) | StepKind::Derived { rule: Rule::D, .. }
            )
        })
    }

    pub fn axioms(&self) -> impl Iterator<Item = (StepId, &Formula)> {
        self.steps.iter().filter_map(|s| match &s.kind {
            StepKind::Axiom(f) => Some((s.id, f)),
            StepKind::Derived { .. } => None,
        })
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            match &step.kind {
                StepKind::Axiom(g) => writeln!(f, "{} = axiom {}", step.id, g)?,
                StepKind::Derived { rule, major, minor } => {
                    writeln!(f, "{} = {}{}.{}", step.id, rule, major, minor)?
                }
            }
        }
        for (id, exps) in &self.expectations {
            for e in exps {
                match e {
                    Expectation::Formula(g) => writeln!(f, "expect {id} {g}")?,
                    Expectation::Length(n) => writeln!(f, "expect-length {id} {n}")?,
                    Expectation::InstanceLengths(a, b) => {
                        writeln!(f, "expect-instances {id} {a} {b}")?
                    }
                }
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for ProofTrace {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_trace(s)
    }
}

/// Parses the trace format. `#` starts a comment that runs to the end of the
/// line; blank lines are ignored.
pub fn parse_trace(text: &str) -> Result<ProofTrace, TraceError> {
    let mut trace = ProofTrace::new();
    let mut pending: Vec<(usize, StepId, Expectation)> = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let syntax = |message: &str| TraceError::Syntax {
            line,
            message: message.to_string(),
        };
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["expect", id, formula] => {
                let id = parse_id(id).ok_or_else(|| syntax("bad step id"))?;
                let f = formula
                    .parse()
                    .map_err(|e| syntax(&format!("bad formula: {e}")))?;
                pending.push((line, id, Expectation::Formula(f)));
            }
            ["expect-length", id, n] => {
                let id = parse_id(id).ok_or_else(|| syntax("bad step id"))?;
                let n = n.parse().map_err(|_| syntax("bad length"))?;
                pending.push((line, id, Expectation::Length(n)));
            }
            ["expect-instances", id, major, minor] => {
                let id = parse_id(id).ok_or_else(|| syntax("bad step id"))?;
                let major = major.parse().map_err(|_| syntax("bad length"))?;
                let minor = minor.parse().map_err(|_| syntax("bad length"))?;
                pending.push((line, id, Expectation::InstanceLengths(major, minor)));
            }
            [id, "=", "axiom", formula] => {
                let id = parse_id(id).ok_or_else(|| syntax("bad step id"))?;
                let f = formula
                    .parse()
                    .map_err(|e| syntax(&format!("bad formula: {e}")))?;
                insert_at(
                    &mut trace,
                    line,
                    ProofStep {
                        id,
                        kind: StepKind::Axiom(f),
                    },
                )?;
            }
            [id, "=", rule] => {
                let id = parse_id(id).ok_or_else(|| syntax("bad step id"))?;
                let (rule, major, minor) =
                    parse_rule(rule).ok_or_else(|| syntax("expected axiom, Dm.n, or Rm.n"))?;
                insert_at(
                    &mut trace,
                    line,
                    ProofStep {
                        id,
                        kind: StepKind::Derived { rule, major, minor },
                    },
                )?;
            }
            _ => return Err(syntax("unrecognized line")),
        }
    }
    for (line, id, expectation) in pending {
        if !trace.contains(id) {
            return Err(TraceError::UndefinedId { line, id });
        }
        trace.expect(id, expectation);
    }
    Ok(trace)
}

fn insert_at(trace: &mut ProofTrace, line: usize, step: ProofStep) -> Result<(), TraceError> {
    trace.insert(step).map_err(|e| match e {
        TraceError::DuplicateId { id, .. } => TraceError::DuplicateId { line, id },
        TraceError::ForwardReference { id, .. } => TraceError::ForwardReference { line, id },
        other => other,
    })
}

fn parse_id(s: &str) -> Option<StepId> {
    if !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&id| id > 0)
}

fn parse_rule(s: &str) -> Option<(Rule, StepId, StepId)> {
    let rule = match s.as_bytes().first()? {
        b'D' => Rule::D,
        b'R' => Rule::R,
        _ => return None,
    };
    let (major, minor) = s[1..].split_once('.')?;
    Some((rule, parse_id(major)?, parse_id(minor)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_step_trace() {
        let t = parse_trace("1 = axiom EpEEEpqErqr\n2 = D1.1").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(
            t.steps()[1].kind,
            StepKind::Derived {
                rule: Rule::D,
                major: 1,
                minor: 1
            }
        );
    }

    #[test]
    fn trailing_comments() {
        let t = parse_trace("1 = axiom EpEEEpqErqr   # XCB\n2 = D1.1 # self\n").unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn forward_reference() {
        assert_eq!(
            parse_trace("2 = D1.1"),
            Err(TraceError::ForwardReference { line: 1, id: 2 })
        );
        assert_eq!(
            parse_trace("1 = axiom Epp\n2 = D1.2"),
            Err(TraceError::ForwardReference { line: 2, id: 2 })
        );
    }

    #[test]
    fn duplicate_id() {
        assert_eq!(
            parse_trace("1 = axiom Epp\n# again\n1 = axiom Eqq"),
            Err(TraceError::DuplicateId { line: 3, id: 1 })
        );
    }

    #[test]
    fn syntax_errors() {
        for bad in [
            "1 = axiom",
            "1 = axiom EpA",
            "x = axiom Epp",
            "0 = axiom Epp",
            "1 = axiom Epp\n2 = C1.1",
            "1 = axiom Epp\n2 = D1",
            "1 = axiom Epp\nexpect-length 1 three",
            "1 axiom Epp",
        ] {
            assert!(
                matches!(parse_trace(bad), Err(TraceError::Syntax { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn expectations_need_defined_steps() {
        assert_eq!(
            parse_trace("1 = axiom Epp\nexpect 2 Epp"),
            Err(TraceError::UndefinedId { line: 2, id: 2 })
        );
        // Expectations may precede the step they name.
        let t = parse_trace("expect-length 1 3\n1 = axiom Epp").unwrap();
        assert_eq!(t.expectations_for(1), &[Expectation::Length(3)]);
    }

    #[test]
    fn display_round_trips() {
        let text = "1 = axiom EpEEEpqErqr\n2 = D1.1\n3 = R2.1\nexpect 2 Epp\nexpect-length 3 7\nexpect-instances 3 1 2\n";
        let t = parse_trace(text).unwrap();
        assert_eq!(t.to_string(), text);
        assert_eq!(parse_trace(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn builder() {
        let mut t = ProofTrace::new();
        let a = t.push_axiom("Epp".parse().unwrap());
        let b = t.push_derived(Rule::D, a, a);
        assert_eq!((a, b), (1, 2));
        assert!(t.uses_only_d());
        t.push_derived(Rule::R, b, a);
        assert!(!t.uses_only_d());
    }
}
