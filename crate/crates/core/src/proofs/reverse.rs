//! Eliminating reverse detachment from XCB proofs.
//!
//! Given D-only proofs from XCB of an implication `Eab` and of (a variant of)
//! its consequent `b`, builds a D-only proof of `a`:
//!
//! 1. `s1 = D(XCB, b)`, a variant of `EEEbqErqr`;
//! 2. a stored proof of `Epp`;
//! 3. `s2 = D(XCB, Epp)`, a variant of `EEEEppqErqr`;
//! 4. `s3`, a variant of `EEEEppqrEqr`, by one detachment among `s2` and XCB;
//! 5. `s4 = D(s3, s1)`, a variant of `EExbx`;
//! 6. `s5 = D(s4, Eab)`, a variant of `a`.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use super::replay::{replay, ReplayError};
use super::trace::{parse_trace, Expectation, ProofTrace, StepId, StepKind};
use crate::catalog::xcb;
use crate::formula::{CanonicalFormula, Formula};
use crate::inference::{condensed_detach, Rule};

/// Text of the stored derivation of `Epp` from XCB.
pub const EPP_PROOF: &str = include_str!("fixtures/epp.trace");

/// A derivation of `Epp` from XCB by condensed detachment alone.
pub fn epp_fixture() -> ProofTrace {
    parse_trace(EPP_PROOF).expect("embedded fixture parses")
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReverseError {
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("reconstruction failed at {0:?}")]
    ReconstructionFailed(Stage),
    #[error("reconstructed trace does not replay: {0}")]
    Replay(#[from] ReplayError),
}

/// The derived steps of the reconstruction, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    /// `D(XCB, b)`.
    LiftConsequent,
    /// `D(XCB, Epp)`.
    LiftIdentity,
    /// The step yielding `EEEEppqrEqr`.
    Middle,
    /// `D(s3, s1)`.
    Bridge,
    /// `D(s4, Eab)`.
    Conclusion,
}

/// Which detachment produced the middle step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MiddleStep {
    /// `D(s2, XCB)`.
    LiftedMajor,
    /// `D(XCB, s2)`.
    XcbMajor,
    /// `D(s2, s2)`.
    SelfDetach,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reconstruction {
    /// D-only trace from XCB whose last step is a variant of the antecedent.
    pub trace: ProofTrace,
    pub middle: MiddleStep,
    /// Trace ids of the five derived stages.
    pub stages: Vec<(Stage, StepId)>,
    pub antecedent: Formula,
}

// Builds a D-only trace from XCB, reusing steps whose formula is already
// present up to variance.
struct Builder {
    trace: ProofTrace,
    formulas: HashMap<StepId, CanonicalFormula>,
    by_formula: HashMap<CanonicalFormula, StepId>,
}

impl Builder {
    fn new() -> Self {
        let mut trace = ProofTrace::new();
        let axiom = xcb();
        let id = trace.push_axiom(axiom.clone());
        let canonical = axiom.canonical();
        Builder {
            trace,
            formulas: HashMap::from([(id, canonical.clone())]),
            by_formula: HashMap::from([(canonical, id)]),
        }
    }

    fn formula(&self, id: StepId) -> &Formula {
        self.formulas[&id].formula()
    }

    fn detach(&mut self, major: StepId, minor: StepId) -> Option<StepId> {
        let outcome = condensed_detach(self.formula(major), self.formula(minor)).ok()?;
        if let Some(&id) = self.by_formula.get(&outcome.result) {
            return Some(id);
        }
        Some(self.push(major, minor, outcome.result))
    }

    // Like `detach`, but always appends a step, so the trace ends with it.
    fn detach_last(&mut self, major: StepId, minor: StepId) -> Option<StepId> {
        let outcome = condensed_detach(self.formula(major), self.formula(minor)).ok()?;
        Some(self.push(major, minor, outcome.result))
    }

    fn push(&mut self, major: StepId, minor: StepId, result: CanonicalFormula) -> StepId {
        let id = self.trace.push_derived(Rule::D, major, minor);
        self.formulas.insert(id, result.clone());
        self.by_formula.entry(result).or_insert(id);
        id
    }

    // Copies a checked D-only XCB trace in, returning the id of its last step.
    fn import(&mut self, source: &ProofTrace) -> Option<StepId> {
        let mut map: HashMap<StepId, StepId> = HashMap::new();
        let mut last = None;
        for step in source.steps() {
            let id = match &step.kind {
                StepKind::Axiom(_) => 1,
                StepKind::Derived { major, minor, .. } => self.detach(map[major], map[minor])?,
            };
            map.insert(step.id, id);
            last = Some(id);
        }
        last
    }
}

// Replays `trace` and checks it is a D-only derivation from XCB; returns its
// final formula.
fn checked_final(trace: &ProofTrace, name: &str) -> Result<CanonicalFormula, ReverseError> {
    let fail = |why: &str| ReverseError::PreconditionFailed(format!("{name} trace {why}"));
    if !trace.uses_only_d() {
        return Err(fail("uses a rule other than D"));
    }
    let axiom = xcb();
    if trace.axioms().any(|(_, f)| !f.is_variant_of(&axiom)) {
        return Err(fail("has an axiom other than XCB"));
    }
    let report = replay(trace).map_err(|e| fail(&format!("does not replay: {e}")))?;
    report
        .last()
        .map(|r| r.formula.clone())
        .ok_or_else(|| fail("is empty"))
}

/// Builds a D-only proof from XCB of `a`, given D-only proofs from XCB of
/// `Eab` (`implication`) and of a variant of `b` (`consequent`).
pub fn reconstruct_reverse_detachment(
    implication: &ProofTrace,
    consequent: &ProofTrace,
) -> Result<Reconstruction, ReverseError> {
    let eab = checked_final(implication, "implication")?;
    let b_proved = checked_final(consequent, "consequent")?;
    let (a, b) = eab.formula().as_equiv().ok_or_else(|| {
        ReverseError::PreconditionFailed(format!("implication proves a variable, {eab}"))
    })?;
    if !b.is_variant_of(b_proved.formula()) {
        return Err(ReverseError::PreconditionFailed(format!(
            "{b_proved} is not a variant of the consequent {b}"
        )));
    }

    let failed = ReverseError::ReconstructionFailed;
    let mut builder = Builder::new();
    let implication_id = builder
        .import(implication)
        .ok_or(failed(Stage::Conclusion))?;
    let consequent_id = builder
        .import(consequent)
        .ok_or(failed(Stage::LiftConsequent))?;
    let epp_id = builder
        .import(&epp_fixture())
        .ok_or(failed(Stage::LiftIdentity))?;
    let s1 = builder
        .detach(1, consequent_id)
        .ok_or(failed(Stage::LiftConsequent))?;
    let s2 = builder
        .detach(1, epp_id)
        .ok_or(failed(Stage::LiftIdentity))?;

    let middle_target: Formula = "EEEEppqrEqr".parse().expect("literal");
    let middle_target = middle_target.canonical();
    let mut middle = None;
    for (kind, major, minor) in [
        (MiddleStep::LiftedMajor, s2, 1),
        (MiddleStep::XcbMajor, 1, s2),
        (MiddleStep::SelfDetach, s2, s2),
    ] {
        let Ok(outcome) = condensed_detach(builder.formula(major), builder.formula(minor)) else {
            continue;
        };
        if outcome.result == middle_target {
            middle = Some((kind, builder.detach(major, minor).expect("just detached")));
            break;
        }
    }
    let (middle, s3) = middle.ok_or(failed(Stage::Middle))?;

    let s4 = builder.detach(s3, s1).ok_or(failed(Stage::Bridge))?;
    let s5 = builder
        .detach_last(s4, implication_id)
        .ok_or(failed(Stage::Conclusion))?;
    if !builder.formula(s5).is_variant_of(a) {
        return Err(failed(Stage::Conclusion));
    }

    let mut trace = builder.trace;
    trace.expect(s5, Expectation::Formula(a.clone()));
    replay(&trace)?;
    Ok(Reconstruction {
        trace,
        middle,
        stages: vec![
            (Stage::LiftConsequent, s1),
            (Stage::LiftIdentity, s2),
            (Stage::Middle, s3),
            (Stage::Bridge, s4),
            (Stage::Conclusion, s5),
        ],
        antecedent: a.clone(),
    })
}
