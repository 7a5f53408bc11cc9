//! Proof traces, replay, reverse-detachment elimination, and the embedded
//! derivations from XCB.

mod replay;
mod reverse;
mod trace;

pub use replay::{
    replay, replay_report, ExpectationStatus, ReplayError, ReplayReport, StepRecord, StepRule,
};
pub use reverse::{
    epp_fixture, reconstruct_reverse_detachment, MiddleStep, Reconstruction, ReverseError, Stage,
    EPP_PROOF,
};
pub use trace::{parse_trace, Expectation, ProofStep, ProofTrace, StepId, StepKind, TraceError};

/// Text of the embedded 26-step derivation of the basis pair from XCB.
pub const XCB_PROOF: &str = include_str!("fixtures/xcb.trace");

/// The 26-step derivation of `EEpqEEqrEpr` (step 23) and `EEpqEqp` (step 26)
/// from XCB by condensed detachment alone.
pub fn xcb_fixture() -> ProofTrace {
    parse_trace(XCB_PROOF).expect("embedded fixture parses")
}
