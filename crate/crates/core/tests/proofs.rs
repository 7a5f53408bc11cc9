use std::collections::HashMap;

use eqcalc::catalog::xcb;
use eqcalc::proofs::{
    epp_fixture, reconstruct_reverse_detachment, replay, replay_report, xcb_fixture,
    ExpectationStatus, MiddleStep, ProofTrace, ReplayError, StepKind, StepRule,
};
use eqcalc::search::{extract_trace, saturate, SearchLimits};
use eqcalc::{Formula, Rule};

fn f(s: &str) -> Formula {
    s.parse().unwrap()
}

// Renames lowercase variables (with their digits) by first occurrence,
// leaving the upper-case fold labels alone.
fn normalize_lowercase(s: &str) -> String {
    let mut names: HashMap<String, usize> = HashMap::new();
    let mut out = String::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_ascii_lowercase() {
            let mut j = i + 1;
            while j < chars.len() && chars[j].is_ascii_digit() {
                j += 1;
            }
            let name: String = chars[i..j].iter().collect();
            let next = names.len();
            let n = *names.entry(name).or_insert(next);
            out.push_str(&format!("v{n}."));
            i = j;
        } else {
            out.push(c);
            i += 1;
        }
    }
    out
}

#[test]
fn xcb_fixture_shape() {
    let trace = xcb_fixture();
    assert_eq!(trace.len(), 26);
    assert_eq!(trace.axioms().count(), 1);
    assert!(trace.uses_only_d());
    let derived = trace
        .steps()
        .iter()
        .filter(|s| matches!(s.kind, StepKind::Derived { rule: Rule::D, .. }))
        .count();
    assert_eq!(derived, 25);
}

#[test]
fn replay_is_deterministic_and_sound() {
    let a = replay(&xcb_fixture()).unwrap();
    let b = replay(&xcb_fixture()).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.to_tsv(), b.to_tsv());
    assert_eq!(a.to_json(), b.to_json());
    assert!(a.all_tautologies());
    assert!(a.all_expectations_met());
    assert_eq!(a.records[0].rule, StepRule::Axiom);
    let r17 = a.record(17).unwrap();
    assert_eq!(r17.parents, Some((12, 16)));
    assert_eq!(
        (r17.major_instance_length, r17.minor_instance_length),
        (Some(2939), Some(2919))
    );
    assert_eq!(a.record(19).unwrap().symbol_length, 11);
}

#[test]
fn trace_round_trips_through_text() {
    let trace = xcb_fixture();
    let again: ProofTrace = trace.to_string().parse().unwrap();
    assert_eq!(replay(&trace).unwrap(), replay(&again).unwrap());
}

#[test]
fn lines_matching_the_transcribed_strings() {
    let report = replay(&xcb_fixture()).unwrap();
    let folded = [
        (4, "EEEEEEAstEstuEvuv"),
        (6, "EEEEEEAstEstuvEuv"),
        (7, "EpEEEEAEBpwExwx"),
    ];
    for (id, text) in folded {
        assert_eq!(
            normalize_lowercase(&report.record(id).unwrap().folded),
            normalize_lowercase(text),
            "line {id}"
        );
    }
    let plain = [
        (20, "EEEEEEEpqErqrpsEtst"),
        (23, "EEpqEEqrEpr"),
        (25, "EEEEEpqprsEEqrs"),
        (26, "EEpqEqp"),
    ];
    for (id, text) in plain {
        let got = report.record(id).unwrap().formula.formula().clone();
        assert!(got.is_variant_of(&f(text)), "line {id}: {got}");
    }
}

#[test]
fn non_tautologous_axiom_is_flagged() {
    let trace: ProofTrace = "1 = axiom Epq\n2 = D1.1\n".parse().unwrap();
    let report = replay(&trace).unwrap();
    let last = report.last().unwrap();
    assert_eq!(last.formula.to_string(), "a");
    assert!(!last.tautology);
    assert!(!report.all_tautologies());
}

#[test]
fn expectation_failures() {
    let trace: ProofTrace = "1 = axiom EpEEEpqErqr\n2 = D1.1\nexpect 2 Epp\n"
        .parse()
        .unwrap();
    let report = replay_report(&trace).unwrap();
    assert_eq!(
        report.record(2).unwrap().expectation,
        ExpectationStatus::Failed
    );
    assert!(report.to_tsv().lines().nth(1).unwrap().ends_with("FAILED"));
    assert!(matches!(
        replay(&trace),
        Err(ReplayError::ExpectationMismatch { id: 2, .. })
    ));
    let stuck: ProofTrace = "1 = axiom Epq\n2 = D1.1\n3 = D2.2\n".parse().unwrap();
    assert!(matches!(
        replay(&stuck),
        Err(ReplayError::StepFailed { id: 3, .. })
    ));
}

fn fixture(name: &str) -> ProofTrace {
    let path = format!(
        "{}/tests/fixtures/reverse/{name}.trace",
        env!("CARGO_MANIFEST_DIR")
    );
    std::fs::read_to_string(path).unwrap().parse().unwrap()
}

#[test]
fn reverse_detachment_on_stored_pairs() {
    for (name, antecedent) in [
        ("lifted-xcb", "EEEEaEEbEEEbcEdcdaefEef"),
        ("identity", "Epp"),
        ("symmetry", "EEpqEqp"),
    ] {
        let implication = fixture(&format!("{name}.implication"));
        let consequent = fixture(&format!("{name}.consequent"));
        let rc = reconstruct_reverse_detachment(&implication, &consequent).unwrap();
        assert!(rc.trace.uses_only_d(), "{name}");
        assert_eq!(rc.trace.axioms().count(), 1);
        assert_eq!(rc.middle, MiddleStep::LiftedMajor);
        let report = replay(&rc.trace).unwrap();
        assert_eq!(
            report.last().unwrap().formula,
            f(antecedent).canonical(),
            "{name}"
        );
        assert!(report.all_tautologies());
    }
}

#[test]
fn reverse_detachment_on_every_searched_pair() {
    let hints = replay(&xcb_fixture())
        .unwrap()
        .records
        .iter()
        .map(|r| r.formula.formula().clone())
        .collect();
    let limits = SearchLimits {
        max_symbol_length: 11,
        max_kept: 5000,
        max_steps: 5000,
        ..SearchLimits::default()
    }
    .with_hints(hints);
    let out = saturate(&[xcb()], &limits, &[]).unwrap();
    let mut pairs = 0;
    for entry in out.kb.entries() {
        let Some((a, b)) = entry.formula.formula().as_equiv() else {
            continue;
        };
        if out.kb.find(b).is_none() {
            continue;
        }
        let implication = extract_trace(&out.kb, entry.formula.formula()).unwrap();
        let consequent = extract_trace(&out.kb, b).unwrap();
        let rc = reconstruct_reverse_detachment(&implication, &consequent).unwrap();
        let last = replay(&rc.trace).unwrap().last().unwrap().formula.clone();
        assert_eq!(last, a.canonical());
        pairs += 1;
    }
    assert!(pairs >= 3, "only {pairs} pairs");
}

#[test]
fn epp_fixture_is_self_contained() {
    let trace = epp_fixture();
    assert!(trace.axioms().all(|(_, g)| g.is_variant_of(&xcb())));
    assert!(replay(&trace).unwrap().all_expectations_met());
}
