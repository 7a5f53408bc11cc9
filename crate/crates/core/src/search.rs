//! Bounded given-clause saturation under D (optionally D and R).
//!
//! The frontier is ordered by (symbol length, insertion order). Each selected
//! formula is combined, as major and as minor, with every formula selected
//! before it (and with itself). Results are deduplicated up to alphabetical
//! variance. Results longer than the length cap are dropped unless they are
//! variants of a hint.
//!
//! The combination step runs on the rayon pool; its results are sorted by
//! (length, Polish string, rule, parents) before ids are assigned, so runs are
//! reproducible regardless of thread count.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::catalog::basis_pair;
use crate::formula::{CanonicalFormula, Formula};
use crate::inference::{detach_filtered, Rule};
use crate::proofs::{replay, Expectation, ProofTrace, StepId};
use crate::unify::is_instance_of;

pub type EntryId = usize;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no axioms given")]
    NoAxioms,
    #[error("{0} has not been derived")]
    NotDerived(Formula),
    #[error("search limits must be positive")]
    ZeroLimit,
}

/// Bounds and options for [`saturate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    /// Results longer than this are discarded unless they match a hint.
    pub max_symbol_length: usize,
    /// Stop once the knowledge base holds this many formulas.
    pub max_kept: usize,
    /// Stop after selecting this many given formulas.
    pub max_steps: usize,
    pub rules: Vec<Rule>,
    /// Formulas kept whenever derived, whatever their length.
    pub hints: Vec<Formula>,
    /// Also discard results that are instances of a kept formula. Off by
    /// default: dropping instances can lose D-derivations, since a more
    /// general premiss can lead to a different most general result.
    pub subsume_instances: bool,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_symbol_length: 15,
            max_kept: 10_000,
            max_steps: 2_000,
            rules: vec![Rule::D],
            hints: Vec::new(),
            subsume_instances: false,
        }
    }
}

impl SearchLimits {
    pub fn with_hints(mut self, hints: Vec<Formula>) -> Self {
        self.hints = hints;
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.max_symbol_length == 0
            || self.max_kept == 0
            || self.max_steps == 0
            || self.rules.is_empty()
        {
            return Err(SearchError::ZeroLimit);
        }
        Ok(())
    }
}

/// How a knowledge-base entry was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    Axiom,
    Derived {
        rule: Rule,
        major: EntryId,
        minor: EntryId,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub id: EntryId,
    pub formula: CanonicalFormula,
    pub origin: Origin,
    pub hint: bool,
}

/// Deduplicated formulas with parent pointers.
#[derive(Debug, Clone, Default)]
pub struct KnowledgeBase {
    entries: Vec<Entry>,
    index: HashMap<CanonicalFormula, EntryId>,
    frontier: BTreeSet<(usize, EntryId)>,
    active: Vec<EntryId>,
}

impl KnowledgeBase {
    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, id: EntryId) -> Option<&Entry> {
        self.entries.get(id)
    }

    /// The entry that is a variant of `f`, if any.
    pub fn find(&self, f: &Formula) -> Option<&Entry> {
        self.index.get(&f.canonical()).map(|&id| &self.entries[id])
    }

    /// Ids not yet selected, in selection order.
    pub fn frontier(&self) -> impl Iterator<Item = EntryId> + '_ {
        self.frontier.iter().map(|&(_, id)| id)
    }

    fn insert(&mut self, formula: CanonicalFormula, origin: Origin, hint: bool) -> EntryId {
        let id = self.entries.len();
        self.frontier.insert((formula.symbol_length(), id));
        self.index.insert(formula.clone(), id);
        self.entries.push(Entry {
            id,
            formula,
            origin,
            hint,
        });
        id
    }
}

/// Which bound ended a search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Limit {
    Steps,
    Kept,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "status", content = "limit")]
pub enum SearchStatus {
    AllGoalsReached,
    LimitReached(Limit),
    /// The frontier ran dry under the length cap before every goal was found
    /// (or, with no goals, at all).
    Saturated,
}

impl fmt::Display for SearchStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SearchStatus::AllGoalsReached => f.write_str("all-goals-reached"),
            SearchStatus::LimitReached(Limit::Steps) => f.write_str("limit-reached (steps)"),
            SearchStatus::LimitReached(Limit::Kept) => f.write_str("limit-reached (kept)"),
            SearchStatus::Saturated => f.write_str("saturated"),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub given: usize,
    pub generated: usize,
    pub kept: usize,
    pub discarded_by_length: usize,
    pub discarded_as_variant: usize,
    pub discarded_as_instance: usize,
    pub inapplicable: usize,
}

impl SearchStats {
    pub fn tsv(&self) -> String {
        format!(
            "given\t{}\ngenerated\t{}\nkept\t{}\ndiscarded-by-length\t{}\ndiscarded-as-variant\t{}\ndiscarded-as-instance\t{}\ninapplicable\t{}\n",
            self.given,
            self.generated,
            self.kept,
            self.discarded_by_length,
            self.discarded_as_variant,
            self.discarded_as_instance,
            self.inapplicable
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoalResult {
    pub goal: Formula,
    pub found: Option<EntryId>,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub status: SearchStatus,
    pub kb: KnowledgeBase,
    pub goals: Vec<GoalResult>,
    pub stats: SearchStats,
}

impl SearchOutcome {
    pub fn all_goals_found(&self) -> bool {
        self.goals.iter().all(|g| g.found.is_some())
    }
}

// A derived formula before it gets an id.
struct Candidate {
    key: String,
    formula: CanonicalFormula,
    origin: Origin,
}

/// Forward saturation from `axioms` until every goal is derived or a limit is
/// hit.
pub fn saturate(
    axioms: &[Formula],
    limits: &SearchLimits,
    goals: &[Formula],
) -> Result<SearchOutcome, SearchError> {
    if axioms.is_empty() {
        return Err(SearchError::NoAxioms);
    }
    limits.validate()?;
    let hints: HashSet<CanonicalFormula> = limits.hints.iter().map(Formula::canonical).collect();
    let hint_lengths: HashSet<usize> = hints.iter().map(CanonicalFormula::symbol_length).collect();
    let goal_forms: Vec<CanonicalFormula> = goals.iter().map(Formula::canonical).collect();
    let mut found: Vec<Option<EntryId>> = vec![None; goals.len()];
    // Without goals the search runs until a limit or saturation.
    let done = |found: &[Option<EntryId>]| !found.is_empty() && found.iter().all(Option::is_some);
    let mut kb = KnowledgeBase::default();
    let mut stats = SearchStats::default();

    let note_goals = |kb: &KnowledgeBase, id: EntryId, found: &mut [Option<EntryId>]| {
        let f = &kb.entries[id].formula;
        for (slot, g) in found.iter_mut().zip(&goal_forms) {
            if slot.is_none() && g == f {
                *slot = Some(id);
            }
        }
    };

    for axiom in axioms {
        let c = axiom.canonical();
        if kb.index.contains_key(&c) {
            continue;
        }
        let hint = hints.contains(&c);
        let id = kb.insert(c, Origin::Axiom, hint);
        stats.kept += 1;
        note_goals(&kb, id, &mut found);
    }

    let status = 'outer: loop {
        if done(&found) {
            break SearchStatus::AllGoalsReached;
        }
        if kb.len() >= limits.max_kept {
            break SearchStatus::LimitReached(Limit::Kept);
        }
        if stats.given >= limits.max_steps {
            break SearchStatus::LimitReached(Limit::Steps);
        }
        let Some((_, given)) = kb.frontier.pop_first() else {
            break SearchStatus::Saturated;
        };
        stats.given += 1;
        kb.active.push(given);

        let accept = |len: usize| len <= limits.max_symbol_length || hint_lengths.contains(&len);
        let entries = &kb.entries;
        let given_formula = entries[given].formula.formula();
        let (mut batch, inapplicable, too_long): (Vec<Candidate>, usize, usize) = kb
            .active
            .par_iter()
            .map(|&other| {
                let mut out = Vec::new();
                let mut failed = 0;
                let mut rejected = 0;
                let other_formula = entries[other].formula.formula();
                let mut pairs = vec![(given, given_formula, other, other_formula)];
                if other != given {
                    pairs.push((other, other_formula, given, given_formula));
                }
                for &rule in &limits.rules {
                    for &(major, major_f, minor, minor_f) in &pairs {
                        match detach_filtered(rule, major_f, minor_f, accept) {
                            Ok(Some(outcome)) => out.push(Candidate {
                                key: outcome.result.to_string(),
                                formula: outcome.result,
                                origin: Origin::Derived { rule, major, minor },
                            }),
                            Ok(None) => rejected += 1,
                            Err(_) => failed += 1,
                        }
                    }
                }
                (out, failed, rejected)
            })
            .reduce(
                || (Vec::new(), 0, 0),
                |(mut a, x, u), (b, y, v)| {
                    a.extend(b);
                    (a, x + y, u + v)
                },
            );
        stats.inapplicable += inapplicable;
        stats.generated += batch.len() + too_long;
        stats.discarded_by_length += too_long;
        batch.sort_by(|a, b| (a.key.len(), &a.key, a.origin).cmp(&(b.key.len(), &b.key, b.origin)));

        for cand in batch {
            let is_hint = hints.contains(&cand.formula);
            if !is_hint && cand.formula.symbol_length() > limits.max_symbol_length {
                stats.discarded_by_length += 1;
                continue;
            }
            if kb.index.contains_key(&cand.formula) {
                stats.discarded_as_variant += 1;
                continue;
            }
            if limits.subsume_instances
                && !is_hint
                && kb
                    .entries
                    .iter()
                    .any(|e| is_instance_of(cand.formula.formula(), e.formula.formula()))
            {
                stats.discarded_as_instance += 1;
                continue;
            }
            let id = kb.insert(cand.formula, cand.origin, is_hint);
            stats.kept += 1;
            note_goals(&kb, id, &mut found);
            if done(&found) {
                break 'outer SearchStatus::AllGoalsReached;
            }
            if kb.len() >= limits.max_kept {
                break 'outer SearchStatus::LimitReached(Limit::Kept);
            }
        }
    };

    let goals = goals
        .iter()
        .zip(found)
        .map(|(goal, found)| GoalResult {
            goal: goal.clone(),
            found,
        })
        .collect();
    Ok(SearchOutcome {
        status,
        kb,
        goals,
        stats,
    })
}

/// The ancestors of `target`'s entry as a proof trace: axioms first, then
/// derived steps in derivation order, renumbered from 1. The last step is
/// expected to be a variant of `target`.
pub fn extract_trace(kb: &KnowledgeBase, target: &Formula) -> Result<ProofTrace, SearchError> {
    let entry = kb
        .find(target)
        .ok_or_else(|| SearchError::NotDerived(target.clone()))?;
    let mut needed: BTreeSet<EntryId> = BTreeSet::new();
    let mut stack = vec![entry.id];
    while let Some(id) = stack.pop() {
        if !needed.insert(id) {
            continue;
        }
        if let Origin::Derived { major, minor, .. } = kb.entries[id].origin {
            stack.push(major);
            stack.push(minor);
        }
    }
    let (axioms, derived): (Vec<EntryId>, Vec<EntryId>) = needed
        .into_iter()
        .partition(|&id| kb.entries[id].origin == Origin::Axiom);
    let mut trace = ProofTrace::new();
    let mut renumber: HashMap<EntryId, StepId> = HashMap::new();
    for id in axioms {
        let step = trace.push_axiom(kb.entries[id].formula.formula().clone());
        renumber.insert(id, step);
    }
    for id in derived {
        let Origin::Derived { rule, major, minor } = kb.entries[id].origin else {
            unreachable!("partitioned")
        };
        let step = trace.push_derived(rule, renumber[&major], renumber[&minor]);
        renumber.insert(id, step);
    }
    trace.expect(renumber[&entry.id], Expectation::Formula(target.clone()));
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Both basis formulas were derived and their traces replay.
    Confirmed,
    /// The bounded search did not settle the question.
    Inconclusive,
}

#[derive(Debug, Clone)]
pub struct CandidateReport {
    pub candidate: Formula,
    pub verdict: Verdict,
    pub status: SearchStatus,
    pub stats: SearchStats,
    /// One entry per basis formula, with a replay-checked trace when found.
    pub traces: Vec<(Formula, Option<ProofTrace>)>,
}

/// Searches for both formulas of the basis pair from `candidate` alone. A
/// bounded search can only confirm; failing to find the pair is reported as
/// inconclusive.
pub fn check_single_axiom_candidate(candidate: &Formula, limits: &SearchLimits) -> CandidateReport {
    let goals = basis_pair();
    let outcome = match saturate(std::slice::from_ref(candidate), limits, &goals) {
        Ok(outcome) => outcome,
        Err(_) => {
            return CandidateReport {
                candidate: candidate.clone(),
                verdict: Verdict::Inconclusive,
                status: SearchStatus::Saturated,
                stats: SearchStats::default(),
                traces: goals.into_iter().map(|g| (g, None)).collect(),
            }
        }
    };
    let traces: Vec<(Formula, Option<ProofTrace>)> = goals
        .iter()
        .map(|g| {
            let trace = extract_trace(&outcome.kb, g)
                .ok()
                .filter(|t| replay(t).is_ok());
            (g.clone(), trace)
        })
        .collect();
    let verdict = if traces.iter().all(|(_, t)| t.is_some()) {
        Verdict::Confirmed
    } else {
        Verdict::Inconclusive
    };
    CandidateReport {
        candidate: candidate.clone(),
        verdict,
        status: outcome.status,
        stats: outcome.stats,
        traces,
    }
}
