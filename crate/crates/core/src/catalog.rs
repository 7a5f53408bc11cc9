//! Exhaustive thesis enumeration and the registry of the fourteen shortest
//! single axioms.
//!
//! Candidates are generated as (tree shape, leaf partition) pairs. A leaf
//! partition is a restricted growth string over the leaves in pre-order, so
//! labelling leaf `i` with the `rgs[i]`-th canonical variable yields each
//! formula in canonical form exactly once.
//!
//! A thesis set counts *most general* theses: tautologies that are not a
//! proper substitution instance of another thesis of the same length. In pure
//! `E` those are the tautologies in which every variable occurs exactly twice
//! (a variable occurring four or more times can be split). At length eleven
//! there are 42 shapes × 15 pairings = 630 of them. The full tautology count is
//! available through [`enumerate_all_theses`].

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::formula::{CanonicalFormula, Formula, Var};
use crate::semantics::{even_occurrence_predicate, is_tautology};

/// Lengths up to this bound are answered from memoized enumerations.
pub const MAX_ENUMERATED_LENGTH: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("invalid length {0}: formula lengths are odd and positive")]
    InvalidLength(usize),
}

/// Which theses a [`ThesisSet`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ThesisScope {
    /// Every variable occurs exactly twice.
    MostGeneral,
    /// Every tautology.
    All,
}

/// Canonical theses of one symbol length, sorted by their Polish string.
#[derive(Debug, Clone)]
pub struct ThesisSet {
    pub length: usize,
    pub scope: ThesisScope,
    members: Vec<CanonicalFormula>,
    index: HashSet<CanonicalFormula>,
    pub stats: EnumerationStats,
}

impl ThesisSet {
    pub fn members(&self) -> &[CanonicalFormula] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, f: &CanonicalFormula) -> bool {
        self.index.contains(f)
    }

    /// One canonical formula per line.
    pub fn dump(&self) -> String {
        self.members.iter().map(|m| format!("{m}\n")).collect()
    }
}

/// Counters from one enumeration run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct EnumerationStats {
    pub shapes: usize,
    pub partitions_per_shape: usize,
    pub candidates: usize,
    pub tautologies: usize,
    pub members: usize,
}

/// Most general theses of the given length (630 at length eleven).
pub fn enumerate_theses(length: usize) -> Result<ThesisSet, CatalogError> {
    enumerate(length, ThesisScope::MostGeneral)
}

/// Every tautology of the given length, up to alphabetical variance.
pub fn enumerate_all_theses(length: usize) -> Result<ThesisSet, CatalogError> {
    enumerate(length, ThesisScope::All)
}

pub fn enumerate(length: usize, scope: ThesisScope) -> Result<ThesisSet, CatalogError> {
    if length == 0 || length.is_multiple_of(2) {
        return Err(CatalogError::InvalidLength(length));
    }
    let leaves = length.div_ceil(2);
    let shapes = tree_shapes(leaves);
    let partitions = set_partitions(leaves);
    let per_shape: Vec<(usize, Vec<CanonicalFormula>)> = shapes
        .par_iter()
        .map(|shape| {
            let mut tautologies = 0;
            let mut kept = Vec::new();
            for rgs in &partitions {
                let f = shape.instantiate(rgs);
                if !is_tautology(&f) {
                    continue;
                }
                tautologies += 1;
                if scope == ThesisScope::All || every_variable_twice(&f) {
                    kept.push(CanonicalFormula::from_canonical_unchecked(f));
                }
            }
            (tautologies, kept)
        })
        .collect();
    let tautologies = per_shape.iter().map(|(t, _)| t).sum();
    let mut members: Vec<CanonicalFormula> = per_shape.into_iter().flat_map(|(_, m)| m).collect();
    members.sort_by_cached_key(|m| m.to_string());
    members.dedup();
    let stats = EnumerationStats {
        shapes: shapes.len(),
        partitions_per_shape: partitions.len(),
        candidates: shapes.len() * partitions.len(),
        tautologies,
        members: members.len(),
    };
    let index = members.iter().cloned().collect();
    Ok(ThesisSet {
        length,
        scope,
        members,
        index,
        stats,
    })
}

fn every_variable_twice(f: &Formula) -> bool {
    f.occurrence_counts().values().all(|&n| n == 2)
}

/// A binary tree skeleton in pre-order: `true` marks an `E` node, `false` a
/// leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeShape(Vec<bool>);

impl TreeShape {
    pub fn leaves(&self) -> usize {
        self.0.iter().filter(|n| !**n).count()
    }

    /// Fills the leaves, in order, with the canonical variables named by
    /// `labels`.
    pub fn instantiate(&self, labels: &[usize]) -> Formula {
        let mut pos = 0;
        build(&self.0, &mut pos, &mut labels.iter())
    }
}

fn build<'a>(
    nodes: &[bool],
    pos: &mut usize,
    leaf: &mut impl Iterator<Item = &'a usize>,
) -> Formula {
    let node = nodes[*pos];
    *pos += 1;
    if node {
        let left = build(nodes, pos, leaf);
        let right = build(nodes, pos, leaf);
        Formula::equiv(left, right)
    } else {
        Formula::Var(Var::canonical(*leaf.next().expect("one label per leaf")))
    }
}

impl fmt::Display for TreeShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &n in &self.0 {
            f.write_str(if n { "E" } else { "." })?;
        }
        Ok(())
    }
}

/// All binary tree shapes with `leaves` leaves (a Catalan number of them).
pub fn tree_shapes(leaves: usize) -> Vec<TreeShape> {
    let mut memo: HashMap<usize, Vec<Vec<bool>>> = HashMap::new();
    shapes_rec(leaves, &mut memo)
        .into_iter()
        .map(TreeShape)
        .collect()
}

fn shapes_rec(leaves: usize, memo: &mut HashMap<usize, Vec<Vec<bool>>>) -> Vec<Vec<bool>> {
    if let Some(done) = memo.get(&leaves) {
        return done.clone();
    }
    let out = if leaves <= 1 {
        vec![vec![false]]
    } else {
        let mut out = Vec::new();
        for left in 1..leaves {
            let ls = shapes_rec(left, memo);
            let rs = shapes_rec(leaves - left, memo);
            for l in &ls {
                for r in &rs {
                    let mut s = Vec::with_capacity(l.len() + r.len() + 1);
                    s.push(true);
                    s.extend_from_slice(l);
                    s.extend_from_slice(r);
                    out.push(s);
                }
            }
        }
        out
    };
    memo.insert(leaves, out.clone());
    out
}

/// All set partitions of `n` elements as restricted growth strings (a Bell
/// number of them), in lexicographic order.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    // maxes[i] = max(rgs[..=i])
    let mut maxes = vec![0usize; n];
    loop {
        out.push(rgs.clone());
        // Find the rightmost position that can still grow.
        let mut i = n - 1;
        loop {
            if i == 0 {
                return out;
            }
            if rgs[i] <= maxes[i - 1] {
                break;
            }
            i -= 1;
        }
        rgs[i] += 1;
        maxes[i] = maxes[i - 1].max(rgs[i]);
        for j in i + 1..n {
            rgs[j] = 0;
            maxes[j] = maxes[i];
        }
    }
}

/// Every formula of the given length, up to alphabetical variance, in
/// canonical form.
pub fn all_formulas(length: usize) -> Result<Vec<Formula>, CatalogError> {
    if length == 0 || length.is_multiple_of(2) {
        return Err(CatalogError::InvalidLength(length));
    }
    let leaves = length.div_ceil(2);
    let partitions = set_partitions(leaves);
    Ok(tree_shapes(leaves)
        .iter()
        .flat_map(|shape| partitions.iter().map(move |rgs| shape.instantiate(rgs)))
        .collect())
}

type Memo = Mutex<HashMap<(usize, ThesisScope), Arc<ThesisSet>>>;

fn memo() -> &'static Memo {
    static MEMO: OnceLock<Memo> = OnceLock::new();
    MEMO.get_or_init(Default::default)
}

/// Memoized [`enumerate`].
pub fn cached_theses(length: usize, scope: ThesisScope) -> Result<Arc<ThesisSet>, CatalogError> {
    if let Some(set) = memo().lock().expect("memo poisoned").get(&(length, scope)) {
        return Ok(Arc::clone(set));
    }
    let set = Arc::new(enumerate(length, scope)?);
    memo()
        .lock()
        .expect("memo poisoned")
        .entry((length, scope))
        .or_insert(set);
    Ok(Arc::clone(
        &memo().lock().expect("memo poisoned")[&(length, scope)],
    ))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Membership {
    pub member: bool,
    pub length: usize,
    #[serde(serialize_with = "crate::serialize_display")]
    pub canonical: CanonicalFormula,
}

/// Whether `f`'s canonical form belongs to the most general thesis set of its
/// length. Lengths beyond [`MAX_ENUMERATED_LENGTH`] are decided by the set's
/// defining predicate instead of a full enumeration.
pub fn thesis_membership(f: &Formula) -> Membership {
    let canonical = f.canonical();
    let length = f.symbol_length();
    let member = if length <= MAX_ENUMERATED_LENGTH {
        cached_theses(length, ThesisScope::MostGeneral)
            .expect("symbol lengths are odd")
            .contains(&canonical)
    } else {
        is_tautology(f) && every_variable_twice(f)
    };
    Membership {
        member,
        length,
        canonical,
    }
}

/// Who first published an axiom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxiomSource {
    Lukasiewicz,
    Meredith,
    Kalman,
    Winker,
    Xcb,
}

impl fmt::Display for AxiomSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AxiomSource::Lukasiewicz => "Lukasiewicz",
            AxiomSource::Meredith => "Meredith",
            AxiomSource::Kalman => "Kalman",
            AxiomSource::Winker => "Winker",
            AxiomSource::Xcb => "XCB",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomEntry {
    pub source: AxiomSource,
    #[serde(serialize_with = "crate::serialize_display")]
    pub formula: Formula,
    #[serde(serialize_with = "crate::serialize_display")]
    pub canonical: CanonicalFormula,
}

#[derive(Debug, Clone, Serialize)]
pub struct AxiomRegistry {
    pub entries: Vec<AxiomEntry>,
}

impl AxiomRegistry {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &AxiomEntry> {
        self.entries.iter()
    }

    pub fn find(&self, f: &Formula) -> Option<&AxiomEntry> {
        let c = f.canonical();
        self.entries.iter().find(|e| e.canonical == c)
    }
}

pub const XCB: &str = "EpEEEpqErqr";

const KNOWN_AXIOMS: &[(AxiomSource, &str)] = &[
    (AxiomSource::Lukasiewicz, "EEpqEErqEpr"),
    (AxiomSource::Lukasiewicz, "EEpqEEprErq"),
    (AxiomSource::Lukasiewicz, "EEpqEErpEqr"),
    (AxiomSource::Meredith, "EEEpqrEqErp"),
    (AxiomSource::Meredith, "EpEEqEprErq"),
    (AxiomSource::Meredith, "EEpEqrErEpq"),
    (AxiomSource::Meredith, "EEpqErEEqrp"),
    (AxiomSource::Meredith, "EEpqErEErqp"),
    (AxiomSource::Meredith, "EEEpEqrrEqp"),
    (AxiomSource::Meredith, "EEEpEqrqErp"),
    (AxiomSource::Kalman, "EpEEqErpErq"),
    (AxiomSource::Winker, "EpEEqrEEprq"),
    (AxiomSource::Winker, "EpEEqrEErpq"),
    (AxiomSource::Xcb, XCB),
];

/// The fourteen eleven-symbol single axioms of the equivalential calculus.
pub fn known_axioms() -> AxiomRegistry {
    AxiomRegistry {
        entries: KNOWN_AXIOMS
            .iter()
            .map(|&(source, text)| {
                let formula: Formula = text.parse().expect("registry formulas are well formed");
                let canonical = formula.canonical();
                AxiomEntry {
                    source,
                    formula,
                    canonical,
                }
            })
            .collect(),
    }
}

pub fn xcb() -> Formula {
    XCB.parse().expect("well formed")
}

/// `EEpqEEqrEpr` and `EEpqEqp`, which together axiomatize the calculus.
pub fn basis_pair() -> [Formula; 2] {
    [
        "EEpqEEqrEpr".parse().expect("well formed"),
        "EEpqEqp".parse().expect("well formed"),
    ]
}

/// Sanity check used by tests: each member is a canonical tautology of the
/// set's length with even occurrence counts.
pub fn member_is_well_formed(set: &ThesisSet, m: &CanonicalFormula) -> bool {
    m.symbol_length() == set.length
        && m.formula().canonical() == *m
        && is_tautology(m.formula())
        && even_occurrence_predicate(m.formula())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_and_bell() {
        let catalan: Vec<usize> = (1..=7).map(|n| tree_shapes(n).len()).collect();
        assert_eq!(catalan, vec![1, 1, 2, 5, 14, 42, 132]);
        let bell: Vec<usize> = (0..=7).map(|n| set_partitions(n).len()).collect();
        assert_eq!(bell, vec![1, 1, 2, 5, 15, 52, 203, 877]);
    }

    #[test]
    fn partitions_are_restricted_growth_strings() {
        let parts = set_partitions(4);
        assert_eq!(parts[0], vec![0, 0, 0, 0]);
        assert_eq!(parts[parts.len() - 1], vec![0, 1, 2, 3]);
        for p in &parts {
            let mut max = 0;
            for (i, &x) in p.iter().enumerate() {
                assert!(i == 0 && x == 0 || i > 0 && x <= max + 1);
                max = max.max(x);
            }
        }
        let unique: HashSet<_> = parts.iter().collect();
        assert_eq!(unique.len(), parts.len());
    }

    #[test]
    fn instantiation_is_canonical() {
        for shape in tree_shapes(4) {
            for rgs in set_partitions(4) {
                let f = shape.instantiate(&rgs);
                assert_eq!(f.canonical().formula(), &f);
                assert_eq!(f.symbol_length(), 7);
            }
        }
    }

    #[test]
    fn small_lengths() {
        let three = enumerate_theses(3).unwrap();
        assert_eq!(
            three
                .members()
                .iter()
                .map(|m| m.to_string())
                .collect::<Vec<_>>(),
            vec!["Eaa"]
        );
        assert!(enumerate_theses(5).unwrap().is_empty());
        assert!(enumerate_all_theses(5).unwrap().is_empty());
        assert!(enumerate_theses(1).unwrap().is_empty());
        // 5 shapes × 3 pairings; with the all-same partition, 20 tautologies.
        assert_eq!(enumerate_theses(7).unwrap().len(), 15);
        assert_eq!(enumerate_all_theses(7).unwrap().len(), 20);
    }

    #[test]
    fn invalid_lengths() {
        assert_eq!(
            enumerate_theses(0).unwrap_err(),
            CatalogError::InvalidLength(0)
        );
        assert_eq!(
            enumerate_theses(4).unwrap_err(),
            CatalogError::InvalidLength(4)
        );
    }

    #[test]
    fn eleven_symbol_census() {
        let set = enumerate_theses(11).unwrap();
        assert_eq!(set.stats.shapes, 42);
        assert_eq!(set.stats.partitions_per_shape, 203);
        assert_eq!(set.len(), 630);
        // 42 shapes × (1 + 15 + 15) all-even partitions.
        assert_eq!(set.stats.tautologies, 1302);
        let sorted: Vec<String> = set.members().iter().map(|m| m.to_string()).collect();
        let mut resorted = sorted.clone();
        resorted.sort();
        assert_eq!(sorted, resorted);
        assert!(set.members().iter().all(|m| member_is_well_formed(&set, m)));
    }

    #[test]
    fn registry() {
        let reg = known_axioms();
        assert_eq!(reg.len(), 14);
        let distinct: HashSet<_> = reg.iter().map(|e| e.canonical.clone()).collect();
        assert_eq!(distinct.len(), 14);
        let set = enumerate_theses(11).unwrap();
        for e in reg.iter() {
            assert_eq!(e.formula.symbol_length(), 11);
            assert!(is_tautology(&e.formula));
            assert!(set.contains(&e.canonical), "{}", e.formula);
        }
        assert_eq!(reg.find(&xcb()).unwrap().source, AxiomSource::Xcb);
    }

    #[test]
    fn membership() {
        assert!(thesis_membership(&xcb()).member);
        assert!(!thesis_membership(&"Epq".parse().unwrap()).member);
        assert!(thesis_membership(&"Epp".parse().unwrap()).member);
        // Instance of Epp: a tautology but not most general.
        assert!(!thesis_membership(&"EEppEpp".parse().unwrap()).member);
        // Beyond the enumeration bound the defining predicate decides.
        let long: Formula = "EEpEEEpqErqrEsEEEstEutu".parse().unwrap();
        assert!(long.symbol_length() > MAX_ENUMERATED_LENGTH);
        assert!(thesis_membership(&long).member);
    }
}
