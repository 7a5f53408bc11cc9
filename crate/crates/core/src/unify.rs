//! Substitutions, most general unifiers, and renaming apart.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::formula::{Formula, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum UnifyError {
    /// A variable would have to contain itself. With a single binary
    /// connective this is the only way unification can fail.
    #[error("occurs check failed")]
    Occurs,
}

/// Finite map from variables to formulas, applied simultaneously.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Var, Formula>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `var ↦ term`. Identity bindings are dropped.
    pub fn bind(&mut self, var: Var, term: Formula) {
        if matches!(&term, Formula::Var(v) if *v == var) {
            self.bindings.remove(&var);
        } else {
            self.bindings.insert(var, term);
        }
    }

    pub fn with(mut self, var: &str, term: Formula) -> Self {
        self.bind(Var::new(var).expect("invalid variable name"), term);
        self
    }

    pub fn get(&self, var: &Var) -> Option<&Formula> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Formula)> {
        self.bindings.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Var> {
        self.bindings.keys()
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        apply_substitution(self, f)
    }

    /// True when applying twice gives the same result as applying once.
    pub fn is_idempotent(&self) -> bool {
        self.bindings
            .values()
            .all(|t| self.bindings.keys().all(|v| !t.occurs(v)))
    }

    /// True when every binding maps to a variable and no two variables share
    /// an image.
    pub fn is_renaming(&self) -> bool {
        let mut images = HashSet::new();
        self.bindings.values().all(|t| match t {
            Formula::Var(v) => images.insert(v.clone()),
            Formula::Equiv(..) => false,
        })
    }
}

impl fmt::Debug for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}↦{t}")?;
        }
        f.write_str("}")
    }
}

impl FromIterator<(Var, Formula)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Formula)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.bind(v, t);
        }
        s
    }
}

/// Simultaneous replacement of bound variables. Unchanged subtrees are shared
/// with the input.
pub fn apply_substitution(s: &Substitution, f: &Formula) -> Formula {
    if s.is_empty() {
        return f.clone();
    }
    apply_shared(s, f).unwrap_or_else(|| f.clone())
}

// Returns None when nothing below `f` changes.
fn apply_shared(s: &Substitution, f: &Formula) -> Option<Formula> {
    match f {
        Formula::Var(v) => s.get(v).cloned(),
        Formula::Equiv(l, r) => {
            let nl = apply_shared(s, l);
            let nr = apply_shared(s, r);
            if nl.is_none() && nr.is_none() {
                return None;
            }
            let left = nl.map(Arc::new).unwrap_or_else(|| Arc::clone(l));
            let right = nr.map(Arc::new).unwrap_or_else(|| Arc::clone(r));
            Some(Formula::Equiv(left, right))
        }
    }
}

/// `compose(outer, inner)` applies `inner` first, then `outer`.
pub fn compose(outer: &Substitution, inner: &Substitution) -> Substitution {
    let mut out: Substitution = inner
        .iter()
        .map(|(v, t)| (v.clone(), outer.apply(t)))
        .collect();
    for (v, t) in outer.iter() {
        if inner.get(v).is_none() {
            out.bind(v.clone(), t.clone());
        }
    }
    out
}

/// Most general unifier with occurs check. The result is fully resolved and
/// therefore idempotent.
pub fn most_general_unifier(f: &Formula, g: &Formula) -> Result<Substitution, UnifyError> {
    let mut bindings: HashMap<Var, Formula> = HashMap::new();
    let mut work: Vec<(Formula, Formula)> = vec![(f.clone(), g.clone())];
    while let Some((a, b)) = work.pop() {
        let a = walk(&bindings, &a);
        let b = walk(&bindings, &b);
        match (&a, &b) {
            (Formula::Var(x), Formula::Var(y)) if x == y => {}
            (Formula::Var(x), t) | (t, Formula::Var(x)) => {
                if occurs_resolved(&bindings, x, t) {
                    return Err(UnifyError::Occurs);
                }
                bindings.insert(x.clone(), t.clone());
            }
            (Formula::Equiv(al, ar), Formula::Equiv(bl, br)) => {
                work.push(((**ar).clone(), (**br).clone()));
                work.push(((**al).clone(), (**bl).clone()));
            }
        }
    }
    Ok(resolve_all(&bindings))
}

// Follows variable-to-term bindings at the root only.
fn walk(bindings: &HashMap<Var, Formula>, f: &Formula) -> Formula {
    let mut cur = f;
    while let Formula::Var(v) = cur {
        match bindings.get(v) {
            Some(next) => cur = next,
            None => break,
        }
    }
    cur.clone()
}

fn occurs_resolved(bindings: &HashMap<Var, Formula>, var: &Var, f: &Formula) -> bool {
    let mut visited: HashSet<Var> = HashSet::new();
    let mut stack = vec![f];
    while let Some(node) = stack.pop() {
        match node {
            Formula::Var(v) => {
                if v == var {
                    return true;
                }
                if let Some(t) = bindings.get(v) {
                    if visited.insert(v.clone()) {
                        stack.push(t);
                    }
                }
            }
            Formula::Equiv(l, r) => {
                stack.push(l);
                stack.push(r);
            }
        }
    }
    false
}

fn resolve_all(bindings: &HashMap<Var, Formula>) -> Substitution {
    let mut memo: HashMap<Var, Formula> = HashMap::new();
    let mut out = Substitution::new();
    let mut keys: Vec<&Var> = bindings.keys().collect();
    keys.sort();
    for v in keys {
        let t = resolve_var(bindings, &mut memo, v);
        out.bind(v.clone(), t);
    }
    out
}

fn resolve_var(
    bindings: &HashMap<Var, Formula>,
    memo: &mut HashMap<Var, Formula>,
    v: &Var,
) -> Formula {
    if let Some(done) = memo.get(v) {
        return done.clone();
    }
    let resolved = match bindings.get(v) {
        None => Formula::Var(v.clone()),
        Some(t) => resolve_term(bindings, memo, t),
    };
    memo.insert(v.clone(), resolved.clone());
    resolved
}

fn resolve_term(
    bindings: &HashMap<Var, Formula>,
    memo: &mut HashMap<Var, Formula>,
    t: &Formula,
) -> Formula {
    match t {
        Formula::Var(v) => resolve_var(bindings, memo, v),
        Formula::Equiv(l, r) => {
            let left = resolve_term(bindings, memo, l);
            let right = resolve_term(bindings, memo, r);
            Formula::equiv(left, right)
        }
    }
}

/// One-way matching: a substitution `θ` over the variables of `general` with
/// `θ(general) = specific`, if one exists.
pub fn match_instance(general: &Formula, specific: &Formula) -> Option<Substitution> {
    let mut theta: HashMap<Var, Formula> = HashMap::new();
    let mut work = vec![(general, specific)];
    while let Some((g, s)) = work.pop() {
        match (g, s) {
            (Formula::Var(v), _) => match theta.get(v) {
                Some(bound) if bound != s => return None,
                Some(_) => {}
                None => {
                    theta.insert(v.clone(), s.clone());
                }
            },
            (Formula::Equiv(gl, gr), Formula::Equiv(sl, sr)) => {
                work.push((gr, sr));
                work.push((gl, sl));
            }
            (Formula::Equiv(..), Formula::Var(_)) => return None,
        }
    }
    Some(theta.into_iter().collect())
}

/// True iff `specific` is a substitution instance of `general`.
pub fn is_instance_of(specific: &Formula, general: &Formula) -> bool {
    match_instance(general, specific).is_some()
}

/// Alphabetical variant of `f` sharing no variable with `forbidden`.
///
/// Variables of `f` that clash are renamed in first-occurrence order to the
/// same letter with the smallest numeric suffix (1, 2, …) that is free.
pub fn rename_apart(f: &Formula, forbidden: &BTreeSet<Var>) -> Formula {
    let vars = f.variables();
    if vars.iter().all(|v| !forbidden.contains(v)) {
        return f.clone();
    }
    let mut taken: HashSet<Var> = forbidden.iter().cloned().collect();
    taken.extend(vars.iter().cloned());
    let mut mapping: HashMap<Var, Var> = HashMap::new();
    let mut suffix: HashMap<char, usize> = HashMap::new();
    for v in &vars {
        if !forbidden.contains(v) {
            continue;
        }
        let letter = v.letter();
        let n = suffix.entry(letter).or_insert(0);
        let fresh = loop {
            *n += 1;
            let candidate = Var::new(&format!("{letter}{n}")).expect("valid name");
            if !taken.contains(&candidate) {
                break candidate;
            }
        };
        taken.insert(fresh.clone());
        mapping.insert(v.clone(), fresh);
    }
    f.rename_with(&mut |v: &Var| mapping.get(v).cloned().unwrap_or_else(|| v.clone()))
}
