//! Pure-equivalence formulas in Polish (prefix) notation.
//!
//! A formula is either a propositional variable (one lowercase letter followed
//! by an optional run of digits, e.g. `p`, `z1`) or `E` applied to two
//! formulas. Everything else in the crate is built on this type.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

/// Errors raised while reading Polish notation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected end of input: {missing} more subterm(s) required")]
    UnexpectedEnd { missing: usize },
    #[error("trailing input at byte {position}")]
    TrailingInput { position: usize },
    #[error("bad token {found:?} at byte {position}")]
    BadToken { position: usize, found: char },
}

/// A propositional variable name such as `p`, `q`, or `z1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(Arc<str>);

impl Var {
    /// Builds a variable, checking the lexical class.
    pub fn new(name: &str) -> Result<Var, ParseError> {
        let mut chars = name.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_lowercase() => {}
            Some((position, found)) => return Err(ParseError::BadToken { position, found }),
            None => return Err(ParseError::UnexpectedEnd { missing: 1 }),
        }
        if let Some((position, found)) = chars.find(|(_, c)| !c.is_ascii_digit()) {
            return Err(ParseError::BadToken { position, found });
        }
        Ok(Var(Arc::from(name)))
    }

    /// Name of the `index`-th variable (0-based) of the canonical alphabet:
    /// `a` … `z`, then `v27`, `v28`, ….
    pub fn canonical(index: usize) -> Var {
        if index < 26 {
            let letter = (b'a' + index as u8) as char;
            Var(Arc::from(letter.to_string()))
        } else {
            Var(Arc::from(format!("v{}", index + 1)))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The leading letter of the name.
    pub fn letter(&self) -> char {
        self.0.as_bytes()[0] as char
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// A formula over the single connective `E`.
///
/// Subformulas are reference counted, so clones are cheap and structure may
/// be shared between formulas.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Var),
    Equiv(Arc<Formula>, Arc<Formula>),
}

impl Formula {
    /// Variable leaf. Panics if `name` is not a valid variable name; use
    /// [`Var::new`] for fallible construction.
    pub fn var(name: &str) -> Formula {
        Formula::Var(Var::new(name).expect("invalid variable name"))
    }

    pub fn equiv(left: Formula, right: Formula) -> Formula {
        Formula::Equiv(Arc::new(left), Arc::new(right))
    }

    /// Parses prefix notation. The whole input must form exactly one term.
    pub fn parse(text: &str) -> Result<Formula, ParseError> {
        parse_polish(text)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    /// Splits `Eαβ` into `(α, β)`.
    pub fn as_equiv(&self) -> Option<(&Formula, &Formula)> {
        match self {
            Formula::Equiv(l, r) => Some((l, r)),
            Formula::Var(_) => None,
        }
    }

    /// Number of `E` symbols plus variable occurrences.
    pub fn symbol_length(&self) -> usize {
        2 * self.equiv_count() + 1
    }

    pub fn equiv_count(&self) -> usize {
        let mut count = 0;
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            if let Formula::Equiv(l, r) = node {
                count += 1;
                stack.push(r);
                stack.push(l);
            }
        }
        count
    }

    /// Pre-order traversal of all subformula occurrences, `self` first.
    pub fn preorder(&self) -> Preorder<'_> {
        Preorder { stack: vec![self] }
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<Var> {
        let mut seen = Vec::new();
        for node in self.preorder() {
            if let Formula::Var(v) = node {
                if !seen.contains(v) {
                    seen.push(v.clone());
                }
            }
        }
        seen
    }

    pub fn occurs(&self, var: &Var) -> bool {
        self.preorder()
            .any(|node| matches!(node, Formula::Var(v) if v == var))
    }

    /// Multiset of variable occurrences.
    pub fn occurrence_counts(&self) -> BTreeMap<Var, usize> {
        let mut counts = BTreeMap::new();
        for node in self.preorder() {
            if let Formula::Var(v) = node {
                *counts.entry(v.clone()).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Renames variables to `a, b, c, …` by first occurrence.
    pub fn canonical(&self) -> CanonicalFormula {
        let mut names = HashMap::new();
        CanonicalFormula(self.rename_with(&mut |v: &Var| {
            let next = names.len();
            names
                .entry(v.clone())
                .or_insert_with(|| Var::canonical(next))
                .clone()
        }))
    }

    /// True iff the two formulas differ only by a bijective renaming.
    pub fn is_variant_of(&self, other: &Formula) -> bool {
        self.canonical() == other.canonical()
    }

    /// Rebuilds the tree, mapping every variable occurrence through `rename`
    /// in pre-order.
    pub(crate) fn rename_with(&self, rename: &mut impl FnMut(&Var) -> Var) -> Formula {
        match self {
            Formula::Var(v) => Formula::Var(rename(v)),
            Formula::Equiv(l, r) => {
                let left = l.rename_with(rename);
                let right = r.rename_with(rename);
                Formula::equiv(left, right)
            }
        }
    }

    /// Polish rendering with variants of `pattern` folded into `A`, `B`, ….
    pub fn folded(&self, pattern: &Formula) -> String {
        print_folded(self, pattern)
    }

    fn write_polish(&self, out: &mut String) {
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                Formula::Var(v) => out.push_str(v.as_str()),
                Formula::Equiv(l, r) => {
                    out.push('E');
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::with_capacity(self.symbol_length());
        self.write_polish(&mut out);
        f.write_str(&out)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Formula {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_polish(s)
    }
}

pub struct Preorder<'a> {
    stack: Vec<&'a Formula>,
}

impl<'a> Iterator for Preorder<'a> {
    type Item = &'a Formula;

    fn next(&mut self) -> Option<&'a Formula> {
        let node = self.stack.pop()?;
        if let Formula::Equiv(l, r) = node {
            self.stack.push(r);
            self.stack.push(l);
        }
        Some(node)
    }
}

/// A formula whose variables follow the canonical alphabet in first-occurrence
/// order. Two formulas are alphabetical variants iff their canonical forms are
/// equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalFormula(Formula);

impl CanonicalFormula {
    /// Wraps a formula already known to be in canonical naming.
    pub(crate) fn from_canonical_unchecked(f: Formula) -> Self {
        debug_assert!(f.canonical().0 == f);
        CanonicalFormula(f)
    }

    pub fn formula(&self) -> &Formula {
        &self.0
    }

    pub fn into_formula(self) -> Formula {
        self.0
    }

    pub fn symbol_length(&self) -> usize {
        self.0.symbol_length()
    }
}

impl AsRef<Formula> for CanonicalFormula {
    fn as_ref(&self) -> &Formula {
        &self.0
    }
}

impl From<CanonicalFormula> for Formula {
    fn from(c: CanonicalFormula) -> Formula {
        c.0
    }
}

impl fmt::Display for CanonicalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for CanonicalFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

pub fn canonical_form(f: &Formula) -> CanonicalFormula {
    f.canonical()
}

pub fn symbol_length(f: &Formula) -> usize {
    f.symbol_length()
}

pub fn occurrence_counts(f: &Formula) -> BTreeMap<Var, usize> {
    f.occurrence_counts()
}

pub fn print_polish(f: &Formula) -> String {
    f.to_string()
}

/// Parses prefix notation: `E` takes two subterms, a variable is a lowercase
/// letter plus a maximal run of digits.
pub fn parse_polish(text: &str) -> Result<Formula, ParseError> {
    enum Frame {
        Open,
        Left(Formula),
    }

    let bytes = text.as_bytes();
    let mut stack: Vec<Frame> = Vec::new();
    let mut pos = 0;
    loop {
        let Some(&b) = bytes.get(pos) else {
            return Err(ParseError::UnexpectedEnd {
                // Frames below the top are waiting on the subterm above them;
                // an open one still lacks its right operand as well.
                missing: match stack.split_last() {
                    None => 1,
                    Some((top, below)) => {
                        below.iter().filter(|f| matches!(f, Frame::Open)).count()
                            + if matches!(top, Frame::Open) { 2 } else { 1 }
                    }
                },
            });
        };
        let mut done = match b {
            b'E' => {
                pos += 1;
                stack.push(Frame::Open);
                continue;
            }
            b'a'..=b'z' => {
                let start = pos;
                pos += 1;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                Formula::Var(Var(Arc::from(&text[start..pos])))
            }
            _ => {
                let found = text[pos..].chars().next().unwrap_or('\u{fffd}');
                return Err(ParseError::BadToken {
                    position: pos,
                    found,
                });
            }
        };
        // Close every frame that is now complete.
        loop {
            match stack.pop() {
                None => {
                    if pos < bytes.len() {
                        return Err(ParseError::TrailingInput { position: pos });
                    }
                    return Ok(done);
                }
                Some(Frame::Open) => {
                    stack.push(Frame::Left(done));
                    break;
                }
                Some(Frame::Left(left)) => {
                    done = Formula::equiv(left, done);
                }
            }
        }
    }
}

/// Prints `f` in Polish notation, replacing each maximal subformula that is an
/// alphabetical variant of `pattern` and whose variables occur nowhere else in
/// `f` by `A`, `B`, `C`, … in left-to-right order. The output is for display
/// only.
pub fn print_folded(f: &Formula, pattern: &Formula) -> String {
    let counts = f.occurrence_counts();
    let pattern_canon = pattern.canonical();
    let pattern_len = pattern.symbol_length();
    let mut out = String::new();
    let mut next_letter = 0usize;
    let mut stack = vec![f];
    while let Some(node) = stack.pop() {
        if node.symbol_length() == pattern_len
            && node.canonical() == pattern_canon
            && node
                .occurrence_counts()
                .iter()
                .all(|(v, n)| counts.get(v) == Some(n))
        {
            out.push_str(&fold_label(next_letter));
            next_letter += 1;
            continue;
        }
        match node {
            Formula::Var(v) => out.push_str(v.as_str()),
            Formula::Equiv(l, r) => {
                out.push('E');
                stack.push(r);
                stack.push(l);
            }
        }
    }
    out
}

// A..Z (skipping E, which is the connective), then A27, A28, ...
fn fold_label(index: usize) -> String {
    const LETTERS: &[u8] = b"ABCDFGHIJKLMNOPQRSTUVWXYZ";
    match LETTERS.get(index) {
        Some(&c) => (c as char).to_string(),
        None => format!("A{}", index + 2),
    }
}
