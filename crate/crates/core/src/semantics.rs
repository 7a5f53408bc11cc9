//! Two-valued semantics: `E` is the classical biconditional.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::formula::{Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("assignment has no value for {0}")]
    MissingVariable(Var),
}

/// Truth values for variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<Var, bool>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, var: Var, value: bool) {
        self.0.insert(var, value);
    }

    pub fn get(&self, var: &Var) -> Option<bool> {
        self.0.get(var).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, bool)> {
        self.0.iter().map(|(v, b)| (v, *b))
    }
}

impl FromIterator<(Var, bool)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (Var, bool)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}

pub fn evaluate(f: &Formula, a: &Assignment) -> Result<bool, SemanticsError> {
    match f {
        Formula::Var(v) => a
            .get(v)
            .ok_or_else(|| SemanticsError::MissingVariable(v.clone())),
        Formula::Equiv(l, r) => Ok(evaluate(l, a)? == evaluate(r, a)?),
    }
}

/// True iff `f` holds under all `2^k` assignments to its `k` variables.
pub fn is_tautology(f: &Formula) -> bool {
    TruthTable::new(f).first_falsifying().is_none()
}

/// The first assignment, in binary counting order over the lexicographically
/// sorted variables (first variable most significant), that makes `f` false.
pub fn counterexample(f: &Formula) -> Option<Assignment> {
    let table = TruthTable::new(f);
    let index = table.first_falsifying()?;
    let k = table.vars.len();
    Some(
        table
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), (index >> (k - 1 - i)) & 1 == 1))
            .collect(),
    )
}

/// Every variable occurs an even number of times. For pure-`E` formulas this
/// coincides with tautologyhood; it is kept separate from the truth table so
/// each can check the other.
pub fn even_occurrence_predicate(f: &Formula) -> bool {
    f.occurrence_counts().values().all(|n| n % 2 == 0)
}

// Postfix program over sorted variable indices, evaluated 64 assignments at a
// time.
struct TruthTable {
    vars: Vec<Var>,
    program: Vec<Op>,
}

#[derive(Clone, Copy)]
enum Op {
    Push(usize),
    Equiv,
}

const LOW_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

// Beyond this many 64-assignment chunks the sweep is split across threads.
const PARALLEL_CHUNKS: u64 = 1 << 10;

impl TruthTable {
    fn new(f: &Formula) -> Self {
        let mut vars = f.variables();
        vars.sort();
        let mut program = Vec::with_capacity(f.symbol_length());
        fn emit(f: &Formula, vars: &[Var], out: &mut Vec<Op>) {
            let mut stack: Vec<(&Formula, bool)> = vec![(f, false)];
            while let Some((node, expanded)) = stack.pop() {
                match node {
                    Formula::Var(v) => {
                        out.push(Op::Push(vars.binary_search(v).expect("collected")))
                    }
                    Formula::Equiv(l, r) => {
                        if expanded {
                            out.push(Op::Equiv);
                        } else {
                            stack.push((node, true));
                            stack.push((r, false));
                            stack.push((l, false));
                        }
                    }
                }
            }
        }
        emit(f, &vars, &mut program);
        TruthTable { vars, program }
    }

    // Truth vector of the formula over the 64 assignments of one chunk.
    fn chunk(&self, chunk: u64, stack: &mut Vec<u64>) -> u64 {
        let k = self.vars.len();
        let low = k.min(6);
        let word = |i: usize| -> u64 {
            // Position counted from the least significant end.
            let pos = k - 1 - i;
            if pos < 6 {
                LOW_MASKS[pos]
            } else if (chunk >> (pos - 6)) & 1 == 1 {
                u64::MAX
            } else {
                0
            }
        };
        stack.clear();
        for op in &self.program {
            match *op {
                Op::Push(i) => stack.push(word(i)),
                Op::Equiv => {
                    let b = stack.pop().expect("well formed");
                    let a = stack.pop().expect("well formed");
                    stack.push(!(a ^ b));
                }
            }
        }
        let valid = if low == 6 {
            u64::MAX
        } else {
            (1u64 << (1 << low)) - 1
        };
        stack.pop().expect("well formed") | !valid
    }

    fn first_falsifying(&self) -> Option<u64> {
        let k = self.vars.len();
        let chunks = 1u64 << k.saturating_sub(6);
        let falsified = |c: u64, stack: &mut Vec<u64>| -> Option<u64> {
            let word = self.chunk(c, stack);
            (word != u64::MAX).then(|| c * 64 + (!word).trailing_zeros() as u64)
        };
        if chunks < PARALLEL_CHUNKS {
            let mut stack = Vec::new();
            (0..chunks).find_map(|c| falsified(c, &mut stack))
        } else {
            (0..chunks)
                .into_par_iter()
                .map_init(Vec::new, |stack, c| falsified(c, stack))
                .flatten()
                .min()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> Formula {
        s.parse().unwrap()
    }

    fn assign(pairs: &[(&str, bool)]) -> Assignment {
        pairs
            .iter()
            .map(|(n, b)| (Var::new(n).unwrap(), *b))
            .collect()
    }

    #[test]
    fn evaluation() {
        assert_eq!(
            evaluate(&f("Epq"), &assign(&[("p", true), ("q", false)])),
            Ok(false)
        );
        assert_eq!(evaluate(&f("Epp"), &assign(&[("p", false)])), Ok(true));
        assert_eq!(
            evaluate(&f("Epq"), &assign(&[("p", true)])),
            Err(SemanticsError::MissingVariable(Var::new("q").unwrap()))
        );
    }

    #[test]
    fn xcb_holds_under_every_assignment() {
        let xcb = f("EpEEEpqErqr");
        for n in 0..8u8 {
            let a = assign(&[("p", n & 4 != 0), ("q", n & 2 != 0), ("r", n & 1 != 0)]);
            assert_eq!(evaluate(&xcb, &a), Ok(true));
        }
        assert!(is_tautology(&xcb));
    }

    #[test]
    fn tautologies() {
        assert!(is_tautology(&f("EEpqEqp")));
        assert!(is_tautology(&f("EEpqEEqrEpr")));
        assert!(!is_tautology(&f("Epq")));
        assert!(!is_tautology(&f("p")));
        assert!(is_tautology(&f("Epp")));
    }

    #[test]
    fn parity() {
        assert!(even_occurrence_predicate(&f("EpEEEpqErqr")));
        assert!(!even_occurrence_predicate(&f("Epq")));
        assert!(!even_occurrence_predicate(&f("EEEpqqq")));
    }

    #[test]
    fn counterexample_order() {
        // Binary counting with p most significant: p=F, q=F is first, Epq true;
        // p=F, q=T falsifies.
        let c = counterexample(&f("Epq")).unwrap();
        assert_eq!(c, assign(&[("p", false), ("q", true)]));
        assert_eq!(counterexample(&f("Epp")), None);
        // Lexicographic, not first-occurrence, order.
        let c = counterexample(&f("Eqp")).unwrap();
        assert_eq!(c, assign(&[("p", false), ("q", true)]));
    }

    #[test]
    fn wide_formulas_use_every_chunk() {
        // 14 variables; falsified only when all are true except the last.
        let names: Vec<String> = (0..14).map(|i| format!("x{i:02}")).collect();
        let mut g = Formula::var(&names[0]);
        for n in &names[1..] {
            g = Formula::equiv(g, Formula::var(n));
        }
        let balanced = Formula::equiv(g.clone(), g.clone());
        assert!(is_tautology(&balanced));
        assert!(!is_tautology(&g));
        let c = counterexample(&g).unwrap();
        assert_eq!(evaluate(&g, &c), Ok(false));
    }

    #[test]
    fn agrees_with_direct_evaluation() {
        for text in [
            "EEpqEEqrEpr",
            "EEpqEpq",
            "EEEpqrEpEqr",
            "EpEqErs",
            "EEpEqrErEpq",
        ] {
            let g = f(text);
            let mut vars = g.variables();
            vars.sort();
            let k = vars.len();
            let brute = (0..1u32 << k).all(|n| {
                let a: Assignment = vars
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v.clone(), (n >> (k - 1 - i)) & 1 == 1))
                    .collect();
                evaluate(&g, &a).unwrap()
            });
            assert_eq!(is_tautology(&g), brute, "{text}");
        }
    }
}
