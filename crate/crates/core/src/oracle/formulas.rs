//! Exhaustive formula enumeration over two atoms, with bit-parallel truth
//! tables on every trace of length at most three.

use std::collections::{HashMap, HashSet};

use crate::ltlf::Ltlf;

/// Number of atoms and maximum trace length covered by [`TruthTable`].
pub const ATOMS: usize = 2;
pub const MAX_LEN: usize = 3;

const OFFSET: [usize; 4] = [0, 0, 1, 3];
const TRACES: [u32; 4] = [0, 4, 16, 64];

/// Values of a formula at every position of every trace of length 1..=3
/// over two atoms. Trace `t` of length `len` has, at position `k`, the state
/// given by base-4 digit `k` of `t` (bit 0 is the first atom).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable([u64; 6]);

fn mask(len: usize) -> u64 {
    if TRACES[len] == 64 {
        u64::MAX
    } else {
        (1u64 << TRACES[len]) - 1
    }
}

/// Number of traces of the given length.
pub fn trace_count(len: usize) -> u32 {
    TRACES[len]
}

/// Value of atom `atom` at position `k` of trace `t`.
pub fn atom_value(t: u32, k: usize, atom: usize) -> bool {
    (t >> (2 * k + atom)) & 1 == 1
}

impl TruthTable {
    fn word(&self, len: usize, k: usize) -> u64 {
        self.0[OFFSET[len] + k]
    }

    fn build(f: impl Fn(usize, usize) -> u64) -> Self {
        let mut w = [0u64; 6];
        for len in 1..=MAX_LEN {
            for k in 0..len {
                w[OFFSET[len] + k] = f(len, k) & mask(len);
            }
        }
        TruthTable(w)
    }

    /// Table from explicit values, `value(len, t, k)`.
    pub fn from_fn(value: impl Fn(usize, u32, usize) -> bool) -> Self {
        TruthTable::build(|len, k| {
            (0..TRACES[len])
                .filter(|&t| value(len, t, k))
                .fold(0, |acc, t| acc | 1 << t)
        })
    }

    pub fn holds(&self, len: usize, t: u32, k: usize) -> bool {
        (self.word(len, k) >> t) & 1 == 1
    }

    fn constant(v: bool) -> Self {
        TruthTable::build(|_, _| if v { u64::MAX } else { 0 })
    }

    fn atom(i: usize) -> Self {
        TruthTable::from_fn(|_, t, k| atom_value(t, k, i))
    }

    fn map(&self, f: impl Fn(u64) -> u64) -> Self {
        TruthTable::build(|len, k| f(self.word(len, k)))
    }

    fn zip(&self, o: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        TruthTable::build(|len, k| f(self.word(len, k), o.word(len, k)))
    }

    /// Fills positions last to first; `f` receives the value already
    /// computed for `k + 1`, or `end` past the last position.
    fn backward(end: u64, f: impl Fn(usize, usize, u64) -> u64) -> Self {
        let mut w = [0u64; 6];
        for len in 1..=MAX_LEN {
            let mut next = end;
            for k in (0..len).rev() {
                next = f(len, k, next) & mask(len);
                w[OFFSET[len] + k] = next;
            }
        }
        TruthTable(w)
    }

    fn next(&self, weak: bool) -> Self {
        let end = if weak { u64::MAX } else { 0 };
        TruthTable::build(|len, k| if k + 1 < len { self.word(len, k + 1) } else { end })
    }

    fn until(&self, b: &Self) -> Self {
        TruthTable::backward(0, |len, k, nx| b.word(len, k) | (self.word(len, k) & nx))
    }

    fn eventually(&self) -> Self {
        TruthTable::backward(0, |len, k, nx| self.word(len, k) | nx)
    }

    fn globally(&self) -> Self {
        TruthTable::backward(u64::MAX, |len, k, nx| self.word(len, k) & nx)
    }

    /// Values at position 0, which is all satisfiability depends on.
    pub fn initial(&self) -> [u64; 3] {
        [self.word(1, 0), self.word(2, 0), self.word(3, 0)]
    }
}

fn leaves() -> Vec<(Ltlf, TruthTable)> {
    vec![
        (Ltlf::True, TruthTable::constant(true)),
        (Ltlf::False, TruthTable::constant(false)),
        (Ltlf::atom(0), TruthTable::atom(0)),
        (Ltlf::atom(1), TruthTable::atom(1)),
    ]
}

/// Every formula with one operator on top of members of `base`: unary
/// operators first, then binary ones over ordered pairs.
fn extend(base: &[(Ltlf, TruthTable)], mut emit: impl FnMut(Ltlf, TruthTable)) {
    for (f, t) in base {
        emit(Ltlf::not(f.clone()), t.map(|w| !w));
        emit(Ltlf::next(f.clone()), t.next(false));
        emit(Ltlf::weak_next(f.clone()), t.next(true));
        emit(Ltlf::eventually(f.clone()), t.eventually());
        emit(Ltlf::globally(f.clone()), t.globally());
    }
    for (fa, ta) in base {
        for (fb, tb) in base {
            emit(Ltlf::And(vec![fa.clone(), fb.clone()]), ta.zip(tb, |x, y| x & y));
            emit(Ltlf::Or(vec![fa.clone(), fb.clone()]), ta.zip(tb, |x, y| x | y));
            emit(Ltlf::implies(fa.clone(), fb.clone()), ta.zip(tb, |x, y| !x | y));
            emit(Ltlf::until(fa.clone(), fb.clone()), ta.until(tb));
        }
    }
}

/// Every formula of depth at most two over two atoms (31,420 of them), each
/// with its truth table.
pub fn depth_two_formulas() -> Vec<(Ltlf, TruthTable)> {
    let mut one = leaves();
    extend(&leaves(), |f, t| one.push((f, t)));
    let mut two = leaves();
    extend(&one, |f, t| two.push((f, t)));
    two
}

/// Formulas of depth at most three covering every satisfiability class on
/// traces of length at most three: one operator applied to one
/// representative of each depth-two truth table, keeping the first formula
/// found for each distinct table at position 0.
pub fn depth_three_representatives() -> Vec<Ltlf> {
    let mut seen: HashMap<TruthTable, usize> = HashMap::new();
    let mut base = Vec::new();
    for (f, t) in depth_two_formulas() {
        seen.entry(t).or_insert_with(|| {
            base.push((f, t));
            base.len() - 1
        });
    }
    let mut classes: HashSet<[u64; 3]> = HashSet::new();
    let mut out = Vec::new();
    for (f, t) in &base {
        if classes.insert(t.initial()) {
            out.push(f.clone());
        }
    }
    extend(&base, |f, t| {
        if classes.insert(t.initial()) {
            out.push(f);
        }
    });
    out
}
