use crate::error::{Error, Result};
use crate::ltlf::Ltlf;
use crate::model::{Assignment, Trace};

/// Truth of `formula` at position 0 of `trace`.
///
/// For a trace `s_0 .. s_n` and position `i`:
/// `X f` holds iff `i < n` and `f` holds at `i+1`; `WX f` iff `i = n` or `f`
/// holds at `i+1`; `a U b` iff `b` holds at some `j >= i` with `a` holding on
/// `[i, j)`. `F f = true U f` and `G f = !F !f`.
pub fn evaluate(trace: &Trace, formula: &Ltlf) -> Result<bool> {
    let width = trace.states()[0].len();
    if let Some(m) = formula.max_prop() {
        if m >= width {
            return Err(Error::structural(format!(
                "formula mentions proposition #{m}, trace states cover {width}"
            )));
        }
    }
    Ok(holds(trace.states(), formula))
}

/// [`evaluate`] on a raw non-empty state slice; atoms must be covered.
pub fn holds(states: &[Assignment], formula: &Ltlf) -> bool {
    positions(states, formula)[0]
}

/// Truth of `formula` at every position of `states`.
pub fn positions(states: &[Assignment], formula: &Ltlf) -> Vec<bool> {
    let n = states.len();
    match formula {
        Ltlf::True => vec![true; n],
        Ltlf::False => vec![false; n],
        Ltlf::Atom(p) => states.iter().map(|s| s.get(p.0)).collect(),
        Ltlf::Not(a) => positions(states, a).into_iter().map(|v| !v).collect(),
        Ltlf::And(xs) => {
            let mut acc = vec![true; n];
            for x in xs {
                for (a, v) in acc.iter_mut().zip(positions(states, x)) {
                    *a &= v;
                }
            }
            acc
        }
        Ltlf::Or(xs) => {
            let mut acc = vec![false; n];
            for x in xs {
                for (a, v) in acc.iter_mut().zip(positions(states, x)) {
                    *a |= v;
                }
            }
            acc
        }
        Ltlf::Implies(a, b) => positions(states, a)
            .into_iter()
            .zip(positions(states, b))
            .map(|(x, y)| !x || y)
            .collect(),
        Ltlf::Next(a) => {
            let c = positions(states, a);
            (0..n).map(|i| i + 1 < n && c[i + 1]).collect()
        }
        Ltlf::WeakNext(a) => {
            let c = positions(states, a);
            (0..n).map(|i| i + 1 >= n || c[i + 1]).collect()
        }
        Ltlf::Until(a, b) => {
            let (ca, cb) = (positions(states, a), positions(states, b));
            let mut out = vec![false; n];
            out[n - 1] = cb[n - 1];
            for i in (0..n - 1).rev() {
                out[i] = cb[i] || (ca[i] && out[i + 1]);
            }
            out
        }
        Ltlf::Eventually(a) => {
            let c = positions(states, a);
            let mut out = c.clone();
            for i in (0..n - 1).rev() {
                out[i] = c[i] || out[i + 1];
            }
            out
        }
        Ltlf::Globally(a) => {
            let c = positions(states, a);
            let mut out = c.clone();
            for i in (0..n - 1).rev() {
                out[i] = c[i] && out[i + 1];
            }
            out
        }
    }
}
