//! Reduction of bounded LTLf satisfiability to CNF.
//!
//! A model of bound `B` is a trace of length `1..=B`. Position `i` carries an
//! `alive_i` variable (`alive_0` is fixed true, `alive_{i+1} -> alive_i`) and
//! one variable per proposition, forced false once the trace has ended. Every
//! distinct subformula gets one equivalence-defined signal per position,
//! built from the last position backwards.

use std::cell::Cell;
use std::collections::HashMap;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::ltlf::Ltlf;
use crate::model::{Assignment, Trace};
use crate::sat::{Cnf, Lit, SatOutcome, SatSolver, Sig, Totalizer};

thread_local! {
    static SOLVER_CALLS: Cell<u64> = const { Cell::new(0) };
}

/// Number of solver invocations made on this thread so far.
pub fn solver_calls() -> u64 {
    SOLVER_CALLS.with(|c| c.get())
}

fn counted_solve(solver: &mut dyn SatSolver, assumptions: &[Lit]) -> SatOutcome {
    SOLVER_CALLS.with(|c| c.set(c.get() + 1));
    solver.solve(assumptions)
}

/// A bounded satisfiability question.
#[derive(Clone, Debug)]
pub struct SatQuery {
    pub formula: Ltlf,
    pub num_props: usize,
    pub bound: usize,
    /// Per-proposition weights; the weight of a trace is the sum over its
    /// positions of the weights of the true propositions.
    pub weights: Option<Vec<u64>>,
    /// If set, no two positions of the model may agree on all of these
    /// propositions.
    pub distinct_over: Option<Vec<usize>>,
}

impl SatQuery {
    pub fn new(formula: Ltlf, num_props: usize, bound: usize) -> Self {
        SatQuery {
            formula,
            num_props,
            bound,
            weights: None,
            distinct_over: None,
        }
    }

    pub fn distinct(mut self, over: Vec<usize>) -> Self {
        self.distinct_over = Some(over);
        self
    }

    pub fn weighted(mut self, weights: Vec<u64>) -> Self {
        self.weights = Some(weights);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub trace: Trace,
    /// Weight under the query's weights, 0 if unweighted.
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatResult {
    Sat(Model),
    Unsat,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn model(&self) -> Option<&Model> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat => None,
        }
    }

    pub fn into_model(self) -> Option<Model> {
        match self {
            SatResult::Sat(m) => Some(m),
            SatResult::Unsat => None,
        }
    }
}

#[derive(Hash, PartialEq, Eq)]
enum Key {
    True,
    False,
    Atom(usize),
    Not(usize),
    And(Vec<usize>),
    Or(Vec<usize>),
    Implies(usize, usize),
    Next(usize),
    WeakNext(usize),
    Until(usize, usize),
    Eventually(usize),
    Globally(usize),
}

/// CNF for one query together with the variable layout needed to decode.
pub struct BoundedEncoding {
    pub cnf: Cnf,
    bound: usize,
    num_props: usize,
    alive: Vec<Sig>,
    props: Vec<Vec<Lit>>,
    memo: HashMap<Key, usize>,
    nodes: Vec<Vec<Sig>>,
}

impl BoundedEncoding {
    pub fn new(num_props: usize, bound: usize, clause_budget: usize) -> Result<Self> {
        if bound == 0 {
            return Err(Error::Contract("trace bound must be at least 1".into()));
        }
        let mut cnf = Cnf::new(clause_budget);
        let mut alive = vec![Sig::Const(true)];
        for i in 1..bound {
            let a = cnf.fresh();
            cnf.add_sig_clause(&[Sig::Lit(!a), alive[i - 1]])?;
            alive.push(Sig::Lit(a));
        }
        let mut props = Vec::with_capacity(bound);
        for &alive_i in &alive {
            let row: Vec<Lit> = (0..num_props).map(|_| cnf.fresh()).collect();
            for &p in &row {
                cnf.add_sig_clause(&[alive_i, Sig::Lit(!p)])?;
            }
            props.push(row);
        }
        Ok(BoundedEncoding {
            cnf,
            bound,
            num_props,
            alive,
            props,
            memo: HashMap::new(),
            nodes: Vec::new(),
        })
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn prop(&self, pos: usize, p: usize) -> Lit {
        self.props[pos][p]
    }

    pub fn alive(&self, pos: usize) -> Sig {
        self.alive[pos]
    }

    /// Signal that is true iff `formula` holds at position 0.
    pub fn formula(&mut self, formula: &Ltlf) -> Result<Sig> {
        if let Some(m) = formula.max_prop() {
            if m >= self.num_props {
                return Err(Error::structural(format!(
                    "formula mentions proposition #{m}, alphabet has {}",
                    self.num_props
                )));
            }
        }
        let id = self.node(formula)?;
        Ok(self.nodes[id][0])
    }

    /// Forbids two live positions that agree on every proposition in `over`.
    pub fn add_distinct(&mut self, over: &[usize]) -> Result<()> {
        for j in 1..self.bound {
            for i in 0..j {
                let mut clause = vec![!self.alive[j]];
                for &f in over {
                    let (x, y) = (self.props[i][f], self.props[j][f]);
                    let d = self.cnf.fresh();
                    self.cnf.add_clause(&[!d, x, y])?;
                    self.cnf.add_clause(&[!d, !x, !y])?;
                    clause.push(Sig::Lit(d));
                }
                self.cnf.add_sig_clause(&clause)?;
            }
        }
        Ok(())
    }

    /// Weighted literal multiset suitable for a [`Totalizer`].
    pub fn weighted_inputs(&self, weights: &[u64]) -> Vec<Lit> {
        let mut out = Vec::new();
        for row in &self.props {
            for (p, &w) in weights.iter().enumerate().take(self.num_props) {
                for _ in 0..w {
                    out.push(row[p]);
                }
            }
        }
        out
    }

    pub fn decode(&self, model: &[bool]) -> Trace {
        let len = (0..self.bound)
            .take_while(|&i| crate::sat::sig_value(self.alive[i], model))
            .count();
        let states = self.props[..len]
            .iter()
            .map(|row| Assignment::from_bits(row.iter().map(|l| l.eval(model)).collect()))
            .collect();
        Trace::new(states).expect("position 0 is always alive")
    }

    /// Clause excluding exactly the trace encoded by `model`.
    pub fn block(&mut self, model: &[bool]) -> Result<()> {
        let mut clause = Vec::new();
        for i in 0..self.bound {
            let a = self.alive[i];
            let live = crate::sat::sig_value(a, model);
            clause.push(if live { !a } else { a });
            if live {
                for &p in &self.props[i] {
                    clause.push(Sig::Lit(if p.eval(model) { !p } else { p }));
                }
            }
        }
        self.cnf.add_sig_clause(&clause)
    }

    fn next_of(&mut self, sigs: &[Sig], i: usize, weak: bool) -> Result<Sig> {
        if i + 1 >= self.bound {
            return Ok(Sig::Const(weak));
        }
        let alive = self.alive[i + 1];
        if weak {
            self.cnf.or(&[!alive, sigs[i + 1]])
        } else {
            self.cnf.and(&[alive, sigs[i + 1]])
        }
    }

    fn node(&mut self, f: &Ltlf) -> Result<usize> {
        let key = match f {
            Ltlf::True => Key::True,
            Ltlf::False => Key::False,
            Ltlf::Atom(p) => Key::Atom(p.0),
            Ltlf::Not(a) => Key::Not(self.node(a)?),
            Ltlf::And(xs) => Key::And(xs.iter().map(|x| self.node(x)).collect::<Result<_>>()?),
            Ltlf::Or(xs) => Key::Or(xs.iter().map(|x| self.node(x)).collect::<Result<_>>()?),
            Ltlf::Implies(a, b) => Key::Implies(self.node(a)?, self.node(b)?),
            Ltlf::Next(a) => Key::Next(self.node(a)?),
            Ltlf::WeakNext(a) => Key::WeakNext(self.node(a)?),
            Ltlf::Until(a, b) => Key::Until(self.node(a)?, self.node(b)?),
            Ltlf::Eventually(a) => Key::Eventually(self.node(a)?),
            Ltlf::Globally(a) => Key::Globally(self.node(a)?),
        };
        if let Some(&id) = self.memo.get(&key) {
            return Ok(id);
        }
        let b = self.bound;
        let mut sigs = vec![Sig::Const(false); b];
        match &key {
            Key::True => sigs = vec![Sig::Const(true); b],
            Key::False => {}
            Key::Atom(p) => {
                for (i, s) in sigs.iter_mut().enumerate() {
                    *s = Sig::Lit(self.props[i][*p]);
                }
            }
            Key::Not(a) => {
                for (i, s) in sigs.iter_mut().enumerate() {
                    *s = !self.nodes[*a][i];
                }
            }
            Key::And(xs) | Key::Or(xs) => {
                let conj = matches!(key, Key::And(_));
                for i in 0..b {
                    let ins: Vec<Sig> = xs.iter().map(|&x| self.nodes[x][i]).collect();
                    sigs[i] = if conj { self.cnf.and(&ins)? } else { self.cnf.or(&ins)? };
                }
            }
            Key::Implies(x, y) => {
                for i in 0..b {
                    let (sx, sy) = (self.nodes[*x][i], self.nodes[*y][i]);
                    sigs[i] = self.cnf.or(&[!sx, sy])?;
                }
            }
            Key::Next(a) | Key::WeakNext(a) => {
                let weak = matches!(key, Key::WeakNext(_));
                let child = self.nodes[*a].clone();
                for i in 0..b {
                    sigs[i] = self.next_of(&child, i, weak)?;
                }
            }
            Key::Until(x, y) => {
                for i in (0..b).rev() {
                    let (sx, sy) = (self.nodes[*x][i], self.nodes[*y][i]);
                    let later = self.next_of(&sigs, i, false)?;
                    let keep = self.cnf.and(&[sx, later])?;
                    sigs[i] = self.cnf.or(&[sy, keep])?;
                }
            }
            Key::Eventually(a) => {
                for i in (0..b).rev() {
                    let now = self.nodes[*a][i];
                    let later = self.next_of(&sigs, i, false)?;
                    sigs[i] = self.cnf.or(&[now, later])?;
                }
            }
            Key::Globally(a) => {
                for i in (0..b).rev() {
                    let now = self.nodes[*a][i];
                    let later = self.next_of(&sigs, i, true)?;
                    sigs[i] = self.cnf.and(&[now, later])?;
                }
            }
        }
        let id = self.nodes.len();
        self.nodes.push(sigs);
        self.memo.insert(key, id);
        Ok(id)
    }
}

fn prepare(q: &SatQuery, limits: &Limits) -> Result<BoundedEncoding> {
    let mut enc = BoundedEncoding::new(q.num_props, q.bound, limits.clause_budget)?;
    let root = enc.formula(&q.formula)?;
    enc.cnf.assert(root)?;
    if let Some(over) = &q.distinct_over {
        if let Some(&bad) = over.iter().find(|&&f| f >= q.num_props) {
            return Err(Error::structural(format!(
                "distinctness over proposition #{bad}, alphabet has {}",
                q.num_props
            )));
        }
        enc.add_distinct(over)?;
    }
    if let Some(w) = &q.weights {
        if w.len() != q.num_props {
            return Err(Error::structural(format!(
                "{} weights for {} propositions",
                w.len(),
                q.num_props
            )));
        }
    }
    Ok(enc)
}

fn weight_of(trace: &Trace, weights: Option<&[u64]>) -> u64 {
    let Some(w) = weights else { return 0 };
    trace
        .states()
        .iter()
        .map(|s| s.true_indices().map(|i| w[i]).sum::<u64>())
        .sum()
}

/// Decides whether some trace of length `1..=bound` satisfies the query.
pub fn sat_bounded(q: &SatQuery, limits: &Limits) -> Result<SatResult> {
    let enc = prepare(q, limits)?;
    let mut solver = limits.backend.make();
    solver.load(&enc.cnf);
    Ok(match counted_solve(solver.as_mut(), &[]) {
        SatOutcome::Sat(m) => {
            let trace = enc.decode(&m);
            let weight = weight_of(&trace, q.weights.as_deref());
            SatResult::Sat(Model { trace, weight })
        }
        SatOutcome::Unsat => SatResult::Unsat,
    })
}

/// A model of least weight, or `Unsat`. Requires `q.weights`.
pub fn min_weight_model(q: &SatQuery, limits: &Limits) -> Result<SatResult> {
    let Some(weights) = q.weights.clone() else {
        return Err(Error::Contract("minimal model query without weights".into()));
    };
    let mut enc = prepare(q, limits)?;
    let mut solver = limits.backend.make();
    solver.load(&enc.cnf);
    let mut best = match counted_solve(solver.as_mut(), &[]) {
        SatOutcome::Sat(m) => enc.decode(&m),
        SatOutcome::Unsat => return Ok(SatResult::Unsat),
    };
    let mut hi = weight_of(&best, Some(&weights));
    if hi > 0 {
        let inputs = enc.weighted_inputs(&weights);
        let tot = Totalizer::build(&mut enc.cnf, &inputs, hi as usize)?;
        solver.load(&enc.cnf);
        let mut lo = 0u64;
        // invariant: a model of weight `hi` is known; none lighter than `lo`
        while lo < hi {
            let mid = (lo + hi - 1) / 2;
            let assume: Vec<Lit> = tot.at_most(mid as usize).into_iter().collect();
            match counted_solve(solver.as_mut(), &assume) {
                SatOutcome::Sat(m) => {
                    best = enc.decode(&m);
                    hi = weight_of(&best, Some(&weights));
                }
                SatOutcome::Unsat => lo = mid + 1,
            }
        }
    }
    Ok(SatResult::Sat(Model {
        weight: hi,
        trace: best,
    }))
}

/// All distinct models, up to `max`. The flag is true if the list is complete.
pub fn all_models(q: &SatQuery, max: usize, limits: &Limits) -> Result<(Vec<Trace>, bool)> {
    let mut enc = prepare(q, limits)?;
    let mut solver = limits.backend.make();
    let mut out = Vec::new();
    loop {
        solver.load(&enc.cnf);
        match counted_solve(solver.as_mut(), &[]) {
            SatOutcome::Unsat => return Ok((out, true)),
            SatOutcome::Sat(m) => {
                if out.len() == max {
                    return Ok((out, false));
                }
                out.push(enc.decode(&m));
                enc.block(&m)?;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltlf::eval::evaluate;

    fn lim() -> Limits {
        Limits::default()
    }

    #[test]
    fn strong_next_needs_two_positions() {
        let f = Ltlf::next(Ltlf::True);
        assert!(!sat_bounded(&SatQuery::new(f.clone(), 1, 1), &lim()).unwrap().is_sat());
        let r = sat_bounded(&SatQuery::new(f.clone(), 1, 2), &lim()).unwrap();
        let m = r.model().unwrap();
        assert_eq!(m.trace.len(), 2);
        assert!(evaluate(&m.trace, &f).unwrap());
    }

    #[test]
    fn model_count_for_free_alphabet() {
        // one proposition, traces of length 1..=3: 2 + 4 + 8
        let (ms, complete) = all_models(&SatQuery::new(Ltlf::True, 1, 3), 100, &lim()).unwrap();
        assert!(complete);
        assert_eq!(ms.len(), 14);
    }

    #[test]
    fn distinctness_limits_length() {
        let q = SatQuery::new(Ltlf::True, 1, 5).distinct(vec![0]);
        let (ms, _) = all_models(&q, 100, &lim()).unwrap();
        assert!(ms.iter().all(|t| t.is_loop_free()));
        assert_eq!(ms.len(), 2 + 2);
    }

    #[test]
    fn minimum_weight() {
        // p must hold at least twice: F(p & X F p)
        let p = Ltlf::atom(0);
        let f = Ltlf::eventually(Ltlf::and(vec![p.clone(), Ltlf::next(Ltlf::eventually(p))]));
        let q = SatQuery::new(f, 2, 4).weighted(vec![3, 1]);
        let r = min_weight_model(&q, &lim()).unwrap();
        assert_eq!(r.model().unwrap().weight, 6);
    }

    #[test]
    fn alphabet_coverage() {
        assert!(sat_bounded(&SatQuery::new(Ltlf::atom(3), 2, 2), &lim()).is_err());
    }
}
