//! Brute-force reference implementations.
//!
//! Nothing here goes through the LTLf engine, the encodings or the SAT layer:
//! states are bitmasks, formulas are evaluated by their definitions, and
//! counterfactual problems are found by breadth-first search over edit sets.

mod formulas;

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::cfsearch::{ChangeKind, Quantifier};
use crate::encode::Plausibility;
use crate::error::{Error, Result};
use crate::ltlf::Ltlf;
use crate::model::{Assignment, BoolFormula, Plan, PlanningProblem, Trace};

pub use formulas::{
    atom_value, depth_three_representatives, depth_two_formulas, trace_count, TruthTable, ATOMS,
    MAX_LEN,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OracleGuard {
    pub max_fluents: usize,
    pub max_states: usize,
    pub max_trace_len: usize,
    /// Work budget: search nodes plus plan-enumeration steps.
    pub max_bfs_nodes: usize,
}

impl Default for OracleGuard {
    fn default() -> Self {
        OracleGuard {
            max_fluents: 6,
            max_states: 256,
            max_trace_len: 8,
            max_bfs_nodes: 1_000_000,
        }
    }
}

/// Answer of [`brute_csep`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Found {
        problem: PlanningProblem,
        cost: usize,
        witness: Plan,
    },
    /// Every problem within the cost limit was examined; none qualifies.
    None,
    /// The work budget ran out first.
    Unknown,
}

impl OracleOutcome {
    pub fn cost(&self) -> Option<usize> {
        match self {
            OracleOutcome::Found { cost, .. } => Some(*cost),
            _ => None,
        }
    }

    pub fn is_definitive(&self) -> bool {
        !matches!(self, OracleOutcome::Unknown)
    }
}

struct OutOfWork;

struct Work {
    left: usize,
}

impl Work {
    fn tick(&mut self) -> Result<(), OutOfWork> {
        if self.left == 0 {
            return Err(OutOfWork);
        }
        self.left -= 1;
        Ok(())
    }
}

fn exhausted(guard: &OracleGuard) -> Error {
    Error::Resource {
        what: "oracle work budget",
        limit: guard.max_bfs_nodes,
        actual: guard.max_bfs_nodes + 1,
    }
}

// States are ranks: fluent `i` of an `n`-fluent state is bit `n - 1 - i`, so
// numeric order is lexicographic order with fluent 0 most significant.

fn bit(n: usize, s: u64, i: usize) -> bool {
    s >> (n - 1 - i) & 1 == 1
}

fn rank(a: &Assignment) -> u64 {
    a.bits().iter().fold(0, |acc, &b| acc << 1 | b as u64)
}

fn unrank(n: usize, s: u64) -> Assignment {
    Assignment::from_bits((0..n).map(|i| bit(n, s, i)).collect())
}

fn prop(f: &BoolFormula, n: usize, s: u64) -> bool {
    match f {
        BoolFormula::True => true,
        BoolFormula::False => false,
        BoolFormula::Atom(x) => bit(n, s, x.0),
        BoolFormula::Not(a) => !prop(a, n, s),
        BoolFormula::And(xs) => xs.iter().all(|x| prop(x, n, s)),
        BoolFormula::Or(xs) => xs.iter().any(|x| prop(x, n, s)),
        BoolFormula::Implies(a, b) => !prop(a, n, s) || prop(b, n, s),
    }
}

/// Truth of `psi` at position `i` of `t`, by the textbook clauses.
fn temporal(psi: &Ltlf, n: usize, t: &[u64], i: usize) -> bool {
    let last = t.len() - 1;
    match psi {
        Ltlf::True => true,
        Ltlf::False => false,
        Ltlf::Atom(p) => bit(n, t[i], p.0),
        Ltlf::Not(a) => !temporal(a, n, t, i),
        Ltlf::And(xs) => xs.iter().all(|x| temporal(x, n, t, i)),
        Ltlf::Or(xs) => xs.iter().any(|x| temporal(x, n, t, i)),
        Ltlf::Implies(a, b) => !temporal(a, n, t, i) || temporal(b, n, t, i),
        Ltlf::Next(a) => i < last && temporal(a, n, t, i + 1),
        Ltlf::WeakNext(a) => i == last || temporal(a, n, t, i + 1),
        Ltlf::Until(a, b) => {
            (i..=last).any(|j| temporal(b, n, t, j) && (i..j).all(|k| temporal(a, n, t, k)))
        }
        Ltlf::Eventually(a) => (i..=last).any(|j| temporal(a, n, t, j)),
        Ltlf::Globally(a) => (i..=last).all(|j| temporal(a, n, t, j)),
    }
}

/// Membership test `base(s) xor s in toggled`.
#[derive(Clone, Debug)]
struct Cond {
    base: BoolFormula,
    toggled: BTreeSet<u64>,
}

impl Cond {
    fn plain(base: &BoolFormula) -> Self {
        Cond {
            base: base.clone(),
            toggled: BTreeSet::new(),
        }
    }

    fn holds(&self, n: usize, s: u64) -> bool {
        prop(&self.base, n, s) != self.toggled.contains(&s)
    }

    fn to_formula(&self, n: usize) -> BoolFormula {
        let mut removed = Vec::new();
        let mut added = Vec::new();
        for &s in &self.toggled {
            let m = BoolFormula::minterm(&unrank(n, s));
            if prop(&self.base, n, s) {
                removed.push(BoolFormula::not(m));
            } else {
                added.push(m);
            }
        }
        let kept = if removed.is_empty() {
            self.base.clone()
        } else {
            let mut c = vec![self.base.clone()];
            c.extend(removed);
            BoolFormula::And(c)
        };
        if added.is_empty() {
            kept
        } else {
            let mut d = vec![kept];
            d.extend(added);
            BoolFormula::Or(d)
        }
    }
}

#[derive(Clone)]
struct Prob {
    n: usize,
    init: u64,
    goal: Cond,
    pre: Vec<Cond>,
    set: Vec<u64>,
    clear: Vec<u64>,
    act_cond: Vec<Option<BoolFormula>>,
}

impl Prob {
    fn new(p: &PlanningProblem, c: &Plausibility) -> Result<Self> {
        let n = p.num_fluents();
        let mut set = Vec::new();
        let mut clear = Vec::new();
        for a in p.actions() {
            let (mut s, mut k) = (0u64, 0u64);
            for e in &a.eff {
                let m = 1u64 << (n - 1 - e.fluent.0);
                if e.value {
                    s |= m;
                } else {
                    k |= m;
                }
            }
            set.push(s);
            clear.push(k);
        }
        for name in c.act.keys() {
            if p.action(name).is_none() {
                return Err(Error::structural(format!(
                    "constraint on undeclared action '{name}'"
                )));
            }
        }
        Ok(Prob {
            n,
            init: rank(p.init()),
            goal: Cond::plain(p.goal()),
            pre: p.actions().iter().map(|a| Cond::plain(&a.pre)).collect(),
            set,
            clear,
            act_cond: p.actions().iter().map(|a| c.act.get(&a.name).cloned()).collect(),
        })
    }

    fn succ(&self, a: usize, s: u64) -> Option<u64> {
        self.pre[a]
            .holds(self.n, s)
            .then(|| (s | self.set[a]) & !self.clear[a])
    }

    /// States from which some goal state is reachable, restricted to the
    /// states reachable from the initial state.
    fn useful(&self, work: &mut Work) -> Result<HashSet<u64>, OutOfWork> {
        let mut seen = HashSet::from([self.init]);
        let mut order = vec![self.init];
        let mut back: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut k = 0;
        while k < order.len() {
            let s = order[k];
            k += 1;
            for a in 0..self.pre.len() {
                work.tick()?;
                if let Some(t) = self.succ(a, s) {
                    back.entry(t).or_default().push(s);
                    if seen.insert(t) {
                        order.push(t);
                    }
                }
            }
        }
        let mut good: HashSet<u64> = order
            .iter()
            .copied()
            .filter(|&s| self.goal.holds(self.n, s))
            .collect();
        let mut stack: Vec<u64> = good.iter().copied().collect();
        while let Some(t) = stack.pop() {
            for &s in back.get(&t).map(Vec::as_slice).unwrap_or(&[]) {
                if good.insert(s) {
                    stack.push(s);
                }
            }
        }
        Ok(good)
    }

    /// Visits every loop-free path from the initial state ending in a goal
    /// state, depth first with actions in declaration order. The visitor
    /// returns false to stop.
    fn plans(
        &self,
        work: &mut Work,
        visit: &mut dyn FnMut(&[u64], &[usize]) -> bool,
    ) -> Result<(), OutOfWork> {
        let useful = self.useful(work)?;
        if !useful.contains(&self.init) {
            return Ok(());
        }
        let mut states = vec![self.init];
        let mut on_path = HashSet::from([self.init]);
        let mut acts = Vec::new();
        self.dfs(&useful, &mut states, &mut on_path, &mut acts, work, visit)?;
        Ok(())
    }

    fn dfs(
        &self,
        useful: &HashSet<u64>,
        states: &mut Vec<u64>,
        on_path: &mut HashSet<u64>,
        acts: &mut Vec<usize>,
        work: &mut Work,
        visit: &mut dyn FnMut(&[u64], &[usize]) -> bool,
    ) -> Result<bool, OutOfWork> {
        work.tick()?;
        let s = *states.last().unwrap();
        if self.goal.holds(self.n, s) && !visit(states, acts) {
            return Ok(false);
        }
        for a in 0..self.pre.len() {
            let Some(t) = self.succ(a, s) else { continue };
            if on_path.contains(&t) || !useful.contains(&t) {
                continue;
            }
            on_path.insert(t);
            states.push(t);
            acts.push(a);
            let go_on = self.dfs(useful, states, on_path, acts, work, visit)?;
            acts.pop();
            states.pop();
            on_path.remove(&t);
            if !go_on {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Specification plus plausibility, checked on one plan.
    fn accepts(&self, psi: &Ltlf, c: &Plausibility, states: &[u64], acts: &[usize]) -> bool {
        let n = self.n;
        temporal(psi, n, states, 0)
            && c.init.as_ref().map_or(true, |f| prop(f, n, states[0]))
            && c.goal.as_ref().map_or(true, |f| prop(f, n, *states.last().unwrap()))
            && acts.iter().enumerate().all(|(i, &a)| {
                self.act_cond[a]
                    .as_ref()
                    .map_or(true, |f| prop(f, n, states[i]))
            })
    }

    /// The plan deciding the quantified condition, if it holds.
    fn decide(
        &self,
        psi: &Ltlf,
        c: &Plausibility,
        q: Quantifier,
        work: &mut Work,
    ) -> Result<Option<Vec<usize>>, OutOfWork> {
        let mut answer = None;
        let mut violated = false;
        self.plans(work, &mut |states, acts| {
            let ok = self.accepts(psi, c, states, acts);
            match q {
                Quantifier::Exists => {
                    if ok {
                        answer = Some(acts.to_vec());
                        return false;
                    }
                    true
                }
                Quantifier::ForAll => {
                    if !ok {
                        violated = true;
                        return false;
                    }
                    if answer.is_none() {
                        answer = Some(acts.to_vec());
                    }
                    true
                }
            }
        })?;
        Ok(if violated { None } else { answer })
    }
}

fn check_fluents(p: &PlanningProblem, guard: &OracleGuard) -> Result<()> {
    Error::guard("oracle fluents", guard.max_fluents, p.num_fluents())?;
    Error::guard("oracle fluents", 63, p.num_fluents())
}

fn plan_of(p: &PlanningProblem, acts: &[usize]) -> Plan {
    Plan(acts.iter().map(|&a| p.actions()[a].name.clone()).collect())
}

/// First loop-free valid plan whose trace satisfies `psi`.
pub fn brute_exists(p: &PlanningProblem, psi: &Ltlf, guard: &OracleGuard) -> Result<Option<Plan>> {
    check_fluents(p, guard)?;
    let prob = Prob::new(p, &Plausibility::default())?;
    let mut work = Work { left: guard.max_bfs_nodes };
    match prob.decide(psi, &Plausibility::default(), Quantifier::Exists, &mut work) {
        Ok(r) => Ok(r.map(|a| plan_of(p, &a))),
        Err(OutOfWork) => Err(exhausted(guard)),
    }
}

/// True iff `p` has a loop-free valid plan and all of them satisfy `psi`.
pub fn brute_forall(p: &PlanningProblem, psi: &Ltlf, guard: &OracleGuard) -> Result<bool> {
    check_fluents(p, guard)?;
    let prob = Prob::new(p, &Plausibility::default())?;
    let mut work = Work { left: guard.max_bfs_nodes };
    match prob.decide(psi, &Plausibility::default(), Quantifier::ForAll, &mut work) {
        Ok(r) => Ok(r.is_some()),
        Err(OutOfWork) => Err(exhausted(guard)),
    }
}

/// A loop-free valid plan violating `psi`, if any.
pub fn brute_counterexample(
    p: &PlanningProblem,
    psi: &Ltlf,
    guard: &OracleGuard,
) -> Result<Option<Plan>> {
    brute_exists(p, &Ltlf::not(psi.clone()), guard)
}

/// Reachable states by breadth-first search.
pub fn brute_reachable(p: &PlanningProblem, guard: &OracleGuard) -> Result<BTreeSet<Assignment>> {
    check_fluents(p, guard)?;
    let prob = Prob::new(p, &Plausibility::default())?;
    let mut seen = HashSet::from([prob.init]);
    let mut queue = VecDeque::from([prob.init]);
    while let Some(s) = queue.pop_front() {
        for a in 0..prob.pre.len() {
            if let Some(t) = prob.succ(a, s) {
                if seen.insert(t) {
                    Error::guard("oracle states", guard.max_states, seen.len())?;
                    queue.push_back(t);
                }
            }
        }
    }
    Ok(seen.into_iter().map(|s| unrank(prob.n, s)).collect())
}

fn traces(n: usize, bound: usize, guard: &OracleGuard) -> Result<impl Iterator<Item = Vec<u64>>> {
    Error::guard("oracle propositions", guard.max_fluents, n)?;
    Error::guard("oracle trace length", guard.max_trace_len, bound)?;
    let per = 1u64 << n;
    let total = (1..=bound).try_fold(0u64, |acc, len| {
        per.checked_pow(len as u32).and_then(|c| acc.checked_add(c))
    });
    match total {
        Some(t) if t <= guard.max_bfs_nodes as u64 => {}
        _ => {
            return Err(Error::Resource {
                what: "oracle traces",
                limit: guard.max_bfs_nodes,
                actual: usize::MAX,
            })
        }
    }
    Ok((1..=bound).flat_map(move |len| {
        (0..per.pow(len as u32)).map(move |mut code| {
            let mut t = vec![0; len];
            for slot in t.iter_mut().rev() {
                *slot = code % per;
                code /= per;
            }
            t
        })
    }))
}

fn to_trace(n: usize, t: &[u64]) -> Trace {
    Trace::new(t.iter().map(|&s| unrank(n, s)).collect()).unwrap()
}

/// First trace (shortest, then lexicographic) of length `1..=bound`
/// satisfying `psi`.
pub fn brute_sat(psi: &Ltlf, num_props: usize, bound: usize, guard: &OracleGuard) -> Result<Option<Trace>> {
    Ok(traces(num_props, bound, guard)?
        .find(|t| temporal(psi, num_props, t, 0))
        .map(|t| to_trace(num_props, &t)))
}

/// A satisfying trace of least total weight, with that weight.
pub fn brute_min_weight(
    psi: &Ltlf,
    num_props: usize,
    weights: &[u64],
    bound: usize,
    guard: &OracleGuard,
) -> Result<Option<(Trace, u64)>> {
    let n = num_props;
    let weight = |t: &[u64]| -> u64 {
        t.iter()
            .map(|&s| (0..n).filter(|&i| bit(n, s, i)).map(|i| weights[i]).sum::<u64>())
            .sum()
    };
    let mut best: Option<(Vec<u64>, u64)> = None;
    for t in traces(n, bound, guard)? {
        if temporal(psi, n, &t, 0) {
            let w = weight(&t);
            if best.as_ref().map_or(true, |(_, b)| w < *b) {
                best = Some((t, w));
            }
        }
    }
    Ok(best.map(|(t, w)| (to_trace(n, &t), w)))
}

/// Cheapest problem reachable by single edits of the given kind that
/// satisfies the quantified condition, found by breadth-first search up to
/// `max_cost` edits.
pub fn brute_csep(
    p: &PlanningProblem,
    psi: &Ltlf,
    change: ChangeKind,
    quantifier: Quantifier,
    plausibility: &Plausibility,
    max_cost: usize,
    guard: &OracleGuard,
) -> Result<OracleOutcome> {
    check_fluents(p, guard)?;
    let base = Prob::new(p, plausibility)?;
    let n = base.n;
    let na = base.pre.len();
    let num_moves = match change {
        ChangeKind::Init => n,
        ChangeKind::Goal => 1usize << n,
        ChangeKind::Act => na << n,
    };
    if change != ChangeKind::Init {
        Error::guard("oracle states", guard.max_states, 1 << n)?;
    }
    let mut work = Work { left: guard.max_bfs_nodes };

    // Goal edits leave the plan set from the initial state unchanged, so
    // the verdict per final state is computed once.
    let goal_table = if change == ChangeKind::Goal {
        let mut free = base.clone();
        free.goal = Cond::plain(&BoolFormula::True);
        let mut table: HashMap<u64, (Vec<usize>, bool, Option<Vec<usize>>)> = HashMap::new();
        let r = free.plans(&mut work, &mut |states, acts| {
            let last = *states.last().unwrap();
            let ok = free.accepts(psi, plausibility, states, acts);
            let e = table.entry(last).or_insert_with(|| (acts.to_vec(), true, None));
            e.1 &= ok;
            if ok && e.2.is_none() {
                e.2 = Some(acts.to_vec());
            }
            true
        });
        if r.is_err() {
            return Ok(OracleOutcome::Unknown);
        }
        Some(table)
    } else {
        None
    };

    let build = |moves: &[usize]| -> Prob {
        let mut q = base.clone();
        for &m in moves {
            match change {
                ChangeKind::Init => q.init ^= 1 << (n - 1 - m),
                ChangeKind::Goal => {
                    q.goal.toggled.insert(m as u64);
                }
                ChangeKind::Act => {
                    q.pre[m >> n].toggled.insert((m & ((1 << n) - 1)) as u64);
                }
            }
        }
        q
    };

    let mut seen: HashSet<Vec<usize>> = HashSet::from([vec![]]);
    let mut queue = VecDeque::from([vec![]]);
    while let Some(moves) = queue.pop_front() {
        if work.tick().is_err() {
            return Ok(OracleOutcome::Unknown);
        }
        let q = build(&moves);
        let verdict = match &goal_table {
            Some(table) => Ok(goal_verdict(&q, table, quantifier)),
            None => q.decide(psi, plausibility, quantifier, &mut work),
        };
        match verdict {
            Err(OutOfWork) => return Ok(OracleOutcome::Unknown),
            Ok(Some(acts)) => {
                let problem = match change {
                    ChangeKind::Init => p.with_init(unrank(n, q.init))?,
                    ChangeKind::Goal => p.with_goal(q.goal.to_formula(n))?,
                    ChangeKind::Act => {
                        let mut actions = p.actions().to_vec();
                        for (a, cond) in actions.iter_mut().zip(&q.pre) {
                            a.pre = cond.to_formula(n);
                        }
                        p.with_actions(actions)?
                    }
                };
                return Ok(OracleOutcome::Found {
                    witness: plan_of(p, &acts),
                    problem,
                    cost: moves.len(),
                });
            }
            Ok(None) => {}
        }
        if moves.len() == max_cost {
            continue;
        }
        for m in 0..num_moves {
            if moves.contains(&m) {
                continue;
            }
            let mut next = moves.clone();
            next.push(m);
            next.sort_unstable();
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    Ok(OracleOutcome::None)
}

fn goal_verdict(
    q: &Prob,
    table: &HashMap<u64, (Vec<usize>, bool, Option<Vec<usize>>)>,
    quantifier: Quantifier,
) -> Option<Vec<usize>> {
    let mut finals: Vec<&u64> = table.keys().filter(|&&s| q.goal.holds(q.n, s)).collect();
    finals.sort();
    match quantifier {
        Quantifier::Exists => finals.iter().find_map(|s| table[s].2.clone()),
        Quantifier::ForAll => {
            if finals.is_empty() || !finals.iter().all(|s| table[s].1) {
                None
            } else {
                Some(table[finals[0]].0.clone())
            }
        }
    }
}
