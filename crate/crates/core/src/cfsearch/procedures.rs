use std::collections::BTreeSet;

use crate::cfsearch::{
    toggle_models, Budget, ChangeKind, CounterfactualQuery, CounterfactualResult, Edit, Found,
    Quantifier,
};
use crate::config::Limits;
use crate::encode::{
    default_bound, encode_with_goal, extract_plan, inject_plausibility, relax,
};
use crate::error::{Error, Result};
use crate::ltlf::{min_weight_model, negate_nnf, sat_bounded, Ltlf, SatQuery};
use crate::model::{
    count_models, reachable_states, ActionDef, Assignment, BoolFormula, Plan, PlanningProblem,
    Trace,
};

/// Decides the query and, when a counterfactual exists within the budget,
/// returns one of least cost.
pub fn csep(q: &CounterfactualQuery, limits: &Limits) -> Result<CounterfactualResult> {
    let k = match q.budget {
        Budget::Max(k) => k,
        Budget::Minimize => limits.minimize_cap,
    };
    let ctx = Ctx::new(q, limits)?;
    match (q.change, q.quantifier) {
        (ChangeKind::Init, _) => ctx.init(k),
        (ChangeKind::Goal, Quantifier::Exists) => ctx.goal_exists(k),
        (ChangeKind::Goal, Quantifier::ForAll) => ctx.goal_forall(k),
        (ChangeKind::Act, Quantifier::Exists) => ctx.act_exists(k),
        (ChangeKind::Act, Quantifier::ForAll) => ctx.act_forall(k),
    }
}

/// Number of total assignments on which `g1` and `g2` disagree.
pub fn goal_edit_distance(
    g1: &BoolFormula,
    g2: &BoolFormula,
    num_fluents: usize,
    limits: &Limits,
) -> Result<u64> {
    let diff = BoolFormula::Or(vec![
        BoolFormula::And(vec![g1.clone(), BoolFormula::not(g2.clone())]),
        BoolFormula::And(vec![g2.clone(), BoolFormula::not(g1.clone())]),
    ]);
    count_models(&diff, num_fluents, limits.max_exhaustive_fluents)
}

/// A valid loop-free plan of `p` satisfying `psi`, by bounded satisfiability.
pub fn find_plan(p: &PlanningProblem, psi: &Ltlf, limits: &Limits) -> Result<Option<(Plan, Trace)>> {
    let all: Vec<usize> = (0..p.num_fluents()).collect();
    witness(p, p.goal(), psi, &all, limits)
}

/// True iff `p` has a loop-free valid plan and every such plan satisfies
/// `psi`. Otherwise returns a violating plan when one exists.
pub fn check_universal(
    p: &PlanningProblem,
    psi: &Ltlf,
    limits: &Limits,
) -> Result<std::result::Result<Plan, Option<Plan>>> {
    let all: Vec<usize> = (0..p.num_fluents()).collect();
    if let Some((bad, _)) = witness(p, p.goal(), &negate_nnf(psi), &all, limits)? {
        return Ok(Err(Some(bad)));
    }
    match witness(p, p.goal(), &Ltlf::True, &all, limits)? {
        Some((plan, _)) => Ok(Ok(plan)),
        None => Ok(Err(None)),
    }
}

/// Loop-free plan of `p` ending in `gamma` whose trace satisfies `extra`.
/// The first query omits the distinctness constraint; a looping answer is
/// discarded and the query repeated with it.
fn witness(
    p: &PlanningProblem,
    gamma: &BoolFormula,
    extra: &Ltlf,
    distinct: &[usize],
    limits: &Limits,
) -> Result<Option<(Plan, Trace)>> {
    let e = encode_with_goal(p, gamma);
    let bound = default_bound(p, limits)?;
    let q = SatQuery::new(e.with(extra.clone()), e.num_props(), bound);
    let Some(m) = sat_bounded(&q, limits)?.into_model() else {
        return Ok(None);
    };
    let (plan, trace) = extract_plan(&e, &m.trace)?;
    if loop_free_on(&trace, distinct) {
        return Ok(Some((plan, trace)));
    }
    let q = q.distinct(distinct.to_vec());
    match sat_bounded(&q, limits)?.into_model() {
        Some(m) => Ok(Some(extract_plan(&e, &m.trace)?)),
        None => Ok(None),
    }
}

fn loop_free_on(t: &Trace, over: &[usize]) -> bool {
    let mut seen = BTreeSet::new();
    t.states()
        .iter()
        .all(|s| seen.insert(over.iter().map(|&f| s.get(f)).collect::<Vec<_>>()))
}

/// Index combinations of size `k` from `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = (k <= n).then(|| (0..k).collect());
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                cur = None;
                break;
            }
            i -= 1;
            if next[i] < n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                cur = Some(next);
                break;
            }
        }
        Some(out)
    })
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

struct Ctx<'a> {
    orig: &'a PlanningProblem,
    /// `orig` with marker fluents for action constraints.
    p: PlanningProblem,
    psi: Ltlf,
    not_psi: Ltlf,
    /// Number of original fluents; edits and distinctness range over these.
    n0: usize,
    over: Vec<usize>,
    quantifier: Quantifier,
    init_constraint: Option<BoolFormula>,
    limits: &'a Limits,
}

impl<'a> Ctx<'a> {
    fn new(q: &'a CounterfactualQuery, limits: &'a Limits) -> Result<Self> {
        let (psi, p) = inject_plausibility(&q.spec, &q.plausibility, &q.problem)?;
        let n0 = q.problem.num_fluents();
        Ok(Ctx {
            orig: &q.problem,
            p,
            not_psi: negate_nnf(&psi),
            psi,
            n0,
            over: (0..n0).collect(),
            quantifier: q.quantifier,
            init_constraint: q.plausibility.init.clone(),
            limits,
        })
    }

    fn state_names(&self, s: &Assignment) -> Vec<String> {
        s.true_indices().map(|i| self.orig.fluents()[i].clone()).collect()
    }

    fn exists(&self, p: &PlanningProblem, gamma: &BoolFormula) -> Result<Option<(Plan, Trace)>> {
        witness(p, gamma, &self.psi, &self.over, self.limits)
    }

    fn decide(&self, p: &PlanningProblem, q: Quantifier) -> Result<Option<Plan>> {
        match q {
            Quantifier::Exists => Ok(self.exists(p, p.goal())?.map(|w| w.0)),
            Quantifier::ForAll => {
                // nonemptiness first: it is the cheaper query on most inputs
                let Some((plan, _)) = witness(p, p.goal(), &Ltlf::True, &self.over, self.limits)?
                else {
                    return Ok(None);
                };
                if witness(p, p.goal(), &self.not_psi, &self.over, self.limits)?.is_some() {
                    return Ok(None);
                }
                Ok(Some(plan))
            }
        }
    }

    fn found(&self, problem: PlanningProblem, cost: usize, witness: Plan, edits: Vec<Edit>) -> Result<CounterfactualResult> {
        if let Err(e) = problem.validate_plan(&witness) {
            return Err(Error::Contract(format!("witness {witness} does not validate: {e}")));
        }
        Ok(CounterfactualResult::Found(Found {
            problem,
            cost,
            witness,
            edits,
        }))
    }

    fn init(&self, k: usize) -> Result<CounterfactualResult> {
        let quant = self.quantifier;
        let init = self.p.init().clone();
        for d in 0..=k.min(self.n0) {
            for flips in combinations(self.n0, d) {
                let mut s = init.clone();
                for &f in &flips {
                    s.flip(f);
                }
                let orig_state = s.prefix(self.n0);
                if let Some(phi) = &self.init_constraint {
                    if !phi.holds(&orig_state) {
                        continue;
                    }
                }
                let cand = self.p.with_init(s)?;
                if let Some(plan) = self.decide(&cand, quant)? {
                    let edits = flips
                        .iter()
                        .map(|&f| Edit::FlipInit {
                            fluent: self.orig.fluents()[f].clone(),
                            value: orig_state.get(f),
                        })
                        .collect();
                    return self.found(self.orig.with_init(orig_state)?, d, plan, edits);
                }
            }
        }
        Ok(CounterfactualResult::None)
    }

    fn goal_exists(&self, k: usize) -> Result<CounterfactualResult> {
        let goal = self.orig.goal().clone();
        if let Some((plan, _)) = self.exists(&self.p, &goal)? {
            return self.found(self.orig.clone(), 0, plan, vec![]);
        }
        if k == 0 {
            return Ok(CounterfactualResult::None);
        }
        let Some((plan, trace)) = self.exists(&self.p, &BoolFormula::True)? else {
            return Ok(CounterfactualResult::None);
        };
        let last = trace.last().prefix(self.n0);
        let g2 = toggle_models(&goal, std::slice::from_ref(&last));
        let edits = vec![Edit::Goal {
            state: self.state_names(&last),
            added: true,
        }];
        self.found(self.orig.with_goal(g2)?, 1, plan, edits)
    }

    fn goal_forall(&self, k: usize) -> Result<CounterfactualResult> {
        let goal = self.orig.goal().clone();
        let reach: BTreeSet<Assignment> = reachable_states(&self.p, self.limits.max_exhaustive_fluents)?
            .iter()
            .map(|s| s.prefix(self.n0))
            .collect();
        let mut bad = Vec::new();
        for nu in reach.iter().filter(|s| goal.holds(s)) {
            let m = BoolFormula::minterm(nu);
            if witness(&self.p, &m, &self.not_psi, &self.over, self.limits)?.is_some() {
                bad.push(nu.clone());
                if bad.len() > k {
                    return Ok(CounterfactualResult::None);
                }
            }
        }
        let removals: Vec<Edit> = bad
            .iter()
            .map(|s| Edit::Goal {
                state: self.state_names(s),
                added: false,
            })
            .collect();
        let g1 = toggle_models(&goal, &bad);
        if let Some((plan, _)) = witness(&self.p, &g1, &Ltlf::True, &self.over, self.limits)? {
            return self.found(self.orig.with_goal(g1)?, bad.len(), plan, removals);
        }
        if bad.len() == k {
            return Ok(CounterfactualResult::None);
        }
        for s in reach.iter().filter(|s| !goal.holds(s)) {
            let m = BoolFormula::minterm(s);
            let Some((plan, _)) = witness(&self.p, &m, &self.psi, &self.over, self.limits)? else {
                continue;
            };
            if witness(&self.p, &m, &self.not_psi, &self.over, self.limits)?.is_some() {
                continue;
            }
            let mut toggled = bad.clone();
            toggled.push(s.clone());
            let mut edits = removals;
            edits.push(Edit::Goal {
                state: self.state_names(s),
                added: true,
            });
            let g2 = toggle_models(&goal, &toggled);
            return self.found(self.orig.with_goal(g2)?, bad.len() + 1, plan, edits);
        }
        Ok(CounterfactualResult::None)
    }

    fn act_exists(&self, k: usize) -> Result<CounterfactualResult> {
        let r = relax(&self.p)?;
        let e = encode_with_goal(&r.problem, r.problem.goal());
        let bound = default_bound(&r.problem, self.limits)?;
        let q = SatQuery::new(e.with(self.psi.clone()), e.num_props(), bound)
            .weighted(r.weights.clone())
            .distinct(self.over.clone());
        let Some(m) = min_weight_model(&q, self.limits)?.into_model() else {
            return Ok(CounterfactualResult::None);
        };
        if m.weight as usize > k {
            return Ok(CounterfactualResult::None);
        }
        let (plan, trace) = extract_plan(&e, &m.trace)?;
        let mut used: Vec<Vec<Assignment>> = vec![Vec::new(); self.orig.actions().len()];
        let mut names = Vec::with_capacity(plan.len());
        for (i, name) in plan.names().iter().enumerate() {
            let j = r.problem.action_id(name).expect("extracted from this problem");
            match r.original_of(j) {
                Some(a) => {
                    let s = trace.states()[i].prefix(self.n0);
                    if used[a].contains(&s) {
                        return Err(Error::Contract(format!(
                            "relaxed action '{name}' used twice in one state"
                        )));
                    }
                    used[a].push(s);
                    names.push(self.orig.actions()[a].name.clone());
                }
                None => names.push(name.clone()),
            }
        }
        let mut edits = Vec::new();
        let mut actions: Vec<ActionDef> = self.orig.actions().to_vec();
        for (a, states) in used.iter_mut().enumerate() {
            states.sort();
            for s in states.iter() {
                edits.push(Edit::Precondition {
                    action: actions[a].name.clone(),
                    state: self.state_names(s),
                    added: true,
                });
            }
            if !states.is_empty() {
                actions[a].pre = toggle_models(&actions[a].pre, states);
            }
        }
        self.found(self.orig.with_actions(actions)?, m.weight as usize, Plan(names), edits)
    }

    fn act_forall(&self, k: usize) -> Result<CounterfactualResult> {
        // any state visited by a plan of an edited problem is reachable in
        // the relaxed problem, so edits elsewhere never matter
        let relaxed = relax(&self.p)?;
        let reach: BTreeSet<Assignment> =
            reachable_states(&relaxed.problem, self.limits.max_exhaustive_fluents)?
                .iter()
                .map(|s| s.prefix(self.n0))
                .collect();
        let toggles: Vec<(usize, &Assignment)> = (0..self.p.actions().len())
            .flat_map(|a| reach.iter().map(move |s| (a, s)))
            .collect();
        let mut refuted: Vec<Plan> = Vec::new();
        for d in 0..=k.min(toggles.len()) {
            let count = binomial(toggles.len(), d);
            if count > self.limits.max_edit_sets as u128 {
                return Err(Error::Resource {
                    what: "candidate edit sets of one size",
                    limit: self.limits.max_edit_sets,
                    actual: usize::try_from(count).unwrap_or(usize::MAX),
                });
            }
            for pick in combinations(toggles.len(), d) {
                let mut per_action: Vec<Vec<Assignment>> = vec![Vec::new(); self.p.actions().len()];
                for &i in &pick {
                    let (a, s) = toggles[i];
                    per_action[a].push(s.clone());
                }
                let mut actions = self.p.actions().to_vec();
                for (a, states) in per_action.iter().enumerate() {
                    if !states.is_empty() {
                        actions[a].pre = toggle_models(&actions[a].pre, states);
                    }
                }
                let cand = self.p.with_actions(actions)?;
                if refuted.iter().any(|plan| cand.validate_plan(plan).is_ok()) {
                    continue;
                }
                let Some((plan, _)) = witness(&cand, cand.goal(), &Ltlf::True, &self.over, self.limits)?
                else {
                    continue;
                };
                if let Some((bad, _)) = witness(&cand, cand.goal(), &self.not_psi, &self.over, self.limits)? {
                    refuted.push(bad);
                    continue;
                }
                let mut actions = self.orig.actions().to_vec();
                let mut edits = Vec::new();
                for (a, states) in per_action.iter().enumerate() {
                    for s in states {
                        edits.push(Edit::Precondition {
                            action: actions[a].name.clone(),
                            state: self.state_names(s),
                            added: !actions[a].pre.holds(s),
                        });
                    }
                    if !states.is_empty() {
                        actions[a].pre = toggle_models(&actions[a].pre, states);
                    }
                }
                return self.found(self.orig.with_actions(actions)?, d, plan, edits);
            }
        }
        Ok(CounterfactualResult::None)
    }
}
