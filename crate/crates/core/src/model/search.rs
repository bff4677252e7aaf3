use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::model::{all_assignments, Assignment, BoolFormula, Plan, PlanningProblem, Trace};

/// Result of [`enumerate_loop_free_plans`].
#[derive(Clone, Debug, Default)]
pub struct PlanEnumeration {
    pub plans: Vec<(Plan, Trace)>,
    /// Set when `max_count` cut the enumeration short.
    pub truncated: bool,
}

/// Valid plans whose traces never repeat a state, depth-first with actions in
/// declaration order. A plan is emitted before its extensions.
pub fn enumerate_loop_free_plans(
    p: &PlanningProblem,
    max_count: Option<usize>,
    max_fluents: usize,
) -> Result<PlanEnumeration> {
    Error::guard("fluents for plan enumeration", max_fluents, p.num_fluents())?;
    let mut out = PlanEnumeration::default();
    let mut states = vec![p.init().clone()];
    let mut on_path: HashSet<Assignment> = HashSet::from([p.init().clone()]);
    let mut actions = Vec::new();
    dfs(p, &mut states, &mut on_path, &mut actions, max_count, &mut out);
    Ok(out)
}

fn dfs(
    p: &PlanningProblem,
    states: &mut Vec<Assignment>,
    on_path: &mut HashSet<Assignment>,
    actions: &mut Vec<String>,
    max_count: Option<usize>,
    out: &mut PlanEnumeration,
) -> bool {
    let s = states.last().unwrap().clone();
    if p.goal().holds(&s) {
        if max_count.map_or(false, |m| out.plans.len() >= m) {
            out.truncated = true;
            return false;
        }
        out.plans
            .push((Plan(actions.clone()), Trace::new(states.clone()).unwrap()));
    }
    for a in p.actions() {
        if !a.applicable(&s) {
            continue;
        }
        let next = a.apply(&s);
        if on_path.contains(&next) {
            continue;
        }
        on_path.insert(next.clone());
        states.push(next);
        actions.push(a.name.clone());
        let keep_going = dfs(p, states, on_path, actions, max_count, out);
        actions.pop();
        let next = states.pop().unwrap();
        on_path.remove(&next);
        if !keep_going {
            return false;
        }
    }
    true
}

/// States reachable from the initial state, computed as a fixed point of
/// the successor relation.
pub fn reachable_states(p: &PlanningProblem, max_fluents: usize) -> Result<BTreeSet<Assignment>> {
    Error::guard("fluents for reachability", max_fluents, p.num_fluents())?;
    let mut reached = BTreeSet::from([p.init().clone()]);
    let mut frontier = vec![p.init().clone()];
    while !frontier.is_empty() {
        let mut fresh = Vec::new();
        for s in &frontier {
            for a in p.actions().iter().filter(|a| a.applicable(s)) {
                let next = a.apply(s);
                if reached.insert(next.clone()) {
                    fresh.push(next);
                }
            }
        }
        frontier = fresh;
    }
    Ok(reached)
}

/// Number of total assignments over `num_fluents` fluents satisfying `phi`.
pub fn count_models(phi: &BoolFormula, num_fluents: usize, max_fluents: usize) -> Result<u64> {
    Ok(models_of(phi, num_fluents, max_fluents)?.count() as u64)
}

/// Models of `phi` in lexicographic order.
pub fn models_of<'a>(
    phi: &'a BoolFormula,
    num_fluents: usize,
    max_fluents: usize,
) -> Result<impl Iterator<Item = Assignment> + 'a> {
    Error::guard("fluents for model enumeration", max_fluents, num_fluents)?;
    if phi.max_atom().map_or(false, |m| m >= num_fluents) {
        return Err(Error::structural("formula mentions fluents outside the set"));
    }
    Ok(all_assignments(num_fluents).filter(move |s| phi.holds(s)))
}
