//! Seeded random instances for agreement sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::encode::Plausibility;
use crate::ltlf::Ltlf;
use crate::model::{ActionDef, Assignment, BoolFormula, Effect, FluentId, PlanningProblem};

#[derive(Clone, Debug)]
pub struct Instance {
    pub problem: PlanningProblem,
    pub spec: Ltlf,
    /// Empty unless requested.
    pub plausibility: Plausibility,
}

#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub fluents: usize,
    pub actions: usize,
    /// Maximum nesting depth of the specification.
    pub spec_depth: usize,
}

/// Instance with the exact sizes in `params`; equal seeds give equal output.
pub fn instance(seed: u64, params: GenParams) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let problem = problem(&mut rng, params.fluents, params.actions);
    let depth = rng.gen_range(0..=params.spec_depth);
    let spec = ltlf(&mut rng, params.fluents, depth);
    Instance {
        problem,
        spec,
        plausibility: Plausibility::default(),
    }
}

/// Like [`sweep_instance`], with one to three random plausibility
/// constraints.
pub fn constrained_instance(seed: u64, max_fluents: usize, max_actions: usize, spec_depth: usize) -> Instance {
    let mut inst = sweep_instance(seed, max_fluents, max_actions, spec_depth);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0c0f_57a1);
    let n = inst.problem.num_fluents();
    let mut c = Plausibility::default();
    while c.is_empty() {
        if rng.gen_bool(0.4) {
            c.init = Some(condition(&mut rng, n));
        }
        if rng.gen_bool(0.4) {
            c.goal = Some(condition(&mut rng, n));
        }
        if rng.gen_bool(0.5) {
            let a = inst.problem.actions().choose(&mut rng).expect("at least one action");
            c.act.insert(a.name.clone(), condition(&mut rng, n));
        }
    }
    inst.plausibility = c;
    inst
}

/// Instance with 1..=`max_fluents` fluents and 1..=`max_actions` actions.
pub fn sweep_instance(seed: u64, max_fluents: usize, max_actions: usize, spec_depth: usize) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_cafe);
    let params = GenParams {
        fluents: rng.gen_range(1..=max_fluents),
        actions: rng.gen_range(1..=max_actions),
        spec_depth,
    };
    instance(seed, params)
}

fn literal(rng: &mut ChaCha8Rng, n: usize) -> BoolFormula {
    BoolFormula::literal(rng.gen_range(0..n), rng.gen_bool(0.5))
}

fn condition(rng: &mut ChaCha8Rng, n: usize) -> BoolFormula {
    match rng.gen_range(0..6) {
        0 => BoolFormula::True,
        1 | 2 => literal(rng, n),
        3 | 4 => BoolFormula::And(vec![literal(rng, n), literal(rng, n)]),
        _ => BoolFormula::Or(vec![literal(rng, n), literal(rng, n)]),
    }
}

pub fn problem(rng: &mut ChaCha8Rng, n: usize, m: usize) -> PlanningProblem {
    let fluents: Vec<String> = (0..n).map(|i| format!("f{i}")).collect();
    let mut actions = Vec::with_capacity(m);
    for j in 0..m {
        let pre = condition(rng, n);
        let mut targets: Vec<usize> = (0..n).collect();
        targets.shuffle(rng);
        let k = rng.gen_range(1..=n.min(2));
        let eff = targets[..k]
            .iter()
            .map(|&f| Effect {
                fluent: FluentId(f),
                value: rng.gen_bool(0.5),
            })
            .collect();
        actions.push(ActionDef::new(format!("a{j}"), pre, eff).expect("distinct targets"));
    }
    let init = Assignment::from_bits((0..n).map(|_| rng.gen_bool(0.5)).collect());
    let goal = condition(rng, n);
    PlanningProblem::new(fluents, actions, init, goal).expect("generated names are distinct")
}

/// Random formula of exactly the given depth over `n` atoms.
pub fn ltlf(rng: &mut ChaCha8Rng, n: usize, depth: usize) -> Ltlf {
    if depth == 0 {
        return match rng.gen_range(0..8) {
            0 => Ltlf::True,
            1 => Ltlf::False,
            _ => Ltlf::atom(rng.gen_range(0..n)),
        };
    }
    let sub = |rng: &mut ChaCha8Rng| {
        let d = rng.gen_range(0..depth);
        ltlf(rng, n, d)
    };
    let deep = ltlf(rng, n, depth - 1);
    match rng.gen_range(0..10) {
        0 => Ltlf::not(deep),
        1 => Ltlf::And(vec![deep, sub(rng)]),
        2 => Ltlf::Or(vec![sub(rng), deep]),
        3 => Ltlf::implies(deep, sub(rng)),
        4 => Ltlf::next(deep),
        5 => Ltlf::weak_next(deep),
        6 => Ltlf::until(sub(rng), deep),
        7 => Ltlf::eventually(deep),
        _ => Ltlf::globally(deep),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible() {
        let p = GenParams { fluents: 3, actions: 2, spec_depth: 3 };
        let a = instance(7, p);
        let b = instance(7, p);
        assert_eq!(a.problem, b.problem);
        assert_eq!(a.spec, b.spec);
        assert!(a.spec.depth() <= 3);
    }

    #[test]
    fn sizes_in_range() {
        for seed in 0..50 {
            let i = sweep_instance(seed, 4, 3, 3);
            assert!((1..=4).contains(&i.problem.num_fluents()));
            assert!((1..=3).contains(&i.problem.actions().len()));
        }
    }
}
