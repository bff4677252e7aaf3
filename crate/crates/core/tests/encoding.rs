//! Models of the planning encoding correspond exactly to loop-free plans.

use std::collections::BTreeSet;

use cfplan::encode::{default_bound, encode_with_goal, extract_plan};
use cfplan::gen::sweep_instance;
use cfplan::ltlf::{all_models, SatQuery};
use cfplan::model::{enumerate_loop_free_plans, PlanningProblem};
use cfplan::Limits;

type PlanSet = BTreeSet<Vec<String>>;

fn reference(p: &PlanningProblem) -> PlanSet {
    let e = enumerate_loop_free_plans(p, None, 20).unwrap();
    assert!(!e.truncated);
    e.plans.into_iter().map(|(plan, _)| plan.0).collect()
}

fn from_models(p: &PlanningProblem, distinct: bool) -> PlanSet {
    let limits = Limits::default();
    let e = encode_with_goal(p, p.goal());
    let mut q = SatQuery::new(e.formula.clone(), e.num_props(), default_bound(p, &limits).unwrap());
    if distinct {
        q = q.distinct((0..p.num_fluents()).collect());
    }
    let (models, complete) = all_models(&q, 200_000, &limits).unwrap();
    assert!(complete);
    let mut out = PlanSet::new();
    for m in models {
        let (plan, trace) = extract_plan(&e, &m).unwrap();
        assert_eq!(p.validate_plan(&plan).unwrap(), trace);
        if trace.is_loop_free() {
            assert!(out.insert(plan.0), "plan extracted twice");
        } else {
            assert!(!distinct);
        }
    }
    out
}

#[test]
fn fifty_problems_with_distinctness() {
    for seed in 0..50 {
        let p = sweep_instance(seed, 3, 3, 0).problem;
        assert_eq!(from_models(&p, true), reference(&p), "seed {seed}");
    }
}

#[test]
fn loop_free_models_without_distinctness() {
    for seed in 0..50 {
        let p = sweep_instance(seed, 3, 2, 0).problem;
        assert_eq!(from_models(&p, false), reference(&p), "seed {seed}");
    }
}

#[test]
fn some_instances_have_several_plans() {
    let sizes: Vec<usize> = (0..50).map(|s| reference(&sweep_instance(s, 3, 3, 0).problem).len()).collect();
    assert!(sizes.iter().any(|&n| n == 0));
    assert!(sizes.iter().any(|&n| n > 2));
}
