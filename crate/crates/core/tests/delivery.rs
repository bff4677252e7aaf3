//! The food delivery problem: unsolvable as given, repaired by moving the
//! driver, and refined with temporal requirements.

use std::collections::BTreeMap;

use cfplan::cfsearch::{csep, find_plan, Budget, ChangeKind, CounterfactualQuery, Edit, Quantifier};
use cfplan::encode::{parse_spec, Plausibility};
use cfplan::io::{parse_plan, parse_plausibility, parse_problem};
use cfplan::ltlf::evaluate;
use cfplan::model::{enumerate_loop_free_plans, reachable_states, Plan, PlanningProblem};
use cfplan::oracle::{brute_csep, brute_forall, OracleGuard};
use cfplan::Limits;

fn fixture(name: &str) -> String {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn original() -> PlanningProblem {
    parse_problem(&fixture("delivery.json")).unwrap()
}

fn repaired() -> PlanningProblem {
    parse_problem(&fixture("delivery_repaired.json")).unwrap()
}

fn query(p: &PlanningProblem, spec: &str, change: ChangeKind, quantifier: Quantifier) -> CounterfactualQuery {
    CounterfactualQuery {
        problem: p.clone(),
        spec: parse_spec(spec, p).unwrap(),
        change,
        quantifier,
        budget: Budget::Minimize,
        plausibility: Plausibility::default(),
    }
}

fn multiset(plan: &Plan) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for a in plan.names() {
        *m.entry(a.clone()).or_default() += 1;
    }
    m
}

/// Oracle guard large enough for the twenty delivery fluents; the reachable
/// part of the state space stays small.
fn wide_guard() -> OracleGuard {
    OracleGuard {
        max_fluents: 20,
        max_states: 1 << 20,
        max_trace_len: 16,
        max_bfs_nodes: 5_000_000,
    }
}

#[test]
fn original_problem_is_unsolvable() {
    let p = original();
    assert!(find_plan(&p, &cfplan::ltlf::Ltlf::True, &Limits::default()).unwrap().is_none());
    assert!(enumerate_loop_free_plans(&p, None, 20).unwrap().plans.is_empty());
    let plan = parse_plan(&fixture("delivery_plan.txt"), &p).unwrap();
    assert!(p.validate_plan(&plan).is_err());
}

#[test]
fn worked_plan_is_valid_after_the_repair() {
    let p = repaired();
    let plan = parse_plan(&fixture("delivery_plan.txt"), &p).unwrap();
    assert_eq!(plan.len(), 6);
    assert!(p.validate_plan(&plan).is_ok());
}

#[test]
fn moving_the_driver_is_the_cheapest_initial_change() {
    let p = original();
    let r = csep(&query(&p, "true", ChangeKind::Init, Quantifier::Exists), &Limits::default()).unwrap();
    let f = r.found().expect("a counterfactual exists");
    assert_eq!(f.cost, 1);
    assert_eq!(
        f.edits,
        [Edit::FlipInit { fluent: "at_driver_depot".into(), value: true }]
    );
    let plan = parse_plan(&fixture("delivery_plan.txt"), &f.problem).unwrap();
    assert!(f.problem.validate_plan(&plan).is_ok());
    assert_eq!(multiset(&plan).values().sum::<usize>(), 6);

    let oracle = brute_csep(&p, &parse_spec("true", &p).unwrap(), ChangeKind::Init, Quantifier::Exists, &Plausibility::default(), 2, &wide_guard()).unwrap();
    assert_eq!(oracle.cost(), Some(1));
}

#[test]
fn one_location_constraint_also_clears_the_old_position() {
    let p = original();
    let mut q = query(&p, "true", ChangeKind::Init, Quantifier::Exists);
    q.plausibility = parse_plausibility(&fixture("one_location.json"), &p).unwrap();
    let f = csep(&q, &Limits::default()).unwrap().found().cloned().unwrap();
    assert_eq!(f.cost, 2);
    assert_eq!(f.problem.init(), repaired().init());
}

#[test]
fn visiting_the_coffee_shop_first_weakens_a_drive() {
    let p = repaired();
    let spec = fixture("spec_coffee_first.ltlf");
    let psi = parse_spec(spec.trim(), &p).unwrap();
    assert!(find_plan(&p, &psi, &Limits::default()).unwrap().is_none());
    let limits = Limits::default().with_bound(10);
    let f = csep(&query(&p, spec.trim(), ChangeKind::Act, Quantifier::Exists), &limits)
        .unwrap()
        .found()
        .cloned()
        .unwrap();
    assert_eq!(f.cost, 1);
    let [Edit::Precondition { action, added: true, .. }] = f.edits.as_slice() else {
        panic!("{:?}", f.edits)
    };
    assert!(action.starts_with("drive"));
    let trace = f.problem.validate_plan(&f.witness).unwrap();
    assert!(evaluate(&trace, &psi).unwrap());
}

#[test]
fn returning_to_the_depot_strengthens_the_goal() {
    let p = repaired();
    let spec = fixture("spec_return_depot.ltlf");
    let psi = parse_spec(spec.trim(), &p).unwrap();
    let f = csep(&query(&p, spec.trim(), ChangeKind::Goal, Quantifier::ForAll), &Limits::default())
        .unwrap()
        .found()
        .cloned()
        .unwrap();
    assert!(f.edits.iter().all(|e| matches!(e, Edit::Goal { added: false, .. })));
    assert!(brute_forall(&f.problem, &psi, &wide_guard()).unwrap());
    let depot = p.fluent("at_truck_depot").unwrap().0;
    for s in reachable_states(&p, 20).unwrap() {
        assert_eq!(f.problem.goal().holds(&s), p.goal().holds(&s) && s.get(depot));
    }
}

#[test]
fn coffee_first_with_drives_from_their_origin() {
    let p = repaired();
    let spec = fixture("spec_coffee_first.ltlf");
    let mut q = query(&p, spec.trim(), ChangeKind::Act, Quantifier::Exists);
    q.plausibility = parse_plausibility(&fixture("drive_from_origin.json"), &p).unwrap();
    let f = csep(&q, &Limits::default().with_bound(10)).unwrap().found().cloned().unwrap();
    assert_eq!(f.cost, 2);
    assert!(f.edits.iter().any(|e| matches!(
        e,
        Edit::Precondition { action, added: true, .. } if action == "drive_truck_coffee_shop_butchery_driver"
    )));
    let trace = f.problem.validate_plan(&f.witness).unwrap();
    assert!(evaluate(&trace, &parse_spec(spec.trim(), &p).unwrap()).unwrap());
}
