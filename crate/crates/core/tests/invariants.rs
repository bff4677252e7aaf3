//! Structural properties of the counterfactual procedures.

use cfplan::cfsearch::{
    check_universal, csep, edits_between, goal_edit_distance, Budget, ChangeKind, CounterfactualQuery,
    CounterfactualResult, Edit, Quantifier,
};
use cfplan::gen::sweep_instance;
use cfplan::ltlf::{evaluate, Ltlf};
use cfplan::model::{all_assignments, enumerate_loop_free_plans, BoolFormula, PlanningProblem};
use cfplan::Limits;
use proptest::prelude::*;

const CHANGES: [ChangeKind; 3] = [ChangeKind::Init, ChangeKind::Goal, ChangeKind::Act];
const QUANTIFIERS: [Quantifier; 2] = [Quantifier::Exists, Quantifier::ForAll];
const SEEDS: u64 = 40;

fn run(p: &PlanningProblem, spec: &Ltlf, change: ChangeKind, quantifier: Quantifier, budget: Budget) -> CounterfactualResult {
    let q = CounterfactualQuery {
        problem: p.clone(),
        spec: spec.clone(),
        change,
        quantifier,
        budget,
        plausibility: Default::default(),
    };
    csep(&q, &Limits::default()).unwrap()
}

fn implies_everywhere(a: &BoolFormula, b: &BoolFormula, n: usize) -> bool {
    all_assignments(n).all(|s| !a.holds(&s) || b.holds(&s))
}

fn distance(a: &BoolFormula, b: &BoolFormula, n: usize) -> usize {
    goal_edit_distance(a, b, n, &Limits::default()).unwrap() as usize
}

#[test]
fn budget_monotonicity() {
    for seed in 0..SEEDS {
        let inst = sweep_instance(seed, 4, 3, 3);
        for change in CHANGES {
            for quantifier in QUANTIFIERS {
                let costs: Vec<Option<usize>> = (0..=3)
                    .map(|k| run(&inst.problem, &inst.spec, change, quantifier, Budget::Max(k)).cost())
                    .collect();
                let min = run(&inst.problem, &inst.spec, change, quantifier, Budget::Minimize).cost();
                for (k, c) in costs.iter().enumerate() {
                    match min {
                        Some(m) if m <= k => assert_eq!(*c, Some(m), "seed {seed} {change} {quantifier} K={k}"),
                        _ => assert_eq!(*c, None, "seed {seed} {change} {quantifier} K={k}"),
                    }
                }
            }
        }
    }
}

#[test]
fn existential_edits_only_weaken() {
    let mut nontrivial = 0;
    for seed in 0..SEEDS {
        let inst = sweep_instance(seed, 4, 3, 3);
        let p = &inst.problem;
        let n = p.num_fluents();
        let r = run(p, &inst.spec, ChangeKind::Goal, Quantifier::Exists, Budget::Minimize);
        if let Some(f) = r.found() {
            nontrivial += usize::from(f.cost > 0);
            assert!(implies_everywhere(p.goal(), f.problem.goal(), n), "seed {seed}");
            assert!(f.edits.iter().all(|e| matches!(e, Edit::Goal { added: true, .. })));
        }
        let r = run(p, &inst.spec, ChangeKind::Act, Quantifier::Exists, Budget::Minimize);
        if let Some(f) = r.found() {
            nontrivial += usize::from(f.cost > 0);
            for (a, b) in p.actions().iter().zip(f.problem.actions()) {
                assert_eq!(a.name, b.name);
                assert_eq!(a.eff, b.eff);
                assert!(implies_everywhere(&a.pre, &b.pre, n), "seed {seed} {}", a.name);
            }
            assert!(f.edits.iter().all(|e| matches!(e, Edit::Precondition { added: true, .. })));
        }
    }
    assert!(nontrivial >= 10, "{nontrivial}");
}

#[test]
fn universal_results_have_a_witness() {
    let limits = Limits::default();
    let mut nontrivial = 0;
    for seed in 0..SEEDS {
        let inst = sweep_instance(seed, 4, 3, 3);
        for change in CHANGES {
            let r = run(&inst.problem, &inst.spec, change, Quantifier::ForAll, Budget::Minimize);
            let Some(f) = r.found() else { continue };
            nontrivial += usize::from(f.cost > 0);
            let trace = f.problem.validate_plan(&f.witness).unwrap();
            assert!(evaluate(&trace, &inst.spec).unwrap(), "seed {seed} {change}");
            assert!(check_universal(&f.problem, &inst.spec, &limits).unwrap().is_ok(), "seed {seed} {change}");
        }
    }
    assert!(nontrivial >= 10, "{nontrivial}");
}

#[test]
fn costs_are_edit_distances() {
    let mut nontrivial = 0;
    for seed in 0..SEEDS {
        let inst = sweep_instance(seed, 4, 3, 3);
        let p = &inst.problem;
        let n = p.num_fluents();
        for quantifier in QUANTIFIERS {
            if let Some(f) = run(p, &inst.spec, ChangeKind::Init, quantifier, Budget::Minimize).found() {
                nontrivial += usize::from(f.cost > 0);
                assert_eq!(f.cost, p.init().hamming(f.problem.init()), "seed {seed}");
                assert_eq!(f.cost, f.edits.len());
                assert_eq!(f.problem.goal(), p.goal());
            }
            if let Some(f) = run(p, &inst.spec, ChangeKind::Goal, quantifier, Budget::Minimize).found() {
                nontrivial += usize::from(f.cost > 0);
                assert_eq!(f.cost, distance(p.goal(), f.problem.goal(), n), "seed {seed}");
                assert_eq!(f.cost, f.edits.len());
                assert_eq!(f.problem.init(), p.init());
            }
            if let Some(f) = run(p, &inst.spec, ChangeKind::Act, quantifier, Budget::Minimize).found() {
                nontrivial += usize::from(f.cost > 0);
                let total: usize = p
                    .actions()
                    .iter()
                    .zip(f.problem.actions())
                    .map(|(a, b)| distance(&a.pre, &b.pre, n))
                    .sum();
                assert_eq!(f.cost, total, "seed {seed}");
                assert_eq!(f.cost, f.edits.len());
                let mut edits = f.edits.clone();
                edits.sort();
                let mut derived = edits_between(p, &f.problem, 20).unwrap();
                derived.sort();
                assert_eq!(edits, derived, "seed {seed}");
            }
        }
    }
    assert!(nontrivial >= 20, "{nontrivial}");
}

#[test]
fn zero_budget_with_true_spec_is_plan_existence() {
    for seed in 0..200 {
        let p = sweep_instance(seed, 4, 3, 3).problem;
        let solvable = !enumerate_loop_free_plans(&p, Some(1), 20).unwrap().plans.is_empty();
        for change in CHANGES {
            for quantifier in QUANTIFIERS {
                let r = run(&p, &Ltlf::True, change, quantifier, Budget::Max(0));
                assert_eq!(r.found().is_some(), solvable, "seed {seed} {change} {quantifier}");
                if let Some(f) = r.found() {
                    assert_eq!(f.cost, 0);
                    assert_eq!(&f.problem, &p);
                }
            }
        }
    }
}

fn formula(n: usize) -> impl Strategy<Value = BoolFormula> {
    let leaf = prop_oneof![
        Just(BoolFormula::True),
        Just(BoolFormula::False),
        (0..n, any::<bool>()).prop_map(|(i, v)| BoolFormula::literal(i, v)),
    ];
    leaf.prop_recursive(3, 12, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(BoolFormula::not),
            prop::collection::vec(inner.clone(), 1..3).prop_map(BoolFormula::And),
            prop::collection::vec(inner, 1..3).prop_map(BoolFormula::Or),
        ]
    })
}

proptest! {
    #[test]
    fn goal_distance_is_a_metric(a in formula(3), b in formula(3), c in formula(3)) {
        let d = |x: &BoolFormula, y: &BoolFormula| distance(x, y, 3);
        prop_assert_eq!(d(&a, &a), 0);
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        let equivalent = all_assignments(3).all(|s| a.holds(&s) == b.holds(&s));
        prop_assert_eq!(d(&a, &b) == 0, equivalent);
    }
}
