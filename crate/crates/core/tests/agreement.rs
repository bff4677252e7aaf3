//! Every counterfactual procedure against the breadth-first oracle.

use cfplan::cfsearch::{csep, Budget, ChangeKind, CounterfactualQuery, Quantifier};
use cfplan::gen::{constrained_instance, sweep_instance, Instance};
use cfplan::oracle::{brute_csep, brute_exists, brute_forall, OracleGuard, OracleOutcome};
use cfplan::Limits;

const CHANGES: [ChangeKind; 3] = [ChangeKind::Init, ChangeKind::Goal, ChangeKind::Act];
const QUANTIFIERS: [Quantifier; 2] = [Quantifier::Exists, Quantifier::ForAll];
const BUDGETS: [Budget; 4] = [Budget::Max(0), Budget::Max(1), Budget::Max(2), Budget::Minimize];

/// Returns the number of definitive oracle answers compared.
fn agree(inst: &Instance, label: &str) -> usize {
    let limits = Limits::default();
    let guard = OracleGuard {
        max_bfs_nodes: 200_000,
        ..OracleGuard::default()
    };
    let mut compared = 0;
    for change in CHANGES {
        for quantifier in QUANTIFIERS {
            for budget in BUDGETS {
                let k = match budget {
                    Budget::Max(k) => k,
                    Budget::Minimize => limits.minimize_cap,
                };
                let expected = brute_csep(
                    &inst.problem,
                    &inst.spec,
                    change,
                    quantifier,
                    &inst.plausibility,
                    k,
                    &guard,
                )
                .unwrap();
                if expected == OracleOutcome::Unknown {
                    continue;
                }
                let q = CounterfactualQuery {
                    problem: inst.problem.clone(),
                    spec: inst.spec.clone(),
                    change,
                    quantifier,
                    budget,
                    plausibility: inst.plausibility.clone(),
                };
                let got = csep(&q, &limits).unwrap();
                assert_eq!(
                    got.cost(),
                    expected.cost(),
                    "{label}: {change} {quantifier} {budget:?}"
                );
                if let Some(f) = got.found() {
                    let check = match quantifier {
                        Quantifier::Exists => {
                            brute_exists(&f.problem, &inst.spec, &guard).unwrap().is_some()
                        }
                        // Constraints restrict which plans count, so the bare
                        // specification need not hold universally.
                        Quantifier::ForAll => {
                            !inst.plausibility.is_empty()
                                || brute_forall(&f.problem, &inst.spec, &guard).unwrap()
                        }
                    };
                    assert!(check, "{label}: {change} {quantifier} {budget:?} result does not qualify");
                }
                compared += 1;
            }
        }
    }
    compared
}

#[test]
fn unconstrained_sweep() {
    let mut compared = 0;
    for seed in 0..60 {
        compared += agree(&sweep_instance(seed, 4, 3, 3), &format!("seed {seed}"));
    }
    assert!(compared > 60 * 20);
}

#[test]
fn sweep_with_plausibility_constraints() {
    let mut compared = 0;
    for seed in 0..60 {
        compared += agree(&constrained_instance(seed, 4, 3, 3), &format!("constrained seed {seed}"));
    }
    assert!(compared > 60 * 20);
}
