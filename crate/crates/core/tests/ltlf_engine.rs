//! The LTLf engine against brute-force enumeration, over two atoms and
//! traces of length at most three.

use cfplan::ltlf::{
    evaluate, is_nnf, min_weight_model, negate_nnf, positions, sat_bounded, Ltlf, SatQuery,
};
use cfplan::model::{Assignment, Trace};
use cfplan::oracle::{
    atom_value, brute_min_weight, brute_sat, depth_three_representatives, depth_two_formulas,
    trace_count, OracleGuard, TruthTable, ATOMS, MAX_LEN,
};
use cfplan::Limits;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WEIGHTS: [u64; 2] = [2, 3];

fn states(len: usize, t: u32) -> Vec<Assignment> {
    (0..len)
        .map(|k| Assignment::from_bits((0..ATOMS).map(|a| atom_value(t, k, a)).collect()))
        .collect()
}

fn all_traces() -> Vec<Trace> {
    (1..=MAX_LEN)
        .flat_map(|len| (0..trace_count(len)).map(move |t| Trace::new(states(len, t)).unwrap()))
        .collect()
}

fn trace_weight(t: &Trace) -> u64 {
    t.states()
        .iter()
        .map(|s| s.true_indices().map(|i| WEIGHTS[i]).sum::<u64>())
        .sum()
}

fn check_engine(f: &Ltlf, bound: usize, limits: &Limits, guard: &OracleGuard) {
    let q = SatQuery::new(f.clone(), ATOMS, bound);
    let expected = brute_sat(f, ATOMS, bound, guard).unwrap();
    let got = sat_bounded(&q, limits).unwrap();
    assert_eq!(got.is_sat(), expected.is_some(), "satisfiability of {f:?} at {bound}");
    if let Some(m) = got.model() {
        assert!(m.trace.len() <= bound);
        assert!(evaluate(&m.trace, f).unwrap(), "model of {f:?} fails");
    }
    let best = brute_min_weight(f, ATOMS, &WEIGHTS, bound, guard).unwrap();
    let got = min_weight_model(&q.clone().weighted(WEIGHTS.to_vec()), limits).unwrap();
    match (got.model(), best) {
        (None, None) => {}
        (Some(m), Some((_, w))) => {
            assert_eq!(m.weight, w, "minimum weight of {f:?} at {bound}");
            assert_eq!(trace_weight(&m.trace), w);
            assert!(evaluate(&m.trace, f).unwrap());
        }
        (a, b) => panic!("min weight of {f:?} at {bound}: {a:?} vs {b:?}"),
    }
}

#[test]
fn truth_tables_match_the_evaluator() {
    for (f, table) in depth_two_formulas() {
        let by_eval = TruthTable::from_fn(|len, t, k| positions(&states(len, t), &f)[k]);
        assert_eq!(by_eval, table, "{f:?}");
    }
}

#[test]
fn every_depth_two_formula_at_every_bound() {
    let limits = Limits::default();
    let guard = OracleGuard::default();
    let all = depth_two_formulas();
    assert_eq!(all.len(), 4 + 5 * 88 + 4 * 88 * 88);
    for (f, _) in &all {
        for bound in 1..=MAX_LEN {
            check_engine(f, bound, &limits, &guard);
        }
    }
}

#[test]
fn depth_three_over_semantic_representatives() {
    let limits = Limits::default();
    let guard = OracleGuard::default();
    let reps = depth_three_representatives();
    assert!(reps.iter().any(|f| f.depth() == 3));
    for f in &reps {
        assert!(f.depth() <= 3);
        check_engine(f, MAX_LEN, &limits, &guard);
    }
}

#[test]
fn negation_normal_form_complements() {
    let traces = all_traces();
    let mut formulas: Vec<Ltlf> = depth_two_formulas().into_iter().map(|(f, _)| f).collect();
    formulas.extend(depth_three_representatives());
    for f in formulas {
        let neg = negate_nnf(&f);
        assert!(is_nnf(&neg));
        for t in &traces {
            assert_ne!(evaluate(t, &neg).unwrap(), evaluate(t, &f).unwrap(), "{f:?} on {t:?}");
        }
    }
}

fn random_trace(rng: &mut ChaCha8Rng) -> Vec<Assignment> {
    let len = rng.gen_range(1..=6);
    (0..len)
        .map(|_| Assignment::from_bits((0..ATOMS).map(|_| rng.gen_bool(0.5)).collect()))
        .collect()
}

#[test]
fn expansion_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let depth = rng.gen_range(0..=3);
        let a = cfplan::gen::ltlf(&mut rng, ATOMS, depth);
        let b = cfplan::gen::ltlf(&mut rng, ATOMS, depth);
        let t = random_trace(&mut rng);
        let same = |x: Ltlf, y: Ltlf| assert_eq!(positions(&t, &x), positions(&t, &y), "{x:?} vs {y:?}");
        same(
            Ltlf::eventually(a.clone()),
            Ltlf::Or(vec![a.clone(), Ltlf::next(Ltlf::eventually(a.clone()))]),
        );
        same(
            Ltlf::globally(a.clone()),
            Ltlf::And(vec![a.clone(), Ltlf::weak_next(Ltlf::globally(a.clone()))]),
        );
        same(
            Ltlf::until(a.clone(), b.clone()),
            Ltlf::Or(vec![
                b.clone(),
                Ltlf::And(vec![a.clone(), Ltlf::next(Ltlf::until(a.clone(), b.clone()))]),
            ]),
        );
        same(Ltlf::not(Ltlf::next(a.clone())), Ltlf::weak_next(Ltlf::not(a.clone())));
        same(Ltlf::eventually(a.clone()), Ltlf::until(Ltlf::True, a.clone()));
        same(Ltlf::globally(a.clone()), Ltlf::not(Ltlf::eventually(Ltlf::not(a.clone()))));
        same(
            Ltlf::next(a.clone()),
            Ltlf::And(vec![Ltlf::not(Ltlf::last()), Ltlf::weak_next(a)]),
        );
    }
}
