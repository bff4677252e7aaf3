use crate::ltlf::Ltlf;

/// Negation normal form of `!formula`.
///
/// Dualities: `X`/`WX`, `F`/`G`, and
/// `!(a U b) = (!b U (!a & !b)) | G !b`.
pub fn negate_nnf(formula: &Ltlf) -> Ltlf {
    push(formula, true)
}

/// Negation normal form of `formula` itself.
pub fn nnf(formula: &Ltlf) -> Ltlf {
    push(formula, false)
}

fn push(f: &Ltlf, neg: bool) -> Ltlf {
    match (f, neg) {
        (Ltlf::True, false) | (Ltlf::False, true) => Ltlf::True,
        (Ltlf::True, true) | (Ltlf::False, false) => Ltlf::False,
        (Ltlf::Atom(_), false) => f.clone(),
        (Ltlf::Atom(_), true) => Ltlf::not(f.clone()),
        (Ltlf::Not(a), _) => push(a, !neg),
        (Ltlf::And(xs), false) | (Ltlf::Or(xs), true) => {
            Ltlf::And(xs.iter().map(|x| push(x, neg)).collect())
        }
        (Ltlf::Or(xs), false) | (Ltlf::And(xs), true) => {
            Ltlf::Or(xs.iter().map(|x| push(x, neg)).collect())
        }
        (Ltlf::Implies(a, b), false) => Ltlf::Or(vec![push(a, true), push(b, false)]),
        (Ltlf::Implies(a, b), true) => Ltlf::And(vec![push(a, false), push(b, true)]),
        (Ltlf::Next(a), false) => Ltlf::next(push(a, false)),
        (Ltlf::Next(a), true) => Ltlf::weak_next(push(a, true)),
        (Ltlf::WeakNext(a), false) => Ltlf::weak_next(push(a, false)),
        (Ltlf::WeakNext(a), true) => Ltlf::next(push(a, true)),
        (Ltlf::Eventually(a), false) => Ltlf::eventually(push(a, false)),
        (Ltlf::Eventually(a), true) => Ltlf::globally(push(a, true)),
        (Ltlf::Globally(a), false) => Ltlf::globally(push(a, false)),
        (Ltlf::Globally(a), true) => Ltlf::eventually(push(a, true)),
        (Ltlf::Until(a, b), false) => Ltlf::until(push(a, false), push(b, false)),
        (Ltlf::Until(a, b), true) => {
            let not_a = push(a, true);
            let not_b = push(b, true);
            Ltlf::Or(vec![
                Ltlf::until(not_b.clone(), Ltlf::And(vec![not_a, not_b.clone()])),
                Ltlf::globally(not_b),
            ])
        }
    }
}

/// True if negations only occur directly on atoms and no implications remain.
pub fn is_nnf(f: &Ltlf) -> bool {
    match f {
        Ltlf::Not(a) => matches!(**a, Ltlf::Atom(_)),
        Ltlf::Implies(..) => false,
        _ => f.children().into_iter().all(is_nnf),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strong_weak_duality() {
        let p = Ltlf::atom(0);
        assert_eq!(negate_nnf(&Ltlf::next(p.clone())), Ltlf::weak_next(Ltlf::not(p.clone())));
        assert_eq!(negate_nnf(&Ltlf::eventually(p.clone())), Ltlf::globally(Ltlf::not(p)));
    }

    #[test]
    fn output_is_nnf() {
        let f = Ltlf::not(Ltlf::implies(
            Ltlf::until(Ltlf::atom(0), Ltlf::not(Ltlf::atom(1))),
            Ltlf::globally(Ltlf::atom(0)),
        ));
        assert!(is_nnf(&negate_nnf(&f)));
        assert!(is_nnf(&nnf(&f)));
    }
}
