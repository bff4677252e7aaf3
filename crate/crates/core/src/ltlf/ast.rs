use std::collections::HashMap;

use crate::model::BoolFormula;
use crate::syntax::{self, ParseError, Syntax};

/// Index of a proposition in an [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Prop(pub usize);

/// LTLf formula over an indexed alphabet.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ltlf {
    True,
    False,
    Atom(Prop),
    Not(Box<Ltlf>),
    And(Vec<Ltlf>),
    Or(Vec<Ltlf>),
    Implies(Box<Ltlf>, Box<Ltlf>),
    /// Strong tomorrow: a next state exists and satisfies the operand.
    Next(Box<Ltlf>),
    /// Weak tomorrow: no next state, or it satisfies the operand.
    WeakNext(Box<Ltlf>),
    Until(Box<Ltlf>, Box<Ltlf>),
    Eventually(Box<Ltlf>),
    Globally(Box<Ltlf>),
}

impl Ltlf {
    pub fn atom(i: usize) -> Self {
        Ltlf::Atom(Prop(i))
    }

    pub fn not(f: Ltlf) -> Self {
        Ltlf::Not(Box::new(f))
    }

    pub fn implies(a: Ltlf, b: Ltlf) -> Self {
        Ltlf::Implies(Box::new(a), Box::new(b))
    }

    pub fn next(f: Ltlf) -> Self {
        Ltlf::Next(Box::new(f))
    }

    pub fn weak_next(f: Ltlf) -> Self {
        Ltlf::WeakNext(Box::new(f))
    }

    pub fn until(a: Ltlf, b: Ltlf) -> Self {
        Ltlf::Until(Box::new(a), Box::new(b))
    }

    pub fn eventually(f: Ltlf) -> Self {
        Ltlf::Eventually(Box::new(f))
    }

    pub fn globally(f: Ltlf) -> Self {
        Ltlf::Globally(Box::new(f))
    }

    /// `WX false`: holds exactly at the last position.
    pub fn last() -> Self {
        Ltlf::weak_next(Ltlf::False)
    }

    /// Conjunction, collapsing trivial cases.
    pub fn and(items: Vec<Ltlf>) -> Self {
        let mut items: Vec<Ltlf> = items.into_iter().filter(|f| *f != Ltlf::True).collect();
        match items.len() {
            0 => Ltlf::True,
            1 => items.pop().unwrap(),
            _ => Ltlf::And(items),
        }
    }

    pub fn or(items: Vec<Ltlf>) -> Self {
        let mut items: Vec<Ltlf> = items.into_iter().filter(|f| *f != Ltlf::False).collect();
        match items.len() {
            0 => Ltlf::False,
            1 => items.pop().unwrap(),
            _ => Ltlf::Or(items),
        }
    }

    pub fn literal(i: usize, value: bool) -> Self {
        if value {
            Ltlf::atom(i)
        } else {
            Ltlf::not(Ltlf::atom(i))
        }
    }

    /// Embeds a propositional formula; fluent `i` becomes proposition `i`.
    pub fn from_bool(f: &BoolFormula) -> Self {
        match f {
            BoolFormula::True => Ltlf::True,
            BoolFormula::False => Ltlf::False,
            BoolFormula::Atom(x) => Ltlf::atom(x.0),
            BoolFormula::Not(a) => Ltlf::not(Ltlf::from_bool(a)),
            BoolFormula::And(xs) => Ltlf::And(xs.iter().map(Ltlf::from_bool).collect()),
            BoolFormula::Or(xs) => Ltlf::Or(xs.iter().map(Ltlf::from_bool).collect()),
            BoolFormula::Implies(a, b) => Ltlf::implies(Ltlf::from_bool(a), Ltlf::from_bool(b)),
        }
    }

    pub fn children(&self) -> Vec<&Ltlf> {
        match self {
            Ltlf::True | Ltlf::False | Ltlf::Atom(_) => vec![],
            Ltlf::Not(a)
            | Ltlf::Next(a)
            | Ltlf::WeakNext(a)
            | Ltlf::Eventually(a)
            | Ltlf::Globally(a) => vec![a],
            Ltlf::And(xs) | Ltlf::Or(xs) => xs.iter().collect(),
            Ltlf::Implies(a, b) | Ltlf::Until(a, b) => vec![a, b],
        }
    }

    /// Nesting depth; atoms and constants have depth 0.
    pub fn depth(&self) -> usize {
        self.children().iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    pub fn max_prop(&self) -> Option<usize> {
        match self {
            Ltlf::Atom(p) => Some(p.0),
            _ => self.children().iter().filter_map(|c| c.max_prop()).max(),
        }
    }

    pub fn to_syntax(&self, alphabet: &Alphabet) -> Syntax {
        let rec = |f: &Ltlf| Box::new(f.to_syntax(alphabet));
        match self {
            Ltlf::True => Syntax::True,
            Ltlf::False => Syntax::False,
            Ltlf::Atom(p) => Syntax::atom(alphabet.name(*p).to_string()),
            Ltlf::Not(a) => Syntax::Not(rec(a)),
            Ltlf::And(xs) => Syntax::And(xs.iter().map(|x| x.to_syntax(alphabet)).collect()),
            Ltlf::Or(xs) => Syntax::Or(xs.iter().map(|x| x.to_syntax(alphabet)).collect()),
            Ltlf::Implies(a, b) => Syntax::Implies(rec(a), rec(b)),
            Ltlf::Next(a) => Syntax::Next(rec(a), 0),
            Ltlf::WeakNext(a) => Syntax::WeakNext(rec(a), 0),
            Ltlf::Until(a, b) => Syntax::Until(rec(a), rec(b), 0),
            Ltlf::Eventually(a) => Syntax::Eventually(rec(a), 0),
            Ltlf::Globally(a) => Syntax::Globally(rec(a), 0),
        }
    }

    pub fn render(&self, alphabet: &Alphabet) -> String {
        self.to_syntax(alphabet).to_string()
    }

    pub fn from_syntax(syn: &Syntax, alphabet: &Alphabet) -> Result<Self, ParseError> {
        let rec = |s: &Syntax| Ltlf::from_syntax(s, alphabet).map(Box::new);
        Ok(match syn {
            Syntax::True => Ltlf::True,
            Syntax::False => Ltlf::False,
            Syntax::Atom { name, pos } => match alphabet.get(name) {
                Some(p) => Ltlf::Atom(p),
                None => {
                    return Err(ParseError {
                        pos: *pos,
                        message: format!("unknown atom '{name}'"),
                    })
                }
            },
            Syntax::Not(a) => Ltlf::Not(rec(a)?),
            Syntax::And(xs) => Ltlf::And(
                xs.iter()
                    .map(|x| Ltlf::from_syntax(x, alphabet))
                    .collect::<Result<_, _>>()?,
            ),
            Syntax::Or(xs) => Ltlf::Or(
                xs.iter()
                    .map(|x| Ltlf::from_syntax(x, alphabet))
                    .collect::<Result<_, _>>()?,
            ),
            Syntax::Implies(a, b) => Ltlf::Implies(rec(a)?, rec(b)?),
            Syntax::Next(a, _) => Ltlf::Next(rec(a)?),
            Syntax::WeakNext(a, _) => Ltlf::WeakNext(rec(a)?),
            Syntax::Until(a, b, _) => Ltlf::Until(rec(a)?, rec(b)?),
            Syntax::Eventually(a, _) => Ltlf::Eventually(rec(a)?),
            Syntax::Globally(a, _) => Ltlf::Globally(rec(a)?),
        })
    }
}

/// Ordered, duplicate-free set of proposition names.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    index: HashMap<String, Prop>,
}

impl Alphabet {
    pub fn new<I, S>(names: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut a = Alphabet::default();
        for n in names {
            a.push(n);
        }
        a
    }

    /// Appends `name`, returning its index (existing index if present).
    pub fn push(&mut self, name: impl Into<String>) -> Prop {
        let name = name.into();
        if let Some(p) = self.index.get(&name) {
            return *p;
        }
        let p = Prop(self.names.len());
        self.index.insert(name.clone(), p);
        self.names.push(name);
        p
    }

    pub fn get(&self, name: &str) -> Option<Prop> {
        self.index.get(name).copied()
    }

    pub fn name(&self, p: Prop) -> &str {
        &self.names[p.0]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

/// Parses an LTLf formula whose atoms must belong to `alphabet`.
pub fn parse_ltlf(text: &str, alphabet: &Alphabet) -> Result<Ltlf, ParseError> {
    let syn = syntax::parse(text)?;
    Ltlf::from_syntax(&syn, alphabet)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ab() -> Alphabet {
        Alphabet::new(["p", "q", "at_truck_depot", "at_truck_coffee_shop", "at_truck_butchery"])
    }

    #[test]
    fn parse_eventually() {
        let f = parse_ltlf("F at_truck_depot", &ab()).unwrap();
        assert_eq!(f, Ltlf::eventually(Ltlf::atom(2)));
    }

    #[test]
    fn parse_globally_next() {
        let f = parse_ltlf("G (p -> X q)", &ab()).unwrap();
        assert_eq!(
            f,
            Ltlf::globally(Ltlf::implies(Ltlf::atom(0), Ltlf::next(Ltlf::atom(1))))
        );
    }

    #[test]
    fn coffee_shop_formula_round_trips() {
        let text = "G (at(truck,coffee-shop) -> X at(truck,butchery)) & (!at(truck,butchery) U at(truck,coffee-shop))";
        let a = ab();
        let f = parse_ltlf(text, &a).unwrap();
        assert_eq!(f.depth(), 4);
        let printed = f.render(&a);
        assert_eq!(parse_ltlf(&printed, &a).unwrap(), f);
    }

    #[test]
    fn unknown_atom() {
        let e = parse_ltlf("p & r", &ab()).unwrap_err();
        assert_eq!(e.pos, 4);
    }
}
