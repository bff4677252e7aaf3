use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::{Assignment, FluentId};
use crate::syntax::{self, ParseError, Syntax};

/// Propositional formula over the fluents of a problem.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolFormula {
    True,
    False,
    Atom(FluentId),
    Not(Box<BoolFormula>),
    And(Vec<BoolFormula>),
    Or(Vec<BoolFormula>),
    Implies(Box<BoolFormula>, Box<BoolFormula>),
}

impl BoolFormula {
    pub fn atom(i: usize) -> Self {
        BoolFormula::Atom(FluentId(i))
    }

    pub fn not(f: BoolFormula) -> Self {
        BoolFormula::Not(Box::new(f))
    }

    pub fn implies(a: BoolFormula, b: BoolFormula) -> Self {
        BoolFormula::Implies(Box::new(a), Box::new(b))
    }

    pub fn literal(i: usize, value: bool) -> Self {
        if value {
            Self::atom(i)
        } else {
            Self::not(Self::atom(i))
        }
    }

    /// Conjunction of the literals that pin down `s` exactly.
    pub fn minterm(s: &Assignment) -> Self {
        BoolFormula::And((0..s.len()).map(|i| Self::literal(i, s.get(i))).collect())
    }

    /// Truth value under `s`. Fails if an atom is outside `s`.
    pub fn eval(&self, s: &Assignment) -> Result<bool> {
        if let Some(max) = self.max_atom() {
            if max >= s.len() {
                return Err(Error::structural(format!(
                    "formula mentions fluent #{max} but the assignment covers {} fluents",
                    s.len()
                )));
            }
        }
        Ok(self.holds(s))
    }

    /// Truth value under `s`; atoms must be covered.
    pub fn holds(&self, s: &Assignment) -> bool {
        match self {
            BoolFormula::True => true,
            BoolFormula::False => false,
            BoolFormula::Atom(f) => s.get(f.0),
            BoolFormula::Not(a) => !a.holds(s),
            BoolFormula::And(xs) => xs.iter().all(|x| x.holds(s)),
            BoolFormula::Or(xs) => xs.iter().any(|x| x.holds(s)),
            BoolFormula::Implies(a, b) => !a.holds(s) || b.holds(s),
        }
    }

    pub fn max_atom(&self) -> Option<usize> {
        match self {
            BoolFormula::True | BoolFormula::False => None,
            BoolFormula::Atom(f) => Some(f.0),
            BoolFormula::Not(a) => a.max_atom(),
            BoolFormula::And(xs) | BoolFormula::Or(xs) => xs.iter().filter_map(|x| x.max_atom()).max(),
            BoolFormula::Implies(a, b) => a.max_atom().max(b.max_atom()),
        }
    }

    pub fn atoms(&self, out: &mut Vec<FluentId>) {
        match self {
            BoolFormula::True | BoolFormula::False => {}
            BoolFormula::Atom(f) => out.push(*f),
            BoolFormula::Not(a) => a.atoms(out),
            BoolFormula::And(xs) | BoolFormula::Or(xs) => xs.iter().for_each(|x| x.atoms(out)),
            BoolFormula::Implies(a, b) => {
                a.atoms(out);
                b.atoms(out);
            }
        }
    }

    /// Parses the propositional fragment of the shared grammar.
    pub fn parse(text: &str, fluents: &HashMap<String, FluentId>) -> Result<Self, ParseError> {
        let syn = syntax::parse(text)?;
        Self::from_syntax(&syn, fluents)
    }

    pub fn from_syntax(syn: &Syntax, fluents: &HashMap<String, FluentId>) -> Result<Self, ParseError> {
        let rec = |s: &Syntax| Self::from_syntax(s, fluents);
        Ok(match syn {
            Syntax::True => BoolFormula::True,
            Syntax::False => BoolFormula::False,
            Syntax::Atom { name, pos } => match fluents.get(name) {
                Some(f) => BoolFormula::Atom(*f),
                None => {
                    return Err(ParseError {
                        pos: *pos,
                        message: format!("unknown fluent '{name}'"),
                    })
                }
            },
            Syntax::Not(a) => BoolFormula::not(rec(a)?),
            Syntax::And(xs) => BoolFormula::And(xs.iter().map(rec).collect::<Result<_, _>>()?),
            Syntax::Or(xs) => BoolFormula::Or(xs.iter().map(rec).collect::<Result<_, _>>()?),
            Syntax::Implies(a, b) => BoolFormula::implies(rec(a)?, rec(b)?),
            Syntax::Next(_, pos)
            | Syntax::WeakNext(_, pos)
            | Syntax::Until(_, _, pos)
            | Syntax::Eventually(_, pos)
            | Syntax::Globally(_, pos) => {
                return Err(ParseError {
                    pos: *pos,
                    message: "temporal operator in a propositional formula".into(),
                })
            }
        })
    }

    pub fn to_syntax(&self, names: &[String]) -> Syntax {
        let rec = |f: &BoolFormula| f.to_syntax(names);
        match self {
            BoolFormula::True => Syntax::True,
            BoolFormula::False => Syntax::False,
            BoolFormula::Atom(f) => Syntax::atom(names[f.0].clone()),
            BoolFormula::Not(a) => Syntax::Not(Box::new(rec(a))),
            BoolFormula::And(xs) => Syntax::And(xs.iter().map(rec).collect()),
            BoolFormula::Or(xs) => Syntax::Or(xs.iter().map(rec).collect()),
            BoolFormula::Implies(a, b) => Syntax::Implies(Box::new(rec(a)), Box::new(rec(b))),
        }
    }

    /// Renders the formula in the shared grammar.
    pub fn render(&self, names: &[String]) -> String {
        self.to_syntax(names).to_string()
    }
}
