use std::fmt::Write as _;
use std::ops::Not;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub u32);

/// A literal: variable index times two, plus one when negated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: Var, positive: bool) -> Self {
        Lit(var.0 * 2 + u32::from(!positive))
    }

    pub fn pos(var: Var) -> Self {
        Lit::new(var, true)
    }

    pub fn var(self) -> Var {
        Var(self.0 / 2)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    /// DIMACS form: 1-based, negative when negated.
    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.var().0) + 1;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }

    pub fn eval(self, model: &[bool]) -> bool {
        model[self.var().0 as usize] == self.is_positive()
    }
}

impl Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        Lit(self.0 ^ 1)
    }
}

/// A literal or a folded constant, the output of gate construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sig {
    Const(bool),
    Lit(Lit),
}

impl Not for Sig {
    type Output = Sig;
    fn not(self) -> Sig {
        match self {
            Sig::Const(b) => Sig::Const(!b),
            Sig::Lit(l) => Sig::Lit(!l),
        }
    }
}

/// Clause database with a literal budget.
#[derive(Clone, Debug)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
    literals: usize,
    budget: usize,
}

impl Cnf {
    pub fn new(budget: usize) -> Self {
        Cnf {
            num_vars: 0,
            clauses: Vec::new(),
            literals: 0,
            budget,
        }
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn num_literals(&self) -> usize {
        self.literals
    }

    pub fn new_var(&mut self) -> Var {
        self.num_vars += 1;
        Var(self.num_vars - 1)
    }

    pub fn fresh(&mut self) -> Lit {
        Lit::pos(self.new_var())
    }

    pub fn add_clause(&mut self, clause: &[Lit]) -> Result<()> {
        self.literals += clause.len();
        if self.literals > self.budget {
            return Err(Error::Resource {
                what: "clause literals",
                limit: self.budget,
                actual: self.literals,
            });
        }
        self.clauses.push(clause.to_vec());
        Ok(())
    }

    /// Adds a clause over signals; constants are simplified away.
    pub fn add_sig_clause(&mut self, clause: &[Sig]) -> Result<()> {
        let mut lits = Vec::with_capacity(clause.len());
        for s in clause {
            match s {
                Sig::Const(true) => return Ok(()),
                Sig::Const(false) => {}
                Sig::Lit(l) => lits.push(*l),
            }
        }
        self.add_clause(&lits)
    }

    pub fn assert(&mut self, s: Sig) -> Result<()> {
        self.add_sig_clause(&[s])
    }

    /// Tseitin conjunction with full equivalence.
    pub fn and(&mut self, inputs: &[Sig]) -> Result<Sig> {
        let mut lits = Vec::with_capacity(inputs.len());
        for s in inputs {
            match s {
                Sig::Const(false) => return Ok(Sig::Const(false)),
                Sig::Const(true) => {}
                Sig::Lit(l) => lits.push(*l),
            }
        }
        lits.sort_unstable();
        lits.dedup();
        if lits.windows(2).any(|w| w[0] == !w[1]) {
            return Ok(Sig::Const(false));
        }
        match lits.len() {
            0 => Ok(Sig::Const(true)),
            1 => Ok(Sig::Lit(lits[0])),
            _ => {
                let g = self.fresh();
                let mut big = Vec::with_capacity(lits.len() + 1);
                big.push(g);
                for &l in &lits {
                    self.add_clause(&[!g, l])?;
                    big.push(!l);
                }
                self.add_clause(&big)?;
                Ok(Sig::Lit(g))
            }
        }
    }

    pub fn or(&mut self, inputs: &[Sig]) -> Result<Sig> {
        let negated: Vec<Sig> = inputs.iter().map(|s| !*s).collect();
        Ok(!self.and(&negated)?)
    }

    /// Signal that is true iff `a` and `b` differ.
    pub fn xor(&mut self, a: Sig, b: Sig) -> Result<Sig> {
        match (a, b) {
            (Sig::Const(x), other) | (other, Sig::Const(x)) => Ok(if x { !other } else { other }),
            (Sig::Lit(x), Sig::Lit(y)) => {
                if x == y {
                    return Ok(Sig::Const(false));
                }
                if x == !y {
                    return Ok(Sig::Const(true));
                }
                let g = self.fresh();
                self.add_clause(&[!g, x, y])?;
                self.add_clause(&[!g, !x, !y])?;
                self.add_clause(&[g, !x, y])?;
                self.add_clause(&[g, x, !y])?;
                Ok(Sig::Lit(g))
            }
        }
    }

    /// DIMACS CNF text for external solvers.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let _ = write!(out, "{} ", l.to_dimacs());
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(model)))
    }
}

pub fn sig_value(s: Sig, model: &[bool]) -> bool {
    match s {
        Sig::Const(b) => b,
        Sig::Lit(l) => l.eval(model),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn literal_encoding() {
        let v = Var(4);
        assert!(Lit::pos(v).is_positive());
        assert_eq!((!Lit::pos(v)).var(), v);
        assert_eq!(Lit::pos(v).to_dimacs(), 5);
        assert_eq!((!Lit::pos(v)).to_dimacs(), -5);
    }

    #[test]
    fn constant_folding() {
        let mut cnf = Cnf::new(100);
        let x = Sig::Lit(cnf.fresh());
        assert_eq!(cnf.and(&[x, Sig::Const(false)]).unwrap(), Sig::Const(false));
        assert_eq!(cnf.and(&[x, Sig::Const(true)]).unwrap(), x);
        assert_eq!(cnf.and(&[x, !x]).unwrap(), Sig::Const(false));
        assert_eq!(cnf.or(&[x, !x]).unwrap(), Sig::Const(true));
        assert_eq!(cnf.clauses().len(), 0);
    }

    #[test]
    fn budget_is_enforced() {
        let mut cnf = Cnf::new(3);
        let a = cnf.fresh();
        let b = cnf.fresh();
        cnf.add_clause(&[a, b]).unwrap();
        assert!(matches!(cnf.add_clause(&[a, b]), Err(Error::Resource { .. })));
    }

    #[test]
    fn dimacs_export() {
        let mut cnf = Cnf::new(100);
        let a = cnf.fresh();
        let b = cnf.fresh();
        cnf.add_clause(&[a, !b]).unwrap();
        cnf.add_clause(&[b]).unwrap();
        assert_eq!(cnf.to_dimacs(), "p cnf 2 2\n1 -2 0\n2 0\n");
    }
}
