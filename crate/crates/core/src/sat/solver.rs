use batsat::{lbool, BasicSolver, SolverInterface};
use serde::{Deserialize, Serialize};

use crate::sat::{Cnf, Lit};

/// Outcome of a propositional query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SatOutcome {
    /// Satisfying assignment indexed by variable.
    Sat(Vec<bool>),
    Unsat,
}

impl SatOutcome {
    pub fn model(&self) -> Option<&[bool]> {
        match self {
            SatOutcome::Sat(m) => Some(m),
            SatOutcome::Unsat => None,
        }
    }
}

/// A propositional decision procedure that can be queried repeatedly under
/// different assumptions.
pub trait SatSolver {
    /// Loads the clauses of `cnf` not seen by a previous call. The same
    /// (growing) instance must be passed every time.
    fn load(&mut self, cnf: &Cnf);
    fn solve(&mut self, assumptions: &[Lit]) -> SatOutcome;
}

/// Conflict-driven solver backed by `batsat`.
pub struct BatSolver {
    inner: BasicSolver,
    num_vars: u32,
    loaded: usize,
}

impl Default for BatSolver {
    fn default() -> Self {
        BatSolver {
            inner: BasicSolver::default(),
            num_vars: 0,
            loaded: 0,
        }
    }
}

impl BatSolver {
    fn lit(&self, l: Lit) -> batsat::Lit {
        let var = batsat::Var::unsafe_from_idx(l.var().0);
        batsat::Lit::new(var, l.is_positive())
    }
}

impl SatSolver for BatSolver {
    fn load(&mut self, cnf: &Cnf) {
        while self.num_vars < cnf.num_vars() {
            self.inner.new_var_default();
            self.num_vars += 1;
        }
        let mut buf = Vec::new();
        for c in &cnf.clauses()[self.loaded..] {
            buf.clear();
            buf.extend(c.iter().map(|&l| self.lit(l)));
            self.inner.add_clause_reuse(&mut buf);
        }
        self.loaded = cnf.clauses().len();
    }

    fn solve(&mut self, assumptions: &[Lit]) -> SatOutcome {
        let assumps: Vec<batsat::Lit> = assumptions.iter().map(|&l| self.lit(l)).collect();
        let r = self.inner.solve_limited(&assumps);
        if r == lbool::TRUE {
            let model = self.inner.get_model();
            SatOutcome::Sat(
                (0..self.num_vars as usize)
                    .map(|i| model.get(i).map_or(false, |v| *v == lbool::TRUE))
                    .collect(),
            )
        } else {
            SatOutcome::Unsat
        }
    }
}

/// Plain recursive DPLL with unit propagation. Slow; used to cross-check
/// the main backend on small instances.
#[derive(Default)]
pub struct BacktrackSolver {
    num_vars: u32,
    clauses: Vec<Vec<Lit>>,
}

impl SatSolver for BacktrackSolver {
    fn load(&mut self, cnf: &Cnf) {
        self.num_vars = self.num_vars.max(cnf.num_vars());
        let seen = self.clauses.len();
        self.clauses.extend(cnf.clauses()[seen..].iter().cloned());
    }

    fn solve(&mut self, assumptions: &[Lit]) -> SatOutcome {
        let mut assign: Vec<Option<bool>> = vec![None; self.num_vars as usize];
        for &a in assumptions {
            match assign[a.var().0 as usize] {
                Some(v) if v != a.is_positive() => return SatOutcome::Unsat,
                _ => assign[a.var().0 as usize] = Some(a.is_positive()),
            }
        }
        if dpll(&self.clauses, &mut assign) {
            SatOutcome::Sat(assign.into_iter().map(|v| v.unwrap_or(false)).collect())
        } else {
            SatOutcome::Unsat
        }
    }
}

fn dpll(clauses: &[Vec<Lit>], assign: &mut Vec<Option<bool>>) -> bool {
    let mut trail = Vec::new();
    // unit propagation to fixpoint
    loop {
        let mut changed = false;
        for c in clauses {
            let mut unassigned = None;
            let mut open = 0;
            let mut sat = false;
            for &l in c {
                match assign[l.var().0 as usize] {
                    Some(v) if v == l.is_positive() => {
                        sat = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open += 1;
                        unassigned = Some(l);
                    }
                }
            }
            if sat {
                continue;
            }
            match (open, unassigned) {
                (0, _) => {
                    undo(assign, &trail);
                    return false;
                }
                (1, Some(l)) => {
                    assign[l.var().0 as usize] = Some(l.is_positive());
                    trail.push(l.var().0 as usize);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    let Some(v) = assign.iter().position(Option::is_none) else {
        return true;
    };
    for value in [true, false] {
        assign[v] = Some(value);
        if dpll(clauses, assign) {
            return true;
        }
        assign[v] = None;
    }
    undo(assign, &trail);
    false
}

fn undo(assign: &mut [Option<bool>], trail: &[usize]) {
    for &v in trail {
        assign[v] = None;
    }
}

/// Which decision procedure to instantiate.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    #[default]
    Cdcl,
    Backtrack,
}

impl Backend {
    pub fn make(self) -> Box<dyn SatSolver> {
        match self {
            Backend::Cdcl => Box::<BatSolver>::default(),
            Backend::Backtrack => Box::<BacktrackSolver>::default(),
        }
    }
}

/// Decides `cnf` with the default backend.
pub fn decide_cnf(cnf: &Cnf) -> SatOutcome {
    let mut s = BatSolver::default();
    s.load(cnf);
    s.solve(&[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sat::Var;

    fn pigeonhole(pigeons: u32, holes: u32) -> Cnf {
        let mut cnf = Cnf::new(1_000_000);
        let x = |p: u32, h: u32| Lit::pos(Var(p * holes + h));
        for _ in 0..pigeons * holes {
            cnf.new_var();
        }
        for p in 0..pigeons {
            let c: Vec<Lit> = (0..holes).map(|h| x(p, h)).collect();
            cnf.add_clause(&c).unwrap();
        }
        for h in 0..holes {
            for p in 0..pigeons {
                for q in p + 1..pigeons {
                    cnf.add_clause(&[!x(p, h), !x(q, h)]).unwrap();
                }
            }
        }
        cnf
    }

    #[test]
    fn unit_clause() {
        let mut cnf = Cnf::new(10);
        let x = cnf.fresh();
        cnf.add_clause(&[x]).unwrap();
        assert_eq!(decide_cnf(&cnf), SatOutcome::Sat(vec![true]));
    }

    #[test]
    fn contradiction() {
        let mut cnf = Cnf::new(10);
        let x = cnf.fresh();
        cnf.add_clause(&[x]).unwrap();
        cnf.add_clause(&[!x]).unwrap();
        assert_eq!(decide_cnf(&cnf), SatOutcome::Unsat);
    }

    #[test]
    fn pigeonhole_three_into_two() {
        let cnf = pigeonhole(3, 2);
        assert_eq!(decide_cnf(&cnf), SatOutcome::Unsat);
        let mut bt = BacktrackSolver::default();
        bt.load(&cnf);
        assert_eq!(bt.solve(&[]), SatOutcome::Unsat);
        assert!(decide_cnf(&pigeonhole(2, 2)).model().is_some());
    }

    #[test]
    fn assumptions_are_respected() {
        let mut cnf = Cnf::new(100);
        let a = cnf.fresh();
        let b = cnf.fresh();
        cnf.add_clause(&[a, b]).unwrap();
        let mut s = BatSolver::default();
        s.load(&cnf);
        assert_eq!(s.solve(&[!a, !b]), SatOutcome::Unsat);
        let m = s.solve(&[!a]);
        assert_eq!(m, SatOutcome::Sat(vec![false, true]));
    }
}
