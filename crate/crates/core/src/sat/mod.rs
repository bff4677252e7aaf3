//! Propositional layer: CNF construction, decision procedures, cardinality.

mod card;
mod cnf;
mod solver;

pub use card::Totalizer;
pub use cnf::{sig_value, Cnf, Lit, Sig, Var};
pub use solver::{decide_cnf, Backend, BacktrackSolver, BatSolver, SatOutcome, SatSolver};
