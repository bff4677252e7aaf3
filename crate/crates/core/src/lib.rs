//! Counterfactual scenarios for grounded classical planning.
//!
//! Given a planning problem and an LTLf specification over its fluents, the
//! [`cfsearch`] procedures find minimal edits to the initial state, the goal
//! or the action preconditions such that the edited problem admits at least
//! one plan satisfying the specification (existential), or such that every
//! loop-free plan satisfies it (universal).
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: grounded problems, states, plan validation and enumeration.
//! - [`syntax`]: the textual formula grammar shared by goals, preconditions
//!   and temporal specifications.
//! - [`sat`]: CNF construction, the propositional decision procedure and
//!   cardinality constraints.
//! - [`ltlf`]: LTLf evaluation, negation normal form, bounded satisfiability
//!   and weighted minimal models.
//! - [`encode`]: planning problems as LTLf formulas over actions and fluents.
//! - [`cfsearch`]: the six counterfactual procedures and the budgeted driver.
//! - [`oracle`]: brute-force reference implementations used for validation.

pub mod cfsearch;
pub mod config;
pub mod encode;
pub mod error;
pub mod gen;
pub mod io;
pub mod ltlf;
pub mod model;
pub mod oracle;
pub mod sat;
pub mod syntax;

pub use config::Limits;
pub use error::{Error, Result};
