//! Grounded classical planning: states, formulas, actions, problems, plans.

mod assignment;
mod formula;
mod problem;
mod search;

pub use assignment::{all_assignments, Assignment};
pub use formula::BoolFormula;
pub use problem::{
    ActionDef, Effect, FluentId, Plan, PlanningProblem, Trace, ValidationError, RESERVED_PREFIX,
};
pub use search::{
    count_models, enumerate_loop_free_plans, models_of, reachable_states, PlanEnumeration,
};
