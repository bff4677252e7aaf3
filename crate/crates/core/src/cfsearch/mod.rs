//! Counterfactual scenarios: minimal edits to the initial state, the goal or
//! the action preconditions under which a specification becomes satisfiable
//! (some plan) or valid (every plan).

mod types;

pub use types::{
    edits_between, toggle_models, Budget, ChangeKind, CounterfactualQuery, CounterfactualResult, Edit, Found,
    Quantifier,
};

mod procedures;

pub use procedures::{check_universal, csep, find_plan, goal_edit_distance};
