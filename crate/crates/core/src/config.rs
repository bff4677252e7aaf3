use serde::{Deserialize, Serialize};

use crate::sat::Backend;

/// Resource limits shared by every exhaustive or SAT-backed operation.
///
/// Exceeding a limit is reported as [`crate::Error::Resource`]; nothing is
/// silently truncated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Maximum fluent count for operations that enumerate all `2^|F|` states.
    pub max_exhaustive_fluents: usize,
    /// Largest trace bound the planner side may request without an override.
    pub max_bound: usize,
    /// Explicit bound used instead of the sound reachability bound.
    pub bound_override: Option<usize>,
    /// Maximum number of literals in a single propositional instance.
    pub clause_budget: usize,
    /// Highest budget tried when minimising.
    pub minimize_cap: usize,
    /// Maximum number of candidate edit sets of one size for the universal
    /// precondition procedure.
    pub max_edit_sets: usize,
    pub backend: Backend,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_exhaustive_fluents: 20,
            max_bound: 256,
            bound_override: None,
            clause_budget: 10_000_000,
            minimize_cap: 8,
            max_edit_sets: 50_000,
            backend: Backend::Cdcl,
        }
    }
}

impl Limits {
    pub fn with_bound(mut self, bound: usize) -> Self {
        self.bound_override = Some(bound);
        self
    }
}
