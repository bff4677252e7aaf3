use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::model::{Assignment, BoolFormula};

/// Dense index of a fluent within its problem.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FluentId(pub usize);

/// Prefix reserved for generated names (marker fluents, relaxed actions).
pub const RESERVED_PREFIX: &str = "__";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Effect {
    pub fluent: FluentId,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionDef {
    pub name: String,
    pub pre: BoolFormula,
    /// Sorted by fluent, at most one entry per fluent.
    pub eff: Vec<Effect>,
}

impl ActionDef {
    pub fn new(name: impl Into<String>, pre: BoolFormula, eff: Vec<Effect>) -> Result<Self> {
        let name = name.into();
        let mut eff = eff;
        eff.sort();
        if let Some(w) = eff.windows(2).find(|w| w[0].fluent == w[1].fluent) {
            return Err(Error::structural(format!(
                "action '{name}' has more than one effect on fluent #{}",
                w[0].fluent.0
            )));
        }
        Ok(ActionDef { name, pre, eff })
    }

    pub fn applicable(&self, s: &Assignment) -> bool {
        self.pre.holds(s)
    }

    /// Successor state; the action must be applicable.
    pub fn successor(&self, s: &Assignment) -> Result<Assignment> {
        if !self.applicable(s) {
            return Err(Error::Contract(format!(
                "action '{}' is not applicable in {s:?}",
                self.name
            )));
        }
        Ok(self.apply(s))
    }

    /// Applies the effects without checking the precondition.
    pub fn apply(&self, s: &Assignment) -> Assignment {
        let mut next = s.clone();
        for e in &self.eff {
            next.set(e.fluent.0, e.value);
        }
        next
    }

    pub fn effect_on(&self, f: FluentId) -> Option<bool> {
        self.eff
            .binary_search_by_key(&f, |e| e.fluent)
            .ok()
            .map(|i| self.eff[i].value)
    }
}

/// A grounded planning problem `<F, A, I, G>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanningProblem {
    fluents: Vec<String>,
    actions: Vec<ActionDef>,
    init: Assignment,
    goal: BoolFormula,
    fluent_index: HashMap<String, FluentId>,
    action_index: HashMap<String, usize>,
}

impl PlanningProblem {
    pub fn new(
        fluents: Vec<String>,
        actions: Vec<ActionDef>,
        init: Assignment,
        goal: BoolFormula,
    ) -> Result<Self> {
        let mut fluent_index = HashMap::new();
        for (i, name) in fluents.iter().enumerate() {
            if fluent_index.insert(name.clone(), FluentId(i)).is_some() {
                return Err(Error::structural(format!("duplicate fluent '{name}'")));
            }
        }
        let mut action_index = HashMap::new();
        for (i, a) in actions.iter().enumerate() {
            if action_index.insert(a.name.clone(), i).is_some() {
                return Err(Error::structural(format!("duplicate action '{}'", a.name)));
            }
            if fluent_index.contains_key(&a.name) {
                return Err(Error::structural(format!(
                    "action '{}' has the same name as a fluent",
                    a.name
                )));
            }
            let in_range = a.pre.max_atom().map_or(true, |m| m < fluents.len())
                && a.eff.iter().all(|e| e.fluent.0 < fluents.len());
            if !in_range {
                return Err(Error::structural(format!(
                    "action '{}' references an undeclared fluent",
                    a.name
                )));
            }
        }
        if init.len() != fluents.len() {
            return Err(Error::structural(format!(
                "initial state covers {} fluents, problem declares {}",
                init.len(),
                fluents.len()
            )));
        }
        if goal.max_atom().map_or(false, |m| m >= fluents.len()) {
            return Err(Error::structural("goal references an undeclared fluent"));
        }
        Ok(PlanningProblem {
            fluents,
            actions,
            init,
            goal,
            fluent_index,
            action_index,
        })
    }

    pub fn fluents(&self) -> &[String] {
        &self.fluents
    }

    pub fn num_fluents(&self) -> usize {
        self.fluents.len()
    }

    pub fn actions(&self) -> &[ActionDef] {
        &self.actions
    }

    pub fn init(&self) -> &Assignment {
        &self.init
    }

    pub fn goal(&self) -> &BoolFormula {
        &self.goal
    }

    pub fn fluent_index(&self) -> &HashMap<String, FluentId> {
        &self.fluent_index
    }

    pub fn fluent(&self, name: &str) -> Option<FluentId> {
        self.fluent_index.get(name).copied()
    }

    pub fn action(&self, name: &str) -> Option<&ActionDef> {
        self.action_index.get(name).map(|&i| &self.actions[i])
    }

    pub fn action_id(&self, name: &str) -> Option<usize> {
        self.action_index.get(name).copied()
    }

    pub fn with_init(&self, init: Assignment) -> Result<Self> {
        Self::new(self.fluents.clone(), self.actions.clone(), init, self.goal.clone())
    }

    pub fn with_goal(&self, goal: BoolFormula) -> Result<Self> {
        Self::new(self.fluents.clone(), self.actions.clone(), self.init.clone(), goal)
    }

    pub fn with_actions(&self, actions: Vec<ActionDef>) -> Result<Self> {
        Self::new(self.fluents.clone(), actions, self.init.clone(), self.goal.clone())
    }

    /// Runs `plan` from the initial state. See [`ValidationError`] for the
    /// failure cases.
    pub fn validate_plan(&self, plan: &Plan) -> Result<Trace, ValidationError> {
        let mut states = vec![self.init.clone()];
        for (step, name) in plan.0.iter().enumerate() {
            let action = self.action(name).ok_or_else(|| ValidationError::UnknownAction {
                step,
                name: name.clone(),
            })?;
            let s = states.last().unwrap();
            if !action.applicable(s) {
                return Err(ValidationError::NotApplicable {
                    step,
                    action: name.clone(),
                });
            }
            let next = action.apply(s);
            states.push(next);
        }
        if !self.goal.holds(states.last().unwrap()) {
            return Err(ValidationError::GoalNotReached);
        }
        Ok(Trace::new(states).expect("non-empty by construction"))
    }

    /// Renders `s` as the list of true fluent names.
    pub fn describe_state(&self, s: &Assignment) -> Vec<String> {
        s.true_indices().map(|i| self.fluents[i].clone()).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("step {step}: unknown action '{name}'")]
    UnknownAction { step: usize, name: String },
    #[error("step {step}: action '{action}' is not applicable")]
    NotApplicable { step: usize, action: String },
    #[error("final state does not satisfy the goal")]
    GoalNotReached,
}

/// A sequential plan as a sequence of action names.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Plan(pub Vec<String>);

impl Plan {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for Plan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0.join(", "))
    }
}

/// A non-empty finite sequence of states.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Trace(Vec<Assignment>);

impl Trace {
    pub fn new(states: Vec<Assignment>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::structural("a trace needs at least one state"));
        }
        Ok(Trace(states))
    }

    pub fn states(&self) -> &[Assignment] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn last(&self) -> &Assignment {
        self.0.last().unwrap()
    }

    /// True if no state occurs twice.
    pub fn is_loop_free(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.0.iter().all(|s| seen.insert(s))
    }

    /// Restricts every state to its first `len` propositions.
    pub fn project(&self, len: usize) -> Trace {
        Trace(self.0.iter().map(|s| s.prefix(len)).collect())
    }
}
