use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::encode::Plausibility;
use crate::error::{Error, Result};
use crate::ltlf::Ltlf;
use crate::model::{all_assignments, Assignment, BoolFormula, Plan, PlanningProblem};

/// Which part of the problem may be edited.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChangeKind {
    Init,
    Goal,
    Act,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Quantifier {
    Exists,
    ForAll,
}

impl fmt::Display for ChangeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChangeKind::Init => "init",
            ChangeKind::Goal => "goal",
            ChangeKind::Act => "act",
        })
    }
}

impl fmt::Display for Quantifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Quantifier::Exists => "exists",
            Quantifier::ForAll => "forall",
        })
    }
}

impl FromStr for ChangeKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "init" => Ok(ChangeKind::Init),
            "goal" => Ok(ChangeKind::Goal),
            "act" => Ok(ChangeKind::Act),
            _ => Err(format!("unknown change relation '{s}' (init, goal, act)")),
        }
    }
}

impl FromStr for Quantifier {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "exists" => Ok(Quantifier::Exists),
            "forall" => Ok(Quantifier::ForAll),
            _ => Err(format!("unknown quantifier '{s}' (exists, forall)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Budget {
    /// Inclusive upper bound on the edit cost.
    Max(usize),
    /// Smallest cost up to the configured cap.
    Minimize,
}

#[derive(Clone, Debug)]
pub struct CounterfactualQuery {
    pub problem: PlanningProblem,
    /// Specification over the fluents of `problem`.
    pub spec: Ltlf,
    pub change: ChangeKind,
    pub quantifier: Quantifier,
    pub budget: Budget,
    pub plausibility: Plausibility,
}

/// One elementary edit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Edit {
    /// Initial value of a fluent flipped to `value`.
    FlipInit { fluent: String, value: bool },
    /// A total assignment added to or removed from the goal's models.
    Goal { state: Vec<String>, added: bool },
    /// A total assignment added to or removed from a precondition's models.
    Precondition {
        action: String,
        state: Vec<String>,
        added: bool,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Found {
    pub problem: PlanningProblem,
    pub cost: usize,
    /// A valid plan of `problem` satisfying the specification.
    pub witness: Plan,
    pub edits: Vec<Edit>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CounterfactualResult {
    Found(Found),
    None,
}

impl CounterfactualResult {
    pub fn found(&self) -> Option<&Found> {
        match self {
            CounterfactualResult::Found(f) => Some(f),
            CounterfactualResult::None => None,
        }
    }

    pub fn cost(&self) -> Option<usize> {
        self.found().map(|f| f.cost)
    }
}

/// `base` with the membership of each listed state flipped: states that
/// satisfy `base` are excluded, the others included.
pub fn toggle_models(base: &BoolFormula, states: &[Assignment]) -> BoolFormula {
    let (removed, added): (Vec<&Assignment>, Vec<&Assignment>) =
        states.iter().partition(|s| base.holds(s));
    let mut conj = vec![base.clone()];
    conj.extend(removed.into_iter().map(|s| BoolFormula::not(BoolFormula::minterm(s))));
    let kept = if conj.len() == 1 {
        base.clone()
    } else {
        BoolFormula::And(conj)
    };
    if added.is_empty() {
        return kept;
    }
    let mut disj = vec![kept];
    disj.extend(added.into_iter().map(BoolFormula::minterm));
    BoolFormula::Or(disj)
}

/// The elementary edits turning `before` into `after`: initial-value flips,
/// then goal model changes, then precondition model changes per action, each
/// in lexicographic state order. Both problems must share fluents and action
/// names.
pub fn edits_between(
    before: &PlanningProblem,
    after: &PlanningProblem,
    max_fluents: usize,
) -> Result<Vec<Edit>> {
    let same_actions = before.actions().len() == after.actions().len()
        && before.actions().iter().zip(after.actions()).all(|(a, b)| a.name == b.name);
    if before.fluents() != after.fluents() || !same_actions {
        return Err(Error::Contract("problems differ in fluents or actions".into()));
    }
    let n = before.num_fluents();
    let mut edits: Vec<Edit> = (0..n)
        .filter(|&i| before.init().get(i) != after.init().get(i))
        .map(|i| Edit::FlipInit {
            fluent: before.fluents()[i].clone(),
            value: after.init().get(i),
        })
        .collect();
    let changed = |f: &BoolFormula, g: &BoolFormula| -> Result<Vec<(Vec<String>, bool)>> {
        if f == g {
            return Ok(Vec::new());
        }
        Error::guard("fluents for model comparison", max_fluents, n)?;
        Ok(all_assignments(n)
            .filter(|s| f.holds(s) != g.holds(s))
            .map(|s| (before.describe_state(&s), g.holds(&s)))
            .collect())
    };
    for (state, added) in changed(before.goal(), after.goal())? {
        edits.push(Edit::Goal { state, added });
    }
    for (a, b) in before.actions().iter().zip(after.actions()) {
        for (state, added) in changed(&a.pre, &b.pre)? {
            edits.push(Edit::Precondition {
                action: a.name.clone(),
                state,
                added,
            });
        }
    }
    Ok(edits)
}
