//! Planning problems as LTLf formulas over fluents followed by actions.
//!
//! Proposition `i < |F|` is fluent `i`; proposition `|F| + j` is action `j`.

use std::collections::BTreeMap;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::ltlf::{Alphabet, Ltlf};
use crate::model::{
    reachable_states, ActionDef, Assignment, BoolFormula, Effect, FluentId, Plan, PlanningProblem,
    Trace, RESERVED_PREFIX,
};
use crate::syntax::{self, ParseError, Syntax};

/// Suffix appended to relaxed copies of actions.
pub const RELAX_SUFFIX: &str = "__relaxed";

/// Prefix of the fluent recording that an action was just applied.
pub const MARKER_PREFIX: &str = "__marker_";

#[derive(Clone, Debug)]
pub struct EncodedProblem {
    pub formula: Ltlf,
    pub alphabet: Alphabet,
    pub num_fluents: usize,
    pub num_actions: usize,
    action_names: Vec<String>,
}

impl EncodedProblem {
    pub fn num_props(&self) -> usize {
        self.num_fluents + self.num_actions
    }

    pub fn action_prop(&self, action: usize) -> usize {
        self.num_fluents + action
    }

    /// Formula conjoined with `extra`, e.g. a specification.
    pub fn with(&self, extra: Ltlf) -> Ltlf {
        Ltlf::and(vec![self.formula.clone(), extra])
    }
}

/// The formula `[P]`: its models of length `n + 1` are exactly the
/// executable action sequences of length `n` from the initial state.
pub fn encode(p: &PlanningProblem) -> EncodedProblem {
    let nf = p.num_fluents();
    let na = p.actions().len();
    let act = |j: usize| Ltlf::atom(nf + j);
    let mut alphabet = Alphabet::new(p.fluents().iter().cloned());
    for a in p.actions() {
        alphabet.push(a.name.clone());
    }

    let init = Ltlf::and((0..nf).map(|f| Ltlf::literal(f, p.init().get(f))).collect());

    let mut step = Vec::new();
    // no action at the last position, exactly one elsewhere
    step.push(Ltlf::implies(
        Ltlf::last(),
        Ltlf::and((0..na).map(|j| Ltlf::not(act(j))).collect()),
    ));
    step.push(Ltlf::implies(
        Ltlf::next(Ltlf::True),
        Ltlf::or((0..na).map(act).collect()),
    ));
    for j in 0..na {
        for k in j + 1..na {
            step.push(Ltlf::not(Ltlf::And(vec![act(j), act(k)])));
        }
    }
    for (j, a) in p.actions().iter().enumerate() {
        let effects = a
            .eff
            .iter()
            .map(|e| Ltlf::next(Ltlf::literal(e.fluent.0, e.value)));
        let mut then = vec![Ltlf::from_bool(&a.pre)];
        then.extend(effects);
        step.push(Ltlf::implies(act(j), Ltlf::and(then)));
    }
    let mut frame = Vec::new();
    for f in 0..nf {
        for value in [true, false] {
            // f changes to `value` only through an action with that effect
            let causes: Vec<Ltlf> = p
                .actions()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.effect_on(FluentId(f)) == Some(value))
                .map(|(j, _)| act(j))
                .collect();
            frame.push(Ltlf::implies(
                Ltlf::And(vec![
                    Ltlf::literal(f, !value),
                    Ltlf::next(Ltlf::literal(f, value)),
                ]),
                Ltlf::or(causes),
            ));
        }
    }
    step.push(Ltlf::implies(Ltlf::next(Ltlf::True), Ltlf::and(frame)));

    EncodedProblem {
        formula: Ltlf::and(vec![init, Ltlf::globally(Ltlf::and(step))]),
        alphabet,
        num_fluents: nf,
        num_actions: na,
        action_names: p.actions().iter().map(|a| a.name.clone()).collect(),
    }
}

/// `[P]_gamma`: `[P]` whose last state satisfies `gamma`.
pub fn encode_with_goal(p: &PlanningProblem, gamma: &BoolFormula) -> EncodedProblem {
    let mut e = encode(p);
    e.formula = e.with(reaches(gamma));
    e
}

/// `F(WX false & gamma)`.
pub fn reaches(gamma: &BoolFormula) -> Ltlf {
    Ltlf::eventually(Ltlf::And(vec![Ltlf::last(), Ltlf::from_bool(gamma)]))
}

/// Reads the plan and fluent trace off a model of an encoding.
pub fn extract_plan(e: &EncodedProblem, model: &Trace) -> Result<(Plan, Trace)> {
    let n = model.len();
    let mut plan = Vec::with_capacity(n - 1);
    for (i, s) in model.states().iter().enumerate() {
        if s.len() != e.num_props() {
            return Err(Error::structural(format!(
                "model state has {} propositions, encoding has {}",
                s.len(),
                e.num_props()
            )));
        }
        let used: Vec<usize> = (0..e.num_actions)
            .filter(|&j| s.get(e.action_prop(j)))
            .collect();
        match (used.as_slice(), i + 1 == n) {
            ([], true) => {}
            ([j], false) => plan.push(e.action_names[*j].clone()),
            _ => {
                return Err(Error::structural(format!(
                    "position {i} of the model carries {} actions",
                    used.len()
                )))
            }
        }
    }
    Ok((Plan(plan), model.project(e.num_fluents)))
}

/// `P` extended with a copy of every action whose precondition is `true`.
#[derive(Clone, Debug)]
pub struct RelaxedProblem {
    pub problem: PlanningProblem,
    /// Weight per proposition of `encode(&problem)`: 1 for relaxed actions.
    pub weights: Vec<u64>,
    /// Original action index for each relaxed action, in order.
    pub relax_map: Vec<usize>,
}

impl RelaxedProblem {
    /// Original action index if `action` (an index in the relaxed problem)
    /// is a relaxed copy.
    pub fn original_of(&self, action: usize) -> Option<usize> {
        let n = self.relax_map.len();
        (action >= n).then(|| self.relax_map[action - n])
    }
}

pub fn relax(p: &PlanningProblem) -> Result<RelaxedProblem> {
    let mut actions = p.actions().to_vec();
    for a in p.actions() {
        let name = format!("{}{RELAX_SUFFIX}", a.name);
        if p.action(&name).is_some() || p.fluent(&name).is_some() {
            return Err(Error::structural(format!(
                "relaxed action name '{name}' is already declared"
            )));
        }
        actions.push(ActionDef::new(name, BoolFormula::True, a.eff.clone())?);
    }
    let na = p.actions().len();
    let mut weights = vec![0; p.num_fluents() + na];
    weights.extend(std::iter::repeat(1).take(na));
    Ok(RelaxedProblem {
        problem: p.with_actions(actions)?,
        weights,
        relax_map: (0..na).collect(),
    })
}

/// Restrictions on which edits are acceptable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Plausibility {
    pub init: Option<BoolFormula>,
    pub goal: Option<BoolFormula>,
    /// Condition on the state in which the named action is applied.
    pub act: BTreeMap<String, BoolFormula>,
}

impl Plausibility {
    pub fn is_empty(&self) -> bool {
        self.init.is_none() && self.goal.is_none() && self.act.is_empty()
    }
}

/// Folds the plausibility constraints into the specification.
///
/// Returns `psi'` and a problem with one marker fluent per constrained action,
/// appended after the original fluents. The marker of `a` is initially false,
/// set by `a` and cleared by every other action.
pub fn inject_plausibility(
    psi: &Ltlf,
    c: &Plausibility,
    p: &PlanningProblem,
) -> Result<(Ltlf, PlanningProblem)> {
    let nf = p.num_fluents();
    let check = |what: &str, f: &BoolFormula| {
        if f.max_atom().map_or(false, |m| m >= nf) {
            Err(Error::structural(format!("{what} mentions an undeclared fluent")))
        } else {
            Ok(())
        }
    };
    let mut parts = vec![psi.clone()];
    if let Some(init) = &c.init {
        check("initial-state constraint", init)?;
        parts.push(Ltlf::from_bool(init));
    }
    if let Some(goal) = &c.goal {
        check("goal constraint", goal)?;
        parts.push(reaches(goal));
    }
    if c.act.is_empty() {
        return Ok((Ltlf::and(parts), p.clone()));
    }

    let mut fluents = p.fluents().to_vec();
    let mut marker_of = BTreeMap::new();
    for (name, cond) in &c.act {
        check(&format!("constraint on '{name}'"), cond)?;
        let Some(j) = p.action_id(name) else {
            return Err(Error::structural(format!(
                "constraint on undeclared action '{name}'"
            )));
        };
        let marker = format!("{MARKER_PREFIX}{name}");
        if p.fluent(&marker).is_some() {
            return Err(Error::structural(format!("fluent '{marker}' is reserved")));
        }
        marker_of.insert(j, fluents.len());
        fluents.push(marker);
        parts.push(Ltlf::globally(Ltlf::implies(
            Ltlf::next(Ltlf::atom(fluents.len() - 1)),
            Ltlf::from_bool(cond),
        )));
    }
    let actions = p
        .actions()
        .iter()
        .enumerate()
        .map(|(j, a)| {
            let mut eff = a.eff.clone();
            for (&k, &m) in &marker_of {
                eff.push(Effect {
                    fluent: FluentId(m),
                    value: j == k,
                });
            }
            ActionDef::new(a.name.clone(), a.pre.clone(), eff)
        })
        .collect::<Result<Vec<_>>>()?;
    let marked = PlanningProblem::new(
        fluents,
        actions,
        p.init().extended(marker_of.len()),
        p.goal().clone(),
    )?;
    Ok((Ltlf::and(parts), marked))
}

/// Sound trace-length bound for loop-free plans: one more than the number of
/// reachable states. An explicit override in `limits` is used verbatim.
pub fn default_bound(p: &PlanningProblem, limits: &Limits) -> Result<usize> {
    if let Some(b) = limits.bound_override {
        return Ok(b.max(1));
    }
    let reach = reachable_states(p, limits.max_exhaustive_fluents)?.len();
    let cap = 1usize
        .checked_shl(p.num_fluents() as u32)
        .unwrap_or(usize::MAX);
    let bound = reach.min(cap) + 1;
    Error::guard("trace bound", limits.max_bound, bound)?;
    Ok(bound)
}

/// Parses a specification over the fluents of `p`. Action names and
/// generated names are rejected.
pub fn parse_spec(text: &str, p: &PlanningProblem) -> Result<Ltlf, ParseError> {
    let syn = syntax::parse(text)?;
    check_atoms(&syn, p)?;
    Ltlf::from_syntax(&syn, &Alphabet::new(p.fluents().iter().cloned()))
}

fn check_atoms(s: &Syntax, p: &PlanningProblem) -> Result<(), ParseError> {
    match s {
        Syntax::Atom { name, pos } => {
            if p.fluent(name).is_none() && p.action(name).is_some() {
                return Err(ParseError {
                    pos: *pos,
                    message: format!("'{name}' is an action; specifications range over fluents"),
                });
            }
            if name.starts_with(RESERVED_PREFIX) {
                return Err(ParseError {
                    pos: *pos,
                    message: format!("'{name}' uses the reserved prefix '{RESERVED_PREFIX}'"),
                });
            }
            Ok(())
        }
        _ => s.children().into_iter().try_for_each(|c| check_atoms(c, p)),
    }
}

/// Minterm over the first `len` fluents of `s`.
pub fn minterm_prefix(s: &Assignment, len: usize) -> BoolFormula {
    BoolFormula::minterm(&s.prefix(len))
}
