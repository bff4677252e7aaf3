//! File formats: problems, plans, plausibility constraints and traces.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::encode::Plausibility;
use crate::error::{Error, Result};
use crate::model::{
    ActionDef, Assignment, BoolFormula, Effect, FluentId, Plan, PlanningProblem, Trace, RESERVED_PREFIX,
};
use crate::syntax::normalize_atom;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub fluents: Vec<String>,
    pub actions: Vec<ActionFile>,
    /// Fluents that are initially true.
    pub init: Vec<String>,
    pub goal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub name: String,
    #[serde(default = "true_text")]
    pub pre: String,
    #[serde(default)]
    pub eff: Vec<EffectFile>,
}

fn true_text() -> String {
    "true".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EffectFile {
    pub fluent: String,
    pub value: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlausibilityFile {
    #[serde(default)]
    pub init: Option<String>,
    #[serde(default)]
    pub goal: Option<String>,
    #[serde(default)]
    pub act: BTreeMap<String, String>,
}

fn json_error(what: &str, e: serde_json::Error) -> Error {
    Error::structural(format!("{what}: {e}"))
}

fn name(raw: &str, what: &str) -> Result<String> {
    let n = normalize_atom(raw)?;
    if n.starts_with(RESERVED_PREFIX) {
        return Err(Error::structural(format!(
            "{what} '{n}' uses the reserved prefix '{RESERVED_PREFIX}'"
        )));
    }
    Ok(n)
}

fn context<T>(r: Result<T>, what: &str) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse(mut p) => {
            p.message = format!("{what}: {}", p.message);
            Error::Parse(p)
        }
        other => other,
    })
}

impl ProblemFile {
    pub fn into_problem(self) -> Result<PlanningProblem> {
        let fluents = self
            .fluents
            .iter()
            .map(|f| name(f, "fluent"))
            .collect::<Result<Vec<_>>>()?;
        let index: HashMap<String, FluentId> = fluents
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), FluentId(i)))
            .collect();
        let fluent = |raw: &str| -> Result<FluentId> {
            let n = normalize_atom(raw)?;
            index
                .get(&n)
                .copied()
                .ok_or_else(|| Error::structural(format!("unknown fluent '{n}'")))
        };
        let mut actions = Vec::with_capacity(self.actions.len());
        for a in &self.actions {
            let aname = name(&a.name, "action")?;
            let pre = context(
                BoolFormula::parse(&a.pre, &index).map_err(Error::from),
                &format!("precondition of '{aname}'"),
            )?;
            let eff = a
                .eff
                .iter()
                .map(|e| {
                    Ok(Effect {
                        fluent: fluent(&e.fluent)?,
                        value: e.value,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            actions.push(ActionDef::new(aname, pre, eff)?);
        }
        let mut init = Assignment::all_false(fluents.len());
        for f in &self.init {
            init.set(fluent(f)?.0, true);
        }
        let goal = context(
            BoolFormula::parse(&self.goal, &index).map_err(Error::from),
            "goal",
        )?;
        PlanningProblem::new(fluents, actions, init, goal)
    }

    pub fn from_problem(p: &PlanningProblem) -> Self {
        let names = p.fluents();
        ProblemFile {
            fluents: names.to_vec(),
            actions: p
                .actions()
                .iter()
                .map(|a| ActionFile {
                    name: a.name.clone(),
                    pre: a.pre.render(names),
                    eff: a
                        .eff
                        .iter()
                        .map(|e| EffectFile {
                            fluent: names[e.fluent.0].clone(),
                            value: e.value,
                        })
                        .collect(),
                })
                .collect(),
            init: p.init().true_indices().map(|i| names[i].clone()).collect(),
            goal: p.goal().render(names),
        }
    }
}

pub fn parse_problem(text: &str) -> Result<PlanningProblem> {
    let file: ProblemFile = serde_json::from_str(text).map_err(|e| json_error("problem", e))?;
    file.into_problem()
}

pub fn write_problem(p: &PlanningProblem) -> String {
    let mut s = serde_json::to_string_pretty(&ProblemFile::from_problem(p))
        .expect("problem files always serialise");
    s.push('\n');
    s
}

/// A plan is either a JSON array of action names or one name per line
/// (blank lines and `#` comments ignored).
pub fn parse_plan(text: &str, p: &PlanningProblem) -> Result<Plan> {
    let raw: Vec<String> = if text.trim_start().starts_with('[') {
        serde_json::from_str(text).map_err(|e| json_error("plan", e))?
    } else {
        text.lines()
            .map(|l| l.split('#').next().unwrap_or("").trim())
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect()
    };
    let names = raw
        .iter()
        .map(|r| normalize_atom(r.trim()).map_err(Error::from))
        .collect::<Result<Vec<_>>>()?;
    for (i, n) in names.iter().enumerate() {
        if p.action(n).is_none() {
            return Err(Error::structural(format!("step {i}: unknown action '{n}'")));
        }
    }
    Ok(Plan(names))
}

pub fn parse_plausibility(text: &str, p: &PlanningProblem) -> Result<Plausibility> {
    let file: PlausibilityFile =
        serde_json::from_str(text).map_err(|e| json_error("plausibility", e))?;
    let index = p.fluent_index();
    let parse = |t: &str, what: &str| context(BoolFormula::parse(t, index).map_err(Error::from), what);
    let mut out = Plausibility {
        init: file.init.as_deref().map(|t| parse(t, "init constraint")).transpose()?,
        goal: file.goal.as_deref().map(|t| parse(t, "goal constraint")).transpose()?,
        act: BTreeMap::new(),
    };
    for (a, t) in &file.act {
        let n = normalize_atom(a)?;
        if p.action(&n).is_none() {
            return Err(Error::structural(format!("constraint on unknown action '{n}'")));
        }
        out.act.insert(n.clone(), parse(t, &format!("constraint on '{n}'"))?);
    }
    Ok(out)
}

/// A trace is a JSON array of states, each the array of true fluents.
pub fn parse_trace(text: &str, p: &PlanningProblem) -> Result<Trace> {
    let raw: Vec<Vec<String>> = serde_json::from_str(text).map_err(|e| json_error("trace", e))?;
    let mut states = Vec::with_capacity(raw.len());
    for (i, st) in raw.iter().enumerate() {
        let mut s = Assignment::all_false(p.num_fluents());
        for f in st {
            let n = normalize_atom(f)?;
            let id = p
                .fluent(&n)
                .ok_or_else(|| Error::structural(format!("state {i}: unknown fluent '{n}'")))?;
            s.set(id.0, true);
        }
        states.push(s);
    }
    Trace::new(states)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TINY: &str = r#"{
        "fluents": ["at(robot,a)", "at(robot,b)"],
        "actions": [
            {"name": "move(a,b)", "pre": "at(robot,a)",
             "eff": [{"fluent": "at(robot,a)", "value": false},
                     {"fluent": "at_robot_b", "value": true}]}
        ],
        "init": ["at(robot,a)"],
        "goal": "at(robot,b)"
    }"#;

    #[test]
    fn parse_and_round_trip() {
        let p = parse_problem(TINY).unwrap();
        assert_eq!(p.fluents(), ["at_robot_a", "at_robot_b"]);
        let again = parse_problem(&write_problem(&p)).unwrap();
        assert_eq!(again, p);
    }

    #[test]
    fn plans_in_both_forms() {
        let p = parse_problem(TINY).unwrap();
        let a = parse_plan("move(a,b)\n# done\n", &p).unwrap();
        let b = parse_plan(r#"["move_a_b"]"#, &p).unwrap();
        assert_eq!(a, b);
        assert!(p.validate_plan(&a).is_ok());
        assert!(parse_plan("jump", &p).is_err());
    }

    #[test]
    fn bad_goal_reports_position() {
        let bad = TINY.replace(r#""goal": "at(robot,b)""#, r#""goal": "at(robot,b) &""#);
        match parse_problem(&bad) {
            Err(Error::Parse(e)) => assert_eq!(e.pos, 13),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn reserved_names_rejected() {
        let bad = TINY.replace("\"at(robot,b)\"]", "\"at(robot,b)\", \"__x\"]");
        assert!(parse_problem(&bad).is_err());
    }
}
