use std::collections::BTreeMap;
use std::fmt::Write;

use cfplan::cfsearch::Edit;
use cfplan::io::ProblemFile;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    WellFormed,
    Valid,
    Invalid,
    Yes,
    No,
    Found,
    None,
    /// The oracle ran out of work before reaching an answer.
    Unknown,
    Generated,
    Error,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::WellFormed | Verdict::Valid | Verdict::Yes | Verdict::Found | Verdict::Generated => 0,
            Verdict::Invalid | Verdict::No | Verdict::None => 1,
            Verdict::Unknown | Verdict::Error => 2,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timings {
    /// Propositional solver invocations; deterministic.
    pub solver_calls: u64,
    /// Only with `--wall-clock`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub kind: String,
    pub message: String,
    /// Byte offset into the offending text, for parse errors.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

/// The single document produced by every command.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diff: Option<Vec<Edit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Vec<String>>,
    /// States of the witness (or validated plan) as lists of true fluents.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Vec<String>>>,
    /// Modified (`explain`) or generated (`gen`) problem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub problem: Option<ProblemFile>,
    /// Model sets of the edited goal or preconditions, for small problems.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub models: Option<BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorReport>,
    pub timings: Timings,
}

impl Report {
    pub fn new(command: &str, verdict: Verdict) -> Self {
        Report {
            command: command.into(),
            verdict,
            cost: None,
            diff: None,
            witness: None,
            counterexample: None,
            trace: None,
            problem: None,
            models: None,
            formula: None,
            message: None,
            error: None,
            timings: Timings::default(),
        }
    }

    pub fn with_message(mut self, m: impl Into<String>) -> Self {
        self.message = Some(m.into());
        self
    }

    pub fn structured(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialise");
        s.push('\n');
        s
    }

    pub fn human(&self) -> String {
        let mut out = String::new();
        let headline = match self.verdict {
            Verdict::WellFormed => "well-formed",
            Verdict::Valid => "valid",
            Verdict::Invalid => "invalid",
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Found => "counterfactual found",
            Verdict::None => "no counterfactual",
            Verdict::Unknown => "unknown",
            Verdict::Generated => "generated",
            Verdict::Error => "error",
        };
        match self.cost {
            Some(c) => writeln!(out, "{headline} (cost {c})").unwrap(),
            None => writeln!(out, "{headline}").unwrap(),
        }
        if let Some(m) = &self.message {
            writeln!(out, "{m}").unwrap();
        }
        if let Some(e) = &self.error {
            match e.position {
                Some(p) => writeln!(out, "{} error at position {p}: {}", e.kind, e.message).unwrap(),
                None => writeln!(out, "{} error: {}", e.kind, e.message).unwrap(),
            }
        }
        if let Some(f) = &self.formula {
            writeln!(out, "formula: {f}").unwrap();
        }
        if let Some(diff) = &self.diff {
            writeln!(out, "changes:").unwrap();
            for e in diff {
                writeln!(out, "  {}", describe(e)).unwrap();
            }
        }
        if let Some(w) = &self.witness {
            plan(&mut out, "plan", w);
        }
        if let Some(w) = &self.counterexample {
            plan(&mut out, "counterexample", w);
        }
        if let Some(t) = &self.trace {
            writeln!(out, "trace:").unwrap();
            for (i, s) in t.iter().enumerate() {
                writeln!(out, "  {i}: {{{}}}", s.join(", ")).unwrap();
            }
        }
        if let Some(models) = &self.models {
            for (what, ms) in models {
                writeln!(out, "models of {what}:").unwrap();
                for m in ms {
                    writeln!(out, "  {{{}}}", m.join(", ")).unwrap();
                }
            }
        }
        // modified problems are long; they are in the structured output and --emit
        if let (Some(p), Verdict::Generated) = (&self.problem, self.verdict) {
            writeln!(out, "problem:").unwrap();
            out.push_str(&serde_json::to_string_pretty(p).expect("problem files always serialise"));
            out.push('\n');
        }
        out
    }
}

fn plan(out: &mut String, label: &str, steps: &[String]) {
    writeln!(out, "{label} ({} steps):", steps.len()).unwrap();
    for (i, a) in steps.iter().enumerate() {
        writeln!(out, "  {}. {a}", i + 1).unwrap();
    }
}

fn describe(e: &Edit) -> String {
    let sign = |added: bool| if added { "+" } else { "-" };
    match e {
        Edit::FlipInit { fluent, value } => format!("init: {fluent} := {value}"),
        Edit::Goal { state, added } => format!("goal: {} {{{}}}", sign(*added), state.join(", ")),
        Edit::Precondition { action, state, added } => {
            format!("pre({action}): {} {{{}}}", sign(*added), state.join(", "))
        }
    }
}
