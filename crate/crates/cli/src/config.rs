use cfplan::oracle::OracleGuard;
use cfplan::sat::Backend;
use cfplan::Limits;
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum BackendChoice {
    /// Bounded LTLf satisfiability with the CDCL solver.
    Sat,
    /// Bounded LTLf satisfiability with the plain backtracking solver.
    Backtrack,
    /// Brute-force enumeration.
    ExplicitOracle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    Human,
    Structured,
}

/// Settings for one run; loaded from `--config` and overridden by flags.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub backend: BackendChoice,
    pub bound_override: Option<usize>,
    /// Largest cost tried by `--minimize`.
    pub minimize_cap: usize,
    /// Candidate edit sets per size for the universal precondition search.
    pub max_edit_sets: usize,
    pub guards: OracleGuard,
    pub output_format: OutputFormat,
    /// Seed for `gen` when `--seed` is absent.
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let limits = Limits::default();
        RunConfig {
            backend: BackendChoice::Sat,
            bound_override: None,
            minimize_cap: limits.minimize_cap,
            max_edit_sets: limits.max_edit_sets,
            guards: OracleGuard::default(),
            output_format: OutputFormat::Human,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), String> {
        let g = &self.guards;
        let caps = [
            ("minimize_cap", self.minimize_cap),
            ("max_edit_sets", self.max_edit_sets),
            ("guards.max_fluents", g.max_fluents),
            ("guards.max_states", g.max_states),
            ("guards.max_trace_len", g.max_trace_len),
            ("guards.max_bfs_nodes", g.max_bfs_nodes),
        ];
        for (name, v) in caps {
            if v == 0 {
                return Err(format!("{name} must be positive"));
            }
        }
        if self.bound_override == Some(0) {
            return Err("bound must be positive".into());
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits {
            bound_override: self.bound_override,
            minimize_cap: self.minimize_cap,
            max_edit_sets: self.max_edit_sets,
            backend: match self.backend {
                BackendChoice::Backtrack => Backend::Backtrack,
                _ => Backend::Cdcl,
            },
            ..Limits::default()
        }
    }

    pub fn uses_oracle(&self) -> bool {
        self.backend == BackendChoice::ExplicitOracle
    }
}
