use std::process::ExitCode;

use clap::Parser;

use cfplan_cli::{run, Cli, OutputFormat, Verdict};

fn main() -> ExitCode {
    let out = run(&Cli::parse());
    if out.format == OutputFormat::Human && out.report.verdict == Verdict::Error {
        eprint!("{}", out.text);
    } else {
        print!("{}", out.text);
    }
    ExitCode::from(out.exit_code)
}
