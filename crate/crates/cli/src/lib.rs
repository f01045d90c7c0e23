//! The `gclwb` command line. [`run`] returns the exit code and both output
//! streams so the binary and the tests share one code path.
//!
//! Exit codes: 0 when the command succeeds and any checked property holds,
//! 1 when a property is violated, 2 for usage or input errors.

mod demo;
mod explore;
mod prove;
mod verify;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gclwb::exec::{run_all, run_one, State};
use gclwb::lang::parse_program;
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(
    name = "gclwb",
    version,
    about = "Guarded commands, weakest preconditions, calculational proofs and the concurrency classics"
)]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Seed for every random choice.
    #[arg(long, global = true, env = "GCLWB_SEED", default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Execute a program from an initial state.
    Run(RunArgs),
    /// Check the verification conditions of an annotated program.
    Verify(verify::VerifyArgs),
    /// Check a calculational proof.
    Prove(prove::ProveArgs),
    /// Explore the state space of a concurrency model.
    Explore(explore::ExploreArgs),
    /// Classic algorithms and puzzles.
    #[command(subcommand)]
    Demo(demo::Demo),
}

#[derive(Debug, Args)]
struct RunArgs {
    file: PathBuf,
    /// Initial values, e.g. `x=12,y=18`.
    #[arg(long, default_value = "")]
    init: String,
    /// Enumerate every resolution of nondeterministic choice.
    #[arg(long)]
    all: bool,
    /// Maximum statements executed per path.
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
}

/// What a command produced.
pub(crate) struct Report {
    pub ok: bool,
    pub text: String,
    pub json: Value,
}

pub(crate) type CmdResult = Result<Report, String>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Output { code: 2, stdout: String::new(), stderr: text }
            } else {
                Output { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let result = match &cli.command {
        Command::Run(a) => run_program(a, cli.seed),
        Command::Verify(a) => verify::verify(a),
        Command::Prove(a) => prove::prove(a),
        Command::Explore(a) => explore::explore(a),
        Command::Demo(d) => demo::demo(d, cli.seed),
    };
    match result {
        Ok(report) => {
            let stdout = if cli.json {
                let mut v = report.json;
                if let Value::Object(m) = &mut v {
                    m.insert("ok".into(), Value::Bool(report.ok));
                }
                serde_json::to_string_pretty(&v).expect("json") + "\n"
            } else {
                report.text
            };
            Output { code: if report.ok { 0 } else { 1 }, stdout, stderr: String::new() }
        }
        Err(msg) => {
            let stdout = if cli.json {
                serde_json::to_string_pretty(&json!({ "error": msg })).unwrap() + "\n"
            } else {
                String::new()
            };
            Output { code: 2, stdout, stderr: format!("error: {msg}\n") }
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn run_program(a: &RunArgs, seed: u64) -> CmdResult {
    let src = read(&a.file)?;
    let p = parse_program(&src).map_err(|e| format!("{}: {e}", a.file.display()))?;
    let s0 = State::parse(&a.init)?;
    let outcomes: Vec<_> = if a.all {
        run_all(&p, &s0, a.budget).map_err(|e| e.to_string())?.into_iter().collect()
    } else {
        vec![run_one(&p, &s0, seed, a.budget).map_err(|e| e.to_string())?]
    };
    let mut lines: Vec<String> = outcomes.iter().map(|o| o.to_string()).collect();
    lines.sort();
    let mut text = String::new();
    for l in &lines {
        writeln!(text, "{l}").unwrap();
    }
    Ok(Report {
        ok: outcomes.iter().all(|o| o.is_terminated()),
        text,
        json: json!({
            "command": "run",
            "mode": if a.all { "all" } else { "one" },
            "seed": seed,
            "budget": a.budget,
            "outcomes": lines,
        }),
    })
}
