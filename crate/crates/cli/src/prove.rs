use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use gclwb::calc::{check_chain, parse_proof, StepStatus};
use gclwb::wp::CheckDomain;
use serde_json::json;

use crate::{read, CmdResult, Report};

#[derive(Debug, Args)]
pub struct ProveArgs {
    file: PathBuf,
    /// Ranges for checking steps whose hints are not mechanized, e.g.
    /// `a=-5..5,b=-5..5`.
    #[arg(long)]
    domain: Option<String>,
}

fn status_json(s: &StepStatus) -> serde_json::Value {
    match s {
        StepStatus::ValidByNormalization => json!({ "status": "valid-by-normalization" }),
        StepStatus::ValidOnDomain => json!({ "status": "valid-on-domain" }),
        StepStatus::Invalid { assignment, lhs, rhs } => json!({
            "status": "invalid",
            "counterexample": assignment,
            "lhs": lhs.to_string(),
            "rhs": rhs.to_string(),
        }),
        StepStatus::Unchecked(why) => json!({ "status": "unchecked", "reason": why }),
        StepStatus::Rejected(why) => json!({ "status": "rejected", "reason": why }),
    }
}

pub fn prove(a: &ProveArgs) -> CmdResult {
    let src = read(&a.file)?;
    let chain = parse_proof(&src).map_err(|e| format!("{}: {e}", a.file.display()))?;
    let dom = a.domain.as_deref().map(CheckDomain::parse).transpose().map_err(|e| e.to_string())?;
    let verdict = check_chain(&chain, dom.as_ref());

    let hints: Vec<String> = chain.steps.iter().map(|s| format!("{{ {} }}", s.hint)).collect();
    let width = hints.iter().map(|h| h.len()).max().unwrap_or(0);
    let mut text = String::new();
    let mut rows = Vec::new();
    for (v, (step, hint)) in verdict.steps.iter().zip(chain.steps.iter().zip(&hints)) {
        writeln!(text, "step {}  {:<3} {hint:<width$}  {}", v.index + 1, step.relation.symbol(), v.status).unwrap();
        let mut row = status_json(&v.status);
        row["step"] = json!(v.index + 1);
        row["relation"] = json!(step.relation.symbol());
        row["hint"] = json!(step.hint);
        rows.push(row);
    }
    let rel = verdict.relation.map(|r| r.symbol());
    match rel {
        Some(r) => writeln!(text, "conclusion: {} {r} {}", chain.first(), chain.last()).unwrap(),
        None => writeln!(text, "conclusion: none (the step relations do not compose)").unwrap(),
    }
    if let Some(c) = chain.claim {
        writeln!(text, "claim: {}", c.symbol()).unwrap();
    }
    writeln!(text, "overall: {}", if verdict.valid { "valid" } else { "invalid" }).unwrap();
    Ok(Report {
        ok: verdict.valid,
        text,
        json: json!({
            "command": "prove",
            "steps": rows,
            "relation": rel,
            "claim": chain.claim.map(|c| c.symbol()),
            "first": chain.first().to_string(),
            "last": chain.last().to_string(),
            "valid": verdict.valid,
        }),
    })
}
