use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use gclwb::lang::parse_program;
use gclwb::wp::{check_vc, complete_domain, verify_program, CheckDomain, Verdict, DEFAULT_CAP};
use serde_json::json;

use crate::{read, CmdResult, Report};

#[derive(Debug, Args)]
pub struct VerifyArgs {
    file: PathBuf,
    /// Ranges of the program variables, e.g. `x=1..20,y=1..20`. Logical
    /// variables default to the range of their lowercase counterpart.
    #[arg(long)]
    domain: String,
    /// Print each verification condition.
    #[arg(long)]
    emit_vcs: bool,
    /// Maximum number of assignments checked per condition.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let src = read(&a.file)?;
    let p = parse_program(&src).map_err(|e| format!("{}: {e}", a.file.display()))?;
    let vcs = verify_program(&p).map_err(|e| e.to_string())?;
    let dom = CheckDomain::parse(&a.domain).map_err(|e| e.to_string())?.with_cap(a.cap);
    let dom = complete_domain(&vcs, &dom).map_err(|e| e.to_string())?;
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut passed = 0;
    for vc in &vcs {
        let verdict = check_vc(vc, &dom).map_err(|e| format!("{}: {e}", vc.label()))?;
        match &verdict {
            Verdict::Valid => {
                passed += 1;
                writeln!(text, "VC {}: OK", vc.label()).unwrap();
            }
            Verdict::Counterexample(_) => writeln!(text, "VC {}: FAIL at {verdict}", vc.label()).unwrap(),
        }
        if a.emit_vcs {
            writeln!(text, "    {}", vc.formula).unwrap();
        }
        let cex = match &verdict {
            Verdict::Valid => serde_json::Value::Null,
            Verdict::Counterexample(m) => json!(m),
        };
        rows.push(json!({
            "label": vc.label(),
            "formula": vc.formula.to_string(),
            "valid": verdict.is_valid(),
            "counterexample": cex,
        }));
    }
    writeln!(text, "{passed}/{} verification conditions valid on {dom}", vcs.len()).unwrap();
    Ok(Report {
        ok: passed == vcs.len(),
        text,
        json: json!({ "command": "verify", "domain": dom.to_string(), "vcs": rows }),
    })
}
