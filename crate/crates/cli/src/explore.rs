use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, ValueEnum};
use gclwb::sync::{check_safety, deadlock_trace, explore as bfs, ring_analysis, ModelSpec, Safety, DEFAULT_CAP};
use serde_json::{json, Value};

use crate::{CmdResult, Report};

#[derive(Debug, Args)]
pub struct ExploreArgs {
    /// `dekker`, `naive[:variant=test-then-set|set-then-test]`,
    /// `semaphore[:n=N]`, `philosophers:n=N[,strategy=symmetric|asymmetric]`
    /// or `ring:n=N,k=K`.
    #[arg(long)]
    model: String,
    /// Property to check; by default every property the model defines.
    #[arg(long, value_enum)]
    check: Option<Check>,
    /// Write the state graph in DOT format.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Maximum number of configurations.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    Mutex,
    Deadlock,
    Stabilization,
}

fn indent(s: &str) -> String {
    s.lines().map(|l| format!("    {l}\n")).collect()
}

pub fn explore(a: &ExploreArgs) -> CmdResult {
    let spec = ModelSpec::parse(&a.model).map_err(|e| e.to_string())?;
    let model = spec.build().map_err(|e| e.to_string())?;
    let checks: Vec<Check> = match a.check {
        Some(Check::Mutex) if model.mutex_violation.is_none() => {
            return Err(format!("model `{}` has no critical sections to check", model.name))
        }
        Some(Check::Stabilization) if model.ring.is_none() => {
            return Err(format!("stabilization applies to ring models, not `{}`", model.name))
        }
        Some(c) => vec![c],
        None => {
            let mut v = Vec::new();
            if model.mutex_violation.is_some() {
                v.push(Check::Mutex);
            }
            v.push(Check::Deadlock);
            if model.ring.is_some() {
                v.push(Check::Stabilization);
            }
            v
        }
    };
    let sys = &model.system;
    let g = bfs(sys, a.cap).map_err(|e| e.to_string())?;
    let mut text = String::new();
    writeln!(text, "model: {}", model.name).unwrap();
    writeln!(text, "configurations: {}", g.vertices.len()).unwrap();
    writeln!(text, "transitions: {}", g.edges.len()).unwrap();
    let mut ok = true;
    let mut results = serde_json::Map::new();
    let trace_json = |t: &gclwb::sync::Trace| {
        json!({
            "labels": t.labels,
            "configs": t.configs.iter().map(|c| sys.show(c)).collect::<Vec<_>>(),
        })
    };
    for check in checks {
        match check {
            Check::Mutex => {
                let bad = model.mutex_violation.as_ref().expect("checked above");
                match check_safety(&g, sys, &**bad) {
                    Safety::NoViolation => {
                        writeln!(text, "mutex: OK").unwrap();
                        results.insert("mutex".into(), json!({ "holds": true }));
                    }
                    Safety::Violation(t) => {
                        ok = false;
                        writeln!(text, "mutex: VIOLATED after {} steps", t.len()).unwrap();
                        text.push_str(&indent(&t.render(sys)));
                        results.insert("mutex".into(), json!({ "holds": false, "trace": trace_json(&t) }));
                    }
                }
            }
            Check::Deadlock => match deadlock_trace(&g, sys, &*model.is_final) {
                None => {
                    writeln!(text, "deadlock: OK").unwrap();
                    results.insert("deadlock".into(), json!({ "holds": true }));
                }
                Some(t) => {
                    ok = false;
                    writeln!(text, "deadlock: FOUND after {} steps", t.len()).unwrap();
                    text.push_str(&indent(&t.render(sys)));
                    results.insert("deadlock".into(), json!({ "holds": false, "trace": trace_json(&t) }));
                }
            },
            Check::Stabilization => {
                let ModelSpec::Ring(n, k) = spec else { unreachable!("ring checked above") };
                let r = ring_analysis(n, k).map_err(|e| e.to_string())?;
                ok &= r.stabilizes();
                let yes = |b: bool| if b { "yes" } else { "no" };
                writeln!(text, "stabilization: {}", if r.stabilizes() { "OK" } else { "FAILED" }).unwrap();
                writeln!(text, "    legitimate configurations: {} of {}", r.legitimate, r.configs).unwrap();
                writeln!(text, "    every configuration privileged: {}", yes(r.always_privileged)).unwrap();
                writeln!(text, "    legitimate set closed: {}", yes(r.closed)).unwrap();
                writeln!(text, "    illegitimate subgraph acyclic: {}", yes(r.illegitimate_acyclic)).unwrap();
                writeln!(text, "    privilege circulates: {}", yes(r.privilege_circulates)).unwrap();
                results.insert(
                    "stabilization".into(),
                    json!({
                        "holds": r.stabilizes(),
                        "configurations": r.configs,
                        "legitimate": r.legitimate,
                        "always_privileged": r.always_privileged,
                        "closed": r.closed,
                        "illegitimate_acyclic": r.illegitimate_acyclic,
                        "privilege_circulates": r.privilege_circulates,
                    }),
                );
            }
        }
    }
    if let Some(path) = &a.dot {
        std::fs::write(path, g.to_dot(sys)).map_err(|e| format!("{}: {e}", path.display()))?;
        writeln!(text, "dot: {}", path.display()).unwrap();
    }
    Ok(Report {
        ok,
        text,
        json: json!({
            "command": "explore",
            "model": model.name,
            "configurations": g.vertices.len(),
            "transitions": g.edges.len(),
            "checks": Value::Object(results),
        }),
    })
}
