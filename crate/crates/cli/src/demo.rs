use std::cmp::Ordering;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::Subcommand;
use gclwb::classics::{
    angle_excess, fair_bit, fair_roulette, knight_tour, parse_points, pythagoras_signs, river_crossing,
    shortest_paths_from, sylvester_line, BankerState, BankerVerdict, BiasedCoin, Draw, Graph, KnightTour, Request,
    SylvesterLine, Triangle,
};
use gclwb::sync::{minimal_stabilizing_k, ring_analysis};
use serde_json::json;

use crate::{read, CmdResult, Report};

#[derive(Debug, Subcommand)]
pub enum Demo {
    /// Shortest paths from a source in a TSV graph.
    Sssp {
        graph: PathBuf,
        #[arg(long)]
        source: String,
    },
    /// Safety of a single-currency bank, optionally with a loan request.
    Banker {
        #[arg(long)]
        capital: u64,
        #[arg(long, value_delimiter = ',')]
        loans: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        claims: Vec<u64>,
        /// `customer:amount`, customers numbered from 0.
        #[arg(long)]
        request: Option<String>,
    },
    /// Fair bits from a biased coin.
    FairBit {
        #[arg(long, default_value_t = 0.3)]
        bias: f64,
        #[arg(long, default_value_t = 1000)]
        draws: u64,
        /// Fixed tosses such as `HHTH` instead of a seeded coin.
        #[arg(long)]
        tape: Option<String>,
    },
    /// Uniform outcomes in 0..n from a biased coin.
    Roulette {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.3)]
        bias: f64,
        #[arg(long, default_value_t = 1000)]
        draws: u64,
        /// Fixed tosses such as `HTH` instead of a seeded coin.
        #[arg(long)]
        tape: Option<String>,
    },
    /// Signs of a² + b² - c² and α + β - γ.
    Pythagoras {
        /// `a,b,c`.
        #[arg(long, value_delimiter = ',', conflicts_with = "file")]
        sides: Option<Vec<f64>>,
        /// One triangle per line, sides separated by commas or whitespace.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// An ordinary line of a point set, or the verdict that it is collinear.
    Sylvester { points: PathBuf },
    /// A knight's tour of an n×n board.
    Knight {
        #[arg(long)]
        n: usize,
    },
    /// The wolf, goat and cabbage crossing.
    River,
    /// Smallest K for which the n-machine ring stabilizes.
    RingK {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        max_k: usize,
    },
}

pub fn demo(d: &Demo, seed: u64) -> CmdResult {
    match d {
        Demo::Sssp { graph, source } => sssp(graph, source),
        Demo::Banker { capital, loans, claims, request } => banker(*capital, loans, claims, request.as_deref()),
        Demo::FairBit { bias, draws, tape } => coin_demo(2, *bias, *draws, tape.as_deref(), seed, true),
        Demo::Roulette { n, bias, draws, tape } => coin_demo(*n, *bias, *draws, tape.as_deref(), seed, false),
        Demo::Pythagoras { sides, file } => pythagoras(sides.as_deref(), file.as_ref()),
        Demo::Sylvester { points } => sylvester(points),
        Demo::Knight { n } => knight(*n),
        Demo::River => river(),
        Demo::RingK { n, max_k } => ring_k(*n, *max_k),
    }
}

fn sssp(path: &Path, source: &str) -> CmdResult {
    let g = Graph::parse_tsv(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let sp = shortest_paths_from(&g, source).map_err(|e| e.to_string())?;
    let mut text = String::new();
    let mut rows = Vec::new();
    for v in 0..g.len() {
        let name = &g.names[v];
        match (&sp.dist[v], sp.path(v)) {
            (Some(d), Some(path)) => {
                let route: Vec<&str> = path.iter().map(|&u| g.names[u].as_str()).collect();
                writeln!(text, "{name}\t{d}\t{}", route.join(" -> ")).unwrap();
                rows.push(json!({ "vertex": name, "distance": d.to_string(), "path": route }));
            }
            _ => {
                writeln!(text, "{name}\tunreachable").unwrap();
                rows.push(json!({ "vertex": name, "distance": null, "path": null }));
            }
        }
    }
    Ok(Report { ok: true, text, json: json!({ "command": "sssp", "source": source, "vertices": rows }) })
}

fn banker(capital: u64, loans: &[u64], claims: &[u64], request: Option<&str>) -> CmdResult {
    let b = BankerState::new(capital, loans.to_vec(), claims.to_vec()).map_err(|e| e.to_string())?;
    let mut text = String::new();
    writeln!(text, "capital {capital}, cash {}, loans {loans:?}, claims {claims:?}", b.cash()).unwrap();
    let verdict = b.is_safe();
    let order = match &verdict {
        BankerVerdict::Safe(order) => {
            writeln!(text, "safe: customers can finish in order {order:?}").unwrap();
            Some(order.clone())
        }
        BankerVerdict::Unsafe => {
            writeln!(text, "unsafe: no order lets every customer finish").unwrap();
            None
        }
    };
    let mut ok = verdict.is_safe();
    let mut req_json = serde_json::Value::Null;
    if let Some(r) = request {
        let (c, amt) = r
            .split_once(':')
            .and_then(|(c, a)| Some((c.trim().parse::<usize>().ok()?, a.trim().parse::<u64>().ok()?)))
            .ok_or_else(|| format!("request must be `customer:amount`, got `{r}`"))?;
        let granted = match b.request(c, amt).map_err(|e| e.to_string())? {
            Request::Granted(next) => {
                writeln!(text, "request {c}:{amt}: granted, loans now {:?}", next.loans()).unwrap();
                true
            }
            Request::Deferred => {
                writeln!(text, "request {c}:{amt}: deferred, granting it would leave the bank unsafe").unwrap();
                false
            }
        };
        ok = granted;
        req_json = json!({ "customer": c, "amount": amt, "granted": granted });
    }
    Ok(Report {
        ok,
        text,
        json: json!({
            "command": "banker",
            "capital": capital,
            "cash": b.cash(),
            "safe": verdict.is_safe(),
            "order": order,
            "request": req_json,
        }),
    })
}

fn coin_demo(n: usize, bias: f64, draws: u64, tape: Option<&str>, seed: u64, bit: bool) -> CmdResult {
    let name = if bit { "fair-bit" } else { "roulette" };
    let draw = |coin: &mut BiasedCoin| if bit { fair_bit(coin) } else { fair_roulette(n, coin) };
    if let Some(t) = tape {
        let mut coin = BiasedCoin::parse_tape(t).map_err(|e| e.to_string())?;
        let Draw { value, tosses } = draw(&mut coin).map_err(|e| e.to_string())?;
        return Ok(Report {
            ok: true,
            text: format!("outcome {value} after {tosses} tosses\n"),
            json: json!({ "command": name, "n": n, "outcome": value, "tosses": tosses }),
        });
    }
    let mut coin = BiasedCoin::seeded(bias, seed).map_err(|e| e.to_string())?;
    if n == 0 {
        return Err("roulette needs at least one outcome".into());
    }
    let mut counts = vec![0u64; n];
    for _ in 0..draws {
        counts[draw(&mut coin).map_err(|e| e.to_string())?.value] += 1;
    }
    let expected = draws as f64 / n as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let mean = if draws == 0 { 0.0 } else { coin.consumed() as f64 / draws as f64 };
    let mut text = String::new();
    writeln!(text, "{draws} draws, bias {bias}, seed {seed}").unwrap();
    for (k, c) in counts.iter().enumerate() {
        writeln!(text, "  {k}: {c}").unwrap();
    }
    writeln!(text, "tosses per draw: {mean:.4}").unwrap();
    writeln!(text, "chi-square: {chi2:.4} ({} degrees of freedom)", n.saturating_sub(1)).unwrap();
    Ok(Report {
        ok: true,
        text,
        json: json!({
            "command": name,
            "n": n,
            "bias": bias,
            "draws": draws,
            "seed": seed,
            "counts": counts,
            "tosses": coin.consumed(),
            "chi_square": chi2,
        }),
    })
}

fn sign(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "-",
        Ordering::Equal => "0",
        Ordering::Greater => "+",
    }
}

fn pythagoras(sides: Option<&[f64]>, file: Option<&PathBuf>) -> CmdResult {
    let triples: Vec<Vec<f64>> = match (sides, file) {
        (Some(s), _) => vec![s.to_vec()],
        (None, Some(path)) => read(path)?
            .lines()
            .filter(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .map(|l| {
                l.split(|c: char| c == ',' || c.is_whitespace())
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<f64>().map_err(|_| format!("bad side length `{s}`")))
                    .collect()
            })
            .collect::<Result<_, _>>()?,
        (None, None) => return Err("give --sides a,b,c or --file".into()),
    };
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut ok = true;
    for s in &triples {
        let [a, b, c] = s[..] else { return Err(format!("a triangle needs three sides, got {}", s.len())) };
        let t = Triangle::new(a, b, c).map_err(|e| e.to_string())?;
        let (side, angle) = pythagoras_signs(&t);
        ok &= side == angle;
        let (q, e) = (a * a + b * b - c * c, angle_excess(&t));
        writeln!(text, "{a} {b} {c}: a²+b²-c² = {q} ({}), α+β-γ = {e:.12} ({})", sign(side), sign(angle)).unwrap();
        rows.push(
            json!({ "sides": [a, b, c], "side_sign": sign(side), "angle_sign": sign(angle), "agree": side == angle }),
        );
    }
    Ok(Report { ok, text, json: json!({ "command": "pythagoras", "triangles": rows }) })
}

fn sylvester(path: &Path) -> CmdResult {
    let ps = parse_points(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))?;
    let v = sylvester_line(&ps).map_err(|e| e.to_string())?;
    let (text, j) = match v {
        SylvesterLine::Collinear => ("all points are collinear\n".to_string(), json!({ "collinear": true })),
        SylvesterLine::Ordinary(p, q) => (
            format!("ordinary line through {p} and {q}\n"),
            json!({ "collinear": false, "line": [[p.x, p.y], [q.x, q.y]] }),
        ),
    };
    let mut json = j;
    json["command"] = json!("sylvester");
    json["points"] = json!(ps.len());
    Ok(Report { ok: true, text, json })
}

fn knight(n: usize) -> CmdResult {
    match knight_tour(n).map_err(|e| e.to_string())? {
        KnightTour::Tour(t) => {
            let mut board = vec![0; n * n];
            for (i, &(r, c)) in t.iter().enumerate() {
                board[r * n + c] = i + 1;
            }
            let mut text = format!("tour of the {n}x{n} board:\n");
            for row in board.chunks(n) {
                let cells: Vec<String> = row.iter().map(|k| format!("{k:>3}")).collect();
                writeln!(text, "{}", cells.join("")).unwrap();
            }
            Ok(Report { ok: true, text, json: json!({ "command": "knight", "n": n, "tour": t }) })
        }
        KnightTour::NoTour => Ok(Report {
            ok: false,
            text: format!("no knight's tour of the {n}x{n} board\n"),
            json: json!({ "command": "knight", "n": n, "tour": null }),
        }),
    }
}

fn river() -> CmdResult {
    let plan = river_crossing();
    let mut text = String::new();
    let mut far = false;
    let mut steps = Vec::new();
    for (i, m) in plan.iter().enumerate() {
        let dir = if far { "back" } else { "over" };
        let what = m.map_or("alone".to_string(), |it| format!("with the {it}"));
        writeln!(text, "{}. farmer rows {dir} {what}", i + 1).unwrap();
        steps.push(m.map(|it| it.to_string()));
        far = !far;
    }
    writeln!(text, "{} crossings", plan.len()).unwrap();
    Ok(Report { ok: true, text, json: json!({ "command": "river", "plan": steps }) })
}

fn ring_k(n: usize, max_k: usize) -> CmdResult {
    let mut text = String::new();
    let mut rows = Vec::new();
    for k in 2..=max_k {
        let r = ring_analysis(n, k).map_err(|e| e.to_string())?;
        writeln!(text, "n={n} K={k}: {}", if r.stabilizes() { "stabilizes" } else { "does not stabilize" }).unwrap();
        rows.push(json!({ "k": k, "stabilizes": r.stabilizes() }));
    }
    let min = minimal_stabilizing_k(n, max_k).map_err(|e| e.to_string())?;
    match min {
        Some(k) => writeln!(text, "smallest stabilizing K: {k}").unwrap(),
        None => writeln!(text, "no K up to {max_k} stabilizes").unwrap(),
    }
    Ok(Report {
        ok: min.is_some(),
        text,
        json: json!({ "command": "ring-k", "n": n, "results": rows, "minimal_k": min }),
    })
}
