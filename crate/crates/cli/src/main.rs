//! `bbverify`: runs the checker suite over a list of field orders and
//! writes a JSON, CSV or text report.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::process::ExitCode;

use bbgeom::FieldTower;
use bbgeom_suite::{checker_ids, run_suite, CheckRecord, Mode, Status, SuiteConfig};
use clap::{Parser, ValueEnum};
use serde::Serialize;

const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Parser, Debug)]
#[command(name = "bbverify", version, about = "Check Bruck–Bose results over small finite fields")]
struct Args {
    /// Comma-separated field orders.
    #[arg(long, default_value = "3,4,5")]
    q: String,
    /// Override the quadratic extension polynomial x² − t1·x − t0, as
    /// `q:t1,t0` with F_q element codes. Repeatable.
    #[arg(long = "primpoly", value_name = "Q:T1,T0")]
    primpoly: Vec<String>,
    /// `all` or comma-separated checker ids.
    #[arg(long, default_value = "all")]
    suite: String,
    /// `exhaustive`, `sampled` or `auto`, optionally followed by
    /// `,id=mode` entries that override it per checker.
    #[arg(long, default_value = "auto")]
    mode: String,
    /// Instances per checker in sampled mode.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Record wall-clock times (the report is then no longer reproducible).
    #[arg(long)]
    timing: bool,
    /// List the checker ids and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    q: &'a [u32],
    primpoly: BTreeMap<u32, (u32, u32)>,
    suite: &'a [String],
    mode: Mode,
    mode_overrides: BTreeMap<&'a str, Mode>,
    samples: usize,
    seed: u64,
    timing: bool,
}

#[derive(Serialize)]
struct Report<'a> {
    version: u32,
    config: ConfigEcho<'a>,
    records: &'a [CheckRecord],
}

struct Plan {
    qs: Vec<u32>,
    towers: Vec<FieldTower>,
    primpoly: BTreeMap<u32, (u32, u32)>,
    ids: Vec<String>,
    mode: Mode,
    overrides: Vec<(String, Mode)>,
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',').map(|x| x.trim().parse().map_err(|_| format!("invalid {what} `{x}`"))).collect()
}

fn parse_mode(s: &str, n: usize, seed: u64) -> Result<Mode, String> {
    match s {
        "exhaustive" => Ok(Mode::Exhaustive),
        "sampled" => Ok(Mode::Sampled { n, seed }),
        "auto" => Ok(Mode::Auto { n, seed }),
        other => Err(format!("unknown mode `{other}` (expected exhaustive, sampled or auto)")),
    }
}

fn plan(args: &Args) -> Result<Plan, String> {
    let qs: Vec<u32> = parse_list(&args.q, "q")?;
    let mut primpoly = BTreeMap::new();
    for entry in &args.primpoly {
        let (q, pair) = entry.split_once(':').ok_or_else(|| format!("invalid --primpoly `{entry}` (expected q:t1,t0)"))?;
        let q: u32 = q.trim().parse().map_err(|_| format!("invalid --primpoly `{entry}`"))?;
        let pair: Vec<u32> = parse_list(pair, "--primpoly coefficient")?;
        let [t1, t0] = pair[..] else { return Err(format!("invalid --primpoly `{entry}` (expected q:t1,t0)")) };
        primpoly.insert(q, (t1, t0));
    }
    let towers = qs
        .iter()
        .map(|&q| FieldTower::with_override(q, primpoly.get(&q).copied()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    let known = checker_ids();
    let ids: Vec<String> = if args.suite == "all" {
        known.iter().map(|s| s.to_string()).collect()
    } else {
        args.suite.split(',').map(|s| s.trim().to_string()).collect()
    };
    if let Some(bad) = ids.iter().find(|id| !known.contains(&id.as_str())) {
        return Err(format!("unknown checker `{bad}`"));
    }
    let mut parts = args.mode.split(',');
    let mode = parse_mode(parts.next().unwrap_or("auto").trim(), args.samples, args.seed)?;
    let mut overrides = Vec::new();
    for part in parts {
        let (id, m) = part.split_once('=').ok_or_else(|| format!("invalid mode override `{part}` (expected id=mode)"))?;
        if !known.contains(&id.trim()) {
            return Err(format!("unknown checker `{}`", id.trim()));
        }
        overrides.push((id.trim().to_string(), parse_mode(m.trim(), args.samples, args.seed)?));
    }
    Ok(Plan { qs, towers, primpoly, ids, mode, overrides })
}

fn render_json(args: &Args, plan: &Plan, records: &[CheckRecord]) -> String {
    let report = Report {
        version: REPORT_VERSION,
        config: ConfigEcho {
            q: &plan.qs,
            primpoly: plan.primpoly.clone(),
            suite: &plan.ids,
            mode: plan.mode,
            mode_overrides: plan.overrides.iter().map(|(id, m)| (id.as_str(), *m)).collect(),
            samples: args.samples,
            seed: args.seed,
            timing: args.timing,
        },
        records,
    };
    let mut s = serde_json::to_string_pretty(&report).expect("report serialises");
    s.push('\n');
    s
}

/// One row per record; `counts` as `key=value` pairs joined by `;`, and
/// `witnesses` as a JSON array.
fn render_csv(records: &[CheckRecord]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["theorem_id", "q", "status", "reason", "counts", "witnesses", "elapsed_ms", "t1", "t0", "s1", "s0"]).unwrap();
    for r in records {
        let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        w.write_record([
            r.theorem_id.clone(),
            r.q.to_string(),
            status_str(r.status).to_string(),
            r.reason.clone().unwrap_or_default(),
            counts.join(";"),
            serde_json::to_string(&r.witnesses).unwrap(),
            r.elapsed_ms.map(|t| t.to_string()).unwrap_or_default(),
            r.tower.t1.to_string(),
            r.tower.t0.to_string(),
            r.tower.s1.to_string(),
            r.tower.s0.to_string(),
        ])
        .unwrap();
    }
    String::from_utf8(w.into_inner().unwrap()).unwrap()
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Pass => "pass",
        Status::Fail => "fail",
        Status::Skip => "skip",
    }
}

fn render_text(plan: &Plan, records: &[CheckRecord]) -> String {
    let mut out = String::new();
    let width = records.iter().map(|r| r.theorem_id.len()).max().unwrap_or(10);
    for r in records {
        let counts: Vec<String> = r.counts.iter().map(|(k, v)| format!("{k}={v}")).collect();
        let mut line = format!("q={:<3} {:<width$}  {:<4}", r.q, r.theorem_id, status_str(r.status));
        if let Some(reason) = &r.reason {
            line.push_str(&format!("  [{reason}]"));
        }
        if !counts.is_empty() {
            line.push_str(&format!("  {}", counts.join(" ")));
        }
        if let Some(ms) = r.elapsed_ms {
            line.push_str(&format!("  {ms}ms"));
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out.push_str("\n   q   pass  fail  skip\n");
    for &q in &plan.qs {
        let of = |s: Status| records.iter().filter(|r| r.q == q && r.status == s).count();
        out.push_str(&format!("{q:>4} {:>6} {:>5} {:>5}\n", of(Status::Pass), of(Status::Fail), of(Status::Skip)));
    }
    out
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for id in checker_ids() {
            println!("{id}");
        }
        return ExitCode::SUCCESS;
    }
    let plan = match plan(&args) {
        Ok(p) => p,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let config = SuiteConfig {
        towers: plan.towers.clone(),
        ids: plan.ids.clone(),
        mode: plan.mode,
        mode_overrides: plan.overrides.clone(),
        jobs: args.jobs,
        timing: args.timing,
    };
    let records = match run_suite(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match args.format {
        Format::Json => render_json(&args, &plan, &records),
        Format::Csv => render_csv(&records),
        Format::Text => render_text(&plan, &records),
    };
    let written = match &args.out {
        Some(path) => fs::write(path, &report),
        None => io::stdout().write_all(report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(2);
    }
    if records.iter().any(|r| r.status == Status::Fail) {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}
