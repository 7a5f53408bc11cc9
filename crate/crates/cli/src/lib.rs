//! Command-line front end for the `eqcalc` engine.
//!
//! [`run`] takes the argument vector and two sinks and returns the process
//! exit status: 0 on success, 1 on a domain failure (inapplicable rule,
//! failed expectation, goal not reached, non-tautology), 2 on usage errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use eqcalc::catalog::{enumerate, known_axioms, xcb, ThesisScope};
use eqcalc::proofs::{self, replay_report, ProofTrace, ReplayReport};
use eqcalc::search::{self, check_single_axiom_candidate, saturate, SearchLimits, Verdict};
use eqcalc::semantics::{counterexample, is_tautology};
use eqcalc::{inference, Formula, Rule};

pub const SUCCESS: i32 = 0;
pub const FAILURE: i32 = 1;
pub const USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "eqcalc",
    version,
    about = "Condensed detachment for the equivalential calculus"
)]
struct Cli {
    /// Emit JSON instead of line-oriented text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the canonical form, XCB-folded form and symbol length.
    Parse { formula: String },
    /// Decide whether a formula is a tautology.
    Taut { formula: String },
    /// Condensed detachment of MINOR from MAJOR.
    D { major: String, minor: String },
    /// Reverse condensed detachment of MINOR from MAJOR.
    R { major: String, minor: String },
    /// Replay a proof trace file, or the built-in XCB derivation.
    Replay(ReplayArgs),
    /// Enumerate theses of a given symbol length.
    Enumerate(EnumerateArgs),
    /// List the known shortest single axioms.
    Axioms,
    /// Bounded forward search from axioms towards goals.
    Search(SearchArgs),
    /// Try to derive the two-formula basis from a single candidate axiom.
    CheckAxiom(CheckArgs),
}

#[derive(Debug, Args)]
struct ReplayArgs {
    /// Trace file.
    #[arg(required_unless_present_any = ["xcb", "epp"], conflicts_with_all = ["xcb", "epp"])]
    file: Option<PathBuf>,
    /// Use the built-in 26-step derivation of the basis from XCB.
    #[arg(long, alias = "paper", conflicts_with = "epp")]
    xcb: bool,
    /// Use the built-in derivation of Epp from XCB.
    #[arg(long)]
    epp: bool,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long)]
    length: usize,
    /// Print only the number of theses.
    #[arg(long)]
    count_only: bool,
    /// Every tautology, not only the most general ones.
    #[arg(long)]
    all: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RuleSet {
    D,
    Dr,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long, default_value_t = SearchLimits::default().max_symbol_length)]
    max_length: usize,
    #[arg(long, default_value_t = SearchLimits::default().max_steps)]
    max_steps: usize,
    #[arg(long, default_value_t = SearchLimits::default().max_kept)]
    max_kept: usize,
    #[arg(long, value_enum, default_value = "d")]
    rules: RuleSet,
    /// File with one hint formula per line (`#` starts a comment).
    #[arg(long)]
    hints: Option<PathBuf>,
    /// Use every formula of the built-in XCB derivation as a hint.
    #[arg(long)]
    builtin_hints: bool,
    /// Discard results that are instances of kept formulas (may lose proofs).
    #[arg(long)]
    subsume_instances: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long = "axiom", required = true)]
    axioms: Vec<String>,
    #[arg(long = "goal")]
    goals: Vec<String>,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Debug, Args)]
struct CheckArgs {
    candidate: String,
    #[command(flatten)]
    limits: LimitArgs,
}

// Error carrying its exit status.
struct Exit {
    status: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Exit {
    Exit {
        status: USAGE,
        message: message.into(),
    }
}

fn failure(message: impl Into<String>) -> Exit {
    Exit {
        status: FAILURE,
        message: message.into(),
    }
}

fn formula(text: &str) -> Result<Formula, Exit> {
    text.parse()
        .map_err(|e| usage(format!("invalid formula {text:?}: {e}")))
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { USAGE } else { SUCCESS };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(err, "{rendered}")
            } else {
                write!(out, "{rendered}")
            };
            return status;
        }
    };
    let mut buffer = String::new();
    let result = dispatch(&cli, &mut buffer);
    let _ = out.write_all(buffer.as_bytes());
    match result {
        Ok(status) => status,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.status
        }
    }
}

fn emit_json(out: &mut String, value: &Value) {
    out.push_str(&serde_json::to_string_pretty(value).expect("values serialize"));
    out.push('\n');
}

fn dispatch(cli: &Cli, out: &mut String) -> Result<i32, Exit> {
    let json = cli.json;
    match &cli.command {
        Command::Parse { formula: text } => {
            let f = formula(text)?;
            let canonical = f.canonical();
            let folded = f.folded(&xcb());
            let length = f.symbol_length();
            if json {
                emit_json(
                    out,
                    &json!({"input": f.to_string(), "canonical": canonical.to_string(), "folded": folded, "symbol_length": length}),
                );
            } else {
                out.push_str(&format!(
                    "canonical\t{canonical}\nfolded\t{folded}\nlength\t{length}\n"
                ));
            }
            Ok(SUCCESS)
        }
        Command::Taut { formula: text } => {
            let f = formula(text)?;
            let tautology = is_tautology(&f);
            let witness = counterexample(&f).map(|a| {
                a.iter()
                    .map(|(v, b)| format!("{v}={}", u8::from(b)))
                    .collect::<Vec<_>>()
                    .join(" ")
            });
            if json {
                emit_json(
                    out,
                    &json!({"formula": f.to_string(), "tautology": tautology, "counterexample": witness}),
                );
            } else if tautology {
                out.push_str("tautology\n");
            } else {
                out.push_str(&format!(
                    "not a tautology\t{}\n",
                    witness.unwrap_or_default()
                ));
            }
            Ok(if tautology { SUCCESS } else { FAILURE })
        }
        Command::D { major, minor } => detach(Rule::D, major, minor, json, out),
        Command::R { major, minor } => detach(Rule::R, major, minor, json, out),
        Command::Replay(args) => {
            let trace = if args.xcb {
                proofs::xcb_fixture()
            } else if args.epp {
                proofs::epp_fixture()
            } else {
                let path = args.file.as_ref().expect("clap requires a source");
                let text = std::fs::read_to_string(path)
                    .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
                text.parse::<ProofTrace>()
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?
            };
            let report: ReplayReport = replay_report(&trace).map_err(|e| failure(e.to_string()))?;
            if json {
                out.push_str(&report.to_json());
                out.push('\n');
            } else {
                out.push_str(&report.to_tsv());
            }
            report.check().map_err(|e| failure(e.to_string()))?;
            Ok(SUCCESS)
        }
        Command::Enumerate(args) => {
            let scope = if args.all {
                ThesisScope::All
            } else {
                ThesisScope::MostGeneral
            };
            let set = enumerate(args.length, scope).map_err(|e| usage(e.to_string()))?;
            match (json, args.count_only) {
                (true, true) => emit_json(
                    out,
                    &json!({"length": args.length, "count": set.len(), "stats": set.stats}),
                ),
                (true, false) => emit_json(
                    out,
                    &json!({
                        "length": args.length,
                        "count": set.len(),
                        "stats": set.stats,
                        "members": set.members().iter().map(ToString::to_string).collect::<Vec<_>>(),
                    }),
                ),
                (false, true) => out.push_str(&format!("{}\n", set.len())),
                (false, false) => out.push_str(&set.dump()),
            }
            Ok(SUCCESS)
        }
        Command::Axioms => {
            let registry = known_axioms();
            if json {
                emit_json(
                    out,
                    &serde_json::to_value(&registry).expect("registry serializes"),
                );
            } else {
                for e in registry.iter() {
                    out.push_str(&format!("{}\t{}\t{}\n", e.source, e.formula, e.canonical));
                }
            }
            Ok(SUCCESS)
        }
        Command::Search(args) => {
            let axioms = args
                .axioms
                .iter()
                .map(|a| formula(a))
                .collect::<Result<Vec<_>, _>>()?;
            let goals = args
                .goals
                .iter()
                .map(|g| formula(g))
                .collect::<Result<Vec<_>, _>>()?;
            let limits = limits(&args.limits)?;
            let outcome = saturate(&axioms, &limits, &goals).map_err(|e| usage(e.to_string()))?;
            let mut found = Vec::new();
            for g in &outcome.goals {
                let trace = g.found.map(|_| {
                    search::extract_trace(&outcome.kb, &g.goal).expect("found goals extract")
                });
                found.push((g.goal.clone(), trace));
            }
            if json {
                emit_json(
                    out,
                    &json!({
                        "status": outcome.status,
                        "stats": outcome.stats,
                        "kept": outcome.kb.len(),
                        "goals": found.iter().map(|(g, t)| json!({
                            "goal": g.to_string(),
                            "found": t.is_some(),
                            "trace": t.as_ref().map(ToString::to_string),
                        })).collect::<Vec<_>>(),
                    }),
                );
            } else {
                out.push_str(&format!("status\t{}\n", outcome.status));
                out.push_str(&outcome.stats.tsv());
                for (g, t) in &found {
                    match t {
                        Some(t) => out.push_str(&format!("goal\t{g}\tfound\n{t}")),
                        None => out.push_str(&format!("goal\t{g}\tnot found\n")),
                    }
                }
            }
            Ok(if outcome.all_goals_found() {
                SUCCESS
            } else {
                FAILURE
            })
        }
        Command::CheckAxiom(args) => {
            let candidate = formula(&args.candidate)?;
            let limits = limits(&args.limits)?;
            let report = check_single_axiom_candidate(&candidate, &limits);
            if json {
                emit_json(
                    out,
                    &json!({
                        "candidate": candidate.to_string(),
                        "verdict": report.verdict,
                        "status": report.status,
                        "stats": report.stats,
                        "traces": report.traces.iter().map(|(g, t)| json!({
                            "goal": g.to_string(),
                            "trace": t.as_ref().map(ToString::to_string),
                        })).collect::<Vec<_>>(),
                    }),
                );
            } else {
                let verdict = match report.verdict {
                    Verdict::Confirmed => "confirmed",
                    Verdict::Inconclusive => "inconclusive",
                };
                out.push_str(&format!("verdict\t{verdict}\nstatus\t{}\n", report.status));
                out.push_str(&report.stats.tsv());
                for (g, t) in &report.traces {
                    if let Some(t) = t {
                        out.push_str(&format!("goal\t{g}\tfound\n{t}"));
                    } else {
                        out.push_str(&format!("goal\t{g}\tnot found\n"));
                    }
                }
            }
            Ok(match report.verdict {
                Verdict::Confirmed => SUCCESS,
                Verdict::Inconclusive => FAILURE,
            })
        }
    }
}

fn detach(rule: Rule, major: &str, minor: &str, json: bool, out: &mut String) -> Result<i32, Exit> {
    let major = formula(major)?;
    let minor = formula(minor)?;
    let outcome =
        inference::detach(rule, &major, &minor).map_err(|e| failure(format!("{rule}: {e}")))?;
    let folded = outcome.result.formula().folded(&xcb());
    if json {
        let mut value = serde_json::to_value(&outcome).expect("outcome serializes");
        value["folded"] = json!(folded);
        value["symbol_length"] = json!(outcome.result.symbol_length());
        emit_json(out, &value);
    } else {
        out.push_str(&format!(
            "result\t{}\nfolded\t{folded}\nlength\t{}\nmajor-instance-length\t{}\nminor-instance-length\t{}\n",
            outcome.result,
            outcome.result.symbol_length(),
            outcome.major_instance_length,
            outcome.minor_instance_length
        ));
    }
    Ok(SUCCESS)
}

fn limits(args: &LimitArgs) -> Result<SearchLimits, Exit> {
    let mut hints = Vec::new();
    if let Some(path) = &args.hints {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            hints.push(formula(line)?);
        }
    }
    if args.builtin_hints {
        let report = replay_report(&proofs::xcb_fixture()).expect("built-in derivation replays");
        hints.extend(report.records.iter().map(|r| r.formula.formula().clone()));
    }
    Ok(SearchLimits {
        max_symbol_length: args.max_length,
        max_kept: args.max_kept,
        max_steps: args.max_steps,
        rules: match args.rules {
            RuleSet::D => vec![Rule::D],
            RuleSet::Dr => vec![Rule::D, Rule::R],
        },
        hints,
        subsume_instances: args.subsume_instances,
    })
}
