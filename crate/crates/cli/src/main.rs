use std::fmt::Write as _;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use orlicz_core::bergman::{self, bergman_operator, BERGMAN_NAME};
use orlicz_core::harness::{run_suite, summarize, SuiteConfig};
use orlicz_core::norms::{self, amemiya_norm, classify_membership, luxemburg_norm, modular};
use orlicz_core::operators::{self, parse_operator_json, CompactOperator, DiagonalOperator, RankOneOperator};
use orlicz_core::output::{format_f64, to_json};
use orlicz_core::{Error, NormResult, OrliczFunction};

#[derive(Parser, Debug)]
#[command(name = "orlicz", version, about = "Orlicz norms of compact operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    output: Output,
    /// Relative tolerance for norm computations.
    #[arg(long, default_value_t = norms::DEFAULT_REL_TOL, global = true)]
    rel_tol: f64,
    /// Absolute tolerance on the tail of infinite modular sums.
    #[arg(long, default_value_t = norms::DEFAULT_EPS_TAIL, global = true)]
    eps_tail: f64,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Output {
    Json,
    Text,
}

#[derive(Args, Debug)]
struct OperatorArgs {
    /// Orlicz function: power:p=<p>, scaled:alpha=<a> or cosh.
    #[arg(long)]
    phi: String,
    /// Operator: JSON file path, diag(a,b,...) or bergman.
    #[arg(long)]
    op: String,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Luxemburg and Orlicz norms.
    Norm(OperatorArgs),
    /// Tr φ(λ x).
    Modular {
        #[command(flatten)]
        target: OperatorArgs,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
    },
    /// Membership in S_φ and E_φ.
    Membership(OperatorArgs),
    /// Run the randomized inequality suite.
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
    },
    /// Bergman operator demo table.
    Bergman {
        /// Single exponent instead of the default table.
        #[arg(long)]
        p: Option<f64>,
    },
    /// Singular values with multiplicities.
    Svd {
        #[arg(long)]
        op: String,
        /// Number of terms shown for infinite-rank operators.
        #[arg(long, default_value_t = 20)]
        terms: usize,
    },
}

/// Failure modes with their exit codes.
enum Failure {
    Input(String),
    Checks(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

fn parse_phi(spec: &str) -> Result<OrliczFunction, Failure> {
    spec.parse().map_err(|e: Error| Failure::Input(e.to_string()))
}

fn parse_diag_literal(body: &str) -> Result<CompactOperator, Failure> {
    let entries = body
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Failure::Input(format!("invalid diag literal entry {:?}; expected diag(a,b,...)", t.trim())))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DiagonalOperator::from_real(&entries)?.into())
}

fn parse_operator(source: &str) -> Result<CompactOperator, Failure> {
    let trimmed = source.trim();
    if trimmed.eq_ignore_ascii_case(BERGMAN_NAME) {
        return Ok(bergman_operator().into());
    }
    let lower = trimmed.to_ascii_lowercase();
    if let Some(body) = lower.strip_prefix("diag(").and_then(|r| r.strip_suffix(')')) {
        return parse_diag_literal(body);
    }
    let path = Path::new(trimmed);
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("cannot read operator file {}: {e}", path.display())))?;
    Ok(parse_operator_json(&text)?)
}

fn check_positive(name: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Input(format!("--{name} must be positive and finite, got {v}")))
    }
}

#[derive(Serialize)]
struct NormReport {
    luxemburg: NormResult,
    orlicz: NormResult,
}

#[derive(Serialize)]
struct CoshRankOne {
    computed: f64,
    closed_form: f64,
    difference: f64,
}

#[derive(Serialize)]
struct BergmanReport {
    rows: Vec<bergman::DemoRow>,
    cosh_rank_one: CoshRankOne,
}

/// `key = value` lines from the JSON tree, numbers in the JSON float format.
fn render_text(value: &Value) -> String {
    fn walk(v: &Value, path: &str, out: &mut String) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let p = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    walk(child, &p, out);
                }
            }
            Value::Array(items) => {
                if items.is_empty() {
                    let _ = writeln!(out, "{path} = []");
                }
                for (i, child) in items.iter().enumerate() {
                    walk(child, &format!("{path}[{i}]"), out);
                }
            }
            Value::Number(n) => {
                let text = match (n.as_u64(), n.as_i64()) {
                    (Some(u), _) => u.to_string(),
                    (None, Some(i)) => i.to_string(),
                    _ => format_f64(n.as_f64().unwrap_or(f64::NAN)),
                };
                let _ = writeln!(out, "{path} = {text}");
            }
            Value::String(s) => {
                let _ = writeln!(out, "{path} = {s}");
            }
            Value::Bool(b) => {
                let _ = writeln!(out, "{path} = {b}");
            }
            Value::Null => {
                let _ = writeln!(out, "{path} = null");
            }
        }
    }
    let mut out = String::new();
    walk(value, "", &mut out);
    out
}

fn emit<T: Serialize>(report: &T, output: Output) -> Result<(), Failure> {
    let json = to_json(report).map_err(|e| Failure::Input(format!("serialization failed: {e}")))?;
    match output {
        Output::Json => println!("{json}"),
        Output::Text => {
            let value: Value = serde_json::from_str(&json).expect("own output parses");
            print!("{}", render_text(&value));
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    let Common { output, rel_tol, eps_tail } = cli.common;
    check_positive("rel-tol", rel_tol)?;
    check_positive("eps-tail", eps_tail)?;
    match cli.command {
        Command::Norm(args) => {
            let f = parse_phi(&args.phi)?;
            let op = parse_operator(&args.op)?;
            let report = NormReport {
                luxemburg: luxemburg_norm(&op, &f, rel_tol)?,
                orlicz: amemiya_norm(&op, &f, rel_tol)?,
            };
            emit(&report, output)
        }
        Command::Modular { target, lambda } => {
            check_positive("lambda", lambda)?;
            let f = parse_phi(&target.phi)?;
            let op = parse_operator(&target.op)?;
            emit(&modular(&op, &f, lambda, eps_tail)?, output)
        }
        Command::Membership(args) => {
            let f = parse_phi(&args.phi)?;
            let op = parse_operator(&args.op)?;
            emit(&classify_membership(&op, &f)?, output)
        }
        Command::Verify { seed, trials } => {
            if trials == 0 {
                return Err(Failure::Input("--trials must be at least 1".into()));
            }
            let reports = run_suite(&SuiteConfig { seed, trials });
            emit(&reports, output)?;
            let failed: Vec<String> = summarize(&reports)
                .into_iter()
                .filter(|s| s.failures > 0)
                .map(|s| format!("{} ({} of {})", s.name, s.failures, s.trials))
                .collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(Failure::Checks(format!("failed checks: {}", failed.join(", "))))
            }
        }
        Command::Bergman { p } => {
            let rows = match p {
                None => bergman::demo_table(rel_tol)?,
                Some(p) => {
                    let op: CompactOperator = bergman_operator().into();
                    let closed_form = bergman::bergman_schatten_norm(p)?;
                    let computed = luxemburg_norm(&op, &OrliczFunction::power(p)?, rel_tol)?.value;
                    vec![bergman::DemoRow { p, closed_form, computed, difference: computed - closed_form }]
                }
            };
            let cosh = OrliczFunction::cosh_minus_one();
            let e: CompactOperator = RankOneOperator::basis(1, 0)?.into();
            let computed = luxemburg_norm(&e, &cosh, rel_tol)?.value;
            let closed_form = 1.0 / (2.0 + 3f64.sqrt()).ln();
            let report = BergmanReport {
                rows,
                cosh_rank_one: CoshRankOne { computed, closed_form, difference: computed - closed_form },
            };
            emit(&report, output)
        }
        Command::Svd { op, terms } => {
            let op = parse_operator(&op)?;
            emit(&operators::singular_values(&op, terms)?, output)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks(msg)) => {
            eprintln!("orlicz: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("orlicz: error: {msg}");
            ExitCode::from(2)
        }
    }
}
