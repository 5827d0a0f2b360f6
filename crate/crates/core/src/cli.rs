//! Command-line front end. Exit codes: 0 success, 1 usage or configuration
//! error, 2 verification or stabilization failure.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rug::{Float, Integer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::formula::{
    default_k_max, default_tol, integer_number, p2_exact_with, rademacher_k_max, rademacher_p,
    ConvergenceCertificate, FormulaConfig,
};
use crate::integrals::MordellGrid;
use crate::kloosterman::{bound_report, max_ratio, write_bound_csv, BoundRow, Family, K8Phase};
use crate::numerics::{auto_bits, make_context, PrecisionContext, Real};
use crate::qseries::{f_series, p2_counts, partition_counts, xi_series, ORACLE_CAP};
use crate::verify::{self, MordellSettings, SuiteReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

/// Environment variable that overrides `--bits`.
pub const BITS_ENV: &str = "RADEX_BITS";

#[derive(Parser, Debug)]
#[command(name = "radex", version, about = "Exact formulas for partitions without sequences")]
pub struct Cli {
    /// Working precision in bits, or "auto".
    #[arg(long, global = true, default_value = "auto")]
    pub bits: String,
    /// Absolute quadrature tolerance (default: 2^(-bits/2)).
    #[arg(long, global = true)]
    pub tol: Option<String>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Plain)]
    pub output: Output,
    /// Worker threads, or "auto".
    #[arg(long, global = true, default_value = "auto")]
    pub threads: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Output {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// p₂(n) from the exact formula.
    P2(P2Args),
    /// p(n) from the classical exact formula.
    P(PArgs),
    /// Exact coefficient tables from q-series.
    Oracle(OracleArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
    /// Normalized sizes of the twisted Kloosterman families.
    BoundReport(BoundArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Target {
    #[arg(long, conflicts_with = "range")]
    pub n: Option<i64>,
    /// Inclusive range "a..b".
    #[arg(long, value_parser = parse_range)]
    pub range: Option<RangeInclusive<i64>>,
}

#[derive(Args, Debug)]
pub struct P2Args {
    #[command(flatten)]
    pub target: Target,
    /// Truncation point (default: max(60, ceil(4 n^(5/8)))).
    #[arg(long)]
    pub k_max: Option<i64>,
    /// Compare against the q-series coefficients.
    #[arg(long)]
    pub check: bool,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub k1_sign: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub k8_phase: i64,
}

#[derive(Args, Debug)]
pub struct PArgs {
    #[command(flatten)]
    pub target: Target,
    /// Truncation point (default: ceil(3 sqrt n) + 20).
    #[arg(long)]
    pub k_max: Option<i64>,
    /// Compare against the pentagonal recurrence.
    #[arg(long)]
    pub check: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OracleKind {
    /// Partitions.
    P,
    /// Partitions without consecutive parts.
    P2,
    /// Coefficients of the third-order mock theta function f(q).
    Alpha,
    /// Coefficients of (-q³;q³)∞ / (q²;q²)∞.
    R,
}

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(value_enum)]
    pub kind: OracleKind,
    #[arg(long)]
    pub to: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Multipliers,
    Kloosterman,
    Mordell,
    Decomposition,
    Logconcavity,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Largest k (multipliers: 60, kloosterman: 50, mordell: 12).
    #[arg(long)]
    pub k_max: Option<i64>,
    /// Series length (decomposition: 500, logconcavity: 2000) or largest
    /// n and m (kloosterman: 10).
    #[arg(long)]
    pub to: Option<u64>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Families to report (default: all eight).
    #[arg(long = "family")]
    pub families: Vec<u8>,
    #[arg(long, default_value_t = 40)]
    pub k_max: i64,
    #[arg(long, default_value_t = 40)]
    pub n_max: i64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    /// Exit with failure if any normalized value exceeds this.
    #[arg(long, default_value_t = 100.0)]
    pub limit: f64,
}

fn parse_range(s: &str) -> std::result::Result<RangeInclusive<i64>, String> {
    let (a, b) = s
        .split_once("..")
        .ok_or_else(|| format!("expected a..b, got {s:?}"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let a = i64::from_str(a.trim()).map_err(|e| e.to_string())?;
    let b = i64::from_str(b.trim()).map_err(|e| e.to_string())?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok(a..=b)
}

/// Failure that ends a command with a given exit code.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Exit {
    fn from(e: Error) -> Self {
        Exit::usage(e.to_string())
    }
}

type CmdResult = std::result::Result<(String, bool), Exit>;

/// Parses `args`, runs the command, writes its report to `out` and
/// diagnostics to `err`, and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if code == EXIT_OK {
                write!(out, "{e}")
            } else {
                write!(err, "{e}")
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok((text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                EXIT_OK
            } else {
                EXIT_FAILURE
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

pub fn main() -> i32 {
    let stdout = io::stdout();
    let stderr = io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

fn execute(cli: &Cli) -> CmdResult {
    let threads = parse_threads(&cli.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Exit::usage(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::P2(a) => cmd_p2(cli, a),
        Command::P(a) => cmd_p(cli, a),
        Command::Oracle(a) => cmd_oracle(cli, a),
        Command::Verify(a) => cmd_verify(cli, a),
        Command::BoundReport(a) => cmd_bound_report(cli, a),
    })
}

fn parse_threads(s: &str) -> std::result::Result<usize, Exit> {
    if s == "auto" {
        return Ok(0);
    }
    match s.parse::<usize>() {
        Ok(t) if t > 0 => Ok(t),
        _ => Err(Exit::usage(format!("--threads must be a positive integer or auto, got {s:?}"))),
    }
}

/// Explicit precision from `RADEX_BITS` or `--bits`; `None` means auto.
fn explicit_bits(cli: &Cli) -> std::result::Result<Option<u32>, Exit> {
    let raw = match std::env::var(BITS_ENV) {
        Ok(v) => v,
        Err(_) => cli.bits.clone(),
    };
    let raw = raw.trim();
    if raw == "auto" {
        return Ok(None);
    }
    raw.parse::<u32>()
        .map(Some)
        .map_err(|_| Exit::usage(format!("bits must be an integer or auto, got {raw:?}")))
}

fn context_for(cli: &Cli, n: i64) -> std::result::Result<PrecisionContext, Exit> {
    let bits = explicit_bits(cli)?.unwrap_or_else(|| auto_bits(n.max(1) as u64));
    Ok(make_context(bits)?)
}

fn tolerance(cli: &Cli, ctx: &PrecisionContext) -> std::result::Result<Real, Exit> {
    match &cli.tol {
        None => Ok(default_tol(ctx)),
        Some(s) => {
            let v = Float::parse(s).map_err(|_| Exit::usage(format!("invalid --tol {s:?}")))?;
            let t = Float::with_val(ctx.bits(), v);
            if t <= 0 {
                return Err(Exit::usage(format!("--tol must be positive, got {s}")));
            }
            Ok(t)
        }
    }
}

fn targets(t: &Target) -> std::result::Result<Vec<i64>, Exit> {
    let v: Vec<i64> = match (t.n, &t.range) {
        (Some(n), None) => vec![n],
        (None, Some(r)) => r.clone().collect(),
        _ => return Err(Exit::usage("give exactly one of --n and --range")),
    };
    if v.iter().any(|&n| n < 1) {
        return Err(Exit::usage("n must be positive"));
    }
    Ok(v)
}

/// A certificate line with an optional oracle comparison.
struct Row {
    cert: ConvergenceCertificate,
    oracle: Option<Integer>,
}

impl Row {
    fn matches(&self) -> Option<bool> {
        self.oracle.as_ref().map(|o| *o == self.cert.rounded)
    }

    fn ok(&self) -> bool {
        self.cert.stabilized && self.matches().unwrap_or(true)
    }
}

fn render(rows: &[Row], label: &str, output: Output) -> String {
    let mut s = String::new();
    match output {
        Output::Plain => {
            for r in rows {
                let c = &r.cert;
                let _ = write!(
                    s,
                    "{label}({}) = {}  stabilized={} k_used={} residual={:.6} spread={:.6}",
                    c.n,
                    c.rounded,
                    c.stabilized,
                    c.k_used,
                    c.residual(),
                    c.window_spread()
                );
                if let Some(o) = &r.oracle {
                    let verdict = if r.matches() == Some(true) { "match" } else { "MISMATCH" };
                    let _ = write!(s, " oracle={o} {verdict}");
                }
                s.push('\n');
            }
        }
        Output::Csv => {
            s.push_str("n,value,stabilized,k_used,residual,spread,oracle\n");
            for r in rows {
                let c = &r.cert;
                let oracle = r.oracle.as_ref().map(|o| o.to_string()).unwrap_or_default();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{:.6e},{:.6e},{}",
                    c.n,
                    c.rounded,
                    c.stabilized,
                    c.k_used,
                    c.residual(),
                    c.window_spread(),
                    oracle
                );
            }
        }
        Output::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut v = r.cert.to_json();
                    if let Some(o) = &r.oracle {
                        v["oracle"] = integer_number(o);
                        v["match"] = Value::Bool(r.matches() == Some(true));
                    }
                    v
                })
                .collect();
            let v = if items.len() == 1 {
                items.into_iter().next().expect("one item")
            } else {
                Value::Array(items)
            };
            s = serde_json::to_string_pretty(&v).expect("json serializes");
            s.push('\n');
        }
    }
    s
}

fn cmd_p2(cli: &Cli, a: &P2Args) -> CmdResult {
    let ns = targets(&a.target)?;
    let config = FormulaConfig {
        k1_sign: a.k1_sign,
        k8_phase: K8Phase::from_sign(a.k8_phase)?,
        ..FormulaConfig::default()
    };
    config.validate()?;
    let top = *ns.iter().max().expect("non-empty");
    if a.check && top as usize > ORACLE_CAP {
        return Err(Exit::usage(format!("--check supports n <= {ORACLE_CAP}")));
    }
    let oracle = a.check.then(|| p2_counts(top as usize));
    let mut rows = Vec::new();
    for n in ns {
        let ctx = context_for(cli, n)?;
        let tol = tolerance(cli, &ctx)?;
        let k_max = a.k_max.unwrap_or_else(|| default_k_max(n));
        let cert = p2_exact_with(n, k_max, &ctx, &tol, &config)?;
        rows.push(Row {
            cert,
            oracle: oracle.as_ref().map(|o| o[n as usize].clone()),
        });
    }
    let ok = rows.iter().all(Row::ok);
    Ok((render(&rows, "p2", cli.output), ok))
}

fn cmd_p(cli: &Cli, a: &PArgs) -> CmdResult {
    let ns = targets(&a.target)?;
    let top = *ns.iter().max().expect("non-empty");
    if a.check && top as usize > ORACLE_CAP {
        return Err(Exit::usage(format!("--check supports n <= {ORACLE_CAP}")));
    }
    let oracle = a.check.then(|| partition_counts(top as usize));
    let mut rows = Vec::new();
    for n in ns {
        let ctx = context_for(cli, n)?;
        let k_max = a.k_max.unwrap_or_else(|| rademacher_k_max(n));
        let cert = rademacher_p(n, k_max, &ctx)?;
        rows.push(Row {
            cert,
            oracle: oracle.as_ref().map(|o| o[n as usize].clone()),
        });
    }
    let ok = rows.iter().all(Row::ok);
    Ok((render(&rows, "p", cli.output), ok))
}

fn cmd_oracle(cli: &Cli, a: &OracleArgs) -> CmdResult {
    if a.to > ORACLE_CAP {
        return Err(Error::CapExceeded {
            n: a.to as u64,
            cap: ORACLE_CAP as u64,
        }
        .into());
    }
    let values: Vec<Integer> = match a.kind {
        OracleKind::P => partition_counts(a.to),
        OracleKind::P2 => p2_counts(a.to),
        OracleKind::Alpha => f_series(a.to).into_coeffs(),
        OracleKind::R => xi_series(a.to).into_coeffs(),
    };
    let name = match a.kind {
        OracleKind::P => "p",
        OracleKind::P2 => "p2",
        OracleKind::Alpha => "alpha",
        OracleKind::R => "r",
    };
    let text = match cli.output {
        Output::Plain => {
            let parts: Vec<String> = values.iter().map(|v| v.to_string()).collect();
            format!("{}\n", parts.join(","))
        }
        Output::Csv => {
            let mut s = format!("n,{name}\n");
            for (i, v) in values.iter().enumerate() {
                let _ = writeln!(s, "{i},{v}");
            }
            s
        }
        Output::Json => {
            let v = json!({
                "schema": "1",
                "kind": name,
                "values": values.iter().map(integer_number).collect::<Vec<_>>(),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json serializes"))
        }
    };
    Ok((text, true))
}

fn render_report(rep: &SuiteReport, extra: Option<Value>, output: Output) -> String {
    match output {
        Output::Json => {
            let mut v = json!({
                "schema": "1",
                "suite": rep.suite,
                "passed": rep.passed(),
                "checked": rep.checked,
                "failures": rep.failures,
                "notes": rep.notes,
            });
            if let Some(e) = extra {
                v["details"] = e;
            }
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json serializes"))
        }
        Output::Csv => {
            let mut s = String::from("suite,kind,message\n");
            for f in &rep.failures {
                let _ = writeln!(s, "{},failure,\"{}\"", rep.suite, f.replace('"', "\"\""));
            }
            for n in &rep.notes {
                let _ = writeln!(s, "{},note,\"{}\"", rep.suite, n.replace('"', "\"\""));
            }
            s
        }
        Output::Plain => {
            let verdict = if rep.passed() { "PASS" } else { "FAIL" };
            let mut s = format!("{verdict} {} ({} checks)\n", rep.suite, rep.checked);
            for n in &rep.notes {
                let _ = writeln!(s, "  note: {n}");
            }
            for f in &rep.failures {
                let _ = writeln!(s, "  failure: {f}");
            }
            s
        }
    }
}

fn cmd_verify(cli: &Cli, a: &VerifyArgs) -> CmdResult {
    let (rep, extra) = match a.suite {
        Suite::Multipliers => (verify::multipliers(a.k_max.unwrap_or(60))?, None),
        Suite::Kloosterman => (
            verify::kloosterman(a.k_max.unwrap_or(50), a.to.unwrap_or(10) as i64)?,
            None,
        ),
        Suite::Decomposition => (verify::decomposition(a.to.unwrap_or(500) as usize), None),
        Suite::Logconcavity => (verify::logconcavity(a.to.unwrap_or(2000))?, None),
        Suite::Mordell => {
            let mut settings = MordellSettings::default();
            if let Some(b) = explicit_bits(cli)? {
                settings.bits = b;
            }
            if let Some(t) = &cli.tol {
                settings.tol = t
                    .parse()
                    .map_err(|_| Exit::usage(format!("invalid --tol {t:?}")))?;
            }
            if let Some(k) = a.k_max {
                settings.base = MordellGrid { k_max: k, ..settings.base };
                settings.refined = MordellGrid { k_max: k, ..settings.refined };
            }
            let (rep, rows) = verify::mordell(&settings)?;
            (rep, Some(serde_json::to_value(rows).expect("rows serialize")))
        }
    };
    Ok((render_report(&rep, extra, cli.output), rep.passed()))
}

fn cmd_bound_report(cli: &Cli, a: &BoundArgs) -> CmdResult {
    let families: Vec<Family> = if a.families.is_empty() {
        Family::all().collect()
    } else {
        a.families.iter().map(|&f| Family::new(f)).collect::<Result<_>>()?
    };
    let mut per_family: Vec<(Family, Vec<BoundRow>)> = Vec::new();
    for f in families {
        per_family.push((f, bound_report(f, a.k_max, a.n_max, a.epsilon)?));
    }
    let ok = per_family
        .iter()
        .all(|(_, rows)| max_ratio(rows).is_finite() && max_ratio(rows) <= a.limit);
    let text = match cli.output {
        Output::Csv => {
            let mut buf = Vec::new();
            let all: Vec<BoundRow> = per_family.into_iter().flat_map(|(_, r)| r).collect();
            write_bound_csv(&all, &mut buf).expect("writing to memory");
            String::from_utf8(buf).expect("csv is utf-8")
        }
        Output::Plain => {
            let mut s = String::new();
            for (f, rows) in &per_family {
                let _ = writeln!(s, "family {}: {} values, max ratio {:.6}", f.index(), rows.len(), max_ratio(rows));
            }
            s
        }
        Output::Json => {
            let fams: Vec<Value> = per_family
                .iter()
                .map(|(f, rows)| {
                    json!({
                        "family": f.index(),
                        "values": rows.len(),
                        "max_ratio": max_ratio(rows),
                    })
                })
                .collect();
            let v = json!({
                "schema": "1",
                "k_max": a.k_max,
                "n_max": a.n_max,
                "epsilon": a.epsilon,
                "families": fams,
            });
            format!("{}\n", serde_json::to_string_pretty(&v).expect("json serializes"))
        }
    };
    Ok((text, ok))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["radex"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn ranges_parse() {
        assert_eq!(parse_range("1..5").unwrap(), 1..=5);
        assert_eq!(parse_range("3..=4").unwrap(), 3..=4);
        assert!(parse_range("5..1").is_err());
        assert!(parse_range("7").is_err());
    }

    #[test]
    fn oracle_tables() {
        assert_eq!(run_str(&["oracle", "p2", "--to", "5"]).1, "1,1,2,2,4,4\n");
        assert!(run_str(&["oracle", "p", "--to", "10"]).1.trim_end().ends_with(",42"));
        assert_eq!(run_str(&["oracle", "alpha", "--to", "3"]).1, "1,1,-2,3\n");
        assert_eq!(run_str(&["oracle", "p", "--to", "2001"]).0, EXIT_USAGE);
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run_str(&["p2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["p2", "--n", "3", "--k1-sign", "2"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["p2", "--n", "3", "--threads", "0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn short_truncation_fails_to_stabilize() {
        assert_eq!(run_str(&["p2", "--n", "10", "--k-max", "2"]).0, EXIT_FAILURE);
    }
}
