//! The `binomsum` command line.
//!
//! Exit codes: 0 all checks passed, 1 a violation was found, 2 usage or
//! domain error, 3 2-adic precision exhausted. Every failure also writes one
//! `binomsum: error=<kind> ...` line to stderr.

pub mod output;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::explorer::{
    cauchy_verdict, cor1_hypothesis, cor2_hypothesis, trace, TwoAdicSpec, DEFAULT_MAX_EXPONENT,
};
use crate::fsum::{
    f_exact, f_padic, DiffEngine, Engine, PrecisionPolicy, DEFAULT_PRECISION, PRECISION_CAP,
};
use crate::harness::sweep::STREAMING_LEVEL;
use crate::harness::{default_jobs, run_sweep, BoundCheckRow, CheckId, SweepOptions, SweepParams};
use crate::valuation::nu2;
pub use output::{report_json, CsvSink, RowRecord, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "binomsum",
    version,
    about = "2-adic valuations of sums of inverse binomial coefficients"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EngineKind {
    Exact,
    Padic,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long, value_enum, default_value_t = EngineKind::Exact)]
    pub engine: EngineKind,
    /// Initial 2-adic precision in bits.
    #[arg(long, env = "BINOMSUM_PRECISION", default_value_t = DEFAULT_PRECISION)]
    pub precision: u32,
    /// Largest precision tried before giving up on a row.
    #[arg(long, default_value_t = PRECISION_CAP)]
    pub max_precision: u32,
    /// Report exhaustion (exit 3) instead of finishing with exact arithmetic.
    #[arg(long)]
    pub no_exact_fallback: bool,
}

impl EngineArgs {
    pub fn engine(&self) -> Result<Engine> {
        if self.precision == 0 {
            return Err(Error::Domain("precision must be at least 1".into()));
        }
        if self.precision > self.max_precision {
            return Err(Error::Domain(format!(
                "precision {} exceeds --max-precision {}",
                self.precision, self.max_precision
            )));
        }
        Ok(match self.engine {
            EngineKind::Exact => Engine::Exact,
            EngineKind::Padic => Engine::Padic(PrecisionPolicy {
                initial: self.precision,
                cap: self.max_precision,
                exact_fallback: !self.no_exact_fallback,
            }),
        })
    }
}

fn check_parser() -> impl TypedValueParser<Value = CheckId> {
    PossibleValuesParser::new(CheckId::ALL.map(CheckId::name))
        .map(|s| s.parse::<CheckId>().expect("listed check"))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep one check over a range and report violations and equality cases.
    Verify(VerifyArgs),
    /// Follow f along the reductions of a 2-adic integer.
    Trace(TraceArgs),
    /// Evaluate f(n).
    Eval(EvalArgs),
    /// Test the digit hypotheses behind convergence on finite data.
    Hypothesis(HypothesisArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_parser = check_parser())]
    pub check: CheckId,
    /// Smallest level e (default depends on the check).
    #[arg(long)]
    pub e_min: Option<u32>,
    /// Largest level e (default depends on the check).
    #[arg(long)]
    pub e_max: Option<u32>,
    /// Size bound for checks not indexed by level.
    #[arg(long)]
    pub limit: Option<u64>,
    /// Random pairs for engines-agree.
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 0x5eed_f00d)]
    pub seed: u64,
    #[command(flatten)]
    pub engine: EngineArgs,
    /// Worker threads (default: available processors).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// CSV of rows; `-` for stdout.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Write only equality rows to the CSV.
    #[arg(long)]
    pub equality_only: bool,
    #[arg(long)]
    pub fail_fast: bool,
    /// Add N to every bound (N > 0 probes tightness and reports the rows it breaks).
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub tighten: i64,
    /// First level streamed instead of held in memory.
    #[arg(long, default_value_t = STREAMING_LEVEL, hide = true)]
    pub stream_from: u32,
}

#[derive(Debug, Args)]
pub struct TraceArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long, default_value_t = DEFAULT_MAX_EXPONENT)]
    pub max_exponent: u32,
    #[command(flatten)]
    pub engine: EngineArgs,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalTarget {
    F,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub target: EvalTarget,
    #[arg(long)]
    pub n: u64,
    #[command(flatten)]
    pub engine: EngineArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Cor1,
    Cor2,
}

#[derive(Debug, Args)]
pub struct HypothesisArgs {
    #[arg(long)]
    pub spec: String,
    #[arg(long)]
    pub horizon: u64,
    /// Default: both.
    #[arg(long, value_enum)]
    pub which: Option<Which>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn error_kind(e: &Error) -> (&'static str, i32) {
    match e {
        Error::PrecisionExhausted { .. } => ("precision-exhausted", EXIT_PRECISION),
        Error::Domain(_) => ("domain", EXIT_USAGE),
        Error::Horizon(_) => ("horizon", EXIT_USAGE),
        Error::SpecParse { .. } => ("spec-parse", EXIT_USAGE),
        Error::RecurrenceGate { .. } => ("recurrence-gate", EXIT_USAGE),
        Error::Io(_) => ("io", EXIT_USAGE),
    }
}

fn diagnostic(err: &mut dyn Write, kind: &str, message: &str) {
    let _ = writeln!(
        err,
        "binomsum: error={kind} message={}",
        serde_json::Value::String(message.to_string())
    );
}

fn open(path: &PathBuf) -> Result<Box<dyn Write>> {
    if path.as_os_str() == "-" {
        Ok(Box::new(std::io::stdout()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn write_file(path: &PathBuf, contents: &str, out: &mut dyn Write) -> Result<()> {
    if path.as_os_str() == "-" {
        out.write_all(contents.as_bytes())?;
    } else {
        std::fs::write(path, contents)?;
    }
    Ok(())
}

fn json_string<T: serde::Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn key(r: &BoundCheckRow) -> String {
    match r.i {
        Some(i) => format!("{},{},{}", r.e, r.k, i),
        None => format!("{},{},", r.e, r.k),
    }
}

fn verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let defaults = SweepParams::defaults_for(args.check);
    let params = SweepParams {
        e_min: args.e_min.unwrap_or(defaults.e_min),
        e_max: args.e_max.unwrap_or(defaults.e_max),
        limit: args.limit.or(defaults.limit),
        samples: args.samples,
        seed: args.seed,
    };
    params.validate()?;
    let engine = args.engine.engine()?;
    let jobs = args.jobs.unwrap_or_else(default_jobs);
    if jobs == 0 {
        return Err(Error::Domain("--jobs must be at least 1".into()));
    }
    let opts = SweepOptions {
        jobs,
        fail_fast: args.fail_fast,
        stream_from_level: args.stream_from,
        tighten: args.tighten,
    };

    let mut csv = match &args.csv {
        Some(path) => Some(CsvSink::new(open(path)?)?),
        None => None,
    };
    let equality_only = args.equality_only;
    let report = run_sweep(args.check, &params, engine, &opts, &mut |row| {
        if let Some(sink) = csv.as_mut() {
            if !equality_only || row.is_equality() {
                sink.write(row)?;
            }
        }
        Ok(())
    })?;
    if let Some(sink) = csv {
        sink.finish()?.flush()?;
    }
    if let Some(path) = &args.json {
        write_file(path, &report_json(&report)?, out)?;
    }

    writeln!(
        out,
        "{} e={}..{} engine={} rows={} violations={} equality_cases={} exhausted={} duration_ms={}",
        report.check,
        params.e_min,
        params.e_max,
        report.engine.name(),
        report.rows_total,
        report.violations.len(),
        report.equality_cases.len(),
        report.precision_exhausted.len(),
        report.duration_ms
    )?;
    let stats = &report.engine_stats;
    if stats.definite + stats.fell_back + stats.exhausted > 0 {
        writeln!(
            out,
            "  padic: definite={} within_one_retry={} fell_back={} exhausted={}",
            stats.definite, stats.within_one_retry, stats.fell_back, stats.exhausted
        )?;
    }
    if args.check.uses_levels() {
        for level in &report.levels {
            let min_slack = level.min_slack.map(|s| s.to_string()).unwrap_or_default();
            writeln!(
                out,
                "  e={} rows={} violations={} equality={} min_slack={}",
                level.e, level.rows, level.violations, level.equality_cases, min_slack
            )?;
        }
    }

    if let Some(first) = report.violations.first() {
        writeln!(
            err,
            "binomsum: violation check={} count={} first={}{}",
            report.check,
            report.violations.len(),
            key(first),
            if report.stopped_early {
                " stopped-early"
            } else {
                ""
            }
        )?;
        return Ok(EXIT_VIOLATION);
    }
    if let Some(&(e, k, i)) = report.precision_exhausted.first() {
        let i = i.map(|i| i.to_string()).unwrap_or_default();
        writeln!(
            err,
            "binomsum: error=precision-exhausted check={} count={} first={e},{k},{i}",
            report.check,
            report.precision_exhausted.len()
        )?;
        return Ok(EXIT_PRECISION);
    }
    Ok(EXIT_OK)
}

fn run_trace(args: &TraceArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let spec: TwoAdicSpec = args.spec.parse()?;
    let engine = DiffEngine::new(args.engine.engine()?);
    let t = trace(&spec, args.max_exponent, &engine)?;
    let diag = cauchy_verdict(&t);
    writeln!(
        out,
        "i,e_i,x_prev,step_val,conj1_bound,conj2_bound,distance,excess"
    )?;
    let mut violated = None;
    for r in &t.rows {
        let conj2 = r.conj2_bound.map(|b| b.to_string()).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.i, r.e_i, r.x_prev, r.step_val, r.conj1_bound, conj2, r.distance, r.excess
        )?;
        let ok = r.step_val.at_least(r.conj1_bound)
            && r.conj2_bound.is_none_or(|b| r.step_val.at_least(b));
        if !ok && violated.is_none() {
            violated = Some(r.i);
        }
    }
    let fmt_opt = |v: Option<crate::Valuation>| v.map(|v| v.to_string()).unwrap_or_default();
    writeln!(
        out,
        "cauchy: label={} tail_min={} head_min={} slope={} degenerate={} ({})",
        diag.label.name(),
        fmt_opt(diag.tail_min),
        fmt_opt(diag.head_min),
        diag.slope.map(|s| format!("{s:.4}")).unwrap_or_default(),
        diag.degenerate,
        diag.note
    )?;
    if let Some(path) = &args.json {
        #[derive(serde::Serialize)]
        struct TraceJson<'a> {
            trace: &'a crate::explorer::ConvergenceTrace,
            diagnostic: &'a crate::explorer::CauchyDiagnostic,
        }
        write_file(
            path,
            &json_string(&TraceJson {
                trace: &t,
                diagnostic: &diag,
            })?,
            out,
        )?;
    }
    if let Some(i) = violated {
        writeln!(err, "binomsum: violation trace={} row={i}", t.spec)?;
        return Ok(EXIT_VIOLATION);
    }
    Ok(EXIT_OK)
}

fn eval(args: &EvalArgs, out: &mut dyn Write) -> Result<i32> {
    match args.target {
        EvalTarget::F => match args.engine.engine()? {
            Engine::Exact => {
                let v = f_exact(args.n)?;
                writeln!(out, "{v}  nu2={}", nu2(&v))?;
            }
            Engine::Padic(policy) => {
                let v = f_padic(args.n, policy.initial)?;
                writeln!(out, "{v}  nu2={}", v.valuation())?;
            }
        },
    }
    Ok(EXIT_OK)
}

fn hypothesis(args: &HypothesisArgs, out: &mut dyn Write) -> Result<i32> {
    let spec: TwoAdicSpec = args.spec.parse()?;
    let which = match args.which {
        Some(w) => vec![w],
        None => vec![Which::Cor1, Which::Cor2],
    };
    let mut reports = Vec::new();
    for w in which {
        let r = match w {
            Which::Cor1 => cor1_hypothesis(&spec, args.horizon)?,
            Which::Cor2 => cor2_hypothesis(&spec, args.horizon)?,
        };
        let name = match w {
            Which::Cor1 => "cor1",
            Which::Cor2 => "cor2",
        };
        let tail: Vec<String> = r
            .values
            .iter()
            .rev()
            .take(8)
            .rev()
            .map(|(i, v)| format!("{i}:{v}"))
            .collect();
        writeln!(
            out,
            "{name}: verdict={} empirical={} analytic={} last=[{}]",
            r.verdict.name(),
            r.empirical.name(),
            r.analytic,
            tail.join(" ")
        )?;
        reports.push(r);
    }
    if let Some(path) = &args.json {
        write_file(path, &json_string(&reports)?, out)?;
    }
    Ok(EXIT_OK)
}

/// Run with explicit arguments (including the program name) and streams.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}");
            let first = e.to_string();
            let first = first
                .lines()
                .next()
                .unwrap_or_default()
                .trim_start_matches("error: ");
            diagnostic(err, "usage", first);
            return EXIT_USAGE;
        }
    };
    let result = match &cli.command {
        Command::Verify(a) => verify(a, out, err),
        Command::Trace(a) => run_trace(a, out, err),
        Command::Eval(a) => eval(a, out),
        Command::Hypothesis(a) => hypothesis(a, out),
    };
    let _ = out.flush();
    match result {
        Ok(code) => code,
        Err(e) => {
            let (kind, code) = error_kind(&e);
            diagnostic(err, kind, &e.to_string());
            code
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    run(
        std::env::args_os(),
        &mut std::io::stdout().lock(),
        &mut std::io::stderr().lock(),
    )
}
