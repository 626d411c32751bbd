//! Command-line front end. [`run`] parses arguments, executes one command and
//! returns the process exit code: 0 on success, 1 when a reproduction or
//! soundness check fails, 2 on usage or configuration errors.

pub mod reproduce;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::report::{BoundReport, ReportRow};
use crate::bounds::{
    BoundConfig, BoundMethod, Bounds, CodeSpec, SearchLimits, SearchMode, VPolicy,
};
use crate::curve::{Curve, CurveConfig};
use crate::error::{Error, Result};
use crate::mu::IndexSet;
use crate::oracle;
use crate::rho::{rho_table_algebraic, rho_table_generic, BasisTriple};

#[derive(Parser, Debug)]
#[command(
    name = "dualbound",
    version,
    about = "Minimum distance and generalized Hamming weight bounds for dual affine variety codes"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Max-set search mode.
    #[arg(long, value_enum, default_value_t = Mode::Heuristic, global = true)]
    pub mode: Mode,
    /// Node budget for heuristic searches.
    #[arg(long, default_value_t = SearchLimits::default().node_budget, global = true)]
    pub node_budget: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Heuristic,
    Exact,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Footprint monomials with their weights and indices.
    CurveInfo {
        /// `f8`, `f27` or a path to a curve config JSON file.
        curve: String,
    },
    /// The table rho[i][j].
    RhoTable {
        curve: String,
        /// Build it from the evaluation bases by linear algebra.
        #[arg(long)]
        generic: bool,
    },
    /// Bounds on the weight of a word with m(c) = l.
    Bound {
        curve: String,
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        methods: MethodArgs,
    },
    /// Dimension and bounds on d_t of a code.
    Code {
        curve: String,
        #[command(flatten)]
        parity: ParityArgs,
        /// Comma-separated list or range of t values.
        #[arg(long, default_value = "1")]
        t: String,
        #[command(flatten)]
        methods: MethodArgs,
    },
    /// Improved code of designed distance delta, with its d_2..d_6 estimates.
    Improved {
        curve: String,
        #[arg(long)]
        delta: usize,
        #[arg(long, default_value = "adv")]
        method: String,
        #[arg(long)]
        v: Option<String>,
        /// Generalized Hamming weights to estimate.
        #[arg(long, default_value = "2..6")]
        t: String,
    },
    /// Compare against published values.
    Reproduce {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(reproduce::TARGETS))]
        target: String,
    },
    /// Check bounds against brute-force true values for C(s).
    Verify {
        curve: String,
        /// Range such as `25..31`.
        #[arg(long)]
        s: String,
        #[arg(long, default_value = "1")]
        t: usize,
    },
    /// Bounds on d_1..d_t of C(s) for a range of s.
    Sweep {
        curve: String,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, default_value = "1..5")]
        t: String,
        #[command(flatten)]
        methods: MethodArgs,
    },
}

#[derive(Args, Debug)]
pub struct MethodArgs {
    /// Comma-separated subset of wb, wwb, owb, adv, fim.
    #[arg(long, default_value = "wb,wwb,owb,adv,fim")]
    pub methods: String,
    /// Window length for fim: `auto`, a number, or `l:v` pairs such as `17:1,21:1`.
    #[arg(long)]
    pub v: Option<String>,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct ParityArgs {
    /// Standard code C(s) with parity checks w_1..w_s.
    #[arg(long)]
    pub s: Option<usize>,
    /// Explicit comma-separated parity positions.
    #[arg(long)]
    pub parity: Option<String>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

pub fn parse_v(text: Option<&str>) -> Result<VPolicy> {
    let Some(text) = text.map(str::trim) else {
        return Ok(VPolicy::Auto);
    };
    if text == "auto" {
        return Ok(VPolicy::Auto);
    }
    if let Ok(v) = text.parse() {
        return Ok(VPolicy::Uniform(v));
    }
    let mut map = BTreeMap::new();
    for pair in text.split(',') {
        let (l, v) = pair
            .split_once(':')
            .ok_or_else(|| usage(format!("bad --v entry {pair:?}")))?;
        let parse = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| usage(format!("bad --v entry {pair:?}")))
        };
        map.insert(parse(l)?, parse(v)?);
    }
    Ok(VPolicy::Fixed(map))
}

pub fn parse_method(name: &str, v: &VPolicy) -> Result<BoundMethod> {
    Ok(match name.trim() {
        "wb" => BoundMethod::FrWb,
        "wwb" => BoundMethod::FrWwb,
        "owb" => BoundMethod::FrOwb,
        "adv" => BoundMethod::Advisory,
        "fim" => BoundMethod::Fim(v.clone()),
        other => return Err(usage(format!("unknown method {other:?}"))),
    })
}

fn parse_methods(args: &MethodArgs) -> Result<Vec<BoundMethod>> {
    let v = parse_v(args.v.as_deref())?;
    let methods = args
        .methods
        .split(',')
        .map(|m| parse_method(m, &v))
        .collect::<Result<Vec<_>>>()?;
    if methods.is_empty() {
        return Err(usage("no methods given"));
    }
    Ok(methods)
}

/// `a..b` (inclusive) or a single number.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let bad = || usage(format!("bad range {text:?}"));
    match text.split_once("..") {
        Some((a, b)) => {
            let a = a.trim().parse().map_err(|_| bad())?;
            let b = b
                .trim_start_matches('=')
                .trim()
                .parse()
                .map_err(|_| bad())?;
            Ok(a..=b)
        }
        None => {
            let a = text.trim().parse().map_err(|_| bad())?;
            Ok(a..=a)
        }
    }
}

/// Comma-separated numbers and ranges.
pub fn parse_list(text: &str) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in text.split(',').filter(|p| !p.trim().is_empty()) {
        out.extend(parse_range(part)?);
    }
    Ok(out)
}

struct Loaded {
    name: String,
    curve: Curve,
}

fn load_curve(source: &str) -> Result<Loaded> {
    let config = match source {
        "f8" => CurveConfig::f8(),
        "f27" => CurveConfig::f27(),
        path => CurveConfig::load(std::path::Path::new(path))?,
    };
    Ok(Loaded {
        name: source.to_string(),
        curve: config.build()?,
    })
}

#[derive(Serialize)]
struct FootprintRow {
    index: usize,
    monomial: String,
    weight: u32,
}

#[derive(Serialize)]
struct VerifyRow {
    code: String,
    k: usize,
    t: usize,
    method: String,
    bound: usize,
    truth: usize,
    sound: bool,
}

fn rows_to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Config(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn rows_to_json<T: Serialize>(rows: &T) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows serialize");
    s.push('\n');
    s
}

fn emit_rows<T: Serialize>(format: Format, rows: &[T]) -> Result<String> {
    match format {
        Format::Csv => rows_to_csv(rows),
        Format::Json => Ok(rows_to_json(&rows)),
    }
}

fn emit_report(format: Format, report: &BoundReport) -> Result<String> {
    match format {
        Format::Csv => report.to_csv(),
        Format::Json => Ok(report.to_json()),
    }
}

struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

fn bound_config(cli: &Cli) -> BoundConfig {
    BoundConfig {
        mode: match cli.mode {
            Mode::Heuristic => SearchMode::Heuristic,
            Mode::Exact => SearchMode::Exact,
        },
        limits: SearchLimits {
            node_budget: cli.node_budget,
            ..SearchLimits::default()
        },
        ..BoundConfig::default()
    }
}

fn code_rows(
    report: &mut BoundReport,
    b: &Bounds,
    code: &CodeSpec,
    label: &str,
    ts: &[usize],
    methods: &[BoundMethod],
) -> Result<()> {
    report.push(ReportRow {
        target: label.to_string(),
        method: "k".to_string(),
        value: code.k(),
        certificate: vec![code.parity().as_slice().to_vec()],
    });
    for &t in ts.iter().filter(|&&t| t >= 1 && t <= code.k()) {
        for m in methods {
            let est = b.code_bound(code, m, t)?;
            report.push(ReportRow::new(format!("{label} d{t}"), m, &est));
        }
    }
    Ok(())
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let config = bound_config(cli);
    match &cli.command {
        Command::CurveInfo { curve } => {
            let c = load_curve(curve)?.curve;
            let rows: Vec<FootprintRow> = (1..=c.n())
                .map(|i| {
                    let m = c.monomial(i);
                    FootprintRow {
                        index: i,
                        monomial: m.to_string(),
                        weight: c.weight(m),
                    }
                })
                .collect();
            Ok(Outcome::ok(emit_rows(cli.format, &rows)?))
        }
        Command::RhoTable { curve, generic } => {
            let c = load_curve(curve)?.curve;
            let t = if *generic {
                rho_table_generic(&BasisTriple::from_curve(&c)?)?
            } else {
                rho_table_algebraic(&c)?
            };
            let rows = t.rows();
            let text = match cli.format {
                Format::Json => rows_to_json(&rows),
                Format::Csv => {
                    let mut w = csv::WriterBuilder::new()
                        .has_headers(false)
                        .from_writer(Vec::new());
                    for r in &rows {
                        w.serialize(r).map_err(|e| Error::Config(e.to_string()))?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| Error::Config(e.to_string()))?)
                        .expect("utf-8")
                }
            };
            Ok(Outcome::ok(text))
        }
        Command::Bound { curve, l, methods } => {
            let loaded = load_curve(curve)?;
            let t = rho_table_algebraic(&loaded.curve)?;
            let b = Bounds::with_config(&t, config);
            let mut report = BoundReport::new(loaded.name);
            for m in parse_methods(methods)? {
                let est = match &m {
                    BoundMethod::Fim(policy) => {
                        let v = b.v_for(*l, policy);
                        b.fim_bound(*l, &IndexSet::empty(), v)?.into()
                    }
                    other => b.per_l(*l, other, &IndexSet::empty())?,
                };
                report.push(ReportRow::new(format!("l={l}"), &m, &est));
            }
            Ok(Outcome::ok(emit_report(cli.format, &report)?))
        }
        Command::Code {
            curve,
            parity,
            t: ts,
            methods,
        } => {
            let loaded = load_curve(curve)?;
            let t = rho_table_algebraic(&loaded.curve)?;
            let n = t.n();
            let b = Bounds::with_config(&t, config);
            let (code, label) = match (parity.s, &parity.parity) {
                (Some(s), _) => (CodeSpec::standard(n, s)?, format!("C({s})")),
                (None, Some(list)) => (
                    CodeSpec::checked(n, parse_list(list)?.into_iter().collect())?,
                    "C".to_string(),
                ),
                (None, None) => return Err(usage("give --s or --parity")),
            };
            let mut report = BoundReport::new(loaded.name);
            code_rows(
                &mut report,
                &b,
                &code,
                &label,
                &parse_list(ts)?,
                &parse_methods(methods)?,
            )?;
            Ok(Outcome::ok(emit_report(cli.format, &report)?))
        }
        Command::Improved {
            curve,
            delta,
            method,
            v,
            t: ts,
        } => {
            let loaded = load_curve(curve)?;
            let t = rho_table_algebraic(&loaded.curve)?;
            let b = Bounds::with_config(&t, config);
            let m = parse_method(method, &parse_v(v.as_deref())?)?;
            if !matches!(m, BoundMethod::Advisory | BoundMethod::Fim(_)) {
                return Err(usage("improved codes are built with adv or fim"));
            }
            let code = b.improved_code(*delta, &m)?;
            let mut report = BoundReport::new(loaded.name);
            let label = format!("improved-{}({delta})", m.name());
            code_rows(&mut report, &b, &code, &label, &parse_list(ts)?, &[m])?;
            Ok(Outcome::ok(emit_report(cli.format, &report)?))
        }
        Command::Reproduce { target } => {
            let rows = reproduce::run(target)?;
            let failed = rows.iter().any(|r| !r.pass);
            Ok(Outcome {
                text: emit_rows(cli.format, &rows)?,
                code: i32::from(failed),
            })
        }
        Command::Verify { curve, s, t: dt } => {
            let loaded = load_curve(curve)?;
            let t = rho_table_algebraic(&loaded.curve)?;
            let triple = BasisTriple::from_curve(&loaded.curve)?;
            let b = Bounds::with_config(&t, config);
            let mut rows = Vec::new();
            for s in parse_range(s)? {
                let code = CodeSpec::standard(t.n(), s)?;
                if *dt == 0 || *dt > code.k() {
                    eprintln!("skipping C({s}): t = {dt} exceeds k = {}", code.k());
                    continue;
                }
                let truth = match oracle::true_ghw(&triple, &code, *dt) {
                    Ok(v) => v,
                    Err(e @ Error::EnumerationCap { .. }) => {
                        eprintln!("skipping C({s}): {e}");
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                for m in BoundMethod::all() {
                    let bound = b.code_bound(&code, &m, *dt)?.value;
                    rows.push(VerifyRow {
                        code: format!("C({s})"),
                        k: code.k(),
                        t: *dt,
                        method: m.name().to_string(),
                        bound,
                        truth,
                        sound: bound <= truth,
                    });
                }
            }
            let failed = rows.iter().any(|r| !r.sound);
            Ok(Outcome {
                text: emit_rows(cli.format, &rows)?,
                code: i32::from(failed),
            })
        }
        Command::Sweep {
            curve,
            s,
            t: ts,
            methods,
        } => {
            let loaded = load_curve(curve)?;
            let t = rho_table_algebraic(&loaded.curve)?;
            let n = t.n();
            let b = Bounds::with_config(&t, config);
            let methods = parse_methods(methods)?;
            let ts = parse_list(ts)?;
            let range = match s {
                Some(s) => parse_range(s)?,
                None => 0..=n - 1,
            };
            let mut report = BoundReport::new(loaded.name);
            for s in range {
                let code = CodeSpec::standard(n, s)?;
                code_rows(&mut report, &b, &code, &format!("C({s})"), &ts, &methods)?;
            }
            Ok(Outcome::ok(emit_report(cli.format, &report)?))
        }
    }
}

/// Runs the CLI on `args` (including the program name), writing results to
/// `out` unless `--output` redirects them. Returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.threads.unwrap_or(0))
        .build()
    {
        Ok(pool) => pool,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let outcome = match pool.install(|| execute(&cli)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| e.to_string()),
        None => out
            .write_all(outcome.text.as_bytes())
            .map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    outcome.code
}
