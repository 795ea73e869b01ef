//! Command-line front end for the `zpc` binary.

use crate::bounds::{theorem2_bounds, theorem3_report};
use crate::engine::{scan_zeros, smooth_count, ScanConfig};
use crate::paircorr::{
    decompose_horizontal_pairs, es_pair_count, fejer_double_sum, fejer_integral_form, lower_bound_chain, nt_formula,
    pcc_histogram, Window,
};
use crate::store::{build_synthetic, parse_odlyzko, write_odlyzko, IngestOptions, SyntheticSpec, ZeroSet, NATIVE_VERSION};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Data(_) => EXIT_DATA,
        }
    }
}

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

/// Compute, ingest and analyse Riemann zeta zeros.
#[derive(Debug, Parser)]
#[command(name = "zpc", version, about)]
pub struct Cli {
    /// Worker threads for parallel sections.
    #[arg(long, global = true, env = "ZPC_THREADS", value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute, ingest or export zero sets.
    #[command(subcommand)]
    Zeros(ZerosCmd),
    /// Pair statistics on a stored zero set.
    #[command(subcommand)]
    Stats(StatsCmd),
    /// Synthetic zero configurations.
    #[command(subcommand)]
    Synth(SynthCmd),
    /// Proportion bounds from a pair-count constant, or the box check.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum ZerosCmd {
    /// Scan (t_min, t_max] for zeros and certify the count.
    Compute {
        #[arg(long)]
        t_min: f64,
        #[arg(long)]
        t_max: f64,
        /// Ordinate refinement tolerance.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Convert a published ordinate table into the native format.
    Ingest {
        /// Input layout.
        #[arg(long, value_enum, default_value_t = InputFormat::Odlyzko)]
        format: InputFormat,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Declare the table complete up to this height.
        #[arg(long)]
        t_max: Option<f64>,
    },
    /// Write a stored set as CSV, JSON or an ordinate table.
    Export {
        #[arg(long)]
        zeros: PathBuf,
        #[arg(long, value_enum, default_value_t = ExportFormat::Csv)]
        to: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Odlyzko,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExportFormat {
    Csv,
    Json,
    Odlyzko,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    #[value(name = "0T")]
    ZeroToT,
    #[value(name = "T2T")]
    TTo2T,
}

impl From<WindowArg> for Window {
    fn from(w: WindowArg) -> Self {
        match w {
            WindowArg::ZeroToT => Window::ZeroToT,
            WindowArg::TTo2T => Window::TTo2T,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum StatsCmd {
    /// Zero count up to T against the counting-formula main terms.
    Count {
        #[arg(long)]
        t: f64,
        #[arg(long)]
        zeros: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Fejér-kernel double sum.
    Fejer {
        /// Height parameter; defaults to the largest ordinate.
        #[arg(long)]
        t: Option<f64>,
        #[arg(long, value_enum, default_value_t = WindowArg::ZeroToT)]
        window: WindowArg,
        #[arg(long)]
        zeros: PathBuf,
        /// Also evaluate the integral form and compare.
        #[arg(long)]
        integral_check: bool,
        #[arg(long, default_value_t = 64)]
        quad_points: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Pair-correlation histogram against the predicted density.
    Paircorr {
        #[arg(long, default_value_t = 3.0)]
        lambda_max: f64,
        #[arg(long, default_value_t = 12)]
        bins: usize,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        zeros: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Short-range pair count.
    Es {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        zeros: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Same-ordinate pair decomposition.
    Decompose {
        #[arg(long)]
        zeros: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Subcommand)]
pub enum SynthCmd {
    /// Build a synthetic set from a JSON seed list.
    Build {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Args)]
#[command(args_conflicts_with_subcommands = true)]
pub struct BoundsArgs {
    /// Pair-count constant, as a decimal or a fraction like 4/3.
    #[arg(long, value_parser = parse_ratio)]
    pub c: Option<f64>,
    #[command(flatten)]
    pub output: Output,
    #[command(subcommand)]
    pub command: Option<BoundsCmd>,
}

#[derive(Debug, Subcommand)]
pub enum BoundsCmd {
    /// Check a zero set against the box |σ − 1/2| < b/(2 log T), T < t ≤ 2T.
    Box {
        #[arg(long, value_parser = parse_ratio)]
        b: f64,
        #[arg(long)]
        t: f64,
        #[arg(long)]
        zeros: PathBuf,
        #[command(flatten)]
        output: Output,
    },
}

/// Parse `"1.25"` or `"4/3"`.
pub fn parse_ratio(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|e| format!("bad numerator: {e}"))?;
            let d: f64 = d.trim().parse().map_err(|e| format!("bad denominator: {e}"))?;
            if d == 0.0 {
                return Err("zero denominator".into());
            }
            n / d
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("{s} is not finite"))
    }
}

/// Load a native file, falling back to a one-ordinate-per-line table.
pub fn load_zeros(path: &Path) -> Result<ZeroSet, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    if text.starts_with(NATIVE_VERSION) {
        ZeroSet::from_native(&text).map_err(data)
    } else {
        parse_odlyzko(text.as_bytes(), IngestOptions::default()).map_err(data)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn default_t(zeros: &ZeroSet, t: Option<f64>) -> Result<f64, CliError> {
    match t {
        Some(t) => Ok(t),
        None => zeros.max_gamma().ok_or_else(|| CliError::Data("zero set is empty; pass --t".into())),
    }
}

/// Rendered command output.
pub enum Rendered {
    Value(Value),
    Csv(String),
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, CliError> {
    serde_json::to_value(v).map_err(data)
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let joined: Vec<String> = items.iter().map(scalar).collect();
            out.push((prefix.to_string(), joined.join(";")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        _ => out.push((prefix.to_string(), scalar(v))),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn render(r: &Rendered, format: OutputFormat) -> Result<String, CliError> {
    match (r, format) {
        (Rendered::Csv(s), OutputFormat::Csv) => Ok(s.clone()),
        (Rendered::Csv(s), _) => Ok(s.clone()),
        (Rendered::Value(v), OutputFormat::Json) => {
            let mut s = serde_json::to_string_pretty(v).map_err(data)?;
            s.push('\n');
            Ok(s)
        }
        (Rendered::Value(v), OutputFormat::Csv) => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let header: Vec<&str> = rows.iter().map(|(k, _)| k.as_str()).collect();
            let values: Vec<String> = rows.iter().map(|(_, x)| csv_field(x)).collect();
            Ok(format!("{}\n{}\n", header.join(","), values.join(",")))
        }
        (Rendered::Value(v), OutputFormat::Table) => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            Ok(rows.iter().map(|(k, x)| format!("{k:<width$}  {x}\n")).collect())
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Run one parsed command, returning the rendered text for standard output.
pub fn execute(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Zeros(cmd) => zeros_cmd(cmd),
        Command::Stats(cmd) => stats_cmd(cmd),
        Command::Synth(SynthCmd::Build { spec, out, output }) => {
            let text = fs::read_to_string(&spec).map_err(|e| CliError::Data(format!("{}: {e}", spec.display())))?;
            let spec: SyntheticSpec = serde_json::from_str(&text).map_err(data)?;
            let set = build_synthetic(&spec).map_err(data)?;
            write_file(&out, &set.to_native())?;
            let v = json!({
                "records": set.len(),
                "total_multiplicity": set.total_multiplicity(),
                "out": out.display().to_string(),
            });
            render(&Rendered::Value(v), output.format)
        }
        Command::Bounds(args) => match (args.c, args.command) {
            (Some(c), None) => render(&Rendered::Value(to_value(&theorem2_bounds(c))?), args.output.format),
            (None, Some(BoundsCmd::Box { b, t, zeros, output })) => {
                let set = load_zeros(&zeros)?;
                let report = theorem3_report(&set, b, t).map_err(|e| CliError::Usage(e.to_string()))?;
                render(&Rendered::Value(to_value(&report)?), output.format)
            }
            _ => Err(CliError::Usage("bounds needs either --c C or the `box` subcommand".into())),
        },
    }
}

fn zeros_cmd(cmd: ZerosCmd) -> Result<String, CliError> {
    match cmd {
        ZerosCmd::Compute { t_min, t_max, tol, out, output } => {
            let mut cfg = ScanConfig::new(t_min, t_max);
            cfg.refine_tol = tol;
            cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
            let set = scan_zeros(&cfg).map_err(data)?;
            if let Some(path) = &out {
                write_file(path, &set.to_native())?;
            }
            let v = json!({
                "window": [t_min, t_max],
                "records": set.len(),
                "first": set.records().first().map(|r| r.gamma),
                "last": set.max_gamma(),
                "completeness": to_value(set.completeness())?,
            });
            let cert_ok = set.is_complete();
            let text = render(&Rendered::Value(v), output.format)?;
            if cert_ok {
                Ok(text)
            } else {
                Err(CliError::Data(format!("count certificate failed\n{text}")))
            }
        }
        ZerosCmd::Ingest { format: InputFormat::Odlyzko, input, out, t_max } => {
            let file = fs::File::open(&input).map_err(|e| CliError::Data(format!("{}: {e}", input.display())))?;
            let opts = IngestOptions { t_max_hint: t_max, ..IngestOptions::default() };
            let set = parse_odlyzko(file, opts).map_err(data)?;
            write_file(&out, &set.to_native())?;
            let v = json!({ "records": set.len(), "t_max": set.t_max(), "out": out.display().to_string() });
            render(&Rendered::Value(v), OutputFormat::Json)
        }
        ZerosCmd::Export { zeros, to, out } => {
            let set = load_zeros(&zeros)?;
            let text = match to {
                ExportFormat::Csv => set.to_csv(),
                ExportFormat::Json => set.to_json().map_err(data)?,
                ExportFormat::Odlyzko => write_odlyzko(&set),
            };
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    Ok(String::new())
                }
                None => Ok(text),
            }
        }
    }
}

fn stats_cmd(cmd: StatsCmd) -> Result<String, CliError> {
    match cmd {
        StatsCmd::Count { t, zeros, output } => {
            if !(t >= 10.0) {
                return Err(CliError::Usage(format!("--t {t} must be ≥ 10")));
            }
            let set = load_zeros(&zeros)?;
            if !set.covers(0.0, t) {
                return Err(CliError::Data(format!("zero set does not cover (0, {t}]")));
            }
            let count = set.count_up_to(t);
            let main_terms = nt_formula(t);
            let v = json!({
                "T": t,
                "count": count,
                "nt_formula": main_terms,
                "difference": count as f64 - main_terms,
                "log_bound": 2.0 * t.ln(),
                "within_log_bound": (count as f64 - main_terms).abs() <= 2.0 * t.ln(),
                "theta_count": smooth_count(t),
            });
            render(&Rendered::Value(v), output.format)
        }
        StatsCmd::Fejer { t, window, zeros, integral_check, quad_points, output } => {
            let set = load_zeros(&zeros)?;
            let t = default_t(&set, t)?;
            let sum = fejer_double_sum(&set, t, window.into()).map_err(data)?;
            let mut v = to_value(&sum)?;
            if integral_check {
                let integral = fejer_integral_form(&set, t, window.into(), quad_points, 1e-10).map_err(data)?;
                let rel = (sum.total - integral.value).abs() / sum.total.abs().max(f64::MIN_POSITIVE);
                v["integral_form"] = to_value(&integral)?;
                v["relative_deviation"] = json!(rel);
            }
            render(&Rendered::Value(v), output.format)
        }
        StatsCmd::Paircorr { lambda_max, bins, t, zeros, output } => {
            let set = load_zeros(&zeros)?;
            let t = default_t(&set, t)?;
            let h = pcc_histogram(&set, t, lambda_max, bins).map_err(data)?;
            match output.format {
                OutputFormat::Csv => Ok(h.to_csv()),
                f => {
                    let mut v = to_value(&h)?;
                    v["mean_abs_deviation"] = json!(h.mean_abs_deviation());
                    render(&Rendered::Value(v), f)
                }
            }
        }
        StatsCmd::Es { lambda, t, zeros, output } => {
            let set = load_zeros(&zeros)?;
            let t = default_t(&set, t)?;
            let es = es_pair_count(&set, t, lambda).map_err(data)?;
            let mut v = to_value(&es)?;
            v["count_over_n"] = json!(es.count as f64 / es.n.max(1) as f64);
            render(&Rendered::Value(v), output.format)
        }
        StatsCmd::Decompose { zeros, output } => {
            let set = load_zeros(&zeros)?;
            let d = decompose_horizontal_pairs(&set).map_err(data)?;
            let chain = lower_bound_chain(&set);
            let v = json!({
                "lhs": d.lhs_bruteforce,
                "diag": d.diag,
                "sym_diag": d.sym_diag,
                "nonsym": d.nonsym_horiz,
                "identity_holds": d.identity_holds(),
                "T": d.t,
                "chain": to_value(&chain)?,
                "chain_holds": chain.holds(),
            });
            render(&Rendered::Value(v), output.format)
        }
    }
}

/// Parse arguments, configure the thread pool, run, and print. Returns the
/// process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    if let Some(k) = cli.threads {
        // a second build in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k as usize).build_global();
    }
    match execute(cli) {
        Ok(text) => {
            let _ = stdout.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if matches!(e, CliError::Usage(_)) {
                let _ = writeln!(stderr, "run `zpc --help` for the flag summary");
            }
            e.exit_code()
        }
    }
}
