//! Command-line front end.
//!
//! Subcommands: `report` (one state, one verdict), `scan` (tables over n
//! and a parameter grid), `entanglement` (cut-by-cut partial-transpose
//! spectra), `oracle` (discrete LHV maximization), `mk` (Mermin-Klyshko
//! baseline). All numbers print with 12 significant digits and identical
//! invocations produce byte-identical output; JSON and CSV carry the
//! same rounded values.
//!
//! Exit codes: 0 success, 1 usage or domain error, 2 when
//! `--expect-violation` was passed and the verdict is "not violated".
//! An optional `--config` file holds `key = value` lines mirroring the
//! long flags; explicit flags win.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{Map, Value};

use crate::functional::{threshold_comparison, violation_report, QuadratureSpec};
use crate::lhv::{maximize_decoupled, maximize_exhaustive, maximize_greedy, OracleResult};
use crate::mk::mk_maximize;
use crate::observables::{correlation_tensor, detect_harmonic, HarmonicForm};
use crate::state::{dur_default_phase, Bipartition, QuantumState};

/// States larger than this are refused by every subcommand.
pub const MAX_QUBITS: usize = 10;

const DEFAULT_ORACLE_GRID: usize = 256;
const DEFAULT_MK_RESTARTS: usize = 32;

/// Parses std::env::args, runs the subcommand, and returns the process
/// exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("error: {message}");
            1
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bellscope",
    version,
    about = "Correlation-function Bell tests over continuous phase settings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Violation verdict for one state of a family.
    Report(ReportArgs),
    /// Verdict table over qubit counts and a parameter grid.
    Scan(ScanArgs),
    /// Partial-transpose spectrum for every 1:(n-1) and 2:(n-2) cut.
    Entanglement(EntanglementArgs),
    /// Maximize the discrete LHV scalar product against a harmonic.
    Oracle(OracleArgs),
    /// Maximize the Mermin-Klyshko value over two settings per site.
    Mk(MkArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    Ghz,
    Dur,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Ghz => "ghz",
            Family::Dur => "dur",
        }
    }

    fn param_name(self) -> &'static str {
        match self {
            Family::Ghz => "beta",
            Family::Dur => "alpha",
        }
    }
}

impl FromStr for Family {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "ghz" => Ok(Family::Ghz),
            "dur" => Ok(Family::Dur),
            other => Err(format!("unknown family {other:?} (expected ghz or dur)")),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "text" => Ok(Format::Text),
            other => Err(format!("unknown format {other:?}")),
        }
    }
}

#[derive(Args)]
struct ReportArgs {
    /// State family: ghz or dur.
    family: Family,
    /// Qubit count.
    #[arg(long)]
    n: Option<usize>,
    /// GHZ amplitude parameter, radians in [0, pi/4].
    #[arg(long)]
    beta: Option<f64>,
    /// Dur phase parameter; defaults to pi/(4(n-1)).
    #[arg(long)]
    alpha: Option<f64>,
    /// Cross-check the analytic norm by quadrature with this many
    /// points per dimension.
    #[arg(long)]
    quad_points: Option<usize>,
    /// json (default) or text.
    #[arg(long)]
    format: Option<Format>,
    /// Also write the payload to this file.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Exit with code 2 unless the verdict is "violated".
    #[arg(long)]
    expect_violation: bool,
    /// key = value file mirroring the long flags; flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    family: Family,
    /// Inclusive qubit range lo:hi.
    #[arg(long)]
    n_range: Option<String>,
    /// Parameter grid start:stop:count (beta for ghz, alpha for dur).
    #[arg(long)]
    grid: Option<String>,
    /// csv (default) or json.
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct EntanglementArgs {
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// csv (default) or json.
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    /// Take the harmonic from this family instead of --amplitude/--phase.
    family: Option<Family>,
    /// Number of sites.
    #[arg(long)]
    n: Option<usize>,
    /// Grid points per site (default 256; at most 16 for --exhaustive).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Harmonic amplitude when no family is given (default 1).
    #[arg(long)]
    amplitude: Option<f64>,
    /// Harmonic phase when no family is given (default 0).
    #[arg(long)]
    phase: Option<f64>,
    /// Per-site kink-cell sweep (the default method).
    #[arg(long)]
    decoupled: bool,
    /// Enumerate all 2^m patterns per site.
    #[arg(long)]
    exhaustive: bool,
    /// Seeded multi-start single-flip ascent.
    #[arg(long)]
    greedy: bool,
    /// text (default) or json (includes the winning strategy).
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct MkArgs {
    family: Family,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Optimizer restarts (default 32).
    #[arg(long)]
    restarts: Option<usize>,
    /// text (default) or json.
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long)]
    expect_violation: bool,
    #[arg(long)]
    config: Option<PathBuf>,
}

type CliResult<T> = Result<T, String>;

fn execute(cli: Cli) -> CliResult<i32> {
    match cli.command {
        Command::Report(args) => cmd_report(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Entanglement(args) => cmd_entanglement(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Mk(args) => cmd_mk(args),
    }
}

/// key = value lines; '#' starts a comment.
struct Config(BTreeMap<String, String>);

impl Config {
    fn load(path: Option<&Path>) -> CliResult<Self> {
        let mut map = BTreeMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("reading {}: {e}", path.display()))?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| format!("{}:{}: expected key = value", path.display(), lineno + 1))?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Self(map))
    }

    /// Flag value if set, else the config entry, else None.
    fn merge<T: FromStr>(&self, flag: Option<T>, key: &str) -> CliResult<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|e| format!("config key {key}: {e}")),
        }
    }

    fn merge_bool(&self, flag: bool, key: &str) -> CliResult<bool> {
        if flag {
            return Ok(true);
        }
        Ok(self.merge(None::<bool>, key)?.unwrap_or(false))
    }
}

fn require<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| format!("missing required value for {flag}"))
}

fn check_qubits(n: usize) -> CliResult<usize> {
    if n > MAX_QUBITS {
        return Err(format!("n = {n} exceeds the supported maximum of {MAX_QUBITS}"));
    }
    Ok(n)
}

/// 12 significant digits, the one number format every table uses.
fn fmt12(x: f64) -> String {
    format!("{:.11e}", x + 0.0)
}

/// The f64 actually carried by printed numbers, so JSON and CSV agree.
fn round12(x: f64) -> f64 {
    fmt12(x).parse().expect("formatted float parses back")
}

fn num(x: f64) -> Value {
    Value::from(round12(x))
}

fn emit(payload: &str, output: Option<&Path>) -> CliResult<()> {
    print!("{payload}");
    if let Some(path) = output {
        std::fs::write(path, payload).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(())
}

fn json_payload(value: &Value) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("json serialization");
    text.push('\n');
    text
}

fn text_row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<22}{value}");
}

fn build_state(family: Family, n: usize, beta: Option<f64>, alpha: Option<f64>) -> CliResult<(QuantumState, f64)> {
    match family {
        Family::Ghz => {
            let beta = require(beta, "--beta (required for ghz)")?;
            Ok((QuantumState::generalized_ghz(n, beta).map_err(|e| e.to_string())?, beta))
        }
        Family::Dur => {
            let alpha = alpha.unwrap_or_else(|| dur_default_phase(n));
            Ok((QuantumState::dur(n, alpha).map_err(|e| e.to_string())?, alpha))
        }
    }
}

fn cmd_report(args: ReportArgs) -> CliResult<i32> {
    let cfg = Config::load(args.config.as_deref())?;
    let n = check_qubits(require(cfg.merge(args.n, "n")?, "--n")?)?;
    let beta = cfg.merge(args.beta, "beta")?;
    let alpha = cfg.merge(args.alpha, "alpha")?;
    let quad_points = cfg.merge(args.quad_points, "quad-points")?;
    let format = cfg.merge(args.format, "format")?.unwrap_or(Format::Json);
    let output = cfg.merge(args.output, "output")?;
    let expect_violation = cfg.merge_bool(args.expect_violation, "expect-violation")?;

    let (state, param) = build_state(args.family, n, beta, alpha)?;
    let quad = match quad_points {
        Some(points) => Some(QuadratureSpec::new(points).map_err(|e| e.to_string())?),
        None => None,
    };
    let report = violation_report(&state, quad.as_ref()).map_err(|e| e.to_string())?;

    let method = match report.method {
        crate::functional::NormMethod::Analytic => "analytic",
        crate::functional::NormMethod::Quadrature => "quadrature",
    };
    let payload = match format {
        Format::Json => {
            let mut params = Map::new();
            params.insert(args.family.param_name().into(), num(param));
            let mut map = Map::new();
            map.insert("family".into(), args.family.name().into());
            map.insert("n".into(), Value::from(n as u64));
            map.insert("params".into(), Value::Object(params));
            map.insert("norm_sq".into(), num(report.norm_sq));
            map.insert("lhv_bound".into(), num(report.lhv_bound));
            map.insert("margin".into(), num(report.margin));
            map.insert("violated".into(), Value::from(report.violated));
            map.insert("method".into(), method.into());
            json_payload(&Value::Object(map))
        }
        Format::Text => {
            let mut out = String::new();
            text_row(&mut out, "family", args.family.name());
            text_row(&mut out, "n", n);
            text_row(&mut out, args.family.param_name(), fmt12(param));
            text_row(&mut out, "norm_sq", fmt12(report.norm_sq));
            text_row(&mut out, "lhv_bound", fmt12(report.lhv_bound));
            text_row(&mut out, "margin", fmt12(report.margin));
            text_row(&mut out, "violated", report.violated);
            text_row(&mut out, "method", method);
            out
        }
        Format::Csv => return Err("report supports --format json or text".into()),
    };
    emit(&payload, output.as_deref())?;
    Ok(if expect_violation && !report.violated { 2 } else { 0 })
}

fn parse_n_range(raw: &str) -> CliResult<(usize, usize)> {
    let (lo, hi) = raw
        .split_once(':')
        .ok_or_else(|| format!("n range {raw:?} is not lo:hi"))?;
    let lo: usize = lo.trim().parse().map_err(|e| format!("n range start: {e}"))?;
    let hi: usize = hi.trim().parse().map_err(|e| format!("n range end: {e}"))?;
    if lo > hi {
        return Err(format!("n range {raw:?} is empty"));
    }
    Ok((lo, hi))
}

fn parse_grid(raw: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid {raw:?} is not start:stop:count"));
    }
    let start: f64 = parts[0].trim().parse().map_err(|e| format!("grid start: {e}"))?;
    let stop: f64 = parts[1].trim().parse().map_err(|e| format!("grid stop: {e}"))?;
    let count: usize = parts[2].trim().parse().map_err(|e| format!("grid count: {e}"))?;
    if stop < start {
        return Err(format!("grid {raw:?} is not monotone (stop < start)"));
    }
    if count == 0 {
        return Err("grid is empty (count = 0)".into());
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let step = (stop - start) / (count - 1) as f64;
    Ok((0..count).map(|i| start + step * i as f64).collect())
}

fn cmd_scan(args: ScanArgs) -> CliResult<i32> {
    let cfg = Config::load(args.config.as_deref())?;
    let n_range = require(cfg.merge(args.n_range, "n-range")?, "--n-range")?;
    let grid = require(cfg.merge(args.grid, "grid")?, "--grid")?;
    let format = cfg.merge(args.format, "format")?.unwrap_or(Format::Csv);
    let output = cfg.merge(args.output, "output")?;

    let (lo, hi) = parse_n_range(&n_range)?;
    check_qubits(hi)?;
    let params = parse_grid(&grid)?;

    struct Row {
        n: usize,
        param: f64,
        norm_sq: f64,
        lhv_bound: f64,
        margin: f64,
        violated: bool,
        threshold_functional: f64,
        threshold_two_setting: f64,
    }

    let mut rows = Vec::new();
    for n in lo..=hi {
        let thresholds = threshold_comparison(n);
        for &param in &params {
            let (state, param) = match args.family {
                Family::Ghz => build_state(Family::Ghz, n, Some(param), None)?,
                Family::Dur => build_state(Family::Dur, n, None, Some(param))?,
            };
            let report = violation_report(&state, None).map_err(|e| e.to_string())?;
            rows.push(Row {
                n,
                param,
                norm_sq: report.norm_sq,
                lhv_bound: report.lhv_bound,
                margin: report.margin,
                violated: report.violated,
                threshold_functional: thresholds.functional,
                threshold_two_setting: thresholds.two_setting,
            });
        }
    }

    let family = args.family.name();
    let payload = match format {
        Format::Csv => {
            let mut out = String::from(
                "family,n,param,norm_sq,lhv_bound,margin,violated,threshold_functional,threshold_two_setting\n",
            );
            for r in &rows {
                let _ = writeln!(
                    out,
                    "{family},{},{},{},{},{},{},{},{}",
                    r.n,
                    fmt12(r.param),
                    fmt12(r.norm_sq),
                    fmt12(r.lhv_bound),
                    fmt12(r.margin),
                    r.violated,
                    fmt12(r.threshold_functional),
                    fmt12(r.threshold_two_setting),
                );
            }
            out
        }
        Format::Json => {
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut map = Map::new();
                    map.insert("family".into(), family.into());
                    map.insert("n".into(), Value::from(r.n as u64));
                    map.insert("param".into(), num(r.param));
                    map.insert("norm_sq".into(), num(r.norm_sq));
                    map.insert("lhv_bound".into(), num(r.lhv_bound));
                    map.insert("margin".into(), num(r.margin));
                    map.insert("violated".into(), Value::from(r.violated));
                    map.insert("threshold_functional".into(), num(r.threshold_functional));
                    map.insert("threshold_two_setting".into(), num(r.threshold_two_setting));
                    Value::Object(map)
                })
                .collect();
            json_payload(&Value::Array(items))
        }
        Format::Text => return Err("scan supports --format csv or json".into()),
    };
    emit(&payload, output.as_deref())?;
    Ok(0)
}

fn cmd_entanglement(args: EntanglementArgs) -> CliResult<i32> {
    let cfg = Config::load(args.config.as_deref())?;
    let n = check_qubits(require(cfg.merge(args.n, "n")?, "--n")?)?;
    let beta = cfg.merge(args.beta, "beta")?;
    let alpha = cfg.merge(args.alpha, "alpha")?;
    let format = cfg.merge(args.format, "format")?.unwrap_or(Format::Csv);
    let output = cfg.merge(args.output, "output")?;

    let (state, param) = build_state(args.family, n, beta, alpha)?;

    struct CutRow {
        cut: String,
        side_a: Vec<usize>,
        min_eigenvalue: f64,
        ppt: bool,
    }

    let mut cuts: Vec<Vec<usize>> = (1..=n).map(|q| vec![q]).collect();
    let has_two_cuts = n >= 4;
    if has_two_cuts {
        for a in 1..=n {
            for b in (a + 1)..=n {
                cuts.push(vec![a, b]);
            }
        }
    }

    let mut rows = Vec::new();
    for side_a in cuts {
        let cut = Bipartition::new(&side_a, n).map_err(|e| e.to_string())?;
        let check = state
            .ppt_check(&cut, crate::state::POSITIVITY_TOL)
            .map_err(|e| e.to_string())?;
        rows.push(CutRow {
            cut: format!("{}:{}", side_a.len(), n - side_a.len()),
            side_a,
            min_eigenvalue: check.min_eigenvalue,
            ppt: check.ppt,
        });
    }

    let note = (!has_two_cuts).then(|| {
        format!("at n = {n} every 2:(n-2) cut relabels a 1:(n-1) cut; only 1:(n-1) cuts are listed")
    });

    let family = args.family.name();
    let payload = match format {
        Format::Csv => {
            let mut out = String::new();
            if let Some(note) = &note {
                let _ = writeln!(out, "# {note}");
            }
            out.push_str("family,n,cut,side_a,min_pt_eigenvalue,ppt\n");
            for r in &rows {
                let side: Vec<String> = r.side_a.iter().map(|q| q.to_string()).collect();
                let _ = writeln!(
                    out,
                    "{family},{n},{},{},{},{}",
                    r.cut,
                    side.join("+"),
                    fmt12(r.min_eigenvalue),
                    r.ppt,
                );
            }
            out
        }
        Format::Json => {
            let mut params = Map::new();
            params.insert(args.family.param_name().into(), num(param));
            let items: Vec<Value> = rows
                .iter()
                .map(|r| {
                    let mut map = Map::new();
                    map.insert("cut".into(), r.cut.clone().into());
                    map.insert(
                        "side_a".into(),
                        Value::from(r.side_a.iter().map(|&q| q as u64).collect::<Vec<_>>()),
                    );
                    map.insert("min_pt_eigenvalue".into(), num(r.min_eigenvalue));
                    map.insert("ppt".into(), Value::from(r.ppt));
                    Value::Object(map)
                })
                .collect();
            let mut map = Map::new();
            map.insert("family".into(), family.into());
            map.insert("n".into(), Value::from(n as u64));
            map.insert("params".into(), Value::Object(params));
            map.insert("cuts".into(), Value::Array(items));
            if let Some(note) = &note {
                map.insert("note".into(), note.clone().into());
            }
            json_payload(&Value::Object(map))
        }
        Format::Text => return Err("entanglement supports --format csv or json".into()),
    };
    emit(&payload, output.as_deref())?;
    Ok(0)
}

fn cmd_oracle(args: OracleArgs) -> CliResult<i32> {
    let cfg = Config::load(args.config.as_deref())?;
    let n = check_qubits(require(cfg.merge(args.n, "n")?, "--n")?)?;
    let m = cfg.merge(args.m, "m")?.unwrap_or(DEFAULT_ORACLE_GRID);
    let beta = cfg.merge(args.beta, "beta")?;
    let alpha = cfg.merge(args.alpha, "alpha")?;
    let amplitude = cfg.merge(args.amplitude, "amplitude")?;
    let phase = cfg.merge(args.phase, "phase")?;
    let format = cfg.merge(args.format, "format")?.unwrap_or(Format::Text);
    let output = cfg.merge(args.output, "output")?;

    let mut method_flags = Vec::new();
    if cfg.merge_bool(args.decoupled, "decoupled")? {
        method_flags.push("decoupled");
    }
    if cfg.merge_bool(args.exhaustive, "exhaustive")? {
        method_flags.push("exhaustive");
    }
    if cfg.merge_bool(args.greedy, "greedy")? {
        method_flags.push("greedy");
    }
    if method_flags.is_empty() {
        if let Some(method) = cfg.0.get("method") {
            method_flags.push(match method.as_str() {
                "decoupled" => "decoupled",
                "exhaustive" => "exhaustive",
                "greedy" => "greedy",
                other => return Err(format!("config key method: unknown method {other:?}")),
            });
        }
    }
    if method_flags.len() > 1 {
        return Err(format!("pick one method, got --{}", method_flags.join(" --")));
    }
    let method = method_flags.first().copied().unwrap_or("decoupled");

    let harmonic = if let Some(family) = args.family {
        if amplitude.is_some() || phase.is_some() {
            return Err("pass either a family or --amplitude/--phase, not both".into());
        }
        let beta = match family {
            Family::Ghz => Some(beta.unwrap_or(FRAC_PI_4)),
            Family::Dur => None,
        };
        let (state, _) = build_state(family, n, beta, alpha)?;
        let h = detect_harmonic(&correlation_tensor(&state), &state);
        if !h.is_pure_harmonic {
            return Err("state correlation is not a pure harmonic".into());
        }
        h
    } else {
        HarmonicForm::new(amplitude.unwrap_or(1.0), phase.unwrap_or(0.0))
            .map_err(|e| e.to_string())?
    };

    let result: OracleResult = match method {
        "decoupled" => maximize_decoupled(&harmonic, n, m),
        "exhaustive" => maximize_exhaustive(&harmonic, n, m),
        "greedy" => maximize_greedy(&harmonic, n, m),
        _ => unreachable!(),
    }
    .map_err(|e| e.to_string())?;

    let bound = 4f64.powi(n as i32) * harmonic.amplitude;
    let ratio = if bound > 0.0 { result.best_value / bound } else { 0.0 };

    let payload = match format {
        Format::Text => {
            let mut out = String::new();
            text_row(&mut out, "method", method);
            text_row(&mut out, "n", n);
            text_row(&mut out, "m", m);
            text_row(&mut out, "amplitude", fmt12(harmonic.amplitude));
            text_row(&mut out, "phase", fmt12(harmonic.phase));
            text_row(&mut out, "best_value", fmt12(result.best_value));
            text_row(&mut out, "bound", fmt12(bound));
            text_row(&mut out, "ratio", fmt12(ratio));
            out
        }
        Format::Json => {
            let mut map = Map::new();
            map.insert("method".into(), method.into());
            map.insert("n".into(), Value::from(n as u64));
            map.insert("m".into(), Value::from(m as u64));
            map.insert("amplitude".into(), num(harmonic.amplitude));
            map.insert("phase".into(), num(harmonic.phase));
            map.insert("best_value".into(), num(result.best_value));
            map.insert("bound".into(), num(bound));
            map.insert("ratio".into(), num(ratio));
            map.insert(
                "best_strategy".into(),
                serde_json::to_value(&result.best_strategy).expect("strategy serializes"),
            );
            json_payload(&Value::Object(map))
        }
        Format::Csv => return Err("oracle supports --format text or json".into()),
    };
    emit(&payload, output.as_deref())?;
    Ok(0)
}

fn cmd_mk(args: MkArgs) -> CliResult<i32> {
    let cfg = Config::load(args.config.as_deref())?;
    let n = check_qubits(require(cfg.merge(args.n, "n")?, "--n")?)?;
    let beta = cfg.merge(args.beta, "beta")?;
    let alpha = cfg.merge(args.alpha, "alpha")?;
    let restarts = cfg.merge(args.restarts, "restarts")?.unwrap_or(DEFAULT_MK_RESTARTS);
    let format = cfg.merge(args.format, "format")?.unwrap_or(Format::Text);
    let output = cfg.merge(args.output, "output")?;
    let expect_violation = cfg.merge_bool(args.expect_violation, "expect-violation")?;

    let (state, param) = build_state(args.family, n, beta, alpha)?;
    let result = mk_maximize(&state, restarts).map_err(|e| e.to_string())?;

    let payload = match format {
        Format::Text => {
            let mut out = String::new();
            text_row(&mut out, "family", args.family.name());
            text_row(&mut out, "n", n);
            text_row(&mut out, args.family.param_name(), fmt12(param));
            text_row(&mut out, "value", fmt12(result.value));
            text_row(&mut out, "lhv_bound", fmt12(result.lhv_bound));
            text_row(&mut out, "violated", result.violated);
            text_row(&mut out, "restarts", result.restarts);
            for (k, (a, b)) in result.settings.pairs().iter().enumerate() {
                text_row(&mut out, &format!("site {}", k + 1), format!("{}  {}", fmt12(*a), fmt12(*b)));
            }
            out
        }
        Format::Json => {
            let mut params = Map::new();
            params.insert(args.family.param_name().into(), num(param));
            let pairs: Vec<Value> = result
                .settings
                .pairs()
                .iter()
                .map(|&(a, b)| Value::Array(vec![num(a), num(b)]))
                .collect();
            let mut map = Map::new();
            map.insert("family".into(), args.family.name().into());
            map.insert("n".into(), Value::from(n as u64));
            map.insert("params".into(), Value::Object(params));
            map.insert("value".into(), num(result.value));
            map.insert("lhv_bound".into(), num(result.lhv_bound));
            map.insert("violated".into(), Value::from(result.violated));
            map.insert("restarts".into(), Value::from(result.restarts as u64));
            map.insert("settings".into(), Value::Array(pairs));
            json_payload(&Value::Object(map))
        }
        Format::Csv => return Err("mk supports --format text or json".into()),
    };
    emit(&payload, output.as_deref())?;
    Ok(if expect_violation && !result.violated { 2 } else { 0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_digit_format_round_trips() {
        assert_eq!(fmt12(627.8046446619938), "6.27804644662e2");
        assert_eq!(fmt12(0.0), "0.00000000000e0");
        assert_eq!(fmt12(-0.0), "0.00000000000e0");
        assert_eq!(round12(627.8046446619938), 627.804644662);
    }

    #[test]
    fn grids_parse_and_reject() {
        assert_eq!(parse_grid("0:1:3").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.3:0.3:1").unwrap(), vec![0.3]);
        assert!(parse_grid("1:0:5").is_err());
        assert!(parse_grid("0:1:0").is_err());
        assert!(parse_grid("0:1").is_err());
        assert_eq!(parse_n_range("3:8").unwrap(), (3, 8));
        assert!(parse_n_range("8:3").is_err());
    }

    #[test]
    fn config_merging_prefers_flags() {
        let mut map = BTreeMap::new();
        map.insert("n".to_string(), "6".to_string());
        map.insert("expect-violation".to_string(), "true".to_string());
        let cfg = Config(map);
        assert_eq!(cfg.merge(Some(4usize), "n").unwrap(), Some(4));
        assert_eq!(cfg.merge(None::<usize>, "n").unwrap(), Some(6));
        assert_eq!(cfg.merge(None::<usize>, "missing").unwrap(), None);
        assert!(cfg.merge_bool(false, "expect-violation").unwrap());
        assert!(cfg.merge_bool(true, "missing").unwrap());
    }
}
