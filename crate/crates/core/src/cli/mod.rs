//! Command-line front end: argument and config-file handling, dispatch to
//! the solvers, and result files.
//!
//! Exit codes: 0 on success, 2 for invalid input or unwritable output, 3 when
//! a solver produces no result.

mod config;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::method::Method;
use crate::model::FlowParams;
use crate::sweep::{self, table1, NeutralSweep};

pub use config::parse_config;
pub use output::{Document, Record};

pub const THREADS_ENV: &str = "HEATCONV_THREADS";

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Solver(_) => 3,
        }
    }
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

#[derive(Debug, Parser)]
#[command(name = "heatconv", version, about = "Convection onset in an internally heated layer with rigid walls")]
struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Marginal Ra at one (N, a^2) point.
    Solve(Flags),
    /// Ra(a) at fixed N.
    NeutralCurve(Flags),
    /// Ra(a, N) on a tensor grid.
    NeutralSurface(Flags),
    /// Minimize Ra over the wavenumber.
    Critical(Flags),
    /// Recompute the published comparison table.
    Table1(Flags),
    /// Every method at one point.
    Compare(Flags),
}

#[derive(Debug, Clone, Default, Args)]
struct Flags {
    /// key=value file; flags given on the command line take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Heating-rate parameter N.
    #[arg(long = "N", allow_negative_numbers = true)]
    n: Option<f64>,
    /// Squared wavenumber a^2.
    #[arg(long = "a2", allow_negative_numbers = true)]
    a2: Option<f64>,
    #[arg(long = "pr", allow_negative_numbers = true)]
    pr: Option<f64>,
    /// secular | oracle | variational | first-approx (or a full tag such as secular-K24).
    #[arg(long)]
    method: Option<String>,
    /// Galerkin truncation or basis size.
    #[arg(long = "K")]
    k: Option<usize>,
    /// Collocation resolution for the oracle.
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json; defaults from the output extension.
    #[arg(long)]
    format: Option<String>,
    #[arg(long = "a-min", allow_negative_numbers = true)]
    a_min: Option<f64>,
    #[arg(long = "a-max", allow_negative_numbers = true)]
    a_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long = "n-min", allow_negative_numbers = true)]
    n_min: Option<f64>,
    #[arg(long = "n-max", allow_negative_numbers = true)]
    n_max: Option<f64>,
    #[arg(long = "n-samples")]
    n_samples: Option<usize>,
    /// Comma-separated method list for table1.
    #[arg(long)]
    methods: Option<String>,
    /// Plot-data file for neutral-curve and neutral-surface.
    #[arg(long)]
    plot: Option<PathBuf>,
}

fn parse_value<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.parse().map_err(|_| invalid(format!("invalid value `{value}` for `{key}`")))
}

impl Flags {
    fn fill_from(&mut self, file: &BTreeMap<String, String>) -> Result<(), CliError> {
        fn set<T: std::str::FromStr>(slot: &mut Option<T>, file: &BTreeMap<String, String>, key: &str) -> Result<(), CliError> {
            if slot.is_none() {
                if let Some(v) = file.get(key) {
                    *slot = Some(parse_value(key, v)?);
                }
            }
            Ok(())
        }
        set(&mut self.n, file, "N")?;
        set(&mut self.a2, file, "a2")?;
        set(&mut self.pr, file, "pr")?;
        set(&mut self.method, file, "method")?;
        set(&mut self.k, file, "K")?;
        set(&mut self.resolution, file, "resolution")?;
        set(&mut self.out, file, "out")?;
        set(&mut self.format, file, "format")?;
        set(&mut self.a_min, file, "a-min")?;
        set(&mut self.a_max, file, "a-max")?;
        set(&mut self.samples, file, "samples")?;
        set(&mut self.n_min, file, "n-min")?;
        set(&mut self.n_max, file, "n-max")?;
        set(&mut self.n_samples, file, "n-samples")?;
        set(&mut self.methods, file, "methods")?;
        set(&mut self.plot, file, "plot")?;
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    NeutralCurve,
    NeutralSurface,
    Critical,
    Table1,
    Compare,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::NeutralCurve => "neutral-curve",
            Command::NeutralSurface => "neutral-surface",
            Command::Critical => "critical",
            Command::Table1 => "table1",
            Command::Compare => "compare",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub n_rate: f64,
    pub a_sq: f64,
    pub pr: f64,
    pub method: Method,
    /// Methods for the `table1` command.
    pub methods: Vec<Method>,
    pub a_range: (f64, f64),
    pub samples: usize,
    pub n_range: (f64, f64),
    pub n_samples: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub plot_path: Option<PathBuf>,
    /// Worker-thread cap for sweeps.
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn params(&self) -> Result<FlowParams, CliError> {
        FlowParams::with_prandtl(self.n_rate, self.a_sq, self.pr).map_err(|e| invalid(e.to_string()))
    }

    fn from_flags(command: Command, mut flags: Flags, threads: Option<usize>) -> Result<Self, CliError> {
        if let Some(path) = flags.config.clone() {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| invalid(format!("cannot read config {}: {e}", path.display())))?;
            flags.fill_from(&parse_config(&text).map_err(invalid)?)?;
        }

        let method_arg = flags.method.as_deref().unwrap_or("secular");
        let method = parse_method(method_arg, flags.k, flags.resolution)?;
        let methods = match flags.methods.as_deref() {
            None => vec![Method::secular(), Method::variational(), Method::oracle()],
            Some(list) => list
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| parse_method(s, flags.k, flags.resolution))
                .collect::<Result<Vec<_>, _>>()?,
        };
        if methods.is_empty() {
            return Err(invalid("--methods is empty"));
        }

        let default_a = if command == Command::Critical { (1.5, 6.0) } else { (1.0, 8.0) };
        let format = match flags.format.as_deref() {
            Some("csv") => Format::Csv,
            Some("json") => Format::Json,
            Some(other) => return Err(invalid(format!("unknown format `{other}` (expected csv or json)"))),
            None => match flags.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
                Some("json") => Format::Json,
                Some("csv") => Format::Csv,
                _ if matches!(command, Command::Solve | Command::Critical | Command::Compare) => Format::Json,
                _ => Format::Csv,
            },
        };

        let cfg = RunConfig {
            command,
            n_rate: flags.n.unwrap_or(0.0),
            a_sq: flags.a2.unwrap_or(9.711),
            pr: flags.pr.unwrap_or(1.0),
            method,
            methods,
            a_range: (flags.a_min.unwrap_or(default_a.0), flags.a_max.unwrap_or(default_a.1)),
            samples: flags.samples.unwrap_or(36),
            n_range: (flags.n_min.unwrap_or(0.0), flags.n_max.unwrap_or(16.0)),
            n_samples: flags.n_samples.unwrap_or(9),
            output_path: flags.out,
            format,
            plot_path: flags.plot,
            threads,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), CliError> {
        self.params()?;
        let (lo, hi) = self.a_range;
        if matches!(self.command, Command::NeutralCurve | Command::NeutralSurface | Command::Critical) {
            if !(lo > 0.0) || !(hi > lo) {
                return Err(invalid(format!("wavenumber range must satisfy 0 < a-min < a-max, got [{lo}, {hi}]")));
            }
            if self.samples < 2 {
                return Err(invalid("--samples must be at least 2"));
            }
        }
        if self.command == Command::NeutralSurface {
            if !(self.n_range.1 > self.n_range.0) && self.n_samples > 1 {
                return Err(invalid("heating-rate range must satisfy n-min < n-max"));
            }
            if self.n_samples < 1 {
                return Err(invalid("--n-samples must be at least 1"));
            }
        }
        if self.threads == Some(0) {
            return Err(invalid(format!("{THREADS_ENV} must be at least 1")));
        }
        for p in [&self.output_path, &self.plot_path].into_iter().flatten() {
            check_writable_target(p)?;
        }
        Ok(())
    }
}

fn parse_method(s: &str, k: Option<usize>, resolution: Option<usize>) -> Result<Method, CliError> {
    let family_only = matches!(s, "secular" | "oracle" | "variational" | "first-approx");
    let m = if family_only { Method::from_family(s, k, resolution) } else { s.parse() };
    m.map_err(|e| invalid(e.to_string()))
}

fn check_writable_target(path: &Path) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(invalid(format!("output directory {} does not exist", dir.display())));
    }
    if path.is_dir() {
        return Err(invalid(format!("output path {} is a directory", path.display())));
    }
    Ok(())
}

/// What a successful run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    /// One line: command, parameters, headline Ra.
    pub summary: String,
    /// Serialized results when no output path was given.
    pub stdout_document: Option<String>,
    pub warnings: Vec<String>,
}

struct Produced {
    summary: String,
    meta: BTreeMap<String, Value>,
    records: Vec<Record>,
    plot: Option<String>,
    warnings: Vec<String>,
}

pub fn run(config: &RunConfig) -> Result<RunOutcome, CliError> {
    let produced = match config.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| invalid(format!("cannot start {n} worker threads: {e}")))?
            .install(|| execute(config)),
        None => execute(config),
    }?;

    let records: Vec<Record> = produced.records.into_iter().map(Record::rounded).collect();
    let mut warnings = produced.warnings;
    if config.format == Format::Csv {
        // The CSV schema has no note column.
        for r in records.iter().filter(|r| r.note.is_some()) {
            let line = format!("N={} a2={} {}: {}", r.n_rate, r.a2, r.method, r.note.as_deref().unwrap_or_default());
            if !warnings.contains(&line) {
                warnings.push(line);
            }
        }
    }
    let body = match config.format {
        Format::Csv => output::to_csv(&records).map_err(|e| CliError::Io(e.to_string()))?,
        Format::Json => Document { meta: produced.meta, results: records }.to_json(),
    };

    if let (Some(path), Some(plot)) = (&config.plot_path, &produced.plot) {
        output::write_atomic(path, plot.as_bytes())
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    let stdout_document = match &config.output_path {
        Some(path) => {
            output::write_atomic(path, body.as_bytes())
                .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            None
        }
        None => Some(body),
    };
    Ok(RunOutcome { summary: produced.summary, stdout_document, warnings })
}

fn base_meta(config: &RunConfig) -> BTreeMap<String, Value> {
    let mut meta = BTreeMap::new();
    meta.insert("command".to_string(), Value::from(config.command.name()));
    meta.insert("pr".to_string(), Value::from(config.pr));
    meta
}

fn method_note(method: &Method) -> Option<String> {
    (!method.uses_heating_rate()).then(|| "N not used by this method".to_string())
}

fn point_record(n_rate: f64, a_sq: f64, method: &Method, rayleigh: Result<f64, String>) -> Record {
    let paper = table1::lookup(n_rate, a_sq).and_then(|r| r.paper_value(method));
    let (rayleigh, note) = match rayleigh {
        Ok(ra) => (Some(ra), method_note(method)),
        Err(e) => (None, Some(e)),
    };
    Record {
        n_rate,
        a2: a_sq,
        method: method.to_string(),
        k_or_resolution: method.size_parameter(),
        rayleigh,
        paper_value: paper,
        rel_deviation: match (rayleigh, paper) {
            (Some(ra), Some(p)) => Some((ra - p) / p),
            _ => None,
        },
        note,
    }
}

fn execute(config: &RunConfig) -> Result<Produced, CliError> {
    let solver_error = |e: crate::Error| CliError::Solver(e.to_string());
    let mut meta = base_meta(config);
    match config.command {
        Command::Solve => {
            let params = config.params()?;
            let ra = config.method.rayleigh(&params).map_err(solver_error)?;
            meta.insert("method".into(), Value::from(config.method.to_string()));
            Ok(Produced {
                summary: format!(
                    "solve N={} a2={} method={} Ra={}",
                    config.n_rate,
                    config.a_sq,
                    config.method,
                    output::format_sig(ra)
                ),
                meta,
                records: vec![point_record(config.n_rate, config.a_sq, &config.method, Ok(ra))],
                plot: None,
                warnings: Vec::new(),
            })
        }
        Command::Compare => {
            let params = config.params()?;
            let k = config.method.size_parameter().filter(|_| matches!(config.method, Method::Secular { .. }));
            let mut methods = vec![
                Method::FirstApprox,
                Method::Secular { truncation: 2 },
                Method::Secular { truncation: 3 },
                Method::Secular { truncation: k.unwrap_or(table1::CONVERGED_TRUNCATION) },
                Method::variational(),
                Method::oracle(),
            ];
            methods.dedup();
            let records: Vec<Record> = methods
                .iter()
                .map(|m| point_record(config.n_rate, config.a_sq, m, m.rayleigh(&params).map_err(|e| e.to_string())))
                .collect();
            if records.iter().all(|r| r.rayleigh.is_none()) {
                return Err(CliError::Solver("every method failed at this point".into()));
            }
            let headline = records
                .iter()
                .map(|r| format!("{}={}", r.method, r.rayleigh.map(output::format_sig).unwrap_or_else(|| "failed".into())))
                .collect::<Vec<_>>()
                .join(" ");
            Ok(Produced {
                summary: format!("compare N={} a2={} {headline}", config.n_rate, config.a_sq),
                meta,
                records,
                plot: None,
                warnings: Vec::new(),
            })
        }
        Command::NeutralCurve | Command::NeutralSurface => {
            let sweep = if config.command == Command::NeutralCurve {
                sweep::neutral_curve(config.n_rate, config.a_range, config.samples, config.method)
            } else {
                sweep::neutral_surface(config.n_range, config.n_samples, config.a_range, config.samples, config.method)
            }
            .map_err(|e| invalid(e.to_string()))?;
            sweep_output(config, meta, sweep)
        }
        Command::Critical => {
            let cp = sweep::critical_point(config.n_rate, config.method, config.a_range).map_err(solver_error)?;
            meta.insert("method".into(), Value::from(cp.method.clone()));
            meta.insert("a_crit".into(), Value::from(output::round_sig(cp.a_crit)));
            meta.insert("bracket".into(), Value::from(output::round_sig(cp.bracket)));
            let a_sq = cp.a_crit * cp.a_crit;
            Ok(Produced {
                summary: format!(
                    "critical N={} method={} a_c={} Ra_c={}",
                    config.n_rate,
                    cp.method,
                    output::format_sig(cp.a_crit),
                    output::format_sig(cp.ra_crit)
                ),
                meta,
                records: vec![point_record(config.n_rate, a_sq, &config.method, Ok(cp.ra_crit))],
                plot: None,
                warnings: Vec::new(),
            })
        }
        Command::Table1 => {
            let report = table1::table1_report(&config.methods);
            let methods: Vec<String> = table1::expand_methods(&config.methods).iter().map(|m| m.to_string()).collect();
            meta.insert("methods".into(), Value::from(methods.clone()));
            meta.insert("notes".into(), Value::from(report.notes.clone()));
            let records: Vec<Record> = report
                .cells
                .iter()
                .map(|c| {
                    let mut r = point_record(
                        c.row.n_rate,
                        c.row.a_sq,
                        &c.method,
                        c.rayleigh.clone().map_err(|e| e.to_string()),
                    );
                    r.paper_value = c.paper_value;
                    r.rel_deviation = c.rel_deviation();
                    r
                })
                .collect();
            let worst = records
                .iter()
                .filter_map(|r| r.rel_deviation)
                .fold(0.0f64, |m, d| m.max(d.abs()));
            Ok(Produced {
                summary: format!(
                    "table1 methods={} cells={} failures={} max_abs_rel_deviation={}",
                    methods.join(","),
                    records.len(),
                    report.failures(),
                    output::format_sig(worst)
                ),
                meta,
                records,
                plot: None,
                warnings: report.notes,
            })
        }
    }
}

fn sweep_output(config: &RunConfig, mut meta: BTreeMap<String, Value>, sweep: NeutralSweep) -> Result<Produced, CliError> {
    if sweep.points.is_empty() {
        let first = sweep.failures.first().map(|f| f.error.to_string()).unwrap_or_default();
        return Err(CliError::Solver(format!("no point of the sweep solved: {first}")));
    }
    meta.insert("method".into(), Value::from(config.method.to_string()));
    meta.insert("failures".into(), Value::from(sweep.failures.len()));
    let mut records: Vec<Record> = sweep
        .points
        .iter()
        .map(|p| point_record(p.n_rate, p.a_sq(), &config.method, Ok(p.rayleigh)))
        .collect();
    records.extend(
        sweep
            .failures
            .iter()
            .map(|f| point_record(f.n_rate, f.a * f.a, &config.method, Err(f.error.to_string()))),
    );
    let min = sweep.points.iter().min_by(|p, q| p.rayleigh.total_cmp(&q.rayleigh)).expect("nonempty");
    let plot = config.plot_path.as_ref().map(|_| output::plot_data(&sweep.points));
    let warnings = sweep
        .failures
        .iter()
        .map(|f| format!("point N={} a={} failed: {}", f.n_rate, f.a, f.error))
        .collect();
    Ok(Produced {
        summary: format!(
            "{} method={} points={} failures={} min Ra={} at N={} a={}",
            config.command.name(),
            config.method,
            sweep.points.len(),
            sweep.failures.len(),
            output::format_sig(min.rayleigh),
            min.n_rate,
            output::format_sig(min.a)
        ),
        meta,
        records,
        plot,
        warnings,
    })
}

/// Writes plot data for `points`; rejects an empty set without touching `path`.
pub fn emit_plot_data(points: &[crate::NeutralPoint], path: &Path) -> Result<(), CliError> {
    if points.is_empty() {
        return Err(invalid("no points to write"));
    }
    check_writable_target(path)?;
    output::write_atomic(path, output::plot_data(points).as_bytes())
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Parses arguments, applies the environment, runs, and reports. Returns
/// the process exit code.
pub fn main_entry<I, T>(args: I, threads_env: Option<String>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let threads = match threads_env.map(|v| v.trim().parse::<usize>()) {
        None => None,
        Some(Ok(n)) if n >= 1 => Some(n),
        Some(_) => {
            eprintln!("error: {THREADS_ENV} must be an integer >= 1");
            return 2;
        }
    };
    let (command, flags) = match cli.command {
        CommandArgs::Solve(f) => (Command::Solve, f),
        CommandArgs::NeutralCurve(f) => (Command::NeutralCurve, f),
        CommandArgs::NeutralSurface(f) => (Command::NeutralSurface, f),
        CommandArgs::Critical(f) => (Command::Critical, f),
        CommandArgs::Table1(f) => (Command::Table1, f),
        CommandArgs::Compare(f) => (Command::Compare, f),
    };
    let result = RunConfig::from_flags(command, flags, threads).and_then(|cfg| run(&cfg));
    match result {
        Ok(outcome) => {
            for w in &outcome.warnings {
                eprintln!("note: {w}");
            }
            if let Some(doc) = &outcome.stdout_document {
                print!("{doc}");
            }
            println!("{}", outcome.summary);
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
