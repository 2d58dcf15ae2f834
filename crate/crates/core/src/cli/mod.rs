//! Command-line front end behind the `qbc` binary.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 I/O failure,
//! 4 unsupported receiver/alphabet combination. `QBC_THREADS` caps the
//! Monte Carlo worker count.

mod config;
mod report;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use config::{
    parse_sweep, ConfigError, ExperimentBlock, Format, OutputSpec, RunConfig, DEFAULT_TRIALS,
};
pub use report::{
    bound_column, bounds_table, divider_note, exponent_per_s, fmt_f64, summarize, BoundsTable,
    DividerRow, EveReport, ExperimentResult, LinkBudgetReport, SecurityReport, SimulationReport,
    SummaryRow, BOUND_COLUMNS, DIVIDER_FRACTIONS,
};

use crate::analytics::{
    eve_exponent_ratio, eve_random_phase_ber, power_divider_penalty, PhaseDefense,
};
use crate::link::{AlphabetKind, LinkBudget};
use crate::montecarlo::{run_experiment, wilson_interval, MonteCarloError, Z_95};
use crate::receivers::ReceiverKind;

/// Seed used when neither `--seed` nor a config `seed` key is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

pub const DEFAULT_BOUNDS_SWEEP: &str = "0.1:20:100";

#[derive(Debug, Parser)]
#[command(
    name = "qbc",
    version,
    about = "Quantum-illumination backscatter link simulator"
)]
pub struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write the main table here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate analytic error-probability bounds against s = η N_S M / N_Z.
    Bounds {
        /// s_min:s_max:n
        #[arg(long, default_value = DEFAULT_BOUNDS_SWEEP)]
        sweep: String,
        /// Comma-separated subset of the bound columns.
        #[arg(long)]
        columns: Option<String>,
    },
    /// Run the Monte Carlo experiments of a config file.
    Simulate {
        config: PathBuf,
        /// Override trials per point of every experiment.
        #[arg(long)]
        trials: Option<u64>,
        /// Override the sweep of every experiment (s_min:s_max:n).
        #[arg(long)]
        sweep: Option<String>,
    },
    /// Link-budget calculator: η, N_Z, M and the channel phase.
    LinkBudget(LinkArgs),
    /// Eavesdropper exponent ratio, divider penalties and the random-phase defense.
    Security(SecurityArgs),
}

#[derive(Debug, Args)]
pub struct LinkArgs {
    /// Read defaults from the `[link]` block of this config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    pub g_t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub g_r: Option<f64>,
    /// Carrier frequency, Hz.
    #[arg(long, allow_negative_numbers = true)]
    pub f_hz: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r_t: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r_r: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub sigma_q: Option<f64>,
    /// Background temperature, K.
    #[arg(long, allow_negative_numbers = true)]
    pub temperature: Option<f64>,
    /// Phase-matching bandwidth W, Hz.
    #[arg(long, allow_negative_numbers = true)]
    pub bandwidth: Option<f64>,
    /// Symbol duration T_s, s.
    #[arg(long, allow_negative_numbers = true)]
    pub symbol_duration: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub tag_phase: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SecurityArgs {
    /// Also estimate Eve's BER under a random per-codeword phase.
    #[arg(long)]
    pub simulate: bool,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0.01)]
    pub eta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub n_s: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub m: u64,
    #[arg(long, default_value_t = 100.0)]
    pub n_z: f64,
    /// uniform or binary
    #[arg(long, default_value = "uniform")]
    pub defense: String,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Config {
        path: PathBuf,
        error: ConfigError,
    },
    Io {
        path: PathBuf,
        error: std::io::Error,
    },
    Unsupported(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config { .. } => 2,
            CliError::Io { .. } => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Unsupported(m) => f.write_str(m),
            CliError::Config { path, error } => write!(f, "{}: {error}", path.display()),
            CliError::Io { path, error } => write!(f, "{}: {error}", path.display()),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |error| CliError::Io {
        path: path.to_owned(),
        error,
    }
}

/// Where the main table of a command goes, plus anything that should reach
/// the terminal alongside it.
struct Sink {
    out: Option<PathBuf>,
    format: Format,
}

impl Sink {
    fn emit(&self, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
        match &self.out {
            Some(p) => fs::write(p, body).map_err(io_err(p)),
            None => stdout
                .write_all(body.as_bytes())
                .map_err(io_err(Path::new("<stdout>"))),
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_bounds(
    sink: &Sink,
    sweep: &str,
    columns: Option<&str>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let sweep = parse_sweep(sweep).map_err(|m| CliError::Usage(format!("--sweep: {m}")))?;
    if let Some(bad) = sweep.iter().find(|s| !(**s >= 0.0)) {
        return Err(CliError::Usage(format!(
            "--sweep: s must be non-negative, got {bad}"
        )));
    }
    let names: Vec<&str> = match columns {
        None => BOUND_COLUMNS.to_vec(),
        Some(list) => list.split(',').map(str::trim).collect(),
    };
    for &c in &names {
        match bound_column(c) {
            None => return Err(CliError::Usage(format!("unknown bound column `{c}`"))),
            Some((ReceiverKind::Pa, AlphabetKind::Qpsk)) => {
                return Err(CliError::Unsupported(
                    "pa_qpsk is not tabulated: the PA receiver gives no error-exponent gain over \
                     heterodyne detection for QPSK"
                        .into(),
                ))
            }
            Some(_) => {}
        }
    }
    let table = bounds_table(&sweep, &names).map_err(|e| CliError::Usage(e.to_string()))?;
    let body = match sink.format {
        Format::Csv => table.to_csv(),
        Format::Json => to_json(&table),
    };
    sink.emit(&body, stdout)
}

fn with_suffix(path: &Path, tag: &str) -> PathBuf {
    let stem = path.file_stem().unwrap_or_default().to_string_lossy();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{tag}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{tag}"),
    };
    path.with_file_name(name)
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    cli_out: Option<&Path>,
    cli_format: Option<Format>,
    seed_flag: Option<u64>,
    config_path: &Path,
    trials: Option<u64>,
    sweep: Option<&str>,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let text = fs::read_to_string(config_path).map_err(io_err(config_path))?;
    let mut rc = RunConfig::parse(&text, seed_flag.unwrap_or(DEFAULT_SEED)).map_err(|error| {
        CliError::Config {
            path: config_path.to_owned(),
            error,
        }
    })?;
    if rc.experiments.is_empty() {
        return Err(CliError::Usage(format!(
            "{}: no [experiment] blocks",
            config_path.display()
        )));
    }
    let sweep = sweep
        .map(parse_sweep)
        .transpose()
        .map_err(|m| CliError::Usage(format!("--sweep: {m}")))?;
    for b in &mut rc.experiments {
        if let Some(seed) = seed_flag {
            b.config.master_seed = seed;
        }
        if let Some(t) = trials {
            b.config.trials_per_point = t;
        }
        if let Some(s) = &sweep {
            b.config.sweep = s.clone();
        }
    }
    // validate every block before spending time on any of them
    for b in &rc.experiments {
        b.config
            .validate()
            .map_err(|e| block_error(config_path, b, e))?;
    }
    let mut results = Vec::with_capacity(rc.experiments.len());
    for b in &rc.experiments {
        let curve = run_experiment(&b.config).map_err(|e| block_error(config_path, b, e))?;
        results.push(ExperimentResult {
            name: b.name.clone(),
            config: b.config.clone(),
            curve,
        });
    }
    let report = SimulationReport::new(results);
    let sink = Sink {
        out: cli_out.map(Path::to_owned).or(rc.output.path.clone()),
        format: cli_format.or(rc.output.format).unwrap_or_default(),
    };
    match sink.format {
        Format::Json => sink.emit(&to_json(&report), stdout)?,
        Format::Csv => {
            sink.emit(&report.curves_csv(), stdout)?;
            if let Some(p) = &sink.out {
                let sp = with_suffix(p, "summary");
                fs::write(&sp, report.summary_csv()).map_err(io_err(&sp))?;
            }
        }
    }
    // the summary goes wherever the curves are not
    let terminal: &mut dyn Write = if sink.out.is_some() { stdout } else { stderr };
    terminal
        .write_all(report.summary_text().as_bytes())
        .map_err(io_err(Path::new("<terminal>")))
}

fn block_error(path: &Path, b: &ExperimentBlock, e: MonteCarloError) -> CliError {
    let msg = format!(
        "{}: experiment `{}` (line {}): {e}",
        path.display(),
        b.name,
        b.line
    );
    match e {
        MonteCarloError::Unsupported { .. } => CliError::Unsupported(msg),
        _ => CliError::Usage(msg),
    }
}

fn resolve_link(args: &LinkArgs) -> Result<LinkBudget, CliError> {
    let from_file = match &args.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(io_err(p))?;
            RunConfig::parse(&text, DEFAULT_SEED)
                .map_err(|error| CliError::Config {
                    path: p.clone(),
                    error,
                })?
                .link
        }
        None => None,
    };
    let pick = |flag: Option<f64>, file: Option<f64>, name: &str| {
        flag.or(file)
            .ok_or_else(|| CliError::Usage(format!("missing --{name}")))
    };
    let f = from_file.as_ref();
    let omega = match args.f_hz {
        Some(hz) => std::f64::consts::TAU * hz,
        None => f
            .map(|l| l.omega)
            .ok_or_else(|| CliError::Usage("missing --f-hz".into()))?,
    };
    Ok(LinkBudget {
        g_t: pick(args.g_t, f.map(|l| l.g_t), "g-t")?,
        g_r: pick(args.g_r, f.map(|l| l.g_r), "g-r")?,
        omega,
        r_t: pick(args.r_t, f.map(|l| l.r_t), "r-t")?,
        r_r: pick(args.r_r, f.map(|l| l.r_r), "r-r")?,
        sigma_q: pick(args.sigma_q, f.map(|l| l.sigma_q), "sigma-q")?,
        temperature: pick(args.temperature, f.map(|l| l.temperature), "temperature")?,
        bandwidth: pick(args.bandwidth, f.map(|l| l.bandwidth), "bandwidth")?,
        symbol_duration: pick(
            args.symbol_duration,
            f.map(|l| l.symbol_duration),
            "symbol-duration",
        )?,
        tag_phase: args.tag_phase.or(f.map(|l| l.tag_phase)).unwrap_or(0.0),
    })
}

pub fn link_budget_report(lb: &LinkBudget) -> Result<LinkBudgetReport, crate::link::LinkError> {
    let rtt = lb.rtt()?;
    let phase = lb.phase()?;
    Ok(LinkBudgetReport {
        eta: rtt.eta,
        eta_exceeds_unity: rtt.exceeds_unity,
        n_z: lb.thermal_occupancy()?,
        m: lb.mode_pairs()?,
        phase_wavenumber: phase.wavenumber,
        phase_printed: phase.printed,
        phase_conventions_differ: phase.conventions_differ,
    })
}

fn cmd_link_budget(
    sink: &Sink,
    args: &LinkArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let lb = resolve_link(args)?;
    let report = link_budget_report(&lb).map_err(|e| CliError::Usage(e.to_string()))?;
    if report.eta_exceeds_unity {
        let _ = writeln!(
            stderr,
            "warning: eta = {} exceeds 1; the link budget is outside its range of validity",
            report.eta
        );
    }
    let body = match sink.format {
        Format::Csv => report.to_csv(),
        Format::Json => to_json(&report),
    };
    sink.emit(&body, stdout)
}

pub fn security_report(args: &SecurityArgs, seed: u64) -> Result<SecurityReport, CliError> {
    let ratio = eve_exponent_ratio();
    let pa_gain = exponent_per_s(ReceiverKind::Pa, AlphabetKind::Bpsk).unwrap_or(0.0)
        / exponent_per_s(ReceiverKind::Heterodyne, AlphabetKind::Bpsk).unwrap_or(1.0);
    let mut divider = Vec::with_capacity(DIVIDER_FRACTIONS.len());
    for f in DIVIDER_FRACTIONS {
        let penalty = power_divider_penalty(f).map_err(|e| CliError::Usage(e.to_string()))?;
        let (sfg, pa) = (ratio * penalty, pa_gain * penalty);
        divider.push(DividerRow {
            fraction: f,
            penalty,
            sfg_over_classical: sfg,
            pa_over_classical: pa,
            note: divider_note(sfg, pa),
        });
    }
    let eve = if args.simulate {
        let defense = match args.defense.as_str() {
            "uniform" => PhaseDefense::Uniform,
            "binary" => PhaseDefense::Binary,
            other => {
                return Err(CliError::Usage(format!(
                    "--defense: expected uniform or binary, got `{other}`"
                )))
            }
        };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let run = |d: PhaseDefense, rng: &mut ChaCha8Rng| {
            eve_random_phase_ber(args.eta, args.n_s, args.m, args.n_z, args.trials, d, rng)
                .map_err(|e| CliError::Usage(e.to_string()))
        };
        let ber = run(defense, &mut rng)?;
        let known = run(PhaseDefense::Fixed(0.0), &mut rng)?;
        let errors = (ber * args.trials as f64).round() as u64;
        let (lo, hi) = wilson_interval(errors, args.trials, Z_95);
        Some(EveReport {
            trials: args.trials,
            ber,
            wilson_ci_low: lo,
            wilson_ci_high: hi,
            ber_known_phase: known,
        })
    } else {
        None
    };
    Ok(SecurityReport {
        exponent_ratio: ratio,
        divider,
        eve,
    })
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>, CliError> {
    let Ok(v) = std::env::var("QBC_THREADS") else {
        return Ok(None);
    };
    let n: usize = v.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        CliError::Usage(format!("QBC_THREADS must be a positive integer, got `{v}`"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map(Some)
        .map_err(|e| CliError::Usage(format!("cannot start {n} worker threads: {e}")))
}

fn dispatch(
    cli: &Cli,
    seed_given: bool,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let sink = Sink {
        out: cli.out.clone(),
        format: cli.format.unwrap_or_default(),
    };
    match &cli.command {
        Command::Bounds { sweep, columns } => cmd_bounds(&sink, sweep, columns.as_deref(), stdout),
        Command::Simulate {
            config,
            trials,
            sweep,
        } => cmd_simulate(
            cli.out.as_deref(),
            cli.format,
            seed_given.then_some(cli.seed),
            config,
            *trials,
            sweep.as_deref(),
            stdout,
            stderr,
        ),
        Command::LinkBudget(args) => cmd_link_budget(&sink, args, stdout, stderr),
        Command::Security(args) => {
            let report = security_report(args, cli.seed)?;
            let body = match sink.format {
                Format::Csv => report.to_csv(),
                Format::Json => to_json(&report),
            };
            sink.emit(&body, stdout)
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let seed_given = args.iter().any(|a| {
        let a = a.to_string_lossy();
        a == "--seed" || a.starts_with("--seed=")
    });
    // buffered so the command can run inside a worker pool
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let result = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| dispatch(&cli, seed_given, &mut out, &mut err)),
        Ok(None) => dispatch(&cli, seed_given, &mut out, &mut err),
        Err(e) => Err(e),
    };
    let _ = stdout.write_all(&out);
    let _ = stderr.write_all(&err);
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
