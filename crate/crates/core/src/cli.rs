//! Command-line front end.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit code 0
//! means success, 1 a failed check, 2 a usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use crate::adic::orbit_from_min;
use crate::error::Error;
use crate::exact::{format_ratio, parse_ratio, ratio, Rational};
use crate::graph::{eulerian_row, eulerian_vertex, Vertex};
use crate::harness::{
    birkhoff_experiment, chebyshev_experiment, drift_law_experiment, expectations, format_sig,
    meeting_experiment, sample_experiment, variance_experiment, BirkhoffMode, RngConfig,
    StatReport,
};
use crate::measure::{
    check_invariance_conditions, exact_moments, pair_drift, pushforward_check, WeightSystem,
};
use crate::path::{FinitePath, DEFAULT_ENUMERATION_CAP};
use crate::stacking::build_stage;

#[derive(Debug, Parser)]
#[command(
    name = "euler-adic",
    version,
    about = "Exact and Monte Carlo tools for the Euler adic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format; each command has its own default.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write data to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Seeding {
    #[arg(long, default_value_t = crate::harness::rng::DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = crate::harness::rng::DEFAULT_REPLICAS,
          value_parser = clap::value_parser!(u32).range(1..))]
    replicas: u32,
}

impl Seeding {
    fn config(&self) -> RngConfig {
        RngConfig {
            seed: self.seed,
            replicas: self.replicas,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Rows 0..=N of the Eulerian triangle.
    Eulerian {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Successor chain through all paths into a vertex, minimal first.
    Orbit {
        /// Vertex as `n,k`.
        #[arg(long, value_parser = parse_vertex)]
        vertex: Vertex,
        /// Refuse orbits longer than this.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
        limit: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Parallel-edge and diamond checks plus pushforward checks for the
    /// symmetric weights.
    Invariance {
        #[arg(long)]
        levels: u32,
        /// Highest cylinder length for the pushforward check.
        #[arg(long, default_value_t = 7)]
        pushforward_levels: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Exact moments of u_n, S_n and X_n.
    Moments {
        #[arg(long)]
        levels: u32,
        /// Also require E[X_n^2] = (3n^2+5n)/3 for n >= 1.
        #[arg(long)]
        check_increment_formula: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Exact one-step drift of |k_n - k_n'| for all column pairs.
    Drift {
        #[arg(long)]
        levels: u32,
        #[command(flatten)]
        output: Output,
    },
    /// Simulated drift of |k_n - k_n'| grouped by level and distance.
    DriftLaw {
        /// Comma-separated checkpoint levels.
        #[arg(long, value_delimiter = ',', required = true)]
        level: Vec<u32>,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[arg(long, default_value_t = 200)]
        min_count: u64,
        #[command(flatten)]
        seeding: Seeding,
        #[command(flatten)]
        output: Output,
    },
    /// Path and column frequencies of sampled paths.
    Sample {
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[command(flatten)]
        seeding: Seeding,
        #[command(flatten)]
        output: Output,
    },
    /// Mean and variance of u_n = 2k_n - n.
    Variance {
        #[arg(long)]
        level: u32,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[command(flatten)]
        seeding: Seeding,
        #[command(flatten)]
        output: Output,
    },
    /// P(|u_n/n| >= eps) against the exact tail and the Chebyshev bound.
    Chebyshev {
        #[arg(long)]
        level: u32,
        /// Exact decimal or p/q.
        #[arg(long, value_parser = parse_rational)]
        eps: Rational,
        #[arg(long, default_value_t = 100_000)]
        reps: u64,
        #[command(flatten)]
        seeding: Seeding,
        #[command(flatten)]
        output: Output,
    },
    /// Coincidence levels of independent pairs of column walks.
    Meeting {
        /// Last level simulated.
        #[arg(long)]
        level: Option<u32>,
        /// Number of pairs.
        #[arg(long)]
        reps: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
        replicas: Option<u32>,
        /// Level whose median coincidence count must be exceeded at the end.
        #[arg(long)]
        checkpoint: Option<u32>,
        #[command(flatten)]
        output: Output,
    },
    /// Frequency of a cylinder in a stack or along successor orbits.
    Birkhoff {
        /// Cylinder path such as `L0.R0`.
        #[arg(long, value_parser = parse_path)]
        cylinder: FinitePath,
        /// Level N of the stack or of the sampled paths.
        #[arg(long)]
        level: u32,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// Stack column for exact mode; defaults to N/2.
        #[arg(long)]
        column: Option<u32>,
        /// Orbit starts in orbit mode.
        #[arg(long, default_value_t = 100)]
        reps: u64,
        /// Successor steps per orbit.
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 0.02)]
        tolerance: f64,
        #[command(flatten)]
        seeding: Seeding,
        #[command(flatten)]
        output: Output,
    },
    /// Interval layout of the cutting-and-stacking stage N.
    Stack {
        #[arg(long)]
        stage: u32,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exact,
    Orbit,
}

fn parse_vertex(text: &str) -> Result<Vertex, String> {
    let (n, k) = text.split_once(',').ok_or("expected n,k")?;
    let n = n.trim().parse().map_err(|e| format!("level: {e}"))?;
    let k = k.trim().parse().map_err(|e| format!("column: {e}"))?;
    Vertex::new(n, k).map_err(|e| e.to_string())
}

fn parse_rational(text: &str) -> Result<Rational, String> {
    parse_ratio(text).map_err(|e| e.to_string())
}

fn parse_path(text: &str) -> Result<FinitePath, String> {
    text.parse().map_err(|e: Error| e.to_string())
}

/// Outcome of a command: data to emit and the first failed check, if any.
struct Outcome {
    data: Vec<u8>,
    failure: Option<String>,
}

fn emit_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("serializable");
    text.push('\n');
    text.into_bytes()
}

fn csv_lines(header: Option<&str>, rows: impl IntoIterator<Item = String>) -> Vec<u8> {
    let mut out = String::new();
    if let Some(h) = header {
        out.push_str(h);
        out.push('\n');
    }
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out.into_bytes()
}

fn report_outcome(report: StatReport, format: Option<Format>) -> Outcome {
    let failure = report.first_failure().map(|e| {
        let reference = e
            .reference_value
            .map_or_else(|| "none".to_string(), |r| format_sig(r, 12));
        format!(
            "{}: value {} fails {:?} against {reference}",
            e.name,
            format_sig(e.value, 12),
            e.tolerance
        )
    });
    let data = match format.unwrap_or(Format::Json) {
        Format::Json => report.to_json().into_bytes(),
        Format::Csv => {
            let mut buf = Vec::new();
            report.write_csv(&mut buf).expect("writing to memory");
            buf
        }
    };
    Outcome { data, failure }
}

fn eulerian_cmd(n: u32, format: Option<Format>) -> Outcome {
    let rows: Vec<Vec<BigUint>> = (0..=n).map(eulerian_row).collect();
    let data = match format.unwrap_or(Format::Csv) {
        Format::Csv => csv_lines(
            None,
            rows.iter().map(|r| {
                r.iter()
                    .map(|a| a.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            }),
        ),
        Format::Json => {
            let rows: Vec<Vec<String>> = rows
                .iter()
                .map(|r| r.iter().map(|a| a.to_string()).collect())
                .collect();
            emit_json(&serde_json::json!({ "rows": rows }))
        }
    };
    Outcome {
        data,
        failure: None,
    }
}

fn orbit_cmd(v: Vertex, limit: u64, format: Option<Format>) -> Result<Outcome, Error> {
    let size = eulerian_vertex(v);
    if size > BigUint::from(limit) {
        return Err(Error::TooLarge {
            what: "orbit",
            count: size.to_string(),
            cap: limit,
        });
    }
    let chain: Vec<String> = orbit_from_min(v).map(|p| p.to_string()).collect();
    let failure = (BigUint::from(chain.len()) != size)
        .then(|| format!("orbit has {} paths, expected {size}", chain.len()));
    let data = match format.unwrap_or(Format::Csv) {
        Format::Csv => csv_lines(
            None,
            chain.iter().enumerate().map(|(i, p)| format!("{i},{p}")),
        ),
        Format::Json => emit_json(&serde_json::json!({
            "vertex": [v.level(), v.column()],
            "size": size.to_string(),
            "paths": chain,
        })),
    };
    Ok(Outcome { data, failure })
}

fn invariance_cmd(
    levels: u32,
    pushforward_levels: u32,
    format: Option<Format>,
) -> Result<Outcome, Error> {
    let ws = WeightSystem::symmetric();
    let conditions = check_invariance_conditions(&ws, levels);
    let pushforward = (1..=pushforward_levels)
        .map(|n| pushforward_check(&ws, n, DEFAULT_ENUMERATION_CAP))
        .collect::<Result<Vec<_>, _>>()?;
    let failure = match &conditions.violation {
        Some(v) => Some(format!("weight conditions: {v:?}")),
        None => pushforward
            .iter()
            .find(|r| !r.passed())
            .map(|r| format!("pushforward at level {}: {:?}", r.level, r.mismatch)),
    };
    let data = match format.unwrap_or(Format::Json) {
        Format::Json => emit_json(&serde_json::json!({
            "conditions": conditions,
            "pushforward": pushforward,
        })),
        Format::Csv => {
            let mut rows = vec![format!(
                "conditions,{},{},{}",
                conditions.n_max,
                conditions.bundles_checked + conditions.diamonds_checked,
                conditions.passed()
            )];
            rows.extend(
                pushforward
                    .iter()
                    .map(|r| format!("pushforward,{},{},{}", r.level, r.cylinders, r.passed())),
            );
            csv_lines(Some("check,level,items,passed"), rows)
        }
    };
    Ok(Outcome { data, failure })
}

fn moments_cmd(levels: u32, check_increments: bool, format: Option<Format>) -> Outcome {
    let rows = exact_moments(levels);
    let mut failure = None;
    for r in &rows {
        let expected_var = if r.n == 0 {
            ratio(0, 1)
        } else {
            ratio(r.n as i64 + 2, 3)
        };
        let check = if r.mean_u != ratio(0, 1) {
            Some(format!("E[u_{}] = {}", r.n, format_ratio(&r.mean_u)))
        } else if r.var_u != expected_var {
            Some(format!(
                "V(u_{}) = {}, expected {}",
                r.n,
                format_ratio(&r.var_u),
                format_ratio(&expected_var)
            ))
        } else {
            match (&r.mean_x2, check_increments) {
                (Some(x2), true) if *x2 != increment_formula(r.n) => Some(format!(
                    "E[X_{}^2] = {}, formula gives {}",
                    r.n,
                    format_ratio(x2),
                    format_ratio(&increment_formula(r.n))
                )),
                _ => None,
            }
        };
        if failure.is_none() {
            failure = check;
        }
    }
    let data = match format.unwrap_or(Format::Csv) {
        Format::Json => emit_json(&rows),
        Format::Csv => csv_lines(
            Some("n,mean_u,var_u,var_closed_form,mean_s2,mean_x2,x2_formula"),
            rows.iter().map(|r| {
                let closed = if r.n == 0 {
                    ratio(0, 1)
                } else {
                    ratio(r.n as i64 + 2, 3)
                };
                let opt = |x: &Option<Rational>| x.as_ref().map(format_ratio).unwrap_or_default();
                let formula = if r.n == 0 {
                    String::new()
                } else {
                    format_ratio(&increment_formula(r.n))
                };
                format!(
                    "{},{},{},{},{},{},{}",
                    r.n,
                    format_ratio(&r.mean_u),
                    format_ratio(&r.var_u),
                    format_ratio(&closed),
                    format_ratio(&r.mean_s2),
                    opt(&r.mean_x2),
                    formula
                )
            }),
        ),
    };
    Outcome { data, failure }
}

/// `(3n^2 + 5n) / 3`.
pub fn increment_formula(n: u32) -> Rational {
    let n = n as i64;
    ratio(3 * n * n + 5 * n, 3)
}

fn drift_cmd(levels: u32, format: Option<Format>) -> Outcome {
    let mut rows = Vec::new();
    let mut failure = None;
    for n in 0..=levels {
        for k in 0..=n {
            for k2 in 0..=n {
                let drift = pair_drift(n, k, k2);
                let closed = ratio(-(k.abs_diff(k2) as i64), n as i64 + 2);
                let in_range = k != k2;
                if in_range && drift != closed && failure.is_none() {
                    failure = Some(format!(
                        "drift at ({n},{k},{k2}) is {}, expected {}",
                        format_ratio(&drift),
                        format_ratio(&closed)
                    ));
                }
                rows.push((n, k, k2, drift, closed, in_range));
            }
        }
    }
    let data = match format.unwrap_or(Format::Csv) {
        Format::Csv => csv_lines(
            Some("n,k,k2,drift,closed_form,positive_distance"),
            rows.iter().map(|(n, k, k2, d, c, r)| {
                format!("{n},{k},{k2},{},{},{r}", format_ratio(d), format_ratio(c))
            }),
        ),
        Format::Json => emit_json(
            &rows
                .iter()
                .map(|(n, k, k2, d, c, r)| {
                    serde_json::json!({
                        "n": n, "k": k, "k2": k2,
                        "drift": format_ratio(d), "closed_form": format_ratio(c),
                        "positive_distance": r,
                    })
                })
                .collect::<Vec<_>>(),
        ),
    };
    Outcome { data, failure }
}

fn stack_cmd(stage: u32, format: Option<Format>) -> Result<Outcome, Error> {
    let layout = build_stage(stage, DEFAULT_ENUMERATION_CAP)?;
    let failure = layout.validate().err().map(|e| e.to_string());
    let data = match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            layout.write_csv(&mut buf).expect("writing to memory");
            buf
        }
        Format::Json => emit_json(&serde_json::json!({
            "stage": layout.stage(),
            "width": format_ratio(&layout.width()),
            "entries": layout.entries().iter().map(|e| serde_json::json!({
                "path": e.path.to_string(),
                "level": e.path.terminal().level(),
                "column": e.path.terminal().column(),
                "left": format_ratio(&e.interval.left),
                "right": format_ratio(&e.interval.right),
                "rank": e.rank.to_string(),
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Outcome { data, failure })
}

fn execute(command: Command) -> Result<(Outcome, Option<PathBuf>), Error> {
    let (outcome, output) = match command {
        Command::Eulerian { n, output } => (eulerian_cmd(n, output.format), output),
        Command::Orbit {
            vertex,
            limit,
            output,
        } => (orbit_cmd(vertex, limit, output.format)?, output),
        Command::Invariance {
            levels,
            pushforward_levels,
            output,
        } => (
            invariance_cmd(levels, pushforward_levels, output.format)?,
            output,
        ),
        Command::Moments {
            levels,
            check_increment_formula,
            output,
        } => (
            moments_cmd(levels, check_increment_formula, output.format),
            output,
        ),
        Command::Drift { levels, output } => (drift_cmd(levels, output.format), output),
        Command::DriftLaw {
            level,
            reps,
            min_count,
            seeding,
            output,
        } => {
            let report = drift_law_experiment(&level, reps, min_count, &seeding.config())?;
            (report_outcome(report, output.format), output)
        }
        Command::Sample {
            level,
            reps,
            seeding,
            output,
        } => (
            report_outcome(
                sample_experiment(level, reps, &seeding.config())?,
                output.format,
            ),
            output,
        ),
        Command::Variance {
            level,
            reps,
            seeding,
            output,
        } => (
            report_outcome(
                variance_experiment(level, reps, &seeding.config())?,
                output.format,
            ),
            output,
        ),
        Command::Chebyshev {
            level,
            eps,
            reps,
            seeding,
            output,
        } => (
            report_outcome(
                chebyshev_experiment(level, &eps, reps, &seeding.config())?,
                output.format,
            ),
            output,
        ),
        Command::Meeting {
            level,
            reps,
            seed,
            replicas,
            checkpoint,
            output,
        } => {
            let mut expect = expectations().meeting;
            expect.median_checkpoint = checkpoint.unwrap_or(expect.median_checkpoint);
            let mut cfg = expect.rng();
            cfg.seed = seed.unwrap_or(cfg.seed);
            cfg.replicas = replicas.unwrap_or(cfg.replicas);
            let stats = meeting_experiment(
                level.unwrap_or(expect.n_max),
                reps.unwrap_or(expect.pairs),
                0,
                &cfg,
            );
            (
                report_outcome(stats.to_report(&expect), output.format),
                output,
            )
        }
        Command::Birkhoff {
            cylinder,
            level,
            mode,
            column,
            reps,
            steps,
            tolerance,
            seeding,
            output,
        } => {
            let mode = match mode {
                Mode::Exact => BirkhoffMode::ExactStack { column },
                Mode::Orbit => BirkhoffMode::OrbitMc {
                    starts: reps,
                    steps,
                },
            };
            let report = birkhoff_experiment(&cylinder, level, mode, tolerance, &seeding.config())?;
            (report_outcome(report, output.format), output)
        }
        Command::Stack { stage, output } => (stack_cmd(stage, output.format)?, output),
    };
    Ok((outcome, output.out))
}

fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidArgument(_)
            | Error::TooLarge { .. }
            | Error::InvalidVertex { .. }
            | Error::Parse(_)
    )
}

/// Runs the command line `args` (program name first), writing data to
/// `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let (outcome, path) = match execute(cli.command) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return if is_usage_error(&e) { 2 } else { 1 };
        }
    };
    let written = match &path {
        Some(p) => File::create(p).map(BufWriter::new).and_then(|mut f| {
            f.write_all(&outcome.data)?;
            f.flush()
        }),
        None => out.write_all(&outcome.data),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return 2;
    }
    match outcome.failure {
        Some(f) => {
            let _ = writeln!(err, "FAIL: {f}");
            1
        }
        None => 0,
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(args, &mut io::stdout().lock(), &mut io::stderr().lock())
}
