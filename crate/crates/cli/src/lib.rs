//! Command-line front end for the `gmacwt` tool.
//!
//! [`execute`] does all the work and returns the output bytes; the binary only
//! handles argument parsing, file I/O and exit codes.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gmacwt::oracle::MAX_GRID_POINTS;
use gmacwt::{
    build_region, grid_max_jamming, grid_max_sum_rate, is_feasible, jam_objective, max_sum_rate,
    solve_jamming, union_sweep, CaseTag, GridOptimum, GridSpec, PowerAllocation, RateRegion,
    RateUnit, StandardChannel, TwoUserChannel,
};
use serde::Serialize;

pub mod input;

pub use input::{ChannelDoc, StandardDoc};

/// Allowed closed-form vs. grid gap for the sum-rate check.
pub const SUM_RATE_VERIFY_TOL: f64 = 1e-9;
/// Allowed closed-form vs. grid gap for the jamming check.
pub const JAM_VERIFY_TOL: f64 = 1e-5;
/// Jammer-axis resolution of the jamming check.
pub const JAM_VERIFY_P2_STEP: f64 = 1e-3;
const JAM_VERIFY_P1_STEPS: usize = 11;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error(transparent)]
    Core(#[from] gmacwt::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        1
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gmacwt",
    version,
    about = "Secrecy rates for the Gaussian multiple-access wire-tap channel"
)]
pub struct Cli {
    /// Channel JSON document; `-` reads stdin.
    #[arg(short, long, global = true, default_value = "-")]
    pub input: String,
    /// Destination file; stdout when omitted.
    #[arg(short, long, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the equivalent standard-form channel.
    Standardize,
    /// Test a power vector against the allowable set.
    Feasible {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        power: Vec<f64>,
    },
    /// Achievable region at a power vector (maximum power by default).
    Region {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        power: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Sum-rate maximizing power allocation.
    Maxsum {
        /// Cross-check against the brute-force grid.
        #[arg(long)]
        verify: bool,
        /// Grid points per axis for `--verify`.
        #[arg(long)]
        grid_steps: Option<usize>,
    },
    /// Two-user collaborative jamming.
    Jam {
        #[arg(long, value_enum, default_value_t = JamKind::Solve)]
        kind: JamKind,
        /// Cross-check against the brute-force grid.
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        sweep: JamSweepArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Sweep data for plotting.
    Sweep {
        #[arg(long, value_enum)]
        kind: SweepKind,
        /// Grid points per power axis (region sweep).
        #[arg(long, default_value_t = 11)]
        steps: usize,
        /// Region at maximum power only, instead of the union over the grid.
        #[arg(long)]
        at_max_power: bool,
        #[command(flatten)]
        jam: JamSweepArgs,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum JamKind {
    Solve,
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    Region,
    Jam,
}

/// Objective along the jammer's power for a fixed data-user power.
#[derive(Debug, Clone, Copy, Default, clap::Args)]
pub struct JamSweepArgs {
    /// Data-user power; defaults to its cap.
    #[arg(long, allow_negative_numbers = true)]
    pub p1: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.0)]
    pub p2_min: f64,
    /// Defaults to the jammer's cap.
    #[arg(long, allow_negative_numbers = true)]
    pub p2_max: Option<f64>,
    #[arg(long, allow_negative_numbers = true, default_value_t = 0.1)]
    pub step: f64,
}

/// Output of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    /// Set when `--verify` found a gap beyond tolerance.
    pub mismatch: Option<String>,
}

impl Report {
    fn ok(body: String) -> Self {
        Self {
            body,
            mismatch: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.mismatch.is_some() {
            2
        } else {
            0
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

pub fn load_channel(text: &str) -> Result<StandardChannel, CliError> {
    ChannelDoc::parse(text)?.into_channel()
}

/// Runs one subcommand on the channel document `text`.
pub fn execute(command: &Command, text: &str) -> Result<Report, CliError> {
    let ch = load_channel(text)?;
    match command {
        Command::Standardize => Ok(Report::ok(to_json(&StandardDoc::from_channel(&ch)))),
        Command::Feasible { power } => feasible(&ch, power),
        Command::Region { power, format } => region(&ch, power.as_deref(), *format),
        Command::Maxsum { verify, grid_steps } => maxsum(&ch, *verify, *grid_steps),
        Command::Jam {
            kind: JamKind::Solve,
            verify,
            ..
        } => jam(&ch, *verify),
        Command::Jam {
            kind: JamKind::Sweep,
            sweep,
            format,
            ..
        } => jam_sweep(&ch, sweep, *format),
        Command::Sweep {
            kind: SweepKind::Region,
            steps,
            at_max_power,
            format,
            ..
        } => region_sweep(&ch, *steps, *at_max_power, *format),
        Command::Sweep {
            kind: SweepKind::Jam,
            jam,
            format,
            ..
        } => jam_sweep(&ch, jam, *format),
    }
}

fn power_vector(p: &[f64], ch: &StandardChannel) -> Result<PowerAllocation, CliError> {
    if p.len() != ch.users() {
        return Err(invalid(format!(
            "invalid `--power`: expected {} values, got {}",
            ch.users(),
            p.len()
        )));
    }
    Ok(PowerAllocation::new(p.to_vec())?)
}

#[derive(Serialize)]
struct FeasibleReport {
    #[serde(flatten)]
    result: gmacwt::Feasibility,
    rate_unit: RateUnit,
}

fn feasible(ch: &StandardChannel, power: &[f64]) -> Result<Report, CliError> {
    let p = power_vector(power, ch)?;
    let result = is_feasible(&p, ch)?;
    Ok(Report::ok(to_json(&FeasibleReport {
        result,
        rate_unit: ch.rate_unit(),
    })))
}

fn region(ch: &StandardChannel, power: Option<&[f64]>, format: Format) -> Result<Report, CliError> {
    let p = match power {
        Some(p) => power_vector(p, ch)?,
        None => PowerAllocation::new(ch.p_max().to_vec())?,
    };
    let region = build_region(&p, ch)?;
    match format {
        Format::Json => Ok(Report::ok(to_json(&region))),
        Format::Csv => vertices_csv(&region).map(Report::ok),
    }
}

fn vertices_csv(region: &RateRegion) -> Result<String, CliError> {
    let header = match region.users() {
        1 => "R1",
        2 => "R1,R2",
        k => {
            return Err(invalid(format!(
                "invalid `--format csv`: vertex output needs 1 or 2 users, channel has {k}"
            )))
        }
    };
    let mut out = format!("{header}\n");
    for v in region.vertices.iter().flatten() {
        out.push_str(&join(v));
        out.push('\n');
    }
    Ok(out)
}

fn join(values: &[f64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Points per axis for the sum-rate grid: the acceptance settings for small
/// `K`, otherwise the largest count that fits the grid budget.
pub fn default_sum_rate_steps(users: usize) -> usize {
    match users {
        0..=3 => 11,
        4 | 5 => 6,
        k => {
            let mut s = 2usize;
            while ((s + 1) as f64).powi(k as i32) <= MAX_GRID_POINTS {
                s += 1;
            }
            s
        }
    }
}

#[derive(Serialize)]
struct Verification {
    oracle: GridOptimum,
    gap: f64,
    tolerance: f64,
    grid_steps: Vec<usize>,
    within_tolerance: bool,
}

impl Verification {
    fn new(closed: f64, oracle: GridOptimum, tolerance: f64, grid_steps: Vec<usize>) -> Self {
        let gap = closed - oracle.rate;
        Self {
            within_tolerance: gap.abs() <= tolerance,
            oracle,
            gap,
            tolerance,
            grid_steps,
        }
    }

    fn mismatch(&self, what: &str) -> Option<String> {
        (!self.within_tolerance).then(|| {
            format!(
                "{what}: closed form and grid oracle differ by {} (tolerance {})",
                self.gap, self.tolerance
            )
        })
    }
}

#[derive(Serialize)]
struct Verified<T: Serialize> {
    #[serde(flatten)]
    solution: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    verify: Option<Verification>,
}

fn verify_sum_rate(
    ch: &StandardChannel,
    closed: f64,
    steps: Option<usize>,
) -> Result<Verification, CliError> {
    let steps = steps.unwrap_or_else(|| default_sum_rate_steps(ch.users()));
    let oracle = grid_max_sum_rate(ch, &GridSpec::new(steps))?;
    Ok(Verification::new(
        closed,
        oracle,
        SUM_RATE_VERIFY_TOL,
        vec![steps; ch.users()],
    ))
}

fn maxsum(ch: &StandardChannel, verify: bool, steps: Option<usize>) -> Result<Report, CliError> {
    let solution = max_sum_rate(ch);
    let verify = verify
        .then(|| verify_sum_rate(ch, solution.sum_rate, steps))
        .transpose()?;
    let mismatch = verify.as_ref().and_then(|v| v.mismatch("maxsum"));
    Ok(Report {
        body: to_json(&Verified { solution, verify }),
        mismatch,
    })
}

fn two_user(ch: &StandardChannel) -> Result<TwoUserChannel, CliError> {
    if ch.users() != 2 {
        return Err(invalid(format!(
            "invalid `users`: jamming needs exactly 2 users, got {}",
            ch.users()
        )));
    }
    Ok(TwoUserChannel::from_standard(ch)?)
}

/// Grid used by `jam --verify`: 11 points for the data user and a
/// [`JAM_VERIFY_P2_STEP`] spacing for the jammer, within the grid budget.
pub fn jam_verify_steps(p2_max: f64) -> [usize; 2] {
    let budget = (MAX_GRID_POINTS as usize) / JAM_VERIFY_P1_STEPS;
    let wanted = (p2_max / JAM_VERIFY_P2_STEP).ceil() as usize + 1;
    [JAM_VERIFY_P1_STEPS, wanted.clamp(2, budget)]
}

fn jam(ch: &StandardChannel, verify: bool) -> Result<Report, CliError> {
    let pair = two_user(ch)?;
    let unit = ch.rate_unit();
    let solution = solve_jamming(&pair, unit);
    let verify = if !verify {
        None
    } else if solution.case_tag == CaseTag::NoJammer {
        Some(verify_sum_rate(ch, solution.secrecy_rate, None)?)
    } else {
        let steps = jam_verify_steps(pair.p2_max);
        let oracle = grid_max_jamming(&pair, &GridSpec::per_axis(steps.to_vec()), unit)?;
        Some(Verification::new(
            solution.secrecy_rate,
            oracle,
            JAM_VERIFY_TOL,
            steps.to_vec(),
        ))
    };
    let mismatch = verify.as_ref().and_then(|v| v.mismatch("jam"));
    Ok(Report {
        body: to_json(&Verified { solution, verify }),
        mismatch,
    })
}

/// Evenly spaced values `start, start + step, ...` up to `stop` inclusive.
///
/// When `1/step` is a whole number the values are computed as `i / (1/step)`
/// so that e.g. a 0.1 step prints `0.3` rather than `0.30000000000000004`.
pub fn sweep_points(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !step.is_finite() || step <= 0.0 {
        return Err(invalid(format!(
            "invalid `--step`: must be > 0, got {step}"
        )));
    }
    if !start.is_finite() || start < 0.0 {
        return Err(invalid(format!(
            "invalid `--p2-min`: must be finite and >= 0, got {start}"
        )));
    }
    if !stop.is_finite() || stop < start {
        return Err(invalid(format!(
            "invalid `--p2-max`: must be finite and >= `--p2-min` ({start}), got {stop}"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    if n as f64 + 1.0 > MAX_GRID_POINTS {
        return Err(invalid(format!(
            "invalid `--step`: {} rows exceed the limit",
            n + 1
        )));
    }
    let inv = (1.0 / step).round();
    let exact = inv >= 1.0 && ((1.0 / step) - inv).abs() <= 1e-9 * inv;
    Ok((0..=n)
        .map(|i| {
            if exact {
                start + i as f64 / inv
            } else {
                start + i as f64 * step
            }
        })
        .collect())
}

#[derive(Serialize)]
struct JamSweepRow {
    p2: f64,
    objective: f64,
}

#[derive(Serialize)]
struct JamSweepDoc {
    h1: f64,
    h2: f64,
    p1: f64,
    rate_unit: RateUnit,
    rows: Vec<JamSweepRow>,
}

fn jam_sweep(
    ch: &StandardChannel,
    args: &JamSweepArgs,
    format: Format,
) -> Result<Report, CliError> {
    let pair = two_user(ch)?;
    let unit = ch.rate_unit();
    let p1 = args.p1.unwrap_or(pair.p1_max);
    if !p1.is_finite() || p1 < 0.0 {
        return Err(invalid(format!(
            "invalid `--p1`: must be finite and >= 0, got {p1}"
        )));
    }
    let rows: Vec<JamSweepRow> =
        sweep_points(args.p2_min, args.p2_max.unwrap_or(pair.p2_max), args.step)?
            .into_iter()
            .map(|p2| JamSweepRow {
                p2,
                objective: jam_objective(p1, p2, &pair, unit),
            })
            .collect();
    let body = match format {
        Format::Json => to_json(&JamSweepDoc {
            h1: pair.h1,
            h2: pair.h2,
            p1,
            rate_unit: unit,
            rows,
        }),
        Format::Csv => {
            let mut out = String::from("p2,objective\n");
            for r in &rows {
                out.push_str(&format!("{},{}\n", r.p2, r.objective));
            }
            out
        }
    };
    Ok(Report::ok(body))
}

#[derive(Serialize)]
#[serde(rename_all = "snake_case")]
enum Reading {
    /// Every allowable point of the power grid.
    Union,
    /// The single region at maximum power.
    MaxPower,
}

#[derive(Serialize)]
#[allow(non_snake_case)]
struct RegionSweepRow {
    P1: f64,
    P2: f64,
    b1: f64,
    b2: f64,
    b12: f64,
    feasible: bool,
}

#[derive(Serialize)]
struct RegionSweepDoc {
    reading: Reading,
    rate_unit: RateUnit,
    rows: Vec<RegionSweepRow>,
}

fn region_sweep(
    ch: &StandardChannel,
    steps: usize,
    at_max_power: bool,
    format: Format,
) -> Result<Report, CliError> {
    if ch.users() != 2 {
        return Err(invalid(format!(
            "invalid `users`: region sweep needs exactly 2 users, got {}",
            ch.users()
        )));
    }
    if !at_max_power && (steps < 2 || (steps as f64).powi(2) > MAX_GRID_POINTS) {
        return Err(invalid(format!(
            "invalid `--steps`: must be in 2..={}, got {steps}",
            MAX_GRID_POINTS.sqrt() as usize
        )));
    }
    let regions = if at_max_power {
        let p = PowerAllocation::new(ch.p_max().to_vec())?;
        let r = build_region(&p, ch)?;
        vec![(p, r)]
    } else {
        union_sweep(ch, steps)?
    };
    let rows: Vec<RegionSweepRow> = regions
        .iter()
        .map(|(p, r)| RegionSweepRow {
            P1: p[0],
            P2: p[1],
            b1: r.bound(1).expect("two users"),
            b2: r.bound(2).expect("two users"),
            b12: r.bound(3).expect("two users"),
            feasible: r.feasible,
        })
        .collect();
    let reading = if at_max_power {
        Reading::MaxPower
    } else {
        Reading::Union
    };
    let body = match format {
        Format::Json => to_json(&RegionSweepDoc {
            reading,
            rate_unit: ch.rate_unit(),
            rows,
        }),
        Format::Csv => {
            let label = if at_max_power { "max_power" } else { "union" };
            let mut out = format!(
                "# reading: {label}; rate_unit: {}\nP1,P2,b1,b2,b12\n",
                ch.rate_unit()
            );
            for r in &rows {
                out.push_str(&join(&[r.P1, r.P2, r.b1, r.b2, r.b12]));
                out.push('\n');
            }
            out
        }
    };
    Ok(Report::ok(body))
}
