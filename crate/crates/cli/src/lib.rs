//! Command-line front end: `plan`, `sweep`, `verify` and `simulate`.
//!
//! Exit codes: 0 success, 1 validation or I/O error, 2 numerical failure
//! (including a failed sure-success check).

use std::f64::consts::PI;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use sure_search::simulator::success_trace;
use sure_search::{
    beta_from_counts, make_plan, run_full, run_subspace, sweep, theta_grid, Error, MemberKind,
    Plan, SweepRow,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;

/// Largest instance `simulate` will allocate.
pub const MAX_ITEMS: usize = 1 << 20;
/// Success probability a verified run must reach.
pub const SUCCESS_TOL: f64 = 1e-9;

pub const DEFAULT_THETA_MIN: f64 = 0.2;
pub const DEFAULT_THETA_MAX: f64 = 2.0 * PI - 0.2;
pub const DEFAULT_STEPS: usize = 2001;

#[derive(Debug, Parser)]
#[command(
    name = "sure-search",
    version,
    about = "Plan and verify sure-success quantum search"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve θ_op and the iteration count for one member.
    Plan(PlanArgs),
    /// Tabulate the continuous oracle-call curves over a θ grid.
    Sweep(SweepArgs),
    /// Plan, simulate, and check that the success probability is 1.
    Verify(VerifyArgs),
    /// Success probability after each oracle call on a full statevector.
    Simulate(SimulateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MemberArg {
    Even,
    Odd,
    Grover,
}

impl From<MemberArg> for MemberKind {
    fn from(m: MemberArg) -> Self {
        match m {
            MemberArg::Even => MemberKind::EvenA2n,
            MemberArg::Odd => MemberKind::OddA2n1,
            MemberArg::Grover => MemberKind::GroverGn,
        }
    }
}

/// Either β directly or an explicit instance.
#[derive(Debug, Clone, Args)]
pub struct Target {
    /// Marked-fraction angle, arcsin √(M/N).
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["n_items", "marked"])]
    pub beta: Option<f64>,
    /// Number of items N.
    #[arg(long, requires = "marked")]
    pub n_items: Option<usize>,
    /// Marked item indices, comma separated.
    #[arg(long, value_delimiter = ',', requires = "n_items")]
    pub marked: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct PlanArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, value_enum)]
    pub member: MemberArg,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_THETA_MIN)]
    pub theta_min: f64,
    #[arg(long, allow_negative_numbers = true, default_value_t = DEFAULT_THETA_MAX)]
    pub theta_max: f64,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, value_enum)]
    pub member: MemberArg,
    /// Run at this θ (matched φ, ceiling count) instead of θ_op.
    #[arg(long, allow_negative_numbers = true)]
    pub theta_override: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub target: Target,
    #[arg(long, value_enum)]
    pub member: MemberArg,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_override: Option<f64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// A command failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }

    fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidInput(_) | Error::BetaMismatch { .. } => EXIT_INVALID,
            Error::DegenerateSpectrum { .. }
            | Error::DegenerateAngle { .. }
            | Error::ConvergenceFailure(_)
            | Error::OutOfDomain(_) => EXIT_NUMERICAL,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

type CmdResult<T> = std::result::Result<T, Failure>;

/// A resolved target: β, plus the instance when one was given.
struct Resolved {
    beta: f64,
    instance: Option<(usize, Vec<usize>)>,
}

impl Target {
    fn resolve(&self) -> CmdResult<Resolved> {
        match (self.beta, self.n_items, &self.marked) {
            (Some(beta), None, None) => Ok(Resolved {
                beta,
                instance: None,
            }),
            (None, Some(n), Some(marked)) => {
                if n == 0 {
                    return Err(Failure::invalid("--n-items must be positive"));
                }
                if marked.is_empty() {
                    return Err(Failure::invalid("--marked must name at least one item"));
                }
                if let Some(bad) = marked.iter().find(|&&i| i >= n) {
                    return Err(Failure::invalid(format!(
                        "marked index {bad} out of range for --n-items {n}"
                    )));
                }
                let mut sorted = marked.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != marked.len() {
                    return Err(Failure::invalid("--marked contains repeated indices"));
                }
                Ok(Resolved {
                    beta: beta_from_counts(n as u64, marked.len() as u64),
                    instance: Some((n, sorted)),
                })
            }
            _ => Err(Failure::invalid(
                "give either --beta or both --n-items and --marked",
            )),
        }
    }
}

impl OutputArgs {
    fn json_only(&self) -> CmdResult<()> {
        match self.format {
            Some(Format::Csv) => Err(Failure::invalid("this command emits JSON only")),
            _ => Ok(()),
        }
    }

    /// Sends `body` to the output file or to `stdout`.
    fn emit(&self, body: &str, stdout: &mut dyn Write) -> CmdResult<()> {
        let io_err = |e: io::Error| Failure::invalid(format!("cannot write output: {e}"));
        match &self.output {
            Some(path) => {
                let file = File::create(path).map_err(|e| {
                    Failure::invalid(format!("cannot create {}: {e}", path.display()))
                })?;
                let mut w = BufWriter::new(file);
                w.write_all(body.as_bytes()).map_err(io_err)?;
                w.flush().map_err(io_err)
            }
            None => stdout.write_all(body.as_bytes()).map_err(io_err),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct PlanDoc {
    pub member: MemberKind,
    pub beta: f64,
    pub theta_op: f64,
    pub theta_mirror: f64,
    pub phi: f64,
    pub n_iterations: u64,
    pub oracle_calls: u64,
    pub predicted_success: f64,
}

impl From<&Plan> for PlanDoc {
    fn from(p: &Plan) -> Self {
        Self {
            member: p.member,
            beta: p.beta,
            theta_op: p.theta,
            theta_mirror: p.theta_mirror,
            phi: p.phi,
            n_iterations: p.n_iterations,
            oracle_calls: p.oracle_calls,
            predicted_success: p.predicted_success,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyDoc {
    pub member: MemberKind,
    pub beta: f64,
    pub theta: f64,
    pub phi: f64,
    pub n_iterations: u64,
    pub oracle_calls: u64,
    /// True when θ came from `--theta-override`; such runs carry no
    /// sure-success guarantee.
    pub theta_override: bool,
    pub p_subspace: f64,
    pub p_full: Option<f64>,
    pub difference: Option<f64>,
    pub passed: bool,
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> CmdResult<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::numerical(format!("cannot serialize output: {e}")))?;
    s.push('\n');
    Ok(s)
}

fn plan_for(member: MemberKind, beta: f64, theta_override: Option<f64>) -> CmdResult<Plan> {
    Ok(match theta_override {
        Some(theta) => Plan::at_theta(member, beta, theta)?,
        None => make_plan(member, beta)?,
    })
}

fn cmd_plan(args: &PlanArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    args.out.json_only()?;
    let target = args.target.resolve()?;
    let plan = make_plan(args.member.into(), target.beta)?;
    args.out.emit(&to_json(&PlanDoc::from(&plan))?, stdout)
}

/// `%.15g`-style rendering; `nan` for NaN.
pub fn format_g15(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0" } else { "0" }.into();
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..15).contains(&exp) {
        let decimals = (14 - exp) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        let mut out = trim_zeros(mantissa.to_string());
        let _ = write!(out, "e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs());
        out
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("theta,c_even,c_odd,c_grover\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            format_g15(r.theta),
            format_g15(r.c_even),
            format_g15(r.c_odd),
            format_g15(r.c_grover)
        );
    }
    out
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    let target = args.target.resolve()?;
    // Evaluate at the θ values the CSV will carry, so a reader that parses
    // the theta column recomputes exactly the stored rows.
    let grid: Vec<f64> = theta_grid(args.theta_min, args.theta_max, args.steps)?
        .into_iter()
        .map(|t| format_g15(t).parse().expect("formatted float parses"))
        .collect();
    let rows = sweep(target.beta, &grid)?;
    let body = match args.out.format.unwrap_or(Format::Csv) {
        Format::Csv => sweep_csv(&rows),
        // NaN serializes as null.
        Format::Json => to_json(&rows)?,
    };
    args.out.emit(&body, stdout)
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    args.out.json_only()?;
    let target = args.target.resolve()?;
    let plan = plan_for(args.member.into(), target.beta, args.theta_override)?;
    let sub = run_subspace(&plan)?;
    let full = match &target.instance {
        Some((n, marked)) => Some(run_full(&plan, *n, marked)?),
        None => None,
    };
    let p_full = full.map(|f| f.success_probability);
    let worst = p_full.map_or(sub.success_probability, |p| p.min(sub.success_probability));
    let passed = worst >= 1.0 - SUCCESS_TOL;
    let doc = VerifyDoc {
        member: plan.member,
        beta: plan.beta,
        theta: plan.theta,
        phi: plan.phi,
        n_iterations: plan.n_iterations,
        oracle_calls: plan.oracle_calls,
        theta_override: args.theta_override.is_some(),
        p_subspace: sub.success_probability,
        p_full,
        difference: p_full.map(|p| p - sub.success_probability),
        passed,
    };
    args.out.emit(&to_json(&doc)?, stdout)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::numerical(format!(
            "success probability {worst} is below 1 - {SUCCESS_TOL:e}"
        )))
    }
}

fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> CmdResult<()> {
    args.out.json_only()?;
    let target = args.target.resolve()?;
    let (n, marked) = target
        .instance
        .ok_or_else(|| Failure::invalid("simulate needs --n-items and --marked"))?;
    if n > MAX_ITEMS {
        return Err(Failure::invalid(format!(
            "--n-items {n} exceeds the limit of {MAX_ITEMS}"
        )));
    }
    let plan = plan_for(args.member.into(), target.beta, args.theta_override)?;
    let trace = success_trace(&plan, n, &marked)?;
    args.out.emit(&to_json(&trace)?, stdout)
}

/// Parses `args` (including the program name) and runs the command.
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
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_INVALID
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Plan(a) => cmd_plan(a, stdout),
        Command::Sweep(a) => cmd_sweep(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Simulate(a) => cmd_simulate(a, stdout),
    };
    let _ = stdout.flush();
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g15_matches_printf() {
        assert_eq!(format_g15(PI), "3.14159265358979");
        assert_eq!(format_g15(0.2), "0.2");
        assert_eq!(format_g15(2.0), "2");
        assert_eq!(format_g15(-0.5), "-0.5");
        assert_eq!(format_g15(1e-5), "1e-05");
        assert_eq!(format_g15(1.5e-4), "0.00015");
        assert_eq!(format_g15(123456789012345.0), "123456789012345");
        assert_eq!(format_g15(1234567890123456.0), "1.23456789012346e+15");
        assert_eq!(format_g15(f64::NAN), "nan");
    }

    #[test]
    fn g15_round_trips_to_fifteen_digits() {
        for x in [
            1.125_969_196_942_054,
            6.083_185_307_179_586,
            1e-3 / 7.0,
            785.398_163_397_448_3,
        ] {
            let back: f64 = format_g15(x).parse().unwrap();
            assert!((back - x).abs() <= 1e-14 * x.abs());
        }
    }
}
