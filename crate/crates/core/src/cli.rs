//! The `lotto` command line.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing comparison,
//! 2 on usage or domain errors. Errors are printed to stderr as a single
//! line `error: kind=<kind> msg="<text>"`.

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::LottoError;
use crate::experiments::{
    format_number, region_sweep_ggl, region_sweep_gl, run_fig5, write_ggl_region_csv,
    write_ggl_solve_csv, write_gl_region_csv, write_mc_csv, Axis, McConfig, SweepConfig,
};
use crate::ggl::{Battlefield, GGLInstance};
use crate::ggl_precommit::{
    benefit_report, indifference_points, optimal_precommit_ggl, response_a, ua_match, ua_withdraw,
    ub_ggl, GGLPreCommit, Response,
};
use crate::lotto::{nominal_payoffs, GLInstance};
use crate::oracle::verify_suite;
use crate::precommit::{
    best_response_a, min_beneficial_value, optimal_single_precommit, payoff_b, reduce_to_single,
    PreCommitment,
};

#[derive(Debug, Parser)]
#[command(
    name = "lotto",
    version,
    about = "Pre-commitment in General Lotto games"
)]
pub struct Cli {
    /// Flat key=value file; keys are flag names without dashes.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Worker threads for sweeps (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Nominal equilibrium payoffs of a common-valuation game.
    GlPayoff(GlArgs),
    /// Incentive threshold, optimal single pre-commitments, or A's response
    /// to a given pre-commitment.
    GlPrecommit(GlPrecommitArgs),
    /// Incentive-region sweep over (xa, xb).
    GlRegion(GlRegionArgs),
    /// Equilibria of the asymmetric two-battlefield game.
    GglSolve(GglSolveArgs),
    /// Pre-commitment analysis of the asymmetric game.
    GglPrecommit(GglPrecommitArgs),
    /// Region sweep of the asymmetric game over (alpha, xa, xb).
    GglRegion(GglRegionArgs),
    /// Monte Carlo comparison of merged and two-battlefield pre-commitments.
    McFig5(McArgs),
    /// Closed forms against the independent oracles.
    Verify,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GlArgs {
    #[arg(long)]
    pub xa: f64,
    #[arg(long)]
    pub xb: f64,
    /// Comma-separated battlefield values.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub v: Vec<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GlPrecommitArgs {
    #[command(flatten)]
    pub game: GlArgs,
    /// Pre-commitment as `battlefield:amount` pairs, e.g. `0:0.3,1:0.9`.
    #[arg(long)]
    pub pc: Option<String>,
    /// Battlefield (0-based) to optimize; all battlefields when absent.
    #[arg(long)]
    pub battlefield: Option<usize>,
    /// Limit on the value B may pre-commit to.
    #[arg(long)]
    pub vbar: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GlRegionArgs {
    /// `lo:hi:steps` or a single value.
    #[arg(long, default_value = "0.025:5:200")]
    pub xa: String,
    #[arg(long, default_value = "0.025:5:200")]
    pub xb: String,
    #[arg(long)]
    pub vbar: f64,
    #[arg(long, default_value_t = 1.0)]
    pub phi: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GglSolveArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub xa: f64,
    #[arg(long)]
    pub xb: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GglPrecommitArgs {
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub xa: f64,
    #[arg(long)]
    pub xb: f64,
    /// Battlefield 1 or 2, with `--p`, to evaluate one pre-commitment.
    #[arg(long, requires = "p")]
    pub battlefield: Option<usize>,
    #[arg(long, requires = "battlefield")]
    pub p: Option<f64>,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GglRegionArgs {
    /// `lo:hi:steps` or a single value.
    #[arg(long, default_value = "0.0025:0.5:200")]
    pub alpha: String,
    #[arg(long, default_value = "0.015:3:200")]
    pub xa: String,
    #[arg(long, default_value = "1")]
    pub xb: String,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct McArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 500)]
    pub samples: usize,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    #[arg(long, default_value_t = 1.0)]
    pub xa: f64,
    #[arg(long, default_value_t = 1.5)]
    pub xb: f64,
    #[arg(long, default_value_t = 1.0)]
    pub phi: f64,
    /// Spacing of the limit values `0, step, …, phi`.
    #[arg(long, default_value_t = 0.05)]
    pub vbar_step: f64,
    /// Coarse step of the two-battlefield grid as a fraction of `xb`.
    #[arg(long, default_value_t = 5e-3)]
    pub grid_step: f64,
}

/// Failure of a command, mapped to an exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Domain(LottoError),
    Io(String),
}

impl From<LottoError> for Failure {
    fn from(e: LottoError) -> Self {
        Failure::Domain(e)
    }
}

fn io_failure(e: io::Error) -> Failure {
    Failure::Io(e.to_string())
}

fn print_error(stderr: &mut dyn Write, kind: &str, msg: &str) {
    let msg = msg
        .replace('\\', "\\\\")
        .replace('"', "\\\"")
        .replace('\n', " ");
    let _ = writeln!(stderr, "error: kind={kind} msg=\"{msg}\"");
}

/// Appends `--key value` for config entries not already given as flags.
fn merge_config(args: Vec<String>) -> Result<Vec<String>, Failure> {
    let Some(pos) = args
        .iter()
        .position(|a| a == "--config" || a.starts_with("--config="))
    else {
        return Ok(args);
    };
    let path = if let Some(p) = args[pos].strip_prefix("--config=") {
        p.to_string()
    } else {
        args.get(pos + 1)
            .cloned()
            .ok_or_else(|| Failure::Usage("--config needs a path".into()))?
    };
    let text = fs::read_to_string(&path)
        .map_err(|e| Failure::Io(format!("cannot read config {path}: {e}")))?;
    let mut extra = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("config line {} is not key=value", n + 1)))?;
        let flag = format!("--{}", key.trim());
        let given = args
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if !given {
            extra.push(format!("{flag}={}", value.trim()));
        }
    }
    let mut out = args;
    out.extend(extra);
    Ok(out)
}

/// Parses `lo:hi:steps` into an axis, or a plain number into a fixed value.
fn axis_or_fixed(config: SweepConfig, name: &str, spec: &str) -> Result<SweepConfig, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Usage(format!("malformed number {s:?} in --{name}")))
    };
    match parts.as_slice() {
        [v] => Ok(config.with_fixed(name, num(v)?)),
        [lo, hi, steps] => {
            let steps = steps
                .trim()
                .parse::<usize>()
                .map_err(|_| Failure::Usage(format!("malformed step count in --{name}")))?;
            Ok(config.with_axis(Axis::new(name, num(lo)?, num(hi)?, steps)?))
        }
        _ => Err(Failure::Usage(format!(
            "--{name} must be a number or lo:hi:steps"
        ))),
    }
}

fn parse_pc(game: &GLInstance, spec: &str) -> Result<PreCommitment, Failure> {
    let mut entries = Vec::new();
    for item in spec.split(',').filter(|s| !s.trim().is_empty()) {
        let (b, p) = item
            .split_once(':')
            .ok_or_else(|| Failure::Usage(format!("pre-commitment entry {item:?} is not b:p")))?;
        let b = b
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::Usage(format!("malformed battlefield {b:?}")))?;
        let p = p
            .trim()
            .parse::<f64>()
            .map_err(|_| Failure::Usage(format!("malformed amount {p:?}")))?;
        entries.push((b, p));
    }
    Ok(PreCommitment::new(game, entries)?)
}

fn join(xs: impl IntoIterator<Item = String>, sep: &str) -> String {
    xs.into_iter().collect::<Vec<_>>().join(sep)
}

fn gl_payoff(args: &GlArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let game = GLInstance::new(args.xa, args.xb, args.v.clone())?;
    let p = nominal_payoffs(&game)?;
    writeln!(
        out,
        "piA={} piB={}",
        format_number(p.payoff_a),
        format_number(p.payoff_b)
    )
    .map_err(io_failure)
}

fn gl_precommit(args: &GlPrecommitArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let game = GLInstance::new(args.game.xa, args.game.xb, args.game.v.clone())?;
    let nominal = nominal_payoffs(&game)?.payoff_b;
    if let Some(spec) = &args.pc {
        let pc = parse_pc(&game, spec)?;
        let (resp, u_a) = best_response_a(&pc, &game)?;
        let u_b = payoff_b(&pc, &game)?;
        let matched = join(resp.matched.iter().map(|b| b.to_string()), ";");
        writeln!(
            out,
            "matched={matched} spent={} uA={} uB={} nominal_uB={}",
            format_number(resp.spent),
            format_number(u_a),
            format_number(u_b),
            format_number(nominal)
        )
        .map_err(io_failure)?;
        if !pc.is_empty() {
            let red = reduce_to_single(&pc, &game)?;
            let single = PreCommitment::single(&red.game, red.battlefield, red.amount)?;
            writeln!(
                out,
                "reduced_values={} reduced_p={} reduced_uB={}",
                join(red.game.valuations().iter().map(|v| format_number(*v)), ";"),
                format_number(red.amount),
                format_number(payoff_b(&single, &red.game)?)
            )
            .map_err(io_failure)?;
        }
        return Ok(());
    }
    let threshold = min_beneficial_value(game.budget_a(), game.budget_b(), game.phi())?;
    writeln!(
        out,
        "threshold={} nominal_uB={}",
        threshold
            .map(format_number)
            .unwrap_or_else(|| "none".into()),
        format_number(nominal)
    )
    .map_err(io_failure)?;
    let (xa, xb) = (game.budget_a(), game.budget_b());
    let epsilon = args.epsilon.unwrap_or_else(|| {
        if xb > xa {
            (1e-6 * xa).min(0.5 * (xb - xa))
        } else {
            1e-6 * xa
        }
    });
    let targets: Vec<usize> = match args.battlefield {
        Some(b) => vec![b],
        None => (0..game.battlefields())
            .filter(|&b| game.valuations()[b] > 0.0)
            .collect(),
    };
    for b in targets {
        let v = game.value(b)?;
        if args.vbar.is_some_and(|limit| v > limit) {
            writeln!(
                out,
                "battlefield={b} value={} admissible=false",
                format_number(v)
            )
            .map_err(io_failure)?;
            continue;
        }
        let opt = optimal_single_precommit(&game, b, epsilon)?;
        writeln!(
            out,
            "battlefield={b} value={} p={} uB={} attained={} beneficial={}",
            format_number(v),
            format_number(opt.p),
            format_number(opt.u_b),
            opt.attained,
            opt.is_beneficial()
        )
        .map_err(io_failure)?;
    }
    Ok(())
}

fn ggl_precommit(args: &GglPrecommitArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let game = GGLInstance::new(args.xa, args.xb, args.alpha)?;
    if let (Some(b), Some(p)) = (args.battlefield, args.p) {
        let pc = GGLPreCommit::new(&game, Battlefield::from_index(b)?, p)?;
        let response = match response_a(&pc, &game) {
            Response::Match => "match",
            Response::Withdraw => "withdraw",
        };
        let matched = ua_match(&pc, &game)
            .map(format_number)
            .unwrap_or_else(|_| "infeasible".into());
        return writeln!(
            out,
            "response={response} uA_match={matched} uA_withdraw={} uB={}",
            format_number(ua_withdraw(&pc, &game)),
            format_number(ub_ggl(&pc, &game))
        )
        .map_err(io_failure);
    }
    let (set, report) = benefit_report(&game)?;
    let (best, best_u) = optimal_precommit_ggl(&game, 1e-7 * game.budget_a())?;
    let witness = report
        .witness
        .map(|w| format!("{}:{}", w.battlefield().index(), format_number(w.amount())))
        .unwrap_or_else(|| "none".into());
    let beats = match report.beats_unique {
        Some(b) => format!("beats_unique={b}"),
        None => format!("beats_second_best={}", report.beats_second_best),
    };
    writeln!(
        out,
        "n_equilibria={} piB={} indifference={}",
        set.count(),
        join(set.payoffs.iter().map(|p| format_number(p.1)), ";"),
        join(
            indifference_points(&game).into_iter().map(format_number),
            ";"
        )
    )
    .map_err(io_failure)?;
    writeln!(
        out,
        "{beats} basis={:?} benchmark={} witness={witness} guaranteed_uB={} best={}:{} best_uB={}",
        report.basis,
        format_number(report.benchmark),
        format_number(report.guaranteed_ub),
        best.battlefield().index(),
        format_number(best.amount()),
        format_number(best_u)
    )
    .map_err(io_failure)
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match &cli.command {
        Command::GlPayoff(a) => gl_payoff(a, out)?,
        Command::GlPrecommit(a) => gl_precommit(a, out)?,
        Command::GlRegion(a) => {
            let mut cfg = SweepConfig::default()
                .with_fixed("vbar", a.vbar)
                .with_fixed("phi", a.phi);
            cfg = axis_or_fixed(cfg, "xa", &a.xa)?;
            cfg = axis_or_fixed(cfg, "xb", &a.xb)?;
            let rows = region_sweep_gl(&cfg)?;
            write_gl_region_csv(&rows, out).map_err(io_failure)?;
        }
        Command::GglSolve(a) => {
            let game = GGLInstance::new(a.xa, a.xb, a.alpha)?;
            write_ggl_solve_csv(&game, a.tol, out)?;
        }
        Command::GglPrecommit(a) => ggl_precommit(a, out)?,
        Command::GglRegion(a) => {
            let mut cfg = SweepConfig::default();
            cfg = axis_or_fixed(cfg, "alpha", &a.alpha)?;
            cfg = axis_or_fixed(cfg, "xa", &a.xa)?;
            cfg = axis_or_fixed(cfg, "xb", &a.xb)?;
            let rows = region_sweep_ggl(&cfg)?;
            write_ggl_region_csv(&rows, out).map_err(io_failure)?;
        }
        Command::McFig5(a) => {
            if !(a.vbar_step > 0.0 && a.vbar_step <= a.phi) {
                return Err(Failure::Domain(LottoError::Domain {
                    name: "vbar_step",
                    value: a.vbar_step,
                }));
            }
            let count = (a.phi / a.vbar_step + 1e-9).floor() as usize;
            let config = McConfig {
                n: a.n,
                phi: a.phi,
                budget_a: a.xa,
                budget_b: a.xb,
                v_bars: (0..=count)
                    .map(|k| (k as f64 * a.vbar_step).min(a.phi))
                    .collect(),
                samples: a.samples,
                seed: a.seed,
                grid_step: a.grid_step,
            };
            GLInstance::new(a.xa, a.xb, vec![a.phi])?;
            let rows = run_fig5(&config)?;
            write_mc_csv(&rows, out).map_err(io_failure)?;
        }
        Command::Verify => {
            let reports = verify_suite()?;
            writeln!(out, "quantity,closed_form,oracle,gap,pass").map_err(io_failure)?;
            for r in &reports {
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.quantity,
                    format_number(r.closed_form),
                    format_number(r.oracle),
                    format_number(r.gap),
                    r.pass
                )
                .map_err(io_failure)?;
            }
            if reports.iter().any(|r| !r.pass) {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

/// Runs the command line `args` (including the program name) and returns
/// the exit status.
pub fn run(args: Vec<String>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(f) => return report(f, stderr),
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(stdout, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let first = first.trim_start_matches("error: ");
            return report(Failure::Usage(first.to_string()), stderr);
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs)
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            return report(
                Failure::Usage(format!("cannot start {} workers: {e}", cli.jobs)),
                stderr,
            )
        }
    };
    let result = pool
        .install(|| {
            let mut buf = Vec::new();
            execute(&cli, &mut buf).map(|code| (code, buf))
        })
        .and_then(|(code, buf)| {
            match &cli.out {
                Some(path) => fs::write(path, &buf)
                    .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?,
                None => stdout.write_all(&buf).map_err(io_failure)?,
            }
            Ok(code)
        });
    match result {
        Ok(code) => code,
        Err(f) => report(f, stderr),
    }
}

fn report(f: Failure, stderr: &mut dyn Write) -> i32 {
    match f {
        Failure::Usage(msg) => print_error(stderr, "usage", &msg),
        Failure::Domain(e) => print_error(stderr, e.kind(), &e.to_string()),
        Failure::Io(msg) => print_error(stderr, "io", &msg),
    }
    2
}
