//! Command-line front end. Each subcommand parses its inputs, calls the
//! library and writes text or CSV.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::code::LinearCode;
use crate::combinatorics::{
    condition_approximation, condition_bounds, failure_upper_bound, full_rank_probability, phi, ConditionParams,
    CountParams, ExactProbability,
};
use crate::decoder::{decode, DecodeStatus};
use crate::error::{Error, Result};
use crate::field::ExtField;
use crate::matrix::Mat;
use crate::montecarlo::{estimate_condition_rate, estimate_end_to_end, estimate_full_rank_rate, ExperimentSpec, Mode};
use crate::sumrank::{sample_uniform_error, LengthPartition};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DECODE_FAILURE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "srmk", version, about = "Decoding of interleaved sum-rank-metric codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random code with a full-rank parity-check matrix.
    GenCode(GenCodeArgs),
    /// Write a random s x n codeword matrix of a code.
    Encode(EncodeArgs),
    /// Add a uniformly drawn error of sum-rank weight t.
    Corrupt(CorruptArgs),
    /// Decode a received matrix; exit status 2 on decoding failure.
    Decode(DecodeArgs),
    /// Exact probabilities and bounds as CSV.
    Bounds(BoundsArgs),
    /// Values of the profile sum Phi as CSV.
    Phi(PhiArgs),
    /// Monte Carlo sweeps as CSV.
    Simulate(SimulateArgs),
}

#[derive(Debug, Args)]
pub struct GenCodeArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub m: u32,
    /// Modulus as an integer of base-q digits; defaults to a primitive one.
    #[arg(long)]
    pub poly: Option<u64>,
    /// Block lengths, `2,2,2` or `2x3`.
    #[arg(long)]
    pub partition: LengthPartition,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EncodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub s: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CorruptArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub t: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Where to record the sampled error.
    #[arg(long)]
    pub error_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[arg(long)]
    pub code: PathBuf,
    #[arg(long)]
    pub input: PathBuf,
    /// Decoded codeword matrix.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Decoded error matrix.
    #[arg(long)]
    pub error_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundKind {
    /// `st,logprobability_base10`: exact probability that the error is not full rank.
    FailureExact,
    /// `st,bound_log_base10`: upper bound on that probability.
    FailureBound,
    /// `t,ps,sl,su,sa` with the simulated column left as `nan`.
    Condition,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub kind: BoundKind,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub m: u32,
    /// Constant block length, `eta x ell` or a list of equal lengths.
    #[arg(long)]
    pub partition: LengthPartition,
    /// Error weight for the failure kinds.
    #[arg(long)]
    pub t: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub st_min: i64,
    #[arg(long, default_value_t = 10)]
    pub st_max: i64,
    /// Code dimension for the condition kind.
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub t_min: Option<u32>,
    #[arg(long)]
    pub t_max: Option<u32>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhiArgs {
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub partition: LengthPartition,
    /// Together with `--s`, caps block ranks at `min(s*m, eta)`.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Defaults to the block length, so that the cap is `eta`.
    #[arg(long)]
    pub s: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub t_min: u32,
    #[arg(long)]
    pub t_max: u32,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    FullRank,
    Condition,
    EndToEnd,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum)]
    pub mode: SimMode,
    #[arg(long)]
    pub q: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub partition: LengthPartition,
    #[arg(long, default_value_t = 0)]
    pub k: u32,
    /// Interleaving order for end-to-end runs.
    #[arg(long)]
    pub s: Option<u32>,
    /// Error weight for full-rank runs.
    #[arg(long)]
    pub t: Option<u32>,
    #[arg(long)]
    pub t_min: Option<u32>,
    #[arg(long)]
    pub t_max: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub st_min: i64,
    #[arg(long, default_value_t = 10)]
    pub st_max: i64,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (including the program name) and runs the subcommand;
/// returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::GenCode(a) => gen_code(a),
        Command::Encode(a) => encode(a),
        Command::Corrupt(a) => corrupt(a),
        Command::Decode(a) => decode_cmd(a),
        Command::Bounds(a) => bounds(a),
        Command::Phi(a) => phi_cmd(a),
        Command::Simulate(a) => simulate(a),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| Error::Parse(format!("stdout: {e}")))
        }
    }
}

fn load_code(path: &Path) -> Result<LinearCode> {
    LinearCode::parse(&read(path)?)
}

fn load_matrix(path: &Path, field: &Arc<ExtField>) -> Result<Mat> {
    Mat::parse(field, &read(path)?)
}

fn gen_code(a: &GenCodeArgs) -> Result<i32> {
    let field = Arc::new(match a.poly {
        Some(p) => ExtField::new(a.q, a.m, p)?,
        None => ExtField::with_default_poly(a.q, a.m)?,
    });
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let code = LinearCode::random(&field, a.partition.clone(), a.k, &mut rng)?;
    emit(a.out.as_deref(), &code.to_text())?;
    Ok(EXIT_OK)
}

fn encode(a: &EncodeArgs) -> Result<i32> {
    let code = load_code(&a.code)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    emit(a.out.as_deref(), &code.random_codeword(a.s, &mut rng).to_text())?;
    Ok(EXIT_OK)
}

fn corrupt(a: &CorruptArgs) -> Result<i32> {
    let code = load_code(&a.code)?;
    let c = load_matrix(&a.input, code.field())?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let e = sample_uniform_error(code.field(), c.rows(), code.partition(), a.t, &mut rng)?;
    emit(a.out.as_deref(), &c.add(&e)?.to_text())?;
    if let Some(p) = &a.error_out {
        emit(Some(p), &e.to_text())?;
    }
    Ok(EXIT_OK)
}

fn decode_cmd(a: &DecodeArgs) -> Result<i32> {
    let code = load_code(&a.code)?;
    let y = load_matrix(&a.input, code.field())?;
    let outcome = decode(&code, &y)?;
    match &outcome.status {
        DecodeStatus::Success => {
            emit(
                a.out.as_deref(),
                &outcome.codeword.as_ref().expect("success carries a codeword").to_text(),
            )?;
            if let Some(p) = &a.error_out {
                emit(
                    Some(p),
                    &outcome.error.as_ref().expect("success carries an error").to_text(),
                )?;
            }
            Ok(EXIT_OK)
        }
        DecodeStatus::Failure(reason) => {
            eprintln!("decoding failed: {reason}");
            Ok(EXIT_DECODE_FAILURE)
        }
    }
}

fn constant_eta(p: &LengthPartition) -> Result<(u32, u32)> {
    let eta = p
        .constant_eta()
        .ok_or_else(|| Error::Domain(format!("partition {p} does not have a constant block length")))?;
    Ok((eta as u32, p.ell() as u32))
}

/// Fixed-precision float, with `-inf` and `nan` spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x == f64::NEG_INFINITY {
        "-inf".into()
    } else if x == f64::INFINITY {
        "inf".into()
    } else {
        format!("{x:.10}")
    }
}

fn require<T: Copy>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("--{flag} is required")))
}

fn t_range(min: Option<u32>, max: Option<u32>) -> Result<Vec<u32>> {
    let max = require(max, "t-max")?;
    let min = min.unwrap_or(0);
    if min > max {
        return Err(Error::Domain(format!("--t-min {min} exceeds --t-max {max}")));
    }
    Ok((min..=max).collect())
}

fn st_range(min: i64, max: i64, t: u32) -> Result<Vec<i64>> {
    if min > max {
        return Err(Error::Domain(format!("--st-min {min} exceeds --st-max {max}")));
    }
    Ok((min.max(1 - t as i64)..=max).collect())
}

/// Exact failure-probability sweep (schema A) over `s = t + st`.
pub fn failure_csv(q: u32, m: u32, eta: u32, ell: u32, t: u32, sts: &[i64], bound: bool) -> Result<String> {
    let mut csv = String::from(if bound {
        "st,bound_log_base10\n"
    } else {
        "st,logprobability_base10\n"
    });
    for &st in sts {
        let s = (t as i64 + st) as u32;
        let p = CountParams::new(q, m, s, eta, ell, t)?;
        let value = if bound {
            failure_upper_bound(&p)
        } else {
            full_rank_probability(&p).complement()
        };
        writeln!(csv, "{st},{}", format_float(value.log10())).unwrap();
    }
    Ok(csv)
}

/// Condition sweep (schema B); `simulated` supplies the `ps` column.
pub fn condition_csv(
    q: u32,
    m: u32,
    eta: u32,
    ell: u32,
    k: u32,
    ts: &[u32],
    simulated: Option<&[f64]>,
) -> Result<String> {
    let mut csv = String::from("t,ps,sl,su,sa\n");
    for (i, &t) in ts.iter().enumerate() {
        let cp = ConditionParams::new(q, m, eta * ell, k, t.max(1), eta, ell, t)?;
        let b = condition_bounds(&cp);
        let sa = condition_approximation(&cp).map_or(f64::NAN, |a| a.to_f64());
        let ps = simulated.map_or(f64::NAN, |s| s[i]);
        writeln!(
            csv,
            "{t},{},{},{},{}",
            format_float(ps),
            format_float(b.lower.to_f64()),
            format_float(b.upper.to_f64()),
            format_float(sa)
        )
        .unwrap();
    }
    Ok(csv)
}

fn bounds(a: &BoundsArgs) -> Result<i32> {
    let (eta, ell) = constant_eta(&a.partition)?;
    let csv = match a.kind {
        BoundKind::FailureExact | BoundKind::FailureBound => {
            let t = require(a.t, "t")?;
            failure_csv(
                a.q,
                a.m,
                eta,
                ell,
                t,
                &st_range(a.st_min, a.st_max, t)?,
                a.kind == BoundKind::FailureBound,
            )?
        }
        BoundKind::Condition => {
            let k = require(a.k, "k")?;
            condition_csv(a.q, a.m, eta, ell, k, &t_range(a.t_min, a.t_max)?, None)?
        }
    };
    emit(a.out.as_deref(), &csv)?;
    Ok(EXIT_OK)
}

fn phi_cmd(a: &PhiArgs) -> Result<i32> {
    let (eta, ell) = constant_eta(&a.partition)?;
    let s = a.s.unwrap_or(eta);
    let mut csv = String::from("t,phi,multiplications\n");
    for t in a.t_min..=a.t_max {
        let p = CountParams::new(a.q, a.m, s, eta, ell, t)?;
        let v = phi(&p);
        writeln!(csv, "{t},{},{}", v.value, v.multiplications).unwrap();
    }
    emit(a.out.as_deref(), &csv)?;
    Ok(EXIT_OK)
}

fn simulate(a: &SimulateArgs) -> Result<i32> {
    let (eta, ell) = constant_eta(&a.partition)?;
    let csv = match a.mode {
        SimMode::FullRank => {
            let t = require(a.t, "t")?;
            let p = CountParams::new(a.q, a.m, t.max(1), eta, ell, t)?;
            let spec = ExperimentSpec::new(p, a.k, a.trials, a.seed, Mode::FullRankRate)?;
            let rows = estimate_full_rank_rate(&spec, &st_range(a.st_min, a.st_max, t)?)?;
            let mut csv = String::from("st,logprobability_base10\n");
            for r in rows {
                let failures = ExactProbability::new((r.trials - r.successes).into(), r.trials.into())?;
                writeln!(csv, "{},{}", r.sweep_value, format_float(failures.log10())).unwrap();
            }
            csv
        }
        SimMode::Condition => {
            let ts = t_range(a.t_min, a.t_max)?;
            let p = CountParams::new(a.q, a.m, 1, eta, ell, 0)?;
            let spec = ExperimentSpec::new(p, a.k, a.trials, a.seed, Mode::ConditionRate)?;
            let rows = estimate_condition_rate(&spec, &ts)?;
            for r in rows.iter().filter(|r| r.aborted > 0) {
                eprintln!(
                    "warning: t = {}: {} trials aborted by the enumeration budget",
                    r.sweep_value, r.aborted
                );
            }
            let ps: Vec<f64> = rows.iter().map(|r| r.p_hat).collect();
            condition_csv(a.q, a.m, eta, ell, a.k, &ts, Some(&ps))?
        }
        SimMode::EndToEnd => {
            let ts = t_range(a.t_min, a.t_max)?;
            let s = require(a.s, "s")?;
            let p = CountParams::new(a.q, a.m, s, eta, ell, 0)?;
            let spec = ExperimentSpec::new(p, a.k, a.trials, a.seed, Mode::EndToEnd)?;
            let mut csv = String::from("t,successes,trials,p_hat,ci95_halfwidth\n");
            for r in estimate_end_to_end(&spec, &ts)? {
                writeln!(
                    csv,
                    "{},{},{},{},{}",
                    r.sweep_value,
                    r.successes,
                    r.trials,
                    format_float(r.p_hat),
                    format_float(r.ci95_halfwidth)
                )
                .unwrap();
            }
            csv
        }
    };
    emit(a.out.as_deref(), &csv)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_float(f64::NAN), "nan");
        assert_eq!(format_float(0.5), "0.5000000000");
    }

    #[test]
    fn failure_bound_starts_at_zero() {
        let csv = failure_csv(2, 2, 2, 5, 0, &[1, 2], true).unwrap();
        assert_eq!(csv.lines().nth(1).unwrap(), "1,-inf");
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(main_with_args(["srmk", "bogus"]), EXIT_USAGE);
        assert_eq!(
            main_with_args(["srmk", "phi", "--q", "4", "--partition", "2x2", "--t-max", "2"]),
            EXIT_USAGE
        );
    }
}
