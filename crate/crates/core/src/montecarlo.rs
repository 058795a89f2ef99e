//! Seeded Monte Carlo estimates of the full-rank rate, the decoding-condition
//! rate and the end-to-end decoding success rate.
//!
//! Every trial draws from its own ChaCha8 stream seeded by
//! [`trial_seed`], so results do not depend on scheduling or thread count.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::code::LinearCode;
use crate::combinatorics::CountParams;
use crate::decoder::{check_decoding_condition, decode};
use crate::error::{Error, Result};
use crate::field::ExtField;
use crate::matrix::Mat;
use crate::sumrank::{sample_uniform_error, support_of, LengthPartition};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    FullRankRate,
    ConditionRate,
    EndToEnd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExperimentSpec {
    pub params: CountParams,
    /// Code dimension; unused by [`Mode::FullRankRate`].
    pub k: u32,
    pub trials: u64,
    pub master_seed: u64,
    pub mode: Mode,
}

impl ExperimentSpec {
    pub fn new(params: CountParams, k: u32, trials: u64, master_seed: u64, mode: Mode) -> Result<Self> {
        if trials == 0 {
            return Err(Error::Domain("at least one trial is required".into()));
        }
        if mode != Mode::FullRankRate && k >= params.n() {
            return Err(Error::Domain(format!(
                "dimension {k} must be below the length {}",
                params.n()
            )));
        }
        Ok(Self {
            params,
            k,
            trials,
            master_seed,
            mode,
        })
    }

    fn field(&self) -> Result<Arc<ExtField>> {
        Ok(Arc::new(ExtField::with_default_poly(self.params.q, self.params.m)?))
    }

    fn partition(&self) -> Result<LengthPartition> {
        LengthPartition::constant(self.params.eta as usize, self.params.ell as usize)
    }

    fn expect_mode(&self, mode: Mode) -> Result<()> {
        if self.mode != mode {
            return Err(Error::Domain(format!(
                "experiment mode is {:?}, expected {mode:?}",
                self.mode
            )));
        }
        Ok(())
    }
}

/// One point of a sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateRow {
    pub sweep_value: i64,
    pub successes: u64,
    pub trials: u64,
    /// Trials that could not be evaluated (they count as non-successes).
    pub aborted: u64,
    pub p_hat: f64,
    pub ci95_halfwidth: f64,
}

impl EstimateRow {
    pub fn new(sweep_value: i64, successes: u64, trials: u64, aborted: u64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        Self {
            sweep_value,
            successes,
            trials,
            aborted,
            p_hat,
            ci95_halfwidth: 1.96 * binomial_sigma(p_hat, trials),
        }
    }

    /// Standard error of `p_hat`, floored at one trial width.
    pub fn sigma(&self) -> f64 {
        binomial_sigma(self.p_hat, self.trials)
    }
}

fn binomial_sigma(p: f64, n: u64) -> f64 {
    let n = n as f64;
    (p * (1.0 - p) / n).sqrt().max(1.0 / n)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of one trial, mixed from the master seed, the sweep point and the
/// trial index.
pub fn trial_seed(master_seed: u64, sweep_value: i64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master_seed) ^ sweep_value as u64) ^ trial)
}

enum Trial {
    Success,
    Failure,
    Aborted,
}

fn run<F>(spec: &ExperimentSpec, sweep_value: i64, trial: F) -> Result<EstimateRow>
where
    F: Fn(&mut ChaCha8Rng) -> Result<Trial> + Sync,
{
    let (successes, aborted) = (0..spec.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(spec.master_seed, sweep_value, i));
            trial(&mut rng).map(|r| match r {
                Trial::Success => (1u64, 0u64),
                Trial::Failure => (0, 0),
                Trial::Aborted => (0, 1),
            })
        })
        .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
    Ok(EstimateRow::new(sweep_value, successes, spec.trials, aborted))
}

/// Rate at which a uniform weight-t error has full GF(q^m)-rank, for
/// `s = t + offset` over the given offsets. Offsets with `s < 1` are skipped.
pub fn estimate_full_rank_rate(spec: &ExperimentSpec, offsets: &[i64]) -> Result<Vec<EstimateRow>> {
    spec.expect_mode(Mode::FullRankRate)?;
    let field = spec.field()?;
    let partition = spec.partition()?;
    let t = spec.params.t as usize;
    let mut rows = Vec::new();
    for &offset in offsets {
        let s = t as i64 + offset;
        if s < 1 {
            continue;
        }
        let s = s as usize;
        let row = run(spec, offset, |rng| {
            let e = sample_uniform_error(&field, s, &partition, t, rng)?;
            Ok(if e.rank() == t { Trial::Success } else { Trial::Failure })
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Uniform weight-t `t x n` error conditioned on rank t.
fn full_rank_error(field: &Arc<ExtField>, partition: &LengthPartition, t: usize, rng: &mut ChaCha8Rng) -> Result<Mat> {
    let s = t.max(1);
    loop {
        let e = sample_uniform_error(field, s, partition, t, rng)?;
        if e.rank() == t {
            return Ok(e);
        }
    }
}

/// Rate at which the decoding condition holds, each trial drawing a fresh
/// random code and a full-rank error of weight t (with `s = t`).
pub fn estimate_condition_rate(spec: &ExperimentSpec, ts: &[u32]) -> Result<Vec<EstimateRow>> {
    spec.expect_mode(Mode::ConditionRate)?;
    let field = spec.field()?;
    let partition = spec.partition()?;
    let mut rows = Vec::new();
    for &t in ts {
        let t_us = t as usize;
        if t_us + 1 > partition.n() - spec.k as usize {
            return Err(Error::Domain(format!("t = {t} exceeds n - k - 1")));
        }
        let row = run(spec, t as i64, |rng| {
            let code = LinearCode::random(&field, partition.clone(), spec.k as usize, rng)?;
            let e = full_rank_error(&field, &partition, t_us, rng)?;
            let support = support_of(&e, &partition)?;
            match check_decoding_condition(&code, &support) {
                Ok(true) => Ok(Trial::Success),
                Ok(false) => Ok(Trial::Failure),
                Err(Error::BudgetExceeded(_)) => Ok(Trial::Aborted),
                Err(e) => Err(e),
            }
        })?;
        rows.push(row);
    }
    Ok(rows)
}

/// Rate at which the decoder returns the transmitted codeword, with a
/// random code, a random codeword matrix and a uniform weight-t error per
/// trial.
pub fn estimate_end_to_end(spec: &ExperimentSpec, ts: &[u32]) -> Result<Vec<EstimateRow>> {
    spec.expect_mode(Mode::EndToEnd)?;
    let field = spec.field()?;
    let partition = spec.partition()?;
    let s = spec.params.s as usize;
    let mut rows = Vec::new();
    for &t in ts {
        let row = run(spec, t as i64, |rng| {
            let code = LinearCode::random(&field, partition.clone(), spec.k as usize, rng)?;
            let c = code.random_codeword(s, rng);
            let e = sample_uniform_error(&field, s, &partition, t as usize, rng)?;
            let out = decode(&code, &c.add(&e)?)?;
            Ok(if out.codeword.as_ref() == Some(&c) {
                Trial::Success
            } else {
                Trial::Failure
            })
        })?;
        rows.push(row);
    }
    Ok(rows)
}
