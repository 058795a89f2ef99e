//! Linear sum-rank-metric codes given by a parity-check matrix.

use std::fmt::Write as _;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};
use crate::matrix::Mat;
use crate::sumrank::{sum_rank_weight, LengthPartition};

/// Largest number of codewords (up to scalar multiples) the minimum
/// distance search will enumerate.
pub const MIN_DISTANCE_BUDGET: u128 = 1 << 24;

/// An `[n, k]` code over GF(q^m) with a length partition, stored through a
/// full-row-rank parity-check matrix H and a generator matrix G spanning the
/// right kernel of H.
#[derive(Debug)]
pub struct LinearCode {
    h: Mat,
    g: Mat,
    partition: LengthPartition,
    d: OnceLock<Result<usize>>,
}

impl Clone for LinearCode {
    fn clone(&self) -> Self {
        Self {
            h: self.h.clone(),
            g: self.g.clone(),
            partition: self.partition.clone(),
            d: self.d.clone(),
        }
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.h == other.h && self.partition == other.partition
    }
}

impl LinearCode {
    pub fn from_parity_check(h: Mat, partition: LengthPartition) -> Result<Self> {
        if h.cols() != partition.n() {
            return Err(Error::Dimension(format!(
                "H has {} columns, partition length is {}",
                h.cols(),
                partition.n()
            )));
        }
        let rank = h.rank();
        if rank != h.rows() {
            return Err(Error::Dimension(format!("H has {} rows but rank {rank}", h.rows())));
        }
        let g = h.right_kernel_basis();
        Ok(Self {
            h,
            g,
            partition,
            d: OnceLock::new(),
        })
    }

    /// Code with a uniformly random full-rank `(n-k) x n` parity-check matrix.
    pub fn random<R: Rng + ?Sized>(
        field: &Arc<ExtField>,
        partition: LengthPartition,
        k: usize,
        rng: &mut R,
    ) -> Result<Self> {
        let n = partition.n();
        if k > n {
            return Err(Error::Domain(format!("dimension {k} exceeds length {n}")));
        }
        let h = Mat::random_full_rank(field, n - k, n, rng);
        Self::from_parity_check(h, partition)
    }

    pub fn field(&self) -> &Arc<ExtField> {
        self.h.field()
    }

    pub fn parity_check(&self) -> &Mat {
        &self.h
    }

    /// `k x n` generator matrix in reduced row-echelon form.
    pub fn generator(&self) -> &Mat {
        &self.g
    }

    pub fn partition(&self) -> &LengthPartition {
        &self.partition
    }

    pub fn n(&self) -> usize {
        self.h.cols()
    }

    pub fn k(&self) -> usize {
        self.g.rows()
    }

    pub fn redundancy(&self) -> usize {
        self.h.rows()
    }

    /// `S = H * Y^T` for an `s x n` matrix Y.
    pub fn syndrome(&self, y: &Mat) -> Result<Mat> {
        if y.cols() != self.n() {
            return Err(Error::Dimension(format!(
                "{} columns, code length is {}",
                y.cols(),
                self.n()
            )));
        }
        self.h.mul(&y.transpose())
    }

    /// True iff every row of `c` is a codeword.
    pub fn contains(&self, c: &Mat) -> Result<bool> {
        Ok(self.syndrome(c)?.is_zero())
    }

    /// `U * G` for an `s x k` message matrix U.
    pub fn encode(&self, u: &Mat) -> Result<Mat> {
        u.mul(&self.g)
    }

    /// Codeword matrix with `s` independent uniform codeword rows.
    pub fn random_codeword<R: Rng + ?Sized>(&self, s: usize, rng: &mut R) -> Mat {
        let u = Mat::random(self.field(), s, self.k(), rng);
        self.encode(&u).expect("message shape matches generator")
    }

    /// Minimum sum-rank distance, computed on first use and cached.
    pub fn min_distance(&self) -> Result<usize> {
        self.d.get_or_init(|| self.min_distance_uncached()).clone()
    }

    /// Minimum sum-rank distance by exhaustive search over codewords whose
    /// first nonzero message coordinate is 1. Ignores the cache.
    pub fn min_distance_uncached(&self) -> Result<usize> {
        let k = self.k();
        if k == 0 {
            return Err(Error::ZeroCode);
        }
        let f = self.field();
        let order = f.order() as u128;
        let count = (0..k as u32).try_fold(0u128, |acc, p| {
            order.checked_pow(k as u32 - 1 - p).and_then(|c| acc.checked_add(c))
        });
        match count {
            Some(c) if c <= MIN_DISTANCE_BUDGET => {}
            c => {
                return Err(Error::TooLargeToEnumerate {
                    count: c.unwrap_or(u128::MAX),
                    budget: MIN_DISTANCE_BUDGET,
                })
            }
        }
        let best = (0..k)
            .into_par_iter()
            .flat_map(|p| {
                let tails = order.pow((k - 1 - p) as u32) as u64;
                (0..tails).into_par_iter().map(move |tail| (p, tail))
            })
            .map(|(p, mut tail)| {
                let mut msg = vec![FieldElement::ZERO; k];
                msg[p] = f.one();
                for slot in msg[p + 1..].iter_mut() {
                    *slot = FieldElement::from_raw((tail % order as u64) as u32);
                    tail /= order as u64;
                }
                let u = Mat::new(f.clone(), 1, k, msg).expect("shape");
                let c = self.encode(&u).expect("shape");
                sum_rank_weight(&c, &self.partition).expect("length matches")
            })
            .min()
            .expect("k >= 1");
        Ok(best)
    }

    /// Text form: `q m poly`, the partition, then H in matrix text format.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{}", self.field()).unwrap();
        writeln!(s, "{}", self.partition).unwrap();
        s.push_str(&self.h.to_text());
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty code file".into()))?;
        let nums: Vec<u64> = header
            .split_whitespace()
            .map(|t| {
                t.parse()
                    .map_err(|_| Error::Parse(format!("bad field header {header:?}")))
            })
            .collect::<Result<_>>()?;
        let [q, m, poly] = nums[..] else {
            return Err(Error::Parse(format!("field header needs 'q m poly', got {header:?}")));
        };
        let field = Arc::new(ExtField::new(
            u32::try_from(q).map_err(|_| Error::Parse("q too large".into()))?,
            u32::try_from(m).map_err(|_| Error::Parse("m too large".into()))?,
            poly,
        )?);
        let partition: LengthPartition = lines
            .next()
            .ok_or_else(|| Error::Parse("missing partition line".into()))?
            .parse()?;
        let rest: Vec<&str> = lines.collect();
        let h = Mat::parse(&field, &rest.join("\n"))?;
        Self::from_parity_check(h, partition)
    }
}
