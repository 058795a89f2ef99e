//! Length partitions, sum-rank weight, supports and uniform error sampling.

use std::fmt;
use std::ops::Range;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigUint, RandBigInt};
use num_traits::Zero;
use rand::Rng;

use crate::combinatorics::{num_matrices_rank, suffix_counts};
use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};
use crate::matrix::Mat;

/// Split of the code length `n` into `ell` consecutive blocks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LengthPartition {
    blocks: Vec<usize>,
    offsets: Vec<usize>,
}

impl LengthPartition {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Domain("a partition needs at least one block".into()));
        }
        if blocks.contains(&0) {
            return Err(Error::Domain("block lengths must be positive".into()));
        }
        let mut offsets = Vec::with_capacity(blocks.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for &b in &blocks {
            acc += b;
            offsets.push(acc);
        }
        Ok(Self { blocks, offsets })
    }

    /// `ell` blocks of length `eta`.
    pub fn constant(eta: usize, ell: usize) -> Result<Self> {
        Self::new(vec![eta; ell])
    }

    pub fn n(&self) -> usize {
        self.offsets[self.blocks.len()]
    }

    pub fn ell(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn block_len(&self, i: usize) -> usize {
        self.blocks[i]
    }

    /// Column range of block `i`.
    pub fn block_range(&self, i: usize) -> Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    /// The shared block length, if all blocks have the same length.
    pub fn constant_eta(&self) -> Option<usize> {
        let first = self.blocks[0];
        self.blocks.iter().all(|&b| b == first).then_some(first)
    }

    fn check_len(&self, cols: usize) -> Result<()> {
        if cols != self.n() {
            return Err(Error::Dimension(format!(
                "{cols} columns, partition has length {}",
                self.n()
            )));
        }
        Ok(())
    }
}

impl FromStr for LengthPartition {
    type Err = Error;

    /// Accepts a comma-separated list (`2,2,3`) or `etaxell` (`2x3`).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid partition '{s}'"));
        let s = s.trim();
        if let Some((eta, ell)) = s.split_once('x') {
            let eta: usize = eta.trim().parse().map_err(|_| bad())?;
            let ell: usize = ell.trim().parse().map_err(|_| bad())?;
            return Self::constant(eta, ell);
        }
        let blocks = s
            .split(',')
            .map(|b| b.trim().parse::<usize>().map_err(|_| bad()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(blocks)
    }
}

impl fmt::Display for LengthPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.blocks.iter().map(|b| b.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Per-block GF(q)-ranks of a matrix.
pub type RankProfile = Vec<usize>;

/// Columns of block `i` of `e`.
pub fn block_of(e: &Mat, partition: &LengthPartition, i: usize) -> Mat {
    e.submatrix(0..e.rows(), partition.block_range(i))
}

pub fn rank_profile(e: &Mat, partition: &LengthPartition) -> Result<RankProfile> {
    partition.check_len(e.cols())?;
    Ok((0..partition.ell())
        .map(|i| block_of(e, partition, i).rank_q())
        .collect())
}

/// Sum over blocks of the GF(q)-rank of the expanded block. A vector is
/// passed as a 1 x n matrix.
pub fn sum_rank_weight(e: &Mat, partition: &LengthPartition) -> Result<usize> {
    Ok(rank_profile(e, partition)?.iter().sum())
}

/// Per-block GF(q) subspaces, each stored as an RREF basis (rows) of the
/// block's row space in GF(q)^{n_i}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumRankSupport {
    partition: LengthPartition,
    blocks: Vec<Mat>,
}

impl SumRankSupport {
    /// Builds a support from arbitrary spanning sets; each block is reduced
    /// to its canonical basis.
    pub fn from_blocks(partition: LengthPartition, blocks: Vec<Mat>) -> Result<Self> {
        if blocks.len() != partition.ell() {
            return Err(Error::Dimension(format!(
                "{} blocks for {} partition parts",
                blocks.len(),
                partition.ell()
            )));
        }
        let mut reduced = Vec::with_capacity(blocks.len());
        for (i, b) in blocks.iter().enumerate() {
            if !b.field().is_prime_field() {
                return Err(Error::FieldMismatch);
            }
            if b.cols() != partition.block_len(i) {
                return Err(Error::Dimension(format!(
                    "support block {i} has {} columns, expected {}",
                    b.cols(),
                    partition.block_len(i)
                )));
            }
            reduced.push(b.row_space_basis());
        }
        if reduced.windows(2).any(|w| *w[0].field() != *w[1].field()) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self {
            partition,
            blocks: reduced,
        })
    }

    pub fn partition(&self) -> &LengthPartition {
        &self.partition
    }

    pub fn block(&self, i: usize) -> &Mat {
        &self.blocks[i]
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    pub fn profile(&self) -> RankProfile {
        self.blocks.iter().map(|b| b.rows()).collect()
    }

    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.rows()).sum()
    }

    /// Block-diagonal `t x n` matrix `diag(B^(1), ..., B^(ell))` lifted into
    /// `field`.
    pub fn block_diagonal(&self, field: &Arc<ExtField>) -> Result<Mat> {
        let n = self.partition.n();
        let mut out = Mat::zeros(field, self.weight(), n);
        let mut row = 0;
        for (i, b) in self.blocks.iter().enumerate() {
            if b.field().q() != field.q() {
                return Err(Error::FieldMismatch);
            }
            let off = self.partition.block_range(i).start;
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out.set(row + r, off + c, FieldElement::from_raw(b.get(r, c).value()));
                }
            }
            row += b.rows();
        }
        Ok(out)
    }

    /// True iff `v`, a GF(q) vector of length `n_i`, lies in block `i`.
    pub fn block_contains(&self, i: usize, v: &[FieldElement]) -> bool {
        self.blocks[i].row_space_contains(v)
    }
}

/// Support of `e`: per block, the row space of the expanded block.
pub fn support_of(e: &Mat, partition: &LengthPartition) -> Result<SumRankSupport> {
    partition.check_len(e.cols())?;
    let blocks = (0..partition.ell())
        .map(|i| block_of(e, partition, i).ext_matrix())
        .collect();
    SumRankSupport::from_blocks(partition.clone(), blocks)
}

/// Per-block orthogonal complement of a support.
pub fn dual_support(support: &SumRankSupport) -> SumRankSupport {
    let blocks = support.blocks.iter().map(|b| b.right_kernel_basis()).collect();
    SumRankSupport {
        partition: support.partition.clone(),
        blocks,
    }
}

/// True iff every block of `a` is contained in the matching block of `b`.
pub fn support_subset(a: &SumRankSupport, b: &SumRankSupport) -> Result<bool> {
    if a.partition != b.partition {
        return Err(Error::Dimension("supports over different partitions".into()));
    }
    Ok(a.blocks
        .iter()
        .zip(&b.blocks)
        .all(|(x, y)| (0..x.rows()).all(|r| y.row_space_contains(x.row(r)))))
}

/// `E = A * B` with B block diagonal over the support of E.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorFactorization {
    /// `s x t` over GF(q^m).
    pub a: Mat,
    /// `t x n` block-diagonal support matrix lifted to GF(q^m).
    pub b: Mat,
    pub support: SumRankSupport,
}

pub fn factor_error(e: &Mat, partition: &LengthPartition) -> Result<ErrorFactorization> {
    let support = support_of(e, partition)?;
    let b = support.block_diagonal(e.field())?;
    // With B^(i) in RREF, A^(i) is E^(i) read off at the pivot columns.
    let mut cols = Vec::with_capacity(support.weight());
    for (i, blk) in support.blocks.iter().enumerate() {
        let off = partition.block_range(i).start;
        let (_, pivots) = blk.rref();
        cols.extend(pivots.into_iter().map(|p| off + p));
    }
    let mut a = Mat::zeros(e.field(), e.rows(), cols.len());
    for r in 0..e.rows() {
        for (j, &c) in cols.iter().enumerate() {
            a.set(r, j, e.get(r, c));
        }
    }
    Ok(ErrorFactorization { a, b, support })
}

/// Draws an `s x n` matrix uniformly from all matrices of sum-rank weight
/// `t`: first the rank profile from its exact marginal, then an independent
/// uniform matrix of the chosen rank in every block.
pub fn sample_uniform_error<R: Rng + ?Sized>(
    field: &Arc<ExtField>,
    s: usize,
    partition: &LengthPartition,
    t: usize,
    rng: &mut R,
) -> Result<Mat> {
    let q = field.q();
    let sm = s * field.m() as usize;
    let table = suffix_counts(partition.blocks(), sm as u32, q, t);
    if table[0][t].is_zero() {
        return Err(Error::Domain(format!(
            "no {s} x {} matrix has sum-rank weight {t}",
            partition.n()
        )));
    }
    let base = field.prime_field();
    let mut e = Mat::zeros(field, s, partition.n());
    let mut remaining = t;
    for (i, &ni) in partition.blocks().iter().enumerate() {
        let u = rng.gen_biguint_below(&table[i][remaining]);
        let mut acc = BigUint::zero();
        let mut v = 0;
        loop {
            acc += num_matrices_rank(sm as u32, ni as u32, v as u32, q) * &table[i + 1][remaining - v];
            if u < acc {
                break;
            }
            v += 1;
        }
        remaining -= v;
        if v == 0 {
            continue;
        }
        let x = Mat::random_full_rank(&base, sm, v, rng);
        let y = Mat::random_full_rank(&base, v, ni, rng);
        let block = Mat::fold_ext(&x.mul(&y)?, field)?;
        let off = partition.block_range(i).start;
        for r in 0..s {
            for c in 0..ni {
                e.set(r, off + c, block.get(r, c));
            }
        }
    }
    Ok(e)
}
