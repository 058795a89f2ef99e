//! Syndrome-based decoding of interleaved sum-rank-metric codes, with the
//! decoding-condition predicate and support recovery from the received
//! matrix alone.

use std::fmt;

use rayon::prelude::*;

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::matrix::Mat;
use crate::sumrank::{block_of, sum_rank_weight, LengthPartition, SumRankSupport};

/// Why a decoding attempt did not produce a codeword.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    TooManyErrors { t: usize, redundancy: usize },
    SupportMismatch { kernel_dims: Vec<usize>, t: usize },
    ErasureRankDeficient { rank: usize, needed: usize },
    Inconsistent,
    VerificationFailed,
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooManyErrors { t, redundancy } => {
                write!(f, "too many errors: syndrome rank {t} with redundancy {redundancy}")
            }
            Self::SupportMismatch { kernel_dims, t } => write!(
                f,
                "support mismatch: block kernel dimensions {kernel_dims:?} sum to {}, syndrome rank is {t}",
                kernel_dims.iter().sum::<usize>()
            ),
            Self::ErasureRankDeficient { rank, needed } => {
                write!(f, "erasure system rank deficient: rank {rank}, need {needed}")
            }
            Self::Inconsistent => f.write_str("erasure system inconsistent"),
            Self::VerificationFailed => f.write_str("decoded word fails the parity check"),
        }
    }
}

impl FailureReason {
    fn from_error(e: Error) -> std::result::Result<Self, Error> {
        match e {
            Error::TooManyErrors { t, redundancy } => Ok(Self::TooManyErrors { t, redundancy }),
            Error::SupportMismatch { kernel_dims, t, .. } => Ok(Self::SupportMismatch { kernel_dims, t }),
            Error::ErasureRankDeficient { rank, needed } => Ok(Self::ErasureRankDeficient { rank, needed }),
            Error::Inconsistent => Ok(Self::Inconsistent),
            other => Err(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DecodeStatus {
    Success,
    Failure(FailureReason),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub status: DecodeStatus,
    pub codeword: Option<Mat>,
    pub error: Option<Mat>,
    pub support: Option<SumRankSupport>,
    /// `rk(S)` over GF(q^m).
    pub t_detected: usize,
    /// Erasure decoding succeeded but the error uses fewer support
    /// dimensions than were recovered.
    pub support_overcomplete: bool,
}

impl DecodeOutcome {
    pub fn is_success(&self) -> bool {
        self.status == DecodeStatus::Success
    }

    fn failure(reason: FailureReason, t: usize, support: Option<SumRankSupport>) -> Self {
        Self {
            status: DecodeStatus::Failure(reason),
            codeword: None,
            error: None,
            support,
            t_detected: t,
            support_overcomplete: false,
        }
    }
}

/// Support recovered from a syndrome.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportRecovery {
    pub support: SumRankSupport,
    /// Parity-check matrix of the code spanned by the constituent code and
    /// the error rows: the last `n - k - t` rows of `P * H`.
    pub h_s: Mat,
    pub t: usize,
}

fn empty_support(code: &LinearCode) -> Result<SumRankSupport> {
    let base = code.field().prime_field();
    let blocks = code
        .partition()
        .blocks()
        .iter()
        .map(|&ni| Mat::zeros(&base, 0, ni))
        .collect();
    SumRankSupport::from_blocks(code.partition().clone(), blocks)
}

/// Per-block GF(q) kernels of `h_s`, each an RREF basis.
fn dual_kernels(h_s: &Mat, partition: &LengthPartition) -> Vec<Mat> {
    (0..partition.ell())
        .map(|i| block_of(h_s, partition, i).ext_matrix().right_kernel_basis())
        .collect()
}

/// Recovers the error support from `S = H * Y^T`. Fails with
/// `TooManyErrors` when `rk(S) = n - k` and with `SupportMismatch` when the
/// block kernels of `H_S` do not add up to `rk(S)`.
pub fn recover_support(code: &LinearCode, s: &Mat) -> Result<SupportRecovery> {
    let h = code.parity_check();
    if s.rows() != h.rows() {
        return Err(Error::Dimension(format!(
            "syndrome has {} rows, expected {}",
            s.rows(),
            h.rows()
        )));
    }
    let (p, r) = s.row_echelon_with_transform();
    let t = r.rank();
    let ph = p.mul(h)?;
    let h_s = ph.submatrix(t..h.rows(), 0..h.cols());
    if t == 0 {
        return Ok(SupportRecovery {
            support: empty_support(code)?,
            h_s,
            t,
        });
    }
    if t >= h.rows() {
        return Err(Error::TooManyErrors {
            t,
            redundancy: h.rows(),
        });
    }
    let blocks = dual_kernels(&h_s, code.partition());
    let kernel_dims: Vec<usize> = blocks.iter().map(|b| b.rows()).collect();
    let total: usize = kernel_dims.iter().sum();
    if total != t {
        return Err(Error::SupportMismatch { kernel_dims, total, t });
    }
    let support = SumRankSupport::from_blocks(code.partition().clone(), blocks)?;
    Ok(SupportRecovery { support, h_s, t })
}

/// Solves `(H * B^T) * A^T = S` for a known support B and returns `E = A * B`.
pub fn erasure_decode(code: &LinearCode, support: &SumRankSupport, s: &Mat) -> Result<Mat> {
    if support.partition() != code.partition() {
        return Err(Error::Dimension("support partition differs from the code's".into()));
    }
    let b = support.block_diagonal(code.field())?;
    let hb = code.parity_check().mul(&b.transpose())?;
    let a_t = hb.solve_right(s)?;
    a_t.transpose().mul(&b)
}

/// Decodes an `s x n` received matrix. Invalid input (wrong shape or field)
/// is an `Err`; decoding failures are reported in the outcome.
pub fn decode(code: &LinearCode, y: &Mat) -> Result<DecodeOutcome> {
    if **y.field() != **code.field() {
        return Err(Error::FieldMismatch);
    }
    let s = code.syndrome(y)?;
    let rec = match recover_support(code, &s) {
        Ok(rec) => rec,
        Err(e) => {
            let t = s.rank();
            return Ok(DecodeOutcome::failure(FailureReason::from_error(e)?, t, None));
        }
    };
    let t = rec.t;
    let e = match erasure_decode(code, &rec.support, &s) {
        Ok(e) => e,
        Err(e) => {
            return Ok(DecodeOutcome::failure(
                FailureReason::from_error(e)?,
                t,
                Some(rec.support),
            ))
        }
    };
    let c = y.sub(&e)?;
    if !code.contains(&c)? {
        return Ok(DecodeOutcome::failure(
            FailureReason::VerificationFailed,
            t,
            Some(rec.support),
        ));
    }
    let weight = sum_rank_weight(&e, code.partition())?;
    Ok(DecodeOutcome {
        status: DecodeStatus::Success,
        codeword: Some(c),
        error: Some(e),
        support: Some(rec.support),
        t_detected: t,
        support_overcomplete: weight < t,
    })
}

/// Largest block length the decoding-condition enumeration accepts.
pub const CONDITION_MAX_BLOCK: usize = 16;
/// Largest q the decoding-condition enumeration accepts.
pub const CONDITION_MAX_Q: u32 = 4;

fn digits_vector(mut x: u64, q: u32, len: usize) -> Vec<FieldElement> {
    (0..len)
        .map(|_| {
            let d = (x % q as u64) as u32;
            x /= q as u64;
            FieldElement::from_raw(d)
        })
        .collect()
}

fn check_budget(code: &LinearCode) -> Result<()> {
    let q = code.field().q();
    let widest = code.partition().blocks().iter().copied().max().unwrap_or(0);
    if q > CONDITION_MAX_Q || widest > CONDITION_MAX_BLOCK {
        return Err(Error::BudgetExceeded(format!(
            "decoding-condition enumeration needs q <= {CONDITION_MAX_Q} and blocks of length <= {CONDITION_MAX_BLOCK} (q = {q}, longest block {widest})"
        )));
    }
    Ok(())
}

/// `rk(H [B^T | b^T])` for `b` zero outside block `block`, where it equals
/// the GF(q) vector `local`.
pub fn condition_rank(
    code: &LinearCode,
    support: &SumRankSupport,
    block: usize,
    local: &[FieldElement],
) -> Result<usize> {
    let partition = code.partition();
    if local.len() != partition.block_len(block) {
        return Err(Error::Dimension(format!(
            "block {block} has length {}",
            partition.block_len(block)
        )));
    }
    let f = code.field();
    let mut b = Mat::zeros(f, 1, partition.n());
    let off = partition.block_range(block).start;
    for (j, &x) in local.iter().enumerate() {
        b.set(0, off + j, x);
    }
    let bb = support.block_diagonal(f)?.vstack(&b)?;
    Ok(code.parity_check().mul(&bb.transpose())?.rank())
}

/// Candidate vectors of block `i`: all GF(q)^{n_i} vectors outside the
/// support block, ordered with coordinate 0 as the least significant digit.
fn candidates<'a>(
    support: &'a SumRankSupport,
    i: usize,
    q: u32,
) -> impl ParallelIterator<Item = Vec<FieldElement>> + 'a {
    let ni = support.partition().block_len(i);
    (1..(q as u64).pow(ni as u32))
        .into_par_iter()
        .map(move |x| digits_vector(x, q, ni))
        .filter(move |v| !support.block_contains(i, v))
}

/// Left annihilator L of `M = H * B^T`: `rk(H [B^T | b^T]) = t + 1` iff M
/// has rank t and `L * H * b^T != 0`. Returns `None` when M is rank
/// deficient.
fn annihilated_parity_check(code: &LinearCode, support: &SumRankSupport) -> Result<Option<Mat>> {
    let h = code.parity_check();
    let m = h.mul(&support.block_diagonal(code.field())?.transpose())?;
    if m.rank() < support.weight() {
        return Ok(None);
    }
    let l = m.transpose().right_kernel_basis();
    Ok(Some(l.mul(h)?))
}

/// True iff `rk(H [B^T | b^T]) = t + 1` for every GF(q) vector `b` that is
/// zero outside one block and lies outside the support there.
pub fn check_decoding_condition(code: &LinearCode, support: &SumRankSupport) -> Result<bool> {
    Ok(decoding_condition_witness(code, support)?.is_none())
}

/// First vector violating the decoding condition, as `(block, local
/// vector)`, scanning blocks in order. `Ok(None)` means the condition holds.
pub fn decoding_condition_witness(
    code: &LinearCode,
    support: &SumRankSupport,
) -> Result<Option<(usize, Vec<FieldElement>)>> {
    if support.partition() != code.partition() {
        return Err(Error::Dimension("support partition differs from the code's".into()));
    }
    check_budget(code)?;
    let q = code.field().q();
    let lh = annihilated_parity_check(code, support)?;
    for i in 0..code.partition().ell() {
        let found = match &lh {
            // rank deficient: every candidate violates the condition
            None => candidates(support, i, q).find_first(|_| true),
            Some(lh) => {
                let g = block_of(lh, code.partition(), i);
                candidates(support, i, q).find_first(|v| {
                    let col = Mat::new(g.field().clone(), v.len(), 1, v.clone()).expect("shape");
                    g.mul(&col).expect("shape").is_zero()
                })
            }
        };
        if let Some(v) = found {
            return Ok(Some((i, v)));
        }
    }
    Ok(None)
}

/// Support recovered from the received matrix alone: the right kernel of Y
/// serves as `H_S`. Meaningful when `s >= k + t`, the codeword part has rank
/// k and the error has full rank.
pub fn support_from_received(y: &Mat, partition: &LengthPartition) -> Result<SumRankSupport> {
    if y.cols() != partition.n() {
        return Err(Error::Dimension(format!(
            "{} columns, partition length is {}",
            y.cols(),
            partition.n()
        )));
    }
    let h_s = y.right_kernel_basis();
    if h_s.rows() == 0 {
        return Err(Error::NoKernel);
    }
    SumRankSupport::from_blocks(partition.clone(), dual_kernels(&h_s, partition))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::ExtField;
    use crate::sumrank::{factor_error, sample_uniform_error, support_of};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn full_rank_error(f: &Arc<ExtField>, s: usize, p: &LengthPartition, t: usize, rng: &mut ChaCha8Rng) -> Mat {
        loop {
            let e = sample_uniform_error(f, s, p, t, rng).unwrap();
            if e.rank() == t {
                return e;
            }
        }
    }

    /// Literal check: rank of H [B^T | b^T] for every candidate b.
    fn brute_condition(code: &LinearCode, support: &SumRankSupport) -> bool {
        let q = code.field().q();
        let t = support.weight();
        (0..code.partition().ell()).all(|i| {
            let ni = code.partition().block_len(i);
            (1..(q as u64).pow(ni as u32)).all(|x| {
                let v = digits_vector(x, q, ni);
                support.block_contains(i, &v) || condition_rank(code, support, i, &v).unwrap() == t + 1
            })
        })
    }

    #[test]
    fn no_error_decodes_to_itself() {
        let f = Arc::new(ExtField::with_default_poly(2, 3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let code = LinearCode::random(&f, "2,2,2".parse().unwrap(), 2, &mut rng).unwrap();
        let c = code.random_codeword(3, &mut rng);
        let out = decode(&code, &c).unwrap();
        assert!(out.is_success());
        assert_eq!(out.codeword.unwrap(), c);
        assert!(out.error.unwrap().is_zero());
        assert_eq!(out.t_detected, 0);
        assert_eq!(out.support.unwrap().weight(), 0);
        let s = code.syndrome(&c).unwrap();
        let empty = recover_support(&code, &s).unwrap().support;
        assert!(erasure_decode(&code, &empty, &s).unwrap().is_zero());
    }

    #[test]
    fn round_trip_below_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut decoded = 0;
        for (q, m, part, k) in [
            (2, 2, "2,2,2,2", 2),
            (2, 3, "8", 3),
            (2, 2, "1x7", 2),
            (3, 2, "3,3", 2),
            (2, 3, "3,1,2", 2),
        ] {
            let f = Arc::new(ExtField::with_default_poly(q, m).unwrap());
            let p: LengthPartition = part.parse().unwrap();
            for _ in 0..10 {
                let code = LinearCode::random(&f, p.clone(), k, &mut rng).unwrap();
                let d = code.min_distance().unwrap();
                for t in 1..d.saturating_sub(1) {
                    let e = full_rank_error(&f, t + 1, &p, t, &mut rng);
                    let c = code.random_codeword(t + 1, &mut rng);
                    let y = c.add(&e).unwrap();
                    let out = decode(&code, &y).unwrap();
                    assert!(out.is_success(), "{:?}", out.status);
                    assert_eq!(out.codeword.as_ref().unwrap(), &c);
                    assert_eq!(out.error.as_ref().unwrap(), &e);
                    assert_eq!(out.support.as_ref().unwrap(), &support_of(&e, &p).unwrap());
                    assert!(!out.support_overcomplete);
                    let got = out.support.as_ref().unwrap();
                    for i in (0..p.ell()).filter(|&i| got.block(i).rows() == 0) {
                        assert_eq!(block_of(&y, &p, i), block_of(out.codeword.as_ref().unwrap(), &p, i));
                    }
                    assert!(check_decoding_condition(&code, &support_of(&e, &p).unwrap()).unwrap());
                    let rec = recover_support(&code, &code.syndrome(&y).unwrap()).unwrap();
                    assert!(rec.h_s.mul(&e.transpose()).unwrap().is_zero());
                    assert!(rec.h_s.mul(&code.generator().transpose()).unwrap().is_zero());
                    decoded += 1;
                }
            }
        }
        assert!(decoded > 50);
    }

    #[test]
    fn erasure_decoding_recovers_constructed_error() {
        let f = Arc::new(ExtField::with_default_poly(2, 3).unwrap());
        let p: LengthPartition = "3,3,3".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..100 {
            let code = LinearCode::random(&f, p.clone(), 3, &mut rng).unwrap();
            let e = sample_uniform_error(&f, 2, &p, 3, &mut rng).unwrap();
            let fac = factor_error(&e, &p).unwrap();
            let s = code.syndrome(&e).unwrap();
            match erasure_decode(&code, &fac.support, &s) {
                Ok(got) => assert_eq!(got, e),
                Err(Error::ErasureRankDeficient { .. }) => {
                    let hb = code.parity_check().mul(&fac.b.transpose()).unwrap();
                    assert!(hb.rank() < 3);
                }
                Err(other) => panic!("{other}"),
            }
        }
    }

    #[test]
    fn too_many_errors() {
        let f = Arc::new(ExtField::with_default_poly(2, 2).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p: LengthPartition = "1x6".parse().unwrap();
        let code = LinearCode::random(&f, p.clone(), 3, &mut rng).unwrap();
        let e = full_rank_error(&f, 3, &p, 3, &mut rng);
        let out = decode(&code, &e).unwrap();
        assert_eq!(
            out.status,
            DecodeStatus::Failure(FailureReason::TooManyErrors { t: 3, redundancy: 3 })
        );
    }

    #[test]
    fn condition_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let mut violations = 0;
        for (q, m, part, k, t) in [
            (2, 2, "2,2,2", 2, 3),
            (2, 1, "1x6", 2, 3),
            (3, 1, "2,2", 1, 2),
            (2, 2, "3,3", 2, 3),
        ] {
            let f = Arc::new(ExtField::with_default_poly(q, m).unwrap());
            let p: LengthPartition = part.parse().unwrap();
            for _ in 0..40 {
                let code = LinearCode::random(&f, p.clone(), k, &mut rng).unwrap();
                let e = sample_uniform_error(&f, t, &p, t, &mut rng).unwrap();
                let supp = support_of(&e, &p).unwrap();
                let fast = check_decoding_condition(&code, &supp).unwrap();
                assert_eq!(fast, brute_condition(&code, &supp));
                if let Some((i, v)) = decoding_condition_witness(&code, &supp).unwrap() {
                    violations += 1;
                    assert!(!supp.block_contains(i, &v));
                    assert!(condition_rank(&code, &supp, i, &v).unwrap() <= t);
                }
            }
        }
        assert!(violations > 0);
    }

    #[test]
    fn mismatch_implies_condition_violated() {
        let f = Arc::new(ExtField::with_default_poly(2, 2).unwrap());
        let p: LengthPartition = "2,2,2".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut mismatches = 0;
        for _ in 0..2000 {
            let code = LinearCode::random(&f, p.clone(), 2, &mut rng).unwrap();
            let e = full_rank_error(&f, 3, &p, 3, &mut rng);
            let y = code.random_codeword(3, &mut rng).add(&e).unwrap();
            let out = decode(&code, &y).unwrap();
            if let DecodeStatus::Failure(FailureReason::SupportMismatch { .. }) = out.status {
                mismatches += 1;
                assert!(!check_decoding_condition(&code, &support_of(&e, &p).unwrap()).unwrap());
            }
        }
        assert!(mismatches > 0);
    }

    #[test]
    fn condition_budget() {
        let f = Arc::new(ExtField::with_default_poly(5, 1).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let p: LengthPartition = "2,2".parse().unwrap();
        let code = LinearCode::random(&f, p.clone(), 1, &mut rng).unwrap();
        let supp = support_of(&Mat::zeros(&f, 1, 4), &p).unwrap();
        assert!(matches!(
            check_decoding_condition(&code, &supp),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn support_from_received_matrix() {
        let f = Arc::new(ExtField::with_default_poly(2, 3).unwrap());
        let p: LengthPartition = "2,2,2,2".parse().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let mut hits = 0;
        for _ in 0..50 {
            let code = LinearCode::random(&f, p.clone(), 2, &mut rng).unwrap();
            let s = 6;
            let c = code.random_codeword(s, &mut rng);
            let e = full_rank_error(&f, s, &p, 2, &mut rng);
            if c.rank() != 2 {
                continue;
            }
            let got = support_from_received(&c.add(&e).unwrap(), &p).unwrap();
            if got == support_of(&e, &p).unwrap() {
                hits += 1;
            }
        }
        assert!(hits >= 45, "{hits}");
        let zero = support_from_received(&Mat::zeros(&f, 2, 8), &p).unwrap();
        assert_eq!(zero.weight(), 0);
        assert_eq!(support_from_received(&Mat::identity(&f, 8), &p), Err(Error::NoKernel));
    }

    #[test]
    fn rejects_wrong_shape() {
        let f = Arc::new(ExtField::with_default_poly(2, 3).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let code = LinearCode::random(&f, "2,2,2".parse().unwrap(), 2, &mut rng).unwrap();
        assert!(decode(&code, &Mat::zeros(&f, 2, 5)).is_err());
        let g = Arc::new(ExtField::with_default_poly(2, 2).unwrap());
        assert_eq!(decode(&code, &Mat::zeros(&g, 2, 6)), Err(Error::FieldMismatch));
    }
}
