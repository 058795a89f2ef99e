mod common;

use srmk::decoder::{
    check_decoding_condition, condition_rank, decode, decoding_condition_witness, erasure_decode, recover_support,
    DecodeStatus, FailureReason,
};
use srmk::matrix::is_row_echelon;
use srmk::sumrank::{sum_rank_weight, support_of};
use srmk::{Error, Mat};

#[test]
fn example1_fixture_is_consistent() {
    let fx = common::example1();
    assert_eq!(fx.c.add(&fx.e).unwrap(), fx.y);
    assert!(fx.code.contains(&fx.c).unwrap());
    assert_eq!(fx.code.syndrome(&fx.y).unwrap(), fx.s);
    assert_eq!(sum_rank_weight(&fx.e, &common::partition()).unwrap(), 3);
    assert_eq!(fx.e.rank(), 3);
}

#[test]
fn example1_intermediates() {
    let fx = common::example1();
    let ps = fx.p.mul(&fx.s).unwrap();
    assert!(is_row_echelon(&ps));
    assert_eq!(ps.rank(), 3);
    let ph = fx.p.mul(fx.code.parity_check()).unwrap();
    let printed = Mat::from_rows(&fx.field, &[common::example1_h_s()]).unwrap();
    assert_eq!(ph.submatrix(3..4, 0..6), printed);

    let rec = recover_support(&fx.code, &fx.s).unwrap();
    assert_eq!(rec.t, 3);
    assert_eq!(rec.h_s.rref().0, printed.rref().0);
    let profile = rec.support.profile();
    assert_eq!(profile, vec![2, 1, 0]);
    let base = fx.field.prime_field();
    assert_eq!(rec.support.block(0), &Mat::identity(&base, 2));
    assert_eq!(rec.support.block(1), &Mat::from_rows(&base, &[[1u64, 1]]).unwrap());
    assert_eq!(rec.support.block(2).shape(), (0, 2));

    let b = rec.support.block_diagonal(&fx.field).unwrap();
    let a_t = fx
        .code
        .parity_check()
        .mul(&b.transpose())
        .unwrap()
        .solve_right(&fx.s)
        .unwrap();
    // The printed coefficient matrix is A; its transpose solves the system.
    let printed_a = Mat::from_rows(&fx.field, &common::example1_a()).unwrap();
    assert_eq!(a_t.transpose(), printed_a);
    assert_eq!(printed_a.mul(&b).unwrap(), fx.e);
    assert_eq!(erasure_decode(&fx.code, &rec.support, &fx.s).unwrap(), fx.e);
}

#[test]
fn example1_decodes() {
    let fx = common::example1();
    let out = decode(&fx.code, &fx.y).unwrap();
    assert_eq!(out.status, DecodeStatus::Success);
    assert_eq!(out.codeword.unwrap(), fx.c);
    assert_eq!(out.error.unwrap(), fx.e);
    assert_eq!(out.t_detected, 3);
    let support = support_of(&fx.e, &common::partition()).unwrap();
    assert!(check_decoding_condition(&fx.code, &support).unwrap());
}

#[test]
fn example2_fixture_is_consistent() {
    let fx = common::example2();
    assert_eq!(fx.c.add(&fx.e).unwrap(), fx.y);
    assert!(fx.code.contains(&fx.c).unwrap());
    assert_eq!(fx.code.syndrome(&fx.y).unwrap(), fx.s);
    assert_eq!(fx.e.rank(), 3);
    assert_eq!(fx.code.min_distance().unwrap(), 4);
}

#[test]
fn example2_fails_with_support_mismatch() {
    let fx = common::example2();
    let ph = fx.p.mul(fx.code.parity_check()).unwrap();
    let printed = Mat::from_rows(&fx.field, &[common::example2_h_s()]).unwrap();
    assert_eq!(ph.submatrix(3..4, 0..6), printed);
    assert!(is_row_echelon(&fx.p.mul(&fx.s).unwrap()));

    match recover_support(&fx.code, &fx.s) {
        Err(Error::SupportMismatch { kernel_dims, total, t }) => {
            assert_eq!(kernel_dims, vec![2, 2, 0]);
            assert_eq!((total, t), (4, 3));
        }
        other => panic!("unexpected {other:?}"),
    }
    let out = decode(&fx.code, &fx.y).unwrap();
    assert_eq!(
        out.status,
        DecodeStatus::Failure(FailureReason::SupportMismatch {
            kernel_dims: vec![2, 2, 0],
            t: 3
        })
    );
    assert!(out.codeword.is_none());
}

#[test]
fn example2_condition_witness() {
    let fx = common::example2();
    let support = support_of(&fx.e, &common::partition()).unwrap();
    assert_eq!(support.profile(), vec![2, 1, 0]);
    assert!(!check_decoding_condition(&fx.code, &support).unwrap());
    let (block, v) = decoding_condition_witness(&fx.code, &support).unwrap().unwrap();
    let values: Vec<u32> = v.iter().map(|x| x.value()).collect();
    assert_eq!((block, values), (1, vec![1, 0]));
    assert_eq!(condition_rank(&fx.code, &support, block, &v).unwrap(), 3);
}
