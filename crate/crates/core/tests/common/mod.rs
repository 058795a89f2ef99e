//! Worked-example fixtures. Entries are integer-encoded field elements:
//! over GF(8) = GF(2)[a]/(a^3 + a + 1), a = 2, a^2 = 4, a + 1 = 3,
//! a^2 + 1 = 5, a^2 + a = 6, a^2 + a + 1 = 7; over GF(4) = GF(2)[a]/(a^2 + a + 1),
//! a = 2 and a + 1 = 3.
#![allow(dead_code)]

use std::sync::Arc;

use srmk::code::LinearCode;
use srmk::sumrank::LengthPartition;
use srmk::{ExtField, Mat};

pub struct Fixture {
    pub field: Arc<ExtField>,
    pub code: LinearCode,
    pub c: Mat,
    pub e: Mat,
    pub y: Mat,
    pub s: Mat,
    /// Echelonizing transform as printed.
    pub p: Mat,
}

fn mat(f: &Arc<ExtField>, rows: &[[u64; 6]]) -> Mat {
    Mat::from_rows(f, rows).unwrap()
}

fn mat3(f: &Arc<ExtField>, rows: &[[u64; 3]]) -> Mat {
    Mat::from_rows(f, rows).unwrap()
}

fn mat4(f: &Arc<ExtField>, rows: &[[u64; 4]]) -> Mat {
    Mat::from_rows(f, rows).unwrap()
}

pub fn partition() -> LengthPartition {
    "2,2,2".parse().unwrap()
}

/// Decodable instance over GF(8).
pub fn example1() -> Fixture {
    let f = Arc::new(ExtField::new(2, 3, 0b1011).unwrap());
    let h = mat(
        &f,
        &[
            [1, 0, 0, 0, 5, 2],
            [0, 1, 0, 0, 1, 4],
            [0, 0, 1, 0, 2, 2],
            [0, 0, 0, 1, 7, 3],
        ],
    );
    Fixture {
        code: LinearCode::from_parity_check(h, partition()).unwrap(),
        c: mat(&f, &[[5, 1, 1, 1, 6, 3], [3, 6, 4, 2, 1, 3], [0, 0, 1, 2, 4, 1]]),
        e: mat(&f, &[[0, 5, 5, 5, 0, 0], [1, 0, 4, 4, 0, 0], [3, 2, 3, 3, 0, 0]]),
        y: mat(&f, &[[5, 4, 4, 4, 6, 3], [2, 6, 0, 6, 1, 3], [3, 2, 2, 1, 4, 1]]),
        s: mat3(&f, &[[0, 1, 3], [5, 0, 2], [5, 4, 3], [5, 4, 3]]),
        p: mat4(&f, &[[1, 5, 0, 7], [3, 5, 0, 5], [7, 3, 0, 3], [0, 0, 1, 1]]),
        field: f,
    }
}

pub fn example1_h_s() -> [u64; 6] {
    [0, 0, 1, 1, 5, 1]
}

/// Coefficient matrix A with E = A * B.
pub fn example1_a() -> Vec<[u64; 3]> {
    vec![[0, 5, 5], [1, 0, 4], [3, 2, 3]]
}

/// Instance over GF(4) that violates the decoding condition.
pub fn example2() -> Fixture {
    let f = Arc::new(ExtField::new(2, 2, 0b111).unwrap());
    let h = mat(
        &f,
        &[
            [1, 0, 0, 3, 0, 2],
            [0, 1, 0, 1, 0, 1],
            [0, 0, 1, 2, 0, 0],
            [0, 0, 0, 0, 1, 3],
        ],
    );
    Fixture {
        code: LinearCode::from_parity_check(h, partition()).unwrap(),
        c: mat(&f, &[[0, 2, 1, 3, 3, 1], [2, 0, 3, 2, 1, 2], [0, 2, 1, 3, 3, 1]]),
        e: mat(&f, &[[2, 0, 2, 2, 0, 0], [1, 1, 3, 3, 0, 0], [2, 1, 3, 3, 0, 0]]),
        y: mat(&f, &[[2, 2, 3, 1, 3, 1], [3, 1, 0, 1, 1, 2], [2, 3, 2, 0, 3, 1]]),
        s: mat3(&f, &[[3, 3, 0], [2, 2, 2], [1, 2, 2], [0, 0, 0]]),
        p: mat4(&f, &[[0, 2, 2, 0], [2, 2, 2, 0], [2, 3, 0, 0], [0, 0, 0, 1]]),
        field: f,
    }
}

pub fn example2_h_s() -> [u64; 6] {
    [0, 0, 0, 0, 1, 3]
}
