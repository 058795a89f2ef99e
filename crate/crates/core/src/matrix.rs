//! Dense matrices over GF(q^m) (and GF(q) as the case m = 1) with exact
//! Gaussian elimination.
//!
//! All echelon forms produced here are fully reduced. Pivots are chosen by
//! scanning columns left to right and, within a column, rows top to bottom.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{ExtField, FieldElement};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
    field: Arc<ExtField>,
}

impl Mat {
    pub fn new(field: Arc<ExtField>, rows: usize, cols: usize, data: Vec<FieldElement>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|x| x.value() >= field.order()) {
            return Err(Error::Domain(format!("entry {bad} outside the field")));
        }
        Ok(Self {
            rows,
            cols,
            data,
            field,
        })
    }

    /// Builds a matrix from integer-encoded entries given row by row.
    pub fn from_rows<R: AsRef<[u64]>>(field: &Arc<ExtField>, rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Dimension("ragged rows".into()));
            }
            for &v in r {
                data.push(field.element(v)?);
            }
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data,
            field: field.clone(),
        })
    }

    pub fn zeros(field: &Arc<ExtField>, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
            field: field.clone(),
        }
    }

    pub fn identity(field: &Arc<ExtField>, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn field(&self) -> &Arc<ExtField> {
        &self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    /// Integer encodings, row by row.
    pub fn to_values(&self) -> Vec<Vec<u64>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|x| x.value() as u64).collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// Matrix with independent uniform entries.
    pub fn random<R: Rng + ?Sized>(field: &Arc<ExtField>, rows: usize, cols: usize, rng: &mut R) -> Mat {
        let order = field.order();
        let data = (0..rows * cols)
            .map(|_| FieldElement::from_raw(rng.gen_range(0..order)))
            .collect();
        Mat {
            rows,
            cols,
            data,
            field: field.clone(),
        }
    }

    /// Uniform matrix of rank `min(rows, cols)`, by rejection.
    pub fn random_full_rank<R: Rng + ?Sized>(field: &Arc<ExtField>, rows: usize, cols: usize, rng: &mut R) -> Mat {
        loop {
            let m = Mat::random(field, rows, cols, rng);
            if m.rank() == rows.min(cols) {
                return m;
            }
        }
    }

    fn same_field(&self, other: &Mat) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &*self.field;
        let mut out = Mat::zeros(&self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.data[i * self.cols + l];
                if a.is_zero() {
                    continue;
                }
                let src = other.row(l);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, &b) in dst.iter_mut().zip(src) {
                    *d = f.add(*d, f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &Mat, op: impl Fn(&ExtField, FieldElement, FieldElement) -> FieldElement) -> Result<Mat> {
        self.same_field(other)?;
        if self.shape() != other.shape() {
            return Err(Error::Dimension(format!(
                "shape {:?} vs {:?}",
                self.shape(),
                other.shape()
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| op(&self.field, a, b))
            .collect();
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
            field: self.field.clone(),
        })
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.rows != other.rows {
            return Err(Error::Dimension("hstack needs equal row counts".into()));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Mat {
            rows: self.rows,
            cols,
            data,
            field: self.field.clone(),
        })
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        self.same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::Dimension("vstack needs equal column counts".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
            field: self.field.clone(),
        })
    }

    pub fn submatrix(&self, rows: Range<usize>, cols: Range<usize>) -> Mat {
        assert!(
            rows.end <= self.rows && cols.end <= self.cols,
            "submatrix out of bounds"
        );
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for i in rows.clone() {
            data.extend_from_slice(&self.row(i)[cols.clone()]);
        }
        Mat {
            rows: rows.len(),
            cols: cols.len(),
            data,
            field: self.field.clone(),
        }
    }

    /// Column-wise expansion over GF(q): every entry becomes an m x 1 column,
    /// so a k x n matrix becomes km x n with rows `i*m .. (i+1)*m` holding the
    /// coordinates of row i.
    pub fn ext_matrix(&self) -> Mat {
        let m = self.field.m() as usize;
        let base = self.field.prime_field();
        let mut out = Mat::zeros(&base, self.rows * m, self.cols);
        let mut digits = vec![0u32; m];
        for i in 0..self.rows {
            for j in 0..self.cols {
                self.field.ext_into(self.get(i, j), &mut digits);
                for (d, &v) in digits.iter().enumerate() {
                    out.data[(i * m + d) * self.cols + j] = FieldElement::from_raw(v);
                }
            }
        }
        out
    }

    /// Inverse of [`Mat::ext_matrix`]: folds a (km) x n matrix over GF(q)
    /// into k x n over `field`.
    pub fn fold_ext(base: &Mat, field: &Arc<ExtField>) -> Result<Mat> {
        let m = field.m() as usize;
        if base.field.q() != field.q() || !base.field.is_prime_field() {
            return Err(Error::FieldMismatch);
        }
        if !base.rows.is_multiple_of(m) {
            return Err(Error::Dimension(format!(
                "{} rows is not a multiple of m = {m}",
                base.rows
            )));
        }
        let rows = base.rows / m;
        let mut out = Mat::zeros(field, rows, base.cols);
        let mut digits = vec![0u32; m];
        for i in 0..rows {
            for j in 0..base.cols {
                for (d, slot) in digits.iter_mut().enumerate() {
                    *slot = base.get(i * m + d, j).value();
                }
                out.set(i, j, field.from_digits(&digits)?);
            }
        }
        Ok(out)
    }

    /// Reinterprets a matrix over GF(q) as one over the extension `field`.
    pub fn embed(&self, field: &Arc<ExtField>) -> Result<Mat> {
        if !self.field.is_prime_field() || self.field.q() != field.q() {
            return Err(Error::FieldMismatch);
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
            field: field.clone(),
        })
    }

    /// Reduces the leading `pivot_cols` columns to reduced row-echelon form,
    /// applying every row operation to all columns and to `companion`.
    /// Returns the pivot columns.
    fn eliminate(&mut self, pivot_cols: usize, mut companion: Option<&mut Mat>) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..pivot_cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.data[i * cols + c].is_zero()) else {
                continue;
            };
            if p != r {
                self.swap_rows(p, r);
                if let Some(comp) = companion.as_deref_mut() {
                    comp.swap_rows(p, r);
                }
            }
            let inv = f.inv(self.data[r * cols + c]).expect("pivot is nonzero");
            self.scale_row(r, inv);
            if let Some(comp) = companion.as_deref_mut() {
                comp.scale_row(r, inv);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.data[i * cols + c];
                if factor.is_zero() {
                    continue;
                }
                let neg = f.neg(factor);
                self.add_scaled_row(i, r, neg);
                if let Some(comp) = companion.as_deref_mut() {
                    comp.add_scaled_row(i, r, neg);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, i: usize, s: FieldElement) {
        let f = self.field.clone();
        for x in &mut self.data[i * self.cols..(i + 1) * self.cols] {
            *x = f.mul(*x, s);
        }
    }

    /// row[dst] += s * row[src]
    fn add_scaled_row(&mut self, dst: usize, src: usize, s: FieldElement) {
        let f = self.field.clone();
        let cols = self.cols;
        for j in 0..cols {
            let v = self.data[src * cols + j];
            if !v.is_zero() {
                let d = &mut self.data[dst * cols + j];
                *d = f.add(*d, f.mul(s, v));
            }
        }
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut r = self.clone();
        let pivots = r.eliminate(self.cols, None);
        (r, pivots)
    }

    /// Returns `(P, R)` with P invertible and `R = P * self` in reduced
    /// row-echelon form.
    pub fn row_echelon_with_transform(&self) -> (Mat, Mat) {
        let mut r = self.clone();
        let mut p = Mat::identity(&self.field, self.rows);
        r.eliminate(self.cols, Some(&mut p));
        (p, r)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// GF(q)-rank of the expansion, `rank(ext(self))`.
    pub fn rank_q(&self) -> usize {
        if self.field.is_prime_field() {
            self.rank()
        } else {
            self.ext_matrix().rank()
        }
    }

    /// Basis of `{v : self * v^T = 0}` as the rows of a matrix in reduced
    /// row-echelon form; `cols - rank` rows.
    pub fn right_kernel_basis(&self) -> Mat {
        let (r, pivots) = self.rref();
        let f = &*self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(&self.field, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, f.one());
            for (pr, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(r.get(pr, fc)));
            }
        }
        basis.rref().0
    }

    /// Nonzero rows of the RREF: a canonical basis of the row space.
    pub fn row_space_basis(&self) -> Mat {
        let (r, pivots) = self.rref();
        r.submatrix(0..pivots.len(), 0..self.cols)
    }

    /// True iff `v` (a 1 x cols matrix or a row slice) lies in the row space.
    pub fn row_space_contains(&self, v: &[FieldElement]) -> bool {
        assert_eq!(v.len(), self.cols);
        let (r, pivots) = self.rref();
        let f = &*self.field;
        let mut w = v.to_vec();
        for (i, &c) in pivots.iter().enumerate() {
            let coef = w[c];
            if coef.is_zero() {
                continue;
            }
            for (j, x) in w.iter_mut().enumerate() {
                *x = f.sub(*x, f.mul(coef, r.get(i, j)));
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    /// The unique X with `self * X = rhs`, for `self` of full column rank.
    pub fn solve_right(&self, rhs: &Mat) -> Result<Mat> {
        self.same_field(rhs)?;
        if self.rows != rhs.rows {
            return Err(Error::Dimension(format!(
                "coefficient matrix has {} rows, right-hand side {}",
                self.rows, rhs.rows
            )));
        }
        let t = self.cols;
        let mut aug = self.hstack(rhs)?;
        let pivots = aug.eliminate(t, None);
        if pivots.len() < t {
            return Err(Error::ErasureRankDeficient {
                rank: pivots.len(),
                needed: t,
            });
        }
        for i in t..aug.rows {
            if aug.row(i)[t..].iter().any(|x| !x.is_zero()) {
                return Err(Error::Inconsistent);
            }
        }
        Ok(aug.submatrix(0..t, t..aug.cols))
    }

    /// Text format: `rows cols` followed by one line of integers per row.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.value().to_string()).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    /// Parses the text format from a token stream.
    pub fn parse_tokens<'a, I: Iterator<Item = &'a str>>(field: &Arc<ExtField>, tokens: &mut I) -> Result<Mat> {
        let mut next = |what: &str| -> Result<u64> {
            let tok = tokens.next().ok_or_else(|| Error::Parse(format!("missing {what}")))?;
            tok.parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad {what}: {tok:?}")))
        };
        let rows = next("row count")? as usize;
        let cols = next("column count")? as usize;
        let mut data = Vec::with_capacity(rows * cols);
        for _ in 0..rows * cols {
            data.push(field.element(next("matrix entry")?)?);
        }
        Mat::new(field.clone(), rows, cols, data)
    }

    pub fn parse(field: &Arc<ExtField>, text: &str) -> Result<Mat> {
        let mut tokens = text.split_whitespace();
        let m = Self::parse_tokens(field, &mut tokens)?;
        if tokens.next().is_some() {
            return Err(Error::Parse("trailing data after matrix".into()));
        }
        Ok(m)
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.value().to_string()).collect();
            writeln!(f, "[{}]", line.join(" "))?;
        }
        Ok(())
    }
}

/// True iff `m` is in row-echelon form with strictly increasing pivots and
/// all zero rows at the bottom.
pub fn is_row_echelon(m: &Mat) -> bool {
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..m.rows() {
        match m.row(i).iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(c) => {
                if seen_zero || last.is_some_and(|l| c <= l) {
                    return false;
                }
                last = Some(c);
            }
        }
    }
    true
}
