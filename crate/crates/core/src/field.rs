//! Arithmetic in GF(q) and GF(q^m) over the polynomial basis `[1, a, ..., a^(m-1)]`.
//!
//! Elements are stored as integers in `[0, q^m)` whose base-q digits are the
//! coefficients of the basis (least-significant digit is the constant term).
//! The same integer is the text encoding used by the file formats.

use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Fields up to this order get log/antilog tables; larger ones fall back to
/// polynomial arithmetic.
const TABLE_LIMIT: u64 = 1 << 16;

/// Largest supported field order.
const ORDER_LIMIT: u64 = u32::MAX as u64;

/// An element of some [`ExtField`], encoded as its base-q digit integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);

    /// Raw integer encoding. Only meaningful together with the owning field.
    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Unchecked construction; callers guarantee `v` is below the field order.
    #[inline]
    pub(crate) fn from_raw(v: u32) -> Self {
        FieldElement(v)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone)]
struct LogTables {
    /// exp[i] = g^i for i in [0, 2(N-1)), N = field order.
    exp: Vec<u32>,
    /// log[x] for x != 0; log[0] is unused.
    log: Vec<u32>,
}

/// The finite field GF(q^m) = GF(q)[x] / (poly).
#[derive(Debug, Clone)]
pub struct ExtField {
    q: u32,
    m: u32,
    poly: u64,
    order: u32,
    /// Low coefficients of the modulus, `x^m = -sum(low[i] x^i)`.
    low: Vec<u32>,
    tables: Option<LogTables>,
    prime: OnceLock<Arc<ExtField>>,
}

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q && self.m == other.m && self.poly == other.poly
    }
}

impl Eq for ExtField {}

impl ExtField {
    /// Builds GF(q^m) from a monic degree-m polynomial given in the integer
    /// encoding (digit i = coefficient of x^i). Rejects reducible polynomials.
    pub fn new(q: u32, m: u32, poly: u64) -> Result<Self> {
        if q < 2 || !is_prime(q as u64) {
            return Err(Error::InvalidField(format!("q = {q} is not a prime")));
        }
        if m == 0 {
            return Err(Error::InvalidField("degree m must be at least 1".into()));
        }
        let order = checked_pow(q as u64, m)
            .filter(|&o| o <= ORDER_LIMIT)
            .ok_or_else(|| Error::InvalidField(format!("{q}^{m} is too large")))?;
        let coeffs = int_to_digits(poly, q, m as usize + 1);
        if coeffs.len() != m as usize + 1 || coeffs[m as usize] != 1 || digits_to_int(&coeffs, q) != poly {
            return Err(Error::InvalidField(format!(
                "{poly} does not encode a monic polynomial of degree {m} over GF({q})"
            )));
        }
        if !is_irreducible(&coeffs, q) {
            return Err(Error::InvalidField(format!(
                "polynomial {poly} is reducible over GF({q})"
            )));
        }
        let low = coeffs[..m as usize].to_vec();
        let mut field = ExtField {
            q,
            m,
            poly,
            order: order as u32,
            low,
            tables: None,
            prime: OnceLock::new(),
        };
        if order <= TABLE_LIMIT && order > 2 {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    /// GF(q^m) with the built-in default modulus: a fixed table for q = 2 and
    /// the smallest primitive polynomial (by integer encoding) otherwise.
    pub fn with_default_poly(q: u32, m: u32) -> Result<Self> {
        let poly = default_poly(q, m)?;
        Self::new(q, m, poly)
    }

    /// The prime field GF(q), represented with modulus `x`.
    pub fn prime(q: u32) -> Result<Self> {
        Self::new(q, 1, q as u64)
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Integer encoding of the modulus polynomial.
    #[inline]
    pub fn poly(&self) -> u64 {
        self.poly
    }

    /// Number of elements, q^m.
    #[inline]
    pub fn order(&self) -> u32 {
        self.order
    }

    #[inline]
    pub fn is_prime_field(&self) -> bool {
        self.m == 1
    }

    /// The base field GF(q) as a shared handle (cached).
    pub fn prime_field(&self) -> Arc<ExtField> {
        self.prime
            .get_or_init(|| Arc::new(ExtField::prime(self.q).expect("q was validated as prime")))
            .clone()
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    /// The residue class of `x`, i.e. the generator of the polynomial basis.
    pub fn alpha(&self) -> FieldElement {
        if self.m == 1 {
            FieldElement((self.q - self.low[0]) % self.q)
        } else {
            FieldElement(self.q)
        }
    }

    /// Validates an integer encoding.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value < self.order as u64 {
            Ok(FieldElement(value as u32))
        } else {
            Err(Error::Domain(format!(
                "{value} is not an element of GF({}^{})",
                self.q, self.m
            )))
        }
    }

    /// Embeds `c` in GF(q) as a constant of this field.
    #[inline]
    pub fn from_base(&self, c: u32) -> FieldElement {
        FieldElement(c % self.q)
    }

    /// Builds an element from its m basis coefficients.
    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElement> {
        if digits.len() != self.m as usize || digits.iter().any(|&d| d >= self.q) {
            return Err(Error::Domain(format!("expected {} digits in [0, {})", self.m, self.q)));
        }
        Ok(FieldElement(digits_to_int(digits, self.q) as u32))
    }

    /// Column-wise expansion `ext(x)`: the m coordinates of `x` over GF(q).
    pub fn ext(&self, x: FieldElement) -> Vec<u32> {
        let mut out = vec![0; self.m as usize];
        self.ext_into(x, &mut out);
        out
    }

    #[inline]
    pub(crate) fn ext_into(&self, x: FieldElement, out: &mut [u32]) {
        let mut v = x.0;
        for d in out.iter_mut() {
            *d = v % self.q;
            v /= self.q;
        }
    }

    /// All elements in increasing integer order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.q == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        if self.m == 1 {
            return FieldElement((a.0 + b.0) % self.q);
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for i in 0..self.m {
            let d = (x % self.q + y % self.q) % self.q;
            out += d * place;
            x /= self.q;
            y /= self.q;
            if i + 1 < self.m {
                place *= self.q;
            }
        }
        FieldElement(out)
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if self.q == 2 {
            return a;
        }
        if self.m == 1 {
            return FieldElement((self.q - a.0) % self.q);
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for i in 0..self.m {
            let d = (self.q - x % self.q) % self.q;
            out += d * place;
            x /= self.q;
            if i + 1 < self.m {
                place *= self.q;
            }
        }
        FieldElement(out)
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.q == 2 {
            return FieldElement(a.0 ^ b.0);
        }
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement(0);
        }
        if self.m == 1 {
            return FieldElement(((a.0 as u64 * b.0 as u64) % self.q as u64) as u32);
        }
        match &self.tables {
            Some(t) => {
                let i = t.log[a.0 as usize] + t.log[b.0 as usize];
                FieldElement(t.exp[i as usize])
            }
            None => FieldElement(self.poly_mul(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        if let Some(t) = &self.tables {
            let n = self.order - 1;
            let l = t.log[a.0 as usize];
            return Ok(FieldElement(t.exp[((n - l) % n) as usize]));
        }
        // a^(N-2) = a^-1 in a field of order N
        Ok(self.pow(a, self.order as u64 - 2))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Schoolbook product modulo the defining polynomial.
    fn poly_mul(&self, a: u32, b: u32) -> u32 {
        let m = self.m as usize;
        let q = self.q as u64;
        let da = int_to_digits(a as u64, self.q, m);
        let db = int_to_digits(b as u64, self.q, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % q;
            }
        }
        // x^m = -low(x)
        for deg in (m..prod.len()).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            prod[deg] = 0;
            for (i, &l) in self.low.iter().enumerate() {
                let idx = deg - m + i;
                prod[idx] = (prod[idx] + (q - c) * l as u64) % q;
            }
        }
        let mut out = 0u64;
        for &d in prod[..m].iter().rev() {
            out = out * q + d;
        }
        out as u32
    }

    /// Multiplicative order test: is `g` a generator of the unit group?
    fn is_generator_poly(&self, g: u32) -> bool {
        let n = self.order as u64 - 1;
        if g == 0 {
            return false;
        }
        prime_factors(n).into_iter().all(|p| {
            let mut acc = 1u32;
            let mut base = g;
            let mut e = n / p;
            while e > 0 {
                if e & 1 == 1 {
                    acc = self.poly_mul_any(acc, base);
                }
                base = self.poly_mul_any(base, base);
                e >>= 1;
            }
            acc != 1
        })
    }

    fn poly_mul_any(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            ((a as u64 * b as u64) % self.q as u64) as u32
        } else {
            self.poly_mul(a, b)
        }
    }

    /// True iff the residue class of `x` generates the unit group.
    pub fn is_primitive(&self) -> bool {
        self.is_generator_poly(self.alpha().0)
    }

    fn build_tables(&self) -> LogTables {
        let n = self.order as usize - 1;
        let alpha = self.alpha().0;
        let g = if self.is_generator_poly(alpha) {
            alpha
        } else {
            (2..self.order)
                .find(|&c| self.is_generator_poly(c))
                .expect("unit group of a finite field is cyclic")
        };
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; self.order as usize];
        let mut x = 1u32;
        for (i, slot) in exp.iter_mut().take(n).enumerate() {
            *slot = x;
            log[x as usize] = i as u32;
            x = self.poly_mul(x, g);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        LogTables { exp, log }
    }
}

impl fmt::Display for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.q, self.m, self.poly)
    }
}

/// Primitive polynomials over GF(2) used as defaults, indexed by degree.
const GF2_DEFAULTS: [u64; 17] = [
    0,
    0b10,                // x
    0b111,               // x^2 + x + 1
    0b1011,              // x^3 + x + 1
    0b10011,             // x^4 + x + 1
    0b100101,            // x^5 + x^2 + 1
    0b1000011,           // x^6 + x + 1
    0b10000011,          // x^7 + x + 1
    0b100011101,         // x^8 + x^4 + x^3 + x^2 + 1
    0b1000010001,        // x^9 + x^4 + 1
    0b10000001001,       // x^10 + x^3 + 1
    0b100000000101,      // x^11 + x^2 + 1
    0b1000001010011,     // x^12 + x^6 + x^4 + x + 1
    0b10000000011011,    // x^13 + x^4 + x^3 + x + 1
    0b100010001000011,   // x^14 + x^10 + x^6 + x + 1
    0b1000000000000011,  // x^15 + x + 1
    0b10001000000001011, // x^16 + x^12 + x^3 + x + 1
];

/// Default modulus for GF(q^m).
pub fn default_poly(q: u32, m: u32) -> Result<u64> {
    if q == 2 && (m as usize) < GF2_DEFAULTS.len() && m >= 1 {
        return Ok(GF2_DEFAULTS[m as usize]);
    }
    if q < 2 || !is_prime(q as u64) || m == 0 {
        return Err(Error::InvalidField(format!("no default for q={q}, m={m}")));
    }
    if m == 1 {
        return Ok(q as u64);
    }
    let base = checked_pow(q as u64, m)
        .filter(|&o| o <= ORDER_LIMIT)
        .ok_or_else(|| Error::InvalidField(format!("{q}^{m} is too large")))?;
    for low in 0..base {
        let poly = base + low;
        let coeffs = int_to_digits(poly, q, m as usize + 1);
        if coeffs[0] == 0 || !is_irreducible(&coeffs, q) {
            continue;
        }
        let field = ExtField {
            q,
            m,
            poly,
            order: base as u32,
            low: coeffs[..m as usize].to_vec(),
            tables: None,
            prime: OnceLock::new(),
        };
        if field.is_primitive() {
            return Ok(poly);
        }
    }
    Err(Error::InvalidField(format!(
        "no primitive polynomial found for q={q}, m={m}"
    )))
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    let mut acc: u64 = 1;
    for _ in 0..exp {
        acc = acc.checked_mul(base)?;
    }
    Some(acc)
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn int_to_digits(mut v: u64, q: u32, min_len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(min_len);
    while v > 0 {
        out.push((v % q as u64) as u32);
        v /= q as u64;
    }
    if out.len() < min_len {
        out.resize(min_len, 0);
    }
    out
}

fn digits_to_int(d: &[u32], q: u32) -> u64 {
    d.iter().rev().fold(0u64, |acc, &x| acc * q as u64 + x as u64)
}

/// Remainder of `num` modulo the monic polynomial `den` over GF(q).
fn poly_rem(num: &[u32], den: &[u32], q: u32) -> Vec<u32> {
    let q = q as u64;
    let mut r: Vec<u64> = num.iter().map(|&x| x as u64).collect();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + (q - lead) * c as u64 % q) % q;
            }
        }
        r.pop();
    }
    r.into_iter().map(|x| x as u32).collect()
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
fn is_irreducible(coeffs: &[u32], q: u32) -> bool {
    let deg = coeffs.len() - 1;
    for d in 1..=deg / 2 {
        let count = (q as u64).pow(d as u32);
        for low in 0..count {
            let mut cand = int_to_digits(low, q, d);
            cand.push(1);
            if poly_rem(coeffs, &cand, q).iter().all(|&x| x == 0) {
                return false;
            }
        }
    }
    true
}
