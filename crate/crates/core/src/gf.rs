//! Finite fields GF(p^e) and dense matrices over them.
//!
//! Elements are dense indices in `[0, q)`. The index of an element is the
//! base-`p` reading of its coefficient vector in the polynomial basis, with
//! the constant coefficient as the least significant digit. With that
//! encoding 0 and 1 are the additive and multiplicative identities and
//! addition is digit-wise addition mod `p`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Largest supported field size.
pub const MAX_FIELD_SIZE: u32 = 1 << 16;

/// Fields up to this size get full addition and multiplication tables.
const FULL_TABLE_LIMIT: u32 = 256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Small arithmetic interface over a finite field, shared by the prime-field
/// helper used while building tables and by [`FieldSpec`] itself.
pub(crate) trait FieldOps {
    fn size(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn sub(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    fn inv(&self, a: u32) -> u32;
}

struct PrimeField(u32);

impl FieldOps for PrimeField {
    fn size(&self) -> u32 {
        self.0
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.0
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.0 - b) % self.0
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        pow_mod(a as u64, self.0 as u64 - 2, self.0 as u64) as u32
    }
}

fn pow_mod(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power `q` into `(p, e)`.
pub fn factor_prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

/// Polynomial helpers over an arbitrary finite field. Polynomials are
/// coefficient vectors, lowest degree first, without trailing zeros
/// (the zero polynomial is the empty vector).
pub(crate) mod poly {
    use super::FieldOps;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    /// Remainder of `a` modulo the nonzero polynomial `b`.
    pub fn rem<F: FieldOps>(f: &F, a: &[u32], b: &[u32]) -> Vec<u32> {
        let b = trim(b.to_vec());
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = trim(a.to_vec());
        let lead_inv = f.inv(*b.last().unwrap());
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let factor = f.mul(*r.last().unwrap(), lead_inv);
            for (i, &bc) in b.iter().enumerate() {
                r[shift + i] = f.sub(r[shift + i], f.mul(factor, bc));
            }
            r = trim(r);
        }
        r
    }

    pub fn mul_mod<F: FieldOps>(f: &F, a: &[u32], b: &[u32], modulus: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        rem(f, &out, modulus)
    }

    /// Monic polynomial of the given degree whose non-leading coefficients are
    /// the base-`s` digits of `code`, constant term first.
    pub fn monic_from_code(code: u64, degree: usize, s: u32) -> Vec<u32> {
        let mut c = code;
        let mut out = Vec::with_capacity(degree + 1);
        for _ in 0..degree {
            out.push((c % s as u64) as u32);
            c /= s as u64;
        }
        out.push(1);
        out
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible<F: FieldOps>(f: &F, a: &[u32]) -> bool {
        let a = trim(a.to_vec());
        let deg = a.len().saturating_sub(1);
        if deg == 0 {
            return false;
        }
        if deg == 1 {
            return true;
        }
        let s = f.size() as u64;
        for d in 1..=deg / 2 {
            let count = s.pow(d as u32);
            for code in 0..count {
                let divisor = monic_from_code(code, d, f.size());
                if rem(f, &a, &divisor).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest monic irreducible polynomial of degree `degree`, comparing the
    /// non-leading coefficients lexicographically from the constant term up.
    pub fn smallest_irreducible<F: FieldOps>(f: &F, degree: usize) -> Vec<u32> {
        let s = f.size() as u64;
        let total = s.pow(degree as u32);
        // code -> coefficients is base-s with the constant term least
        // significant; walking codes in "reversed digit" order visits the
        // candidates with the constant term as the most significant key.
        for code in 0..total {
            let mut rev = 0u64;
            let mut c = code;
            for _ in 0..degree {
                rev = rev * s + c % s;
                c /= s;
            }
            let cand = monic_from_code(rev, degree, f.size());
            if is_irreducible(f, &cand) {
                return cand;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }
}

struct FieldInner {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    neg: Vec<u16>,
    exp: Vec<u16>,
    log: Vec<u32>,
    add_table: Option<Vec<u16>>,
    mul_table: Option<Vec<u16>>,
}

/// The finite field GF(p^e). Cheap to clone; all tables are shared.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.inner.p)
            .field("e", &self.inner.e)
            .field("q", &self.inner.q)
            .field("modulus", &self.inner.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.inner.p == other.inner.p && self.inner.e == other.inner.e
    }
}

impl Eq for FieldSpec {}

impl FieldSpec {
    /// Builds GF(p^e) with the canonical modulus: the smallest monic
    /// irreducible polynomial of degree `e`, coefficients compared from the
    /// constant term upwards.
    pub fn new(p: u32, e: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::InvalidParams("field exponent must be at least 1".into()));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_FIELD_SIZE as u64);
        let Some(q) = q else {
            return Err(Error::FieldTooLarge { p, e });
        };
        let q = q as u32;
        let prime = PrimeField(p);
        let modulus = poly::smallest_irreducible(&prime, e as usize);

        let digits = |mut x: u32| {
            let mut v = Vec::with_capacity(e as usize);
            for _ in 0..e {
                v.push(x % p);
                x /= p;
            }
            poly::trim(v)
        };
        let undigits = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        let slow_mul = |a: u32, b: u32| undigits(&poly::mul_mod(&prime, &digits(a), &digits(b), &modulus));

        let neg: Vec<u16> = (0..q)
            .map(|a| {
                let mut x = a;
                let mut out = 0u32;
                let mut place = 1u32;
                for _ in 0..e {
                    out += ((p - x % p) % p) * place;
                    x /= p;
                    place *= p;
                }
                out as u16
            })
            .collect();

        // Smallest generator of the multiplicative group.
        let order = q - 1;
        let mut exp = Vec::new();
        for g in 1..q {
            let mut powers = Vec::with_capacity(order as usize);
            let mut x = 1u32;
            for _ in 0..order {
                powers.push(x as u16);
                x = slow_mul(x, g);
                if x == 1 {
                    break;
                }
            }
            if powers.len() == order as usize {
                exp = powers;
                break;
            }
        }
        debug_assert_eq!(exp.len(), order as usize);
        let mut log = vec![0u32; q as usize];
        for (i, &v) in exp.iter().enumerate() {
            log[v as usize] = i as u32;
        }
        let doubled: Vec<u16> = exp.iter().chain(exp.iter()).copied().collect();

        let mut inner = FieldInner {
            p,
            e,
            q,
            modulus,
            neg,
            exp: doubled,
            log,
            add_table: None,
            mul_table: None,
        };
        if q <= FULL_TABLE_LIMIT {
            let mut add = vec![0u16; (q * q) as usize];
            let mut mul = vec![0u16; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    add[(a * q + b) as usize] = digit_add(p, e, a, b) as u16;
                    mul[(a * q + b) as usize] = log_mul(&inner, a, b) as u16;
                }
            }
            inner.add_table = Some(add);
            inner.mul_table = Some(mul);
        }
        Ok(FieldSpec { inner: Arc::new(inner) })
    }

    /// Builds the field of order `q`, which must be a prime power.
    pub fn from_order(q: u32) -> Result<Self> {
        let (p, e) = factor_prime_power(q).ok_or(Error::NotPrimePower(q))?;
        Self::new(p, e)
    }

    pub fn p(&self) -> u32 {
        self.inner.p
    }
    pub fn e(&self) -> u32 {
        self.inner.e
    }
    pub fn q(&self) -> u32 {
        self.inner.q
    }
    /// Coefficients of the modulus, constant term first, leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.inner.modulus
    }

    pub fn elem(&self, index: u32) -> Result<FieldElem> {
        if index < self.inner.q {
            Ok(FieldElem(index as u16))
        } else {
            Err(Error::InvalidParams(format!(
                "field element {index} out of range for GF({})",
                self.inner.q
            )))
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.inner.q).map(|i| FieldElem(i as u16))
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let inner = &*self.inner;
        if inner.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        match &inner.add_table {
            Some(t) => FieldElem(t[a.index() * inner.q as usize + b.index()]),
            None => FieldElem(digit_add(inner.p, inner.e, a.0 as u32, b.0 as u32) as u16),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        FieldElem(self.inner.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.inner.mul_table {
            Some(t) => FieldElem(t[a.index() * self.inner.q as usize + b.index()]),
            None => FieldElem(log_mul(&self.inner, a.0 as u32, b.0 as u32) as u16),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: FieldElem) -> Option<FieldElem> {
        if a.is_zero() {
            return None;
        }
        let order = self.inner.q - 1;
        let l = self.inner.log[a.index()];
        Some(FieldElem(self.inner.exp[((order - l) % order) as usize]))
    }
}

impl FieldOps for FieldSpec {
    fn size(&self) -> u32 {
        self.q()
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        FieldSpec::add(self, FieldElem(a as u16), FieldElem(b as u16)).0 as u32
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        FieldSpec::sub(self, FieldElem(a as u16), FieldElem(b as u16)).0 as u32
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        FieldSpec::mul(self, FieldElem(a as u16), FieldElem(b as u16)).0 as u32
    }
    fn inv(&self, a: u32) -> u32 {
        FieldSpec::inv(self, FieldElem(a as u16)).expect("inverse of zero").0 as u32
    }
}

fn digit_add(p: u32, e: u32, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    for _ in 0..e {
        out += ((a % p + b % p) % p) * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

fn log_mul(inner: &FieldInner, a: u32, b: u32) -> u32 {
    if a == 0 || b == 0 {
        return 0;
    }
    inner.exp[(inner.log[a as usize] + inner.log[b as usize]) as usize] as u32
}

/// Dense row-major matrix over a finite field. The field is passed to the
/// operations that need it rather than stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![FieldElem::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    pub fn from_entries(rows: usize, cols: usize, entries: Vec<FieldElem>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(Matrix { rows, cols, entries })
    }

    /// Convenience constructor from raw element indices, checked against `field`.
    pub fn from_rows(field: &FieldSpec, rows: &[&[u32]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::ShapeMismatch("ragged rows".into()));
            }
            for &x in row.iter() {
                entries.push(field.elem(x)?);
            }
        }
        Self::from_entries(r, c, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hconcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot concatenate {} rows with {} rows",
                self.rows, other.rows
            )));
        }
        let cols = self.cols + other.cols;
        let mut out = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            out.extend_from_slice(&self.entries[r * self.cols..(r + 1) * self.cols]);
            out.extend_from_slice(&other.entries[r * other.cols..(r + 1) * other.cols]);
        }
        Ok(Matrix { rows: self.rows, cols, entries: out })
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix, field: &FieldSpec) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| field.add(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn sub(&self, other: &Matrix, field: &FieldSpec) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| field.sub(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, entries })
    }

    pub fn mul(&self, other: &Matrix, field: &FieldSpec) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, field.add(cur, field.mul(a, other.get(k, c))));
                }
            }
        }
        Ok(out)
    }

    /// Rank by Gaussian elimination.
    pub fn rank(&self, field: &FieldSpec) -> usize {
        let mut a = self.entries.clone();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for c in 0..cols {
                    a.swap(pivot * cols + c, rank * cols + c);
                }
            }
            let inv = field.inv(a[rank * cols + col]).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let lead = a[r * cols + col];
                if lead.is_zero() {
                    continue;
                }
                let factor = field.mul(lead, inv);
                for c in col..cols {
                    let v = field.mul(factor, a[rank * cols + c]);
                    a[r * cols + c] = field.sub(a[r * cols + c], v);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Lexicographic index of this matrix among all matrices of its shape:
    /// the base-`q` number whose digits are the entries in row-major order,
    /// first entry most significant.
    pub fn lex_index(&self, q: u32) -> u64 {
        self.entries.iter().fold(0u64, |acc, e| acc * q as u64 + e.0 as u64)
    }

    pub fn from_lex_index(rows: usize, cols: usize, q: u32, mut index: u64) -> Matrix {
        let len = rows * cols;
        let mut entries = vec![FieldElem::ZERO; len];
        for slot in entries.iter_mut().rev() {
            *slot = FieldElem((index % q as u64) as u16);
            index /= q as u64;
        }
        Matrix { rows, cols, entries }
    }
}

/// `dim(col X ∩ col Y) = rk X + rk Y − rk [X | Y]`.
pub fn col_space_intersection_dim(x: &Matrix, y: &Matrix, field: &FieldSpec) -> Result<usize> {
    let joint = x.hconcat(y)?;
    Ok(x.rank(field) + y.rank(field) - joint.rank(field))
}

/// Same as [`col_space_intersection_dim`] on the transposes.
pub fn row_space_intersection_dim(x: &Matrix, y: &Matrix, field: &FieldSpec) -> Result<usize> {
    if x.cols() != y.cols() {
        return Err(Error::ShapeMismatch(format!(
            "row spaces live in different dimensions: {} vs {} columns",
            x.cols(),
            y.cols()
        )));
    }
    col_space_intersection_dim(&x.transpose(), &y.transpose(), field)
}

/// Default number of matrices [`enumerate_matrices`] may produce.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1 << 24;

/// All `rows × cols` matrices over `field` in lexicographic entry order.
pub fn enumerate_matrices(
    rows: usize,
    cols: usize,
    field: &FieldSpec,
    budget: u64,
) -> Result<impl Iterator<Item = Matrix>> {
    let q = field.q();
    let total = (q as u64)
        .checked_pow((rows * cols) as u32)
        .filter(|&t| t <= budget)
        .ok_or(Error::BudgetExceeded {
            what: "matrix enumeration",
            budget,
        })?;
    Ok((0..total).map(move |i| Matrix::from_lex_index(rows, cols, q, i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u32, e: u32) -> FieldSpec {
        FieldSpec::new(p, e).unwrap()
    }

    #[test]
    fn field_make_examples() {
        let f2 = gf(2, 1);
        assert_eq!(f2.q(), 2);
        assert_eq!(f2.modulus(), &[0, 1]);
        let f4 = gf(2, 2);
        assert_eq!(f4.modulus(), &[1, 1, 1]);
        assert!(matches!(FieldSpec::new(4, 1), Err(Error::NotPrime(4))));
        assert!(matches!(FieldSpec::new(2, 17), Err(Error::FieldTooLarge { .. })));
        assert!(FieldSpec::new(2, 16).is_ok());
    }

    #[test]
    fn modulus_is_smallest_constant_term_first() {
        // x^3 + x^2 + 1 ([1,0,1,1]) precedes x^3 + x + 1 ([1,1,0,1]).
        assert_eq!(gf(2, 3).modulus(), &[1, 0, 1, 1]);
        // Over GF(3), x^2 + 1 is irreducible and has the smallest (c0, c1).
        assert_eq!(gf(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(gf(2, 3), gf(2, 3));
    }

    #[test]
    fn factor_prime_powers() {
        assert_eq!(factor_prime_power(9), Some((3, 2)));
        assert_eq!(factor_prime_power(16), Some((2, 4)));
        assert_eq!(factor_prime_power(7), Some((7, 1)));
        assert_eq!(factor_prime_power(6), None);
        assert_eq!(factor_prime_power(1), None);
    }

    #[test]
    fn field_axioms_exhaustive() {
        for (p, e) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2)] {
            let f = gf(p, e);
            let els: Vec<_> = f.elements().collect();
            for &a in &els {
                assert_eq!(f.add(a, FieldElem::ZERO), a);
                assert_eq!(f.mul(a, FieldElem::ONE), a);
                assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                }
                for &b in &els {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for &c in &els {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_uses_log_tables() {
        let f = gf(3, 7);
        let a = FieldElem(1234);
        let b = FieldElem(77);
        assert_eq!(f.mul(f.mul(a, b), f.inv(b).unwrap()), a);
        assert_eq!(f.sub(f.add(a, b), b), a);
    }

    #[test]
    fn rank_examples() {
        let f2 = gf(2, 1);
        let f3 = gf(3, 1);
        assert_eq!(Matrix::zeros(2, 2).rank(&f2), 0);
        assert_eq!(Matrix::identity(3).rank(&f3), 3);
        let m = Matrix::from_rows(&f2, &[&[1, 1], &[1, 1]]).unwrap();
        assert_eq!(m.rank(&f2), 1);
        let m = Matrix::from_rows(&f3, &[&[1, 2, 0], &[2, 1, 0]]).unwrap();
        assert_eq!(m.rank(&f3), 1);
    }

    #[test]
    fn rank_is_transpose_invariant() {
        for f in [gf(2, 1), gf(3, 1)] {
            for (r, c) in [(1, 3), (2, 2), (2, 3), (3, 2), (3, 3)] {
                for m in enumerate_matrices(r, c, &f, u64::MAX).unwrap() {
                    assert_eq!(m.rank(&f), m.transpose().rank(&f));
                }
            }
        }
    }

    #[test]
    fn intersection_examples() {
        let f = gf(2, 1);
        let x = Matrix::from_rows(&f, &[&[1, 0], &[0, 0]]).unwrap();
        let y = Matrix::from_rows(&f, &[&[0, 0], &[0, 1]]).unwrap();
        assert_eq!(col_space_intersection_dim(&x, &y, &f).unwrap(), 0);
        assert_eq!(col_space_intersection_dim(&x, &x, &f).unwrap(), 1);
        assert_eq!(col_space_intersection_dim(&x, &Matrix::zeros(2, 2), &f).unwrap(), 0);

        let x = Matrix::from_rows(&f, &[&[1, 1], &[0, 0]]).unwrap();
        let y = Matrix::from_rows(&f, &[&[1, 0], &[0, 0]]).unwrap();
        assert_eq!(row_space_intersection_dim(&x, &y, &f).unwrap(), 0);
        assert_eq!(row_space_intersection_dim(&x, &x, &f).unwrap(), 1);
        assert_eq!(row_space_intersection_dim(&x, &Matrix::zeros(2, 2), &f).unwrap(), 0);

        let tall = Matrix::zeros(3, 2);
        assert!(matches!(
            col_space_intersection_dim(&x, &tall, &f),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn col_intersection_symmetric() {
        let f = gf(2, 1);
        let all: Vec<_> = enumerate_matrices(2, 2, &f, u64::MAX).unwrap().collect();
        for x in &all {
            for y in &all {
                assert_eq!(
                    col_space_intersection_dim(x, y, &f).unwrap(),
                    col_space_intersection_dim(y, x, &f).unwrap()
                );
            }
        }
    }

    #[test]
    fn enumeration_order_and_counts() {
        let f2 = gf(2, 1);
        let ones: Vec<_> = enumerate_matrices(1, 1, &f2, 10).unwrap().collect();
        assert_eq!(ones, vec![
            Matrix::from_rows(&f2, &[&[0]]).unwrap(),
            Matrix::from_rows(&f2, &[&[1]]).unwrap()
        ]);
        assert_eq!(enumerate_matrices(2, 2, &f2, 100).unwrap().count(), 16);
        assert_eq!(enumerate_matrices(2, 2, &gf(3, 1), 100).unwrap().count(), 81);
        assert!(matches!(
            enumerate_matrices(2, 2, &gf(3, 1), 80),
            Err(Error::BudgetExceeded { .. })
        ));
        let all: Vec<_> = enumerate_matrices(2, 2, &gf(3, 1), 100).unwrap().collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        for (i, m) in all.iter().enumerate() {
            assert_eq!(m.lex_index(3), i as u64);
        }
    }
}
