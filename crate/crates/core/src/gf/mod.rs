//! Exact arithmetic in finite fields `F_{p^e}` in polynomial-basis form.
//!
//! A [`Field`] is identified by its characteristic and degree: the modulus is
//! always the lexicographically smallest monic irreducible of degree `e`
//! (coefficients compared constant term first), so two handles with equal
//! `(p, e)` describe the same field. Fields are interned, cheap to clone and
//! safe to share across threads.

mod embed;
mod tables;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::fp_poly;

pub use embed::{embed, embedding_root};
pub use tables::IndexTables;

/// Largest field size handled (`p^e`).
pub const MAX_FIELD_SIZE: u64 = 1 << 24;
/// Largest extension degree handled.
pub const MAX_DEGREE: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("field F_{p}^{e} is outside the supported range (e <= 16, p^e <= 2^24)")]
    OutOfBounds { p: u64, e: u32 },
    #[error("operands belong to different fields (F_{0} vs F_{1})")]
    MismatchedFields(u64, u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot embed F_{src} into F_{dst}")]
    IncompatibleEmbedding { src: u64, dst: u64 },
    #[error("coefficient vector {0:?} is not a valid element")]
    InvalidCoefficients(Vec<u32>),
}

pub type Result<T> = std::result::Result<T, GfError>;

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

struct FieldInner {
    p: u32,
    e: u32,
    size: u64,
    /// Monic modulus, ascending coefficients, length `e + 1`.
    modulus: Vec<u32>,
    tables: OnceLock<Arc<IndexTables>>,
}

/// The finite field `F_{p^e}` with its canonical modulus.
#[derive(Clone)]
pub struct Field(Arc<FieldInner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.e == other.0.e
    }
}

impl Eq for Field {}

impl std::hash::Hash for Field {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.0.p, self.0.e).hash(state);
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.0.p, self.0.e)
    }
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), Field>> {
    static REG: OnceLock<Mutex<HashMap<(u32, u32), Field>>> = OnceLock::new();
    REG.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the canonical field `F_{p^e}`.
pub fn make_field(p: u64, e: u32) -> Result<Field> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if e == 0 || e > MAX_DEGREE {
        return Err(GfError::OutOfBounds { p, e });
    }
    let size = (p as u128).checked_pow(e).filter(|&s| s <= MAX_FIELD_SIZE as u128);
    let Some(size) = size else {
        return Err(GfError::OutOfBounds { p, e });
    };
    let key = (p as u32, e);
    if let Some(f) = registry().lock().unwrap().get(&key) {
        return Ok(f.clone());
    }
    let modulus = canonical_modulus(p, e);
    let field = Field(Arc::new(FieldInner {
        p: p as u32,
        e,
        size: size as u64,
        modulus,
        tables: OnceLock::new(),
    }));
    // Concurrent constructions agree, so whichever lands first wins.
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry(key).or_insert(field).clone())
}

/// Lexicographically smallest monic irreducible of degree `e`, constant term
/// compared first.
fn canonical_modulus(p: u64, e: u32) -> Vec<u32> {
    let count = p.pow(e);
    for idx in 0..count {
        let mut coeffs = index_to_coeffs(idx, p, e);
        if e >= 2 && coeffs[0] == 0 {
            continue;
        }
        coeffs.push(1);
        let poly: Vec<u64> = coeffs.iter().map(|&c| c as u64).collect();
        if fp_poly::is_irreducible(&poly, p) {
            return coeffs;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists")
}

/// Digits of `idx` in base `p`, constant coefficient most significant.
fn index_to_coeffs(mut idx: u64, p: u64, e: u32) -> Vec<u32> {
    let mut out = vec![0u32; e as usize];
    for slot in out.iter_mut().rev() {
        *slot = (idx % p) as u32;
        idx /= p;
    }
    out
}

impl Field {
    pub fn char(&self) -> u64 {
        self.0.p as u64
    }

    pub fn degree(&self) -> u32 {
        self.0.e
    }

    /// Number of elements `p^e`.
    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn zero(&self) -> FieldElt {
        FieldElt { field: self.clone(), coeffs: vec![0; self.0.e as usize] }
    }

    pub fn one(&self) -> FieldElt {
        let mut coeffs = vec![0; self.0.e as usize];
        coeffs[0] = 1;
        FieldElt { field: self.clone(), coeffs }
    }

    /// The class of `x` modulo the canonical modulus.
    pub fn generator(&self) -> FieldElt {
        if self.0.e == 1 {
            // modulus is x itself
            return self.zero();
        }
        let mut coeffs = vec![0; self.0.e as usize];
        coeffs[1] = 1;
        FieldElt { field: self.clone(), coeffs }
    }

    pub fn from_int(&self, n: i64) -> FieldElt {
        let p = self.0.p as i64;
        let mut coeffs = vec![0; self.0.e as usize];
        coeffs[0] = n.rem_euclid(p) as u32;
        FieldElt { field: self.clone(), coeffs }
    }

    pub fn from_coeffs(&self, coeffs: Vec<u32>) -> Result<FieldElt> {
        if coeffs.len() != self.0.e as usize || coeffs.iter().any(|&c| c >= self.0.p) {
            return Err(GfError::InvalidCoefficients(coeffs));
        }
        Ok(FieldElt { field: self.clone(), coeffs })
    }

    /// Element with the given enumeration index (see [`Field::elements`]).
    pub fn element(&self, index: u64) -> FieldElt {
        assert!(index < self.0.size, "index out of range");
        FieldElt { field: self.clone(), coeffs: index_to_coeffs(index, self.char(), self.0.e) }
    }

    /// All elements, lexicographic on the coefficient vector.
    pub fn elements(&self) -> impl Iterator<Item = FieldElt> + '_ {
        (0..self.0.size).map(move |i| self.element(i))
    }

    /// Log/antilog tables for fast arithmetic on element indices, built once.
    pub fn tables(&self) -> Arc<IndexTables> {
        self.0.tables.get_or_init(|| Arc::new(IndexTables::build(self))).clone()
    }

    fn reduce(&self, mut prod: Vec<u64>) -> Vec<u32> {
        let p = self.char();
        let e = self.0.e as usize;
        let m = &self.0.modulus;
        for i in (e..prod.len()).rev() {
            let c = prod[i] % p;
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for j in 0..e {
                prod[i - e + j] = (prod[i - e + j] + (p - c) * m[j] as u64) % p;
            }
        }
        prod.truncate(e);
        prod.into_iter().map(|c| (c % p) as u32).collect()
    }

    pub(crate) fn mul_coeffs(&self, a: &[u32], b: &[u32]) -> Vec<u32> {
        let p = self.char();
        let e = self.0.e as usize;
        let mut prod = vec![0u64; 2 * e - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        self.reduce(prod)
    }
}

/// An element of a [`Field`], stored as its coefficient vector.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElt {
    field: Field,
    coeffs: Vec<u32>,
}

impl fmt::Debug for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{:?}", self.field, self.coeffs)
    }
}

impl fmt::Display for FieldElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "g".to_string(),
                (1, c) => format!("{c}g"),
                (i, 1) => format!("g^{i}"),
                (i, c) => format!("{c}g^{i}"),
            });
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Binary field operations accepted by [`arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
    /// `a` raised to the exponent encoded by the prime-field value of `b`.
    Pow,
}

/// Applies `op` to two elements of the same field.
pub fn arith(a: &FieldElt, b: &FieldElt, op: Op) -> Result<FieldElt> {
    match op {
        Op::Add => a.add(b),
        Op::Sub => a.sub(b),
        Op::Mul => a.mul(b),
        Op::Div => a.div(b),
        Op::Pow => {
            a.same_field(b)?;
            Ok(a.pow(b.coeffs[0] as u128))
        }
    }
}

impl FieldElt {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Position of this element in [`Field::elements`].
    pub fn index(&self) -> u64 {
        let p = self.field.char();
        self.coeffs.iter().fold(0u64, |acc, &c| acc * p + c as u64)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn same_field(&self, other: &FieldElt) -> Result<()> {
        if self.field != other.field {
            return Err(GfError::MismatchedFields(self.field.size(), other.field.size()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FieldElt) -> Result<FieldElt> {
        self.same_field(other)?;
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(&a, &b)| (a + b) % p).collect();
        Ok(FieldElt { field: self.field.clone(), coeffs })
    }

    pub fn neg(&self) -> FieldElt {
        let p = self.field.0.p;
        let coeffs = self.coeffs.iter().map(|&a| (p - a) % p).collect();
        FieldElt { field: self.field.clone(), coeffs }
    }

    pub fn sub(&self, other: &FieldElt) -> Result<FieldElt> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElt) -> Result<FieldElt> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &FieldElt) -> FieldElt {
        FieldElt { field: self.field.clone(), coeffs: self.field.mul_coeffs(&self.coeffs, &other.coeffs) }
    }

    pub fn pow(&self, mut exp: u128) -> FieldElt {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            exp >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Result<FieldElt> {
        if self.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(self.pow(self.field.size() as u128 - 2))
    }

    pub fn div(&self, other: &FieldElt) -> Result<FieldElt> {
        self.same_field(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    /// `self^(p^j)`, the absolute Frobenius applied `j` times.
    pub fn frobenius(&self, j: u32) -> FieldElt {
        let mut out = self.clone();
        for _ in 0..(j % self.field.degree()) {
            out = out.pow(self.field.char() as u128);
        }
        out
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut n = self.field.size() - 1;
        for r in prime_factors(n) {
            while n % r == 0 && self.pow((n / r) as u128).is_one() {
                n /= r;
            }
        }
        Some(n)
    }
}
