use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::{check_prime_power, CoeffError, Result};
use crate::algebra::CommRing;
use crate::fp_poly;

/// `R_{n,k} = (Z/p^k)[u]/(u^n - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct LevelRing {
    pub p: u64,
    pub k: u32,
    pub n: usize,
    #[serde(skip)]
    modulus: u64,
}

/// An element of a [`LevelRing`], coefficients in ascending powers of `u`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LevelElt {
    ring: LevelRing,
    coeffs: Vec<u64>,
}

impl Serialize for LevelElt {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("LevelElt", 4)?;
        st.serialize_field("p", &self.ring.p)?;
        st.serialize_field("k", &self.ring.k)?;
        st.serialize_field("n", &self.ring.n)?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

impl fmt::Debug for LevelElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in R({},{},{})", self, self.ring.p, self.ring.k, self.ring.n)
    }
}

impl fmt::Display for LevelElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "u".into(),
                (1, c) => format!("{c}u"),
                (i, 1) => format!("u^{i}"),
                (i, c) => format!("{c}u^{i}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl LevelRing {
    pub fn new(p: u64, k: u32, n: usize) -> Result<Self> {
        let modulus = check_prime_power(p, k)?;
        if n == 0 {
            return Err(CoeffError::ZeroLevel);
        }
        Ok(LevelRing { p, k, n, modulus })
    }

    /// `p^k`.
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// The same coefficients at another level.
    pub fn at_level(&self, n: usize) -> Result<Self> {
        Self::new(self.p, self.k, n)
    }

    /// Element from signed coefficients; powers at or above `n` wrap around.
    pub fn element(&self, coeffs: &[i64]) -> LevelElt {
        let m = self.modulus as i64;
        let mut out = vec![0u64; self.n];
        for (i, &c) in coeffs.iter().enumerate() {
            let slot = &mut out[i % self.n];
            *slot = (*slot + c.rem_euclid(m) as u64) % self.modulus;
        }
        LevelElt { ring: *self, coeffs: out }
    }

    /// Image of an integer polynomial in `u`.
    pub fn from_poly(&self, coeffs: &[BigInt]) -> LevelElt {
        let m = BigInt::from(self.modulus);
        let mut out = vec![0u64; self.n];
        for (i, c) in coeffs.iter().enumerate() {
            let r = c.mod_floor(&m).to_u64().unwrap();
            let slot = &mut out[i % self.n];
            *slot = (*slot + r) % self.modulus;
        }
        LevelElt { ring: *self, coeffs: out }
    }

    pub fn constant(&self, c: i64) -> LevelElt {
        self.element(&[c])
    }

    /// `u^j`.
    pub fn u_pow(&self, j: usize) -> LevelElt {
        let mut coeffs = vec![0u64; self.n];
        coeffs[j % self.n] = 1 % self.modulus;
        LevelElt { ring: *self, coeffs }
    }

    pub fn add_elts(&self, a: &LevelElt, b: &LevelElt) -> LevelElt {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % self.modulus).collect();
        LevelElt { ring: *self, coeffs }
    }

    pub fn neg_elt(&self, a: &LevelElt) -> LevelElt {
        let coeffs = a.coeffs.iter().map(|x| (self.modulus - x) % self.modulus).collect();
        LevelElt { ring: *self, coeffs }
    }

    pub fn mul_elts(&self, a: &LevelElt, b: &LevelElt) -> LevelElt {
        let n = self.n;
        let m = self.modulus;
        let mut out = vec![0u64; n];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                let slot = &mut out[(i + j) % n];
                *slot = (*slot + x * y % m) % m;
            }
        }
        LevelElt { ring: *self, coeffs: out }
    }

    /// Primitive orthogonal idempotents summing to 1; `R_{n,k}` is the product
    /// of the local rings `e R_{n,k}`.
    ///
    /// Over `F_p`, `u^n - 1 = prod g_i^{p^a}` with `n = p^a m` and `g_i` the
    /// irreducible factors of `u^m - 1`; the CRT idempotents for this
    /// factorization lift uniquely to `Z/p^k`.
    pub fn local_idempotents(&self) -> Arc<Vec<LevelElt>> {
        static CACHE: OnceLock<Mutex<HashMap<(u64, u32, usize), Arc<Vec<LevelElt>>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(e) = cache.lock().unwrap().get(&(self.p, self.k, self.n)) {
            return e.clone();
        }
        let idems = Arc::new(self.compute_idempotents());
        cache.lock().unwrap().insert((self.p, self.k, self.n), idems.clone());
        idems
    }

    fn compute_idempotents(&self) -> Vec<LevelElt> {
        let p = self.p;
        let mut m = self.n;
        let mut pa = 1usize;
        while m as u64 % p == 0 {
            m /= p as usize;
            pa *= p as usize;
        }
        let mut um1 = vec![0u64; m + 1];
        um1[0] = p - 1;
        um1[m] = 1;
        let mut big = vec![0u64; self.n + 1];
        big[0] = p - 1;
        big[self.n] = 1;
        let factors = fp_poly::factor_squarefree(&um1, p);
        if factors.len() == 1 {
            return vec![self.constant(1)];
        }
        let mut out = Vec::with_capacity(factors.len());
        for g in &factors {
            let f = pow_poly(g, pa, p);
            let (h, _) = fp_poly::divrem(&big, &f, p);
            let (one, s) = fp_poly::ext_gcd(&h, &f, p);
            debug_assert_eq!(one, vec![1]);
            let e0 = fp_poly::rem(&fp_poly::mul(&h, &s, p), &big, p);
            let mut e = self.element(&e0.iter().map(|&c| c as i64).collect::<Vec<_>>());
            // e <- 3e^2 - 2e^3 converges p-adically to the idempotent lift
            loop {
                let e2 = self.mul_elts(&e, &e);
                let e3 = self.mul_elts(&e2, &e);
                let next = self.add_elts(&self.mul_elts(&self.constant(3), &e2), &self.mul_elts(&self.constant(-2), &e3));
                if next == e {
                    break;
                }
                e = next;
            }
            out.push(e);
        }
        out
    }
}

fn pow_poly(g: &[u64], e: usize, p: u64) -> fp_poly::Poly {
    let mut acc = vec![1u64];
    for _ in 0..e {
        acc = fp_poly::mul(&acc, g, p);
    }
    acc
}

impl LevelElt {
    pub fn ring(&self) -> &LevelRing {
        &self.ring
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn image_mod_p(&self) -> Vec<u64> {
        fp_poly::trim(self.coeffs.iter().map(|c| c % self.ring.p).collect())
    }

    pub fn is_unit(&self) -> bool {
        let (g, _) = self.gcd_mod_p();
        g == vec![1]
    }

    fn gcd_mod_p(&self) -> (fp_poly::Poly, fp_poly::Poly) {
        let p = self.ring.p;
        let mut big = vec![0u64; self.ring.n + 1];
        big[0] = p - 1;
        big[self.ring.n] = 1;
        fp_poly::ext_gcd(&self.image_mod_p(), &big, p)
    }

    /// Two-sided inverse: inverse mod `p` from the extended Euclidean
    /// algorithm, then Newton lifting `b <- b (2 - a b)`.
    pub fn invert(&self) -> Result<LevelElt> {
        let (g, s) = self.gcd_mod_p();
        if g != vec![1] {
            return Err(CoeffError::NonUnit { image_mod_p: self.image_mod_p() });
        }
        let ring = self.ring;
        let mut b = ring.element(&s.iter().map(|&c| c as i64).collect::<Vec<_>>());
        let two = ring.constant(2);
        let mut prec = 1;
        while prec < ring.k {
            let ab = ring.mul_elts(self, &b);
            b = ring.mul_elts(&b, &ring.add_elts(&two, &ring.neg_elt(&ab)));
            prec *= 2;
        }
        Ok(b)
    }

    pub fn pow(&self, mut e: u64) -> LevelElt {
        let ring = self.ring;
        let mut base = self.clone();
        let mut acc = ring.constant(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = ring.mul_elts(&acc, &base);
            }
            base = ring.mul_elts(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Augmentation `u -> 1`, a residue mod `p^k`.
    pub fn augmentation(&self) -> u64 {
        self.coeffs.iter().fold(0, |acc, c| (acc + c) % self.ring.modulus)
    }
}

impl CommRing for LevelRing {
    type Elem = LevelElt;

    fn zero(&self) -> LevelElt {
        self.constant(0)
    }
    fn one(&self) -> LevelElt {
        self.constant(1)
    }
    fn add(&self, a: &LevelElt, b: &LevelElt) -> LevelElt {
        self.add_elts(a, b)
    }
    fn neg(&self, a: &LevelElt) -> LevelElt {
        self.neg_elt(a)
    }
    fn mul(&self, a: &LevelElt, b: &LevelElt) -> LevelElt {
        self.mul_elts(a, b)
    }
    fn from_i64(&self, n: i64) -> LevelElt {
        self.constant(n)
    }
    fn is_zero(&self, a: &LevelElt) -> bool {
        a.is_zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelOp {
    Add,
    Sub,
    Mul,
    /// `a * b^{-1}`.
    Div,
}

pub fn level_arith(a: &LevelElt, b: &LevelElt, op: LevelOp) -> Result<LevelElt> {
    if a.ring != b.ring {
        return Err(CoeffError::MismatchedRings);
    }
    let r = a.ring;
    Ok(match op {
        LevelOp::Add => r.add_elts(a, b),
        LevelOp::Sub => r.add_elts(a, &r.neg_elt(b)),
        LevelOp::Mul => r.mul_elts(a, b),
        LevelOp::Div => r.mul_elts(a, &b.invert()?),
    })
}

/// Projection `R_{n',k} -> R_{n,k}` along `Z/n' -> Z/n`.
pub fn project(a: &LevelElt, n: usize) -> Result<LevelElt> {
    let from = a.ring.n;
    if n == 0 || from % n != 0 {
        return Err(CoeffError::NotADivisor { n, from });
    }
    let target = a.ring.at_level(n)?;
    let mut coeffs = vec![0u64; n];
    for (i, &c) in a.coeffs.iter().enumerate() {
        coeffs[i % n] = (coeffs[i % n] + c) % target.modulus;
    }
    Ok(LevelElt { ring: target, coeffs })
}

/// Reduction `R_{n,k} -> R_{n,k'}` for `k' <= k`.
pub fn reduce_precision(a: &LevelElt, k: u32) -> Result<LevelElt> {
    let target = LevelRing::new(a.ring.p, k, a.ring.n)?;
    if k > a.ring.k {
        return Err(CoeffError::PrecisionOutOfRange { p: a.ring.p, k });
    }
    let coeffs = a.coeffs.iter().map(|c| c % target.modulus).collect();
    Ok(LevelElt { ring: target, coeffs })
}
