use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{check_prime_power, inv_mod, CoeffError};
use crate::algebra::CommRing;

/// Valuation used for an exact zero. Large enough that no computation at
/// desk-scale precision ever reaches it, small enough not to overflow sums.
const EXACT_ZERO_VAL: i64 = 1 << 40;

/// An element `unit * p^val` of `Q_p`, known to relative precision `k`.
///
/// `k == 0` means nothing beyond the valuation bound is known: the value is
/// `O(p^val)`. Otherwise `unit` is a residue mod `p^k` coprime to `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PAdicApprox {
    pub p: u64,
    pub k: u32,
    pub val: i64,
    pub unit: u64,
}

fn pow(p: u64, k: u32) -> u64 {
    p.pow(k)
}

fn valuation_u64(p: u64, mut x: u64) -> (u32, u64) {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    (v, x)
}

impl PAdicApprox {
    /// `O(p^val)`.
    pub fn indeterminate(p: u64, val: i64) -> Self {
        PAdicApprox { p, k: 0, val: val.min(EXACT_ZERO_VAL), unit: 0 }
    }

    /// The exact zero.
    pub fn zero(p: u64) -> Self {
        Self::indeterminate(p, EXACT_ZERO_VAL)
    }

    /// `x mod p^abs`, i.e. known to absolute precision `abs`.
    pub fn from_residue(p: u64, x: u64, abs: u32) -> Self {
        Self::normalize(p, x % pow(p, abs), 0, abs)
    }

    /// An integer, to relative precision `k`.
    pub fn from_integer(p: u64, n: &BigInt, k: u32) -> Result<Self, CoeffError> {
        check_prime_power(p, k)?;
        if n.is_zero() {
            return Ok(Self::zero(p));
        }
        let pb = BigInt::from(p);
        let mut m = n.abs();
        let mut val = 0i64;
        loop {
            let (q, r) = m.div_rem(&pb);
            if !r.is_zero() {
                break;
            }
            m = q;
            val += 1;
        }
        let modulus = pow(p, k);
        let mut unit = (m % BigInt::from(modulus)).to_u64().unwrap();
        if n.is_negative() {
            unit = (modulus - unit) % modulus;
        }
        Ok(PAdicApprox { p, k, val, unit })
    }

    /// `num / den` to relative precision `k`.
    pub fn from_ratio(p: u64, num: &BigInt, den: &BigInt, k: u32) -> Result<Self, CoeffError> {
        let d = Self::from_integer(p, den, k)?;
        if d.is_indeterminate() {
            return Err(CoeffError::DivisionByZero);
        }
        Ok(Self::from_integer(p, num, k)?.mul(&d.inv()?))
    }

    /// `x * p^v` where `x` is known mod `p^width`.
    fn normalize(p: u64, x: u64, v: i64, width: u32) -> Self {
        if x == 0 {
            return Self::indeterminate(p, v + width as i64);
        }
        let (t, u) = valuation_u64(p, x);
        let k = width - t;
        PAdicApprox { p, k, val: v + t as i64, unit: u % pow(p, k) }
    }

    pub fn is_indeterminate(&self) -> bool {
        self.k == 0
    }

    pub fn is_exact_zero(&self) -> bool {
        self.k == 0 && self.val >= EXACT_ZERO_VAL
    }

    /// Absolute precision: the value is known modulo `p^abs_prec`.
    pub fn abs_prec(&self) -> i64 {
        self.val + self.k as i64
    }

    pub fn neg(&self) -> Self {
        if self.k == 0 {
            return *self;
        }
        let m = pow(self.p, self.k);
        PAdicApprox { unit: (m - self.unit) % m, ..*self }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "p-adic operands over different primes");
        let p = self.p;
        let n = self.abs_prec().min(other.abs_prec());
        let v = self.val.min(other.val);
        if v >= n {
            return Self::indeterminate(p, n);
        }
        let width = (n - v) as u32;
        let m = pow(p, width);
        let term = |a: &Self| -> u64 {
            let shift = a.val - v;
            if a.k == 0 || shift >= width as i64 {
                0
            } else {
                ((a.unit % m) as u128 * pow(p, shift as u32) as u128 % m as u128) as u64
            }
        };
        let x = (term(self) + term(other)) % m;
        Self::normalize(p, x, v, width)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.p, other.p, "p-adic operands over different primes");
        let val = self.val.saturating_add(other.val).min(EXACT_ZERO_VAL);
        if self.k == 0 || other.k == 0 {
            return Self::indeterminate(self.p, val);
        }
        let k = self.k.min(other.k);
        let m = pow(self.p, k);
        let unit = ((self.unit % m) as u128 * (other.unit % m) as u128 % m as u128) as u64;
        PAdicApprox { p: self.p, k, val, unit }
    }

    pub fn inv(&self) -> Result<Self, CoeffError> {
        if self.k == 0 {
            return Err(CoeffError::DivisionByZero);
        }
        let m = pow(self.p, self.k);
        Ok(PAdicApprox { p: self.p, k: self.k, val: -self.val, unit: inv_mod(self.unit, m).expect("unit") })
    }

    pub fn div(&self, other: &Self) -> Result<Self, CoeffError> {
        Ok(self.mul(&other.inv()?))
    }

    /// Whether the two values agree to the precision both carry.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.sub(other).is_indeterminate()
    }

    /// Residue mod `p^abs`, if the value is integral and known that far.
    pub fn residue(&self, abs: u32) -> Option<u64> {
        if self.k == 0 {
            return (self.val >= abs as i64).then_some(0);
        }
        if self.val < 0 || self.abs_prec() < abs as i64 {
            return None;
        }
        if self.val >= abs as i64 {
            return Some(0);
        }
        let m = pow(self.p, abs);
        Some((self.unit as u128 * pow(self.p, self.val as u32) as u128 % m as u128) as u64)
    }
}

impl fmt::Display for PAdicApprox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact_zero() {
            return write!(f, "0");
        }
        if self.k == 0 {
            return write!(f, "O({}^{})", self.p, self.val);
        }
        let scale = match self.val {
            0 => String::new(),
            v => format!("{}^{} * ", self.p, v),
        };
        write!(f, "{scale}{} + O({}^{})", self.unit, self.p, self.abs_prec())
    }
}

/// `Z_p` truncated at a relative precision cap, as a [`CommRing`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PAdicRing {
    pub p: u64,
    pub k: u32,
}

impl PAdicRing {
    pub fn new(p: u64, k: u32) -> Result<Self, CoeffError> {
        check_prime_power(p, k)?;
        Ok(PAdicRing { p, k })
    }

    pub fn from_big(&self, n: &BigInt) -> PAdicApprox {
        PAdicApprox::from_integer(self.p, n, self.k).expect("validated ring")
    }
}

impl CommRing for PAdicRing {
    type Elem = PAdicApprox;

    fn zero(&self) -> PAdicApprox {
        PAdicApprox::zero(self.p)
    }
    fn one(&self) -> PAdicApprox {
        PAdicApprox { p: self.p, k: self.k, val: 0, unit: 1 }
    }
    fn add(&self, a: &PAdicApprox, b: &PAdicApprox) -> PAdicApprox {
        a.add(b)
    }
    fn neg(&self, a: &PAdicApprox) -> PAdicApprox {
        a.neg()
    }
    fn mul(&self, a: &PAdicApprox, b: &PAdicApprox) -> PAdicApprox {
        a.mul(b)
    }
    fn from_i64(&self, n: i64) -> PAdicApprox {
        self.from_big(&BigInt::from(n))
    }
    fn is_zero(&self, a: &PAdicApprox) -> bool {
        a.is_indeterminate()
    }
}
