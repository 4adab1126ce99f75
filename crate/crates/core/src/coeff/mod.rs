//! Coefficient rings: `Q_p` at finite precision and the finite quotients
//! `R_{n,k} = (Z/p^k)[u]/(u^n - 1)` of the Iwasawa algebra of `Gal(F̄_q/F_q)`.
//!
//! `u` is the image of the geometric Frobenius generator (the inverse of the
//! `q`-power map on points). Using arithmetic Frobenius instead would replace
//! `u` by `u^{-1}` throughout.

mod level;
mod padic;

use num_bigint::BigInt;
use thiserror::Error;

use crate::gf::is_prime;
use crate::zetafn::RationalFn;

pub use level::{level_arith, project, reduce_precision, LevelElt, LevelOp, LevelRing};
pub use padic::{PAdicApprox, PAdicRing};

/// Largest admissible modulus `p^k`.
pub const MAX_MODULUS: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision {p}^{k} out of range (need k >= 1 and p^k <= 2^31)")]
    PrecisionOutOfRange { p: u64, k: u32 },
    #[error("level must be positive")]
    ZeroLevel,
    #[error("operands live in different rings")]
    MismatchedRings,
    #[error("element is not a unit; image mod p: {image_mod_p:?}")]
    NonUnit { image_mod_p: Vec<u64> },
    #[error("{n} does not divide {from}")]
    NotADivisor { n: usize, from: usize },
    #[error("zero or pole at u = 1")]
    ZeroOrPole,
    #[error("division by zero")]
    DivisionByZero,
}

pub type Result<T> = std::result::Result<T, CoeffError>;

pub(crate) fn check_prime_power(p: u64, k: u32) -> Result<u64> {
    if !is_prime(p) {
        return Err(CoeffError::NotPrime(p));
    }
    if k == 0 {
        return Err(CoeffError::PrecisionOutOfRange { p, k });
    }
    match p.checked_pow(k) {
        Some(m) if m <= MAX_MODULUS => Ok(m),
        _ => Err(CoeffError::PrecisionOutOfRange { p, k }),
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub(crate) fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut s0, mut s1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    (r0 == 1).then(|| s0.rem_euclid(m as i128) as u64)
}

/// Image of a rational function in a level ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reduction {
    Defined(LevelElt),
    /// The denominator is not a unit at this level; its image mod `p` is
    /// attached.
    Inconclusive { image_mod_p: Vec<u64> },
}

impl Reduction {
    pub fn defined(self) -> Option<LevelElt> {
        match self {
            Reduction::Defined(e) => Some(e),
            Reduction::Inconclusive { .. } => None,
        }
    }
}

/// `num(u) * den(u)^{-1}` in `ring`, when the denominator is a unit.
pub fn reduce_rational(f: &RationalFn, ring: &LevelRing) -> Reduction {
    let num = ring.from_poly(f.numerator());
    let den = ring.from_poly(f.denominator());
    match den.invert() {
        Ok(inv) => Reduction::Defined(ring.mul_elts(&num, &inv)),
        Err(CoeffError::NonUnit { image_mod_p }) => Reduction::Inconclusive { image_mod_p },
        Err(e) => unreachable!("inverting within one ring: {e}"),
    }
}

/// `num(1) / den(1)` in `Q_p` to relative precision `k`.
pub fn eval_at_one(f: &RationalFn, p: u64, k: u32) -> Result<PAdicApprox> {
    let (num, den) = f.at_one();
    if num == BigInt::from(0) || den == BigInt::from(0) {
        return Err(CoeffError::ZeroOrPole);
    }
    PAdicApprox::from_ratio(p, &num, &den, k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_examples() {
        let ring = LevelRing::new(5, 1, 3).unwrap();
        let f = RationalFn::from_i64(&[1], &[1, -2]).unwrap();
        assert_eq!(reduce_rational(&f, &ring), Reduction::Defined(ring.element(&[2, 4, 3])));
        let g = RationalFn::from_i64(&[1], &[1, -1]).unwrap();
        assert!(matches!(reduce_rational(&g, &ring), Reduction::Inconclusive { .. }));
        let ring = LevelRing::new(5, 2, 4).unwrap();
        let h = RationalFn::from_i64(&[1, 0, 2], &[1]).unwrap();
        assert_eq!(reduce_rational(&h, &ring), Reduction::Defined(ring.element(&[1, 0, 2, 0])));
    }

    #[test]
    fn reduction_folds_high_powers() {
        let ring = LevelRing::new(7, 1, 2).unwrap();
        let f = RationalFn::from_i64(&[1, 1, 1, 1], &[1]).unwrap();
        assert_eq!(reduce_rational(&f, &ring).defined().unwrap(), ring.element(&[2, 2]));
    }

    #[test]
    fn eval_examples() {
        let f = RationalFn::from_i64(&[1], &[1, -2]).unwrap();
        let v = eval_at_one(&f, 5, 2).unwrap();
        assert_eq!((v.val, v.unit, v.k), (0, 24, 2));
        let g = RationalFn::from_i64(&[1, 0, 2], &[1]).unwrap();
        assert_eq!(eval_at_one(&g, 5, 1).unwrap().unit, 3);
        let h = RationalFn::from_i64(&[1], &[1, -1]).unwrap();
        assert_eq!(eval_at_one(&h, 5, 1), Err(CoeffError::ZeroOrPole));
        assert_eq!(CoeffError::ZeroOrPole.to_string(), "zero or pole at u = 1");
    }

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(3, 7), Some(5));
        assert_eq!(inv_mod(5, 25), None);
        assert_eq!(inv_mod(24, 25), Some(24));
    }
}
