use num_rational::BigRational;
use num_traits::{One, Zero};

use super::qpoly::trim_q;

/// Minimal linear recurrence of a sequence over `Q`.
///
/// Returns the connection polynomial `C` (with `C[0] = 1`) and the register
/// length `L`, so that `sum_{i=0}^{L} C[i] * s[j - i] = 0` for every
/// `L <= j < s.len()`.
pub(crate) fn berlekamp_massey(s: &[BigRational]) -> (Vec<BigRational>, usize) {
    let mut c = vec![BigRational::one()];
    let mut b = vec![BigRational::one()];
    let mut l = 0usize;
    let mut shift = 1usize;
    let mut last_disc = BigRational::one();
    for n in 0..s.len() {
        let mut d = s[n].clone();
        for i in 1..=l.min(c.len() - 1) {
            d += &c[i] * &s[n - i];
        }
        if d.is_zero() {
            shift += 1;
            continue;
        }
        let coef = &d / &last_disc;
        let mut next = c.clone();
        if next.len() < b.len() + shift {
            next.resize(b.len() + shift, BigRational::zero());
        }
        for (i, bi) in b.iter().enumerate() {
            next[i + shift] -= &coef * bi;
        }
        if 2 * l <= n {
            b = c;
            l = n + 1 - l;
            last_disc = d;
            shift = 1;
        } else {
            shift += 1;
        }
        c = next;
    }
    let mut c = trim_q(c);
    if c.is_empty() {
        c.push(BigRational::one());
    }
    (c, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
    }

    #[test]
    fn fibonacci() {
        let (c, l) = berlekamp_massey(&q(&[1, 1, 2, 3, 5, 8, 13, 21]));
        assert_eq!(l, 2);
        assert_eq!(c, q(&[1, -1, -1]));
    }

    #[test]
    fn geometric() {
        let (c, l) = berlekamp_massey(&q(&[1, 2, 4, 8, 16]));
        assert_eq!(l, 1);
        assert_eq!(c, q(&[1, -2]));
    }

    #[test]
    fn zero_sequence() {
        let (c, l) = berlekamp_massey(&q(&[0, 0, 0]));
        assert_eq!(l, 0);
        assert_eq!(c, q(&[1]));
    }

    #[test]
    fn leading_zeros_need_long_register() {
        // 0, 0, 1, 0, 0, 0: the relation cannot hold before index 3
        let (_, l) = berlekamp_massey(&q(&[0, 0, 1, 0, 0, 0]));
        assert_eq!(l, 3);
    }
}
