//! Small dense-polynomial helpers over `Z` and `Q`, ascending coefficients.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub(crate) fn trim_q(mut a: Vec<BigRational>) -> Vec<BigRational> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn trim_z(mut a: Vec<BigInt>) -> Vec<BigInt> {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
    a
}

pub(crate) fn mul_z(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim_z(out)
}

pub(crate) fn divrem_q(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim_q(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut rem = trim_q(a.to_vec());
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (db..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] / &lead;
        for (j, y) in b.iter().enumerate() {
            let t = &c * y;
            rem[i - db + j] -= t;
        }
        quot[i - db] = c;
    }
    rem.truncate(db);
    (trim_q(quot), trim_q(rem))
}

/// Monic greatest common divisor over `Q`.
pub(crate) fn gcd_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut x = trim_q(a.to_vec());
    let mut y = trim_q(b.to_vec());
    while !y.is_empty() {
        let (_, r) = divrem_q(&x, &y);
        x = y;
        y = r;
    }
    match x.last().cloned() {
        None => Vec::new(),
        Some(lead) => x.into_iter().map(|c| c / &lead).collect(),
    }
}

pub(crate) fn to_q(a: &[BigInt]) -> Vec<BigRational> {
    a.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Power-series inverse of `a` (with `a[0]` invertible) through `u^order`.
pub(crate) fn series_inverse(a: &[BigRational], order: usize) -> Vec<BigRational> {
    let inv0 = BigRational::one() / &a[0];
    let mut out = vec![BigRational::zero(); order + 1];
    out[0] = inv0.clone();
    for n in 1..=order {
        let mut acc = BigRational::zero();
        for k in 1..=n.min(a.len().saturating_sub(1)) {
            acc += &a[k] * &out[n - k];
        }
        out[n] = -acc * &inv0;
    }
    out
}

/// Product of two series truncated after `u^order`.
pub(crate) fn series_mul(a: &[BigRational], b: &[BigRational], order: usize) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Human-readable polynomial in `u`.
pub(crate) fn format_poly(coeffs: &[BigInt]) -> String {
    let mut s = String::new();
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let neg = c < &BigInt::zero();
        let abs = if neg { -c } else { c.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mag = if abs.is_one() && i > 0 { String::new() } else { abs.to_string() };
        match i {
            0 => s.push_str(&abs.to_string()),
            1 => s.push_str(&format!("{mag}u")),
            _ => s.push_str(&format!("{mag}u^{i}")),
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}
