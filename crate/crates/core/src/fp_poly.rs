//! Dense polynomials over a prime field F_p, coefficients in ascending order.
//!
//! Used for canonical moduli, for inversion in group rings modulo `p`, and for
//! splitting `u^n - 1` into its primary factors. Every routine keeps its
//! inputs trimmed (no trailing zero coefficients); the zero polynomial is the
//! empty vector.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) type Poly = Vec<u64>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn deg(a: &[u64]) -> Option<usize> {
    if a.is_empty() {
        None
    } else {
        Some(a.len() - 1)
    }
}

pub(crate) fn mul_mod_p(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod_p(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod_p(acc, base, p);
        }
        base = mul_mod_p(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub(crate) fn inv_mod_p(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod_p(a, p - 2, p)
}

pub(crate) fn add(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Poly {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

pub(crate) fn scale(a: &[u64], c: u64, p: u64) -> Poly {
    trim(a.iter().map(|&x| mul_mod_p(x, c, p)).collect())
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod_p(x, y, p)) % p;
        }
    }
    trim(out)
}

/// Quotient and remainder of `a` by the nonzero polynomial `b`.
pub(crate) fn divrem(a: &[u64], b: &[u64], p: u64) -> (Poly, Poly) {
    let db = deg(b).expect("division by the zero polynomial");
    let lead_inv = inv_mod_p(b[db], p);
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (Vec::new(), trim(rem));
    }
    let mut quot = vec![0u64; rem.len() - db];
    for i in (db..rem.len()).rev() {
        let c = mul_mod_p(rem[i], lead_inv, p);
        if c == 0 {
            continue;
        }
        quot[i - db] = c;
        for (j, &y) in b.iter().enumerate() {
            let idx = i - db + j;
            rem[idx] = (rem[idx] + p - mul_mod_p(c, y, p)) % p;
        }
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Poly {
    divrem(a, b, p).1
}

pub(crate) fn monic(a: &[u64], p: u64) -> Poly {
    match a.last() {
        None => Vec::new(),
        Some(&lead) => scale(a, inv_mod_p(lead, p), p),
    }
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Poly {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    monic(&x, p)
}

/// Returns `(g, s)` with `g = gcd(a, m)` monic and `s * a ≡ g (mod m)`.
pub(crate) fn ext_gcd(a: &[u64], m: &[u64], p: u64) -> (Poly, Poly) {
    let mut r0 = trim(m.to_vec());
    let mut r1 = rem(a, m, p);
    let mut s0: Poly = Vec::new();
    let mut s1: Poly = vec![1 % p];
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    match r0.last() {
        None => (Vec::new(), Vec::new()),
        Some(&lead) => {
            let c = inv_mod_p(lead, p);
            (scale(&r0, c, p), rem(&scale(&s0, c, p), m, p))
        }
    }
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Poly {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(base: &[u64], mut exp: u128, m: &[u64], p: u64) -> Poly {
    let mut acc = rem(&[1 % p], m, p);
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        b = mulmod(&b, &b, m, p);
        exp >>= 1;
    }
    acc
}

/// Ben-Or irreducibility test for a polynomial of positive degree.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let f = trim(f.to_vec());
    let Some(d) = deg(&f) else { return false };
    if d == 0 {
        return false;
    }
    let x: Poly = vec![0, 1];
    let mut xp = rem(&x, &f, p);
    for _ in 0..d / 2 {
        xp = powmod(&xp, p as u128, &f, p);
        let g = gcd(&f, &sub(&xp, &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Splits the squarefree polynomial `f` into its monic irreducible factors.
///
/// Distinct-degree factorization followed by Cantor-Zassenhaus equal-degree
/// splitting. The random choices come from a fixed seed, and the factors are
/// returned sorted, so the output is deterministic.
pub(crate) fn factor_squarefree(f: &[u64], p: u64) -> Vec<Poly> {
    let f = monic(f, p);
    let mut out = Vec::new();
    let Some(_) = deg(&f) else { return out };
    let x: Poly = vec![0, 1];
    let mut rest = f;
    let mut xq = rem(&x, &rest, p);
    let mut d = 0usize;
    while deg(&rest).unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > deg(&rest).unwrap() {
            out.push(rest.clone());
            break;
        }
        xq = powmod(&xq, p as u128, &rest, p);
        let g = gcd(&rest, &sub(&xq, &x, p), p);
        if g.len() > 1 {
            out.extend(equal_degree_split(&g, d, p));
            rest = divrem(&rest, &g, p).0;
            xq = rem(&xq, &rest, p);
        }
    }
    out.sort();
    out
}

fn equal_degree_split(f: &[u64], d: usize, p: u64) -> Vec<Poly> {
    let n = deg(f).unwrap();
    if n == d {
        return vec![f.to_vec()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0000 ^ (n as u64) ^ ((d as u64) << 16));
    loop {
        let a: Poly = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if a.len() < 2 {
            continue;
        }
        let b = if p == 2 {
            // trace map a + a^2 + ... + a^(2^(d-1))
            let mut t = a.clone();
            let mut acc = a.clone();
            for _ in 1..d {
                t = mulmod(&t, &t, f, p);
                acc = add(&acc, &t, p);
            }
            acc
        } else {
            let e = ((p as u128).pow(d as u32) - 1) / 2;
            sub(&powmod(&a, e, f, p), &[1], p)
        };
        let g = gcd(f, &b, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(f, &g, p).0;
            let mut parts = equal_degree_split(&g, d, p);
            parts.extend(equal_degree_split(&h, d, p));
            return parts;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divrem_reconstructs() {
        let p = 7;
        let a = vec![3, 0, 5, 1, 6];
        let b = vec![2, 1, 3];
        let (q, r) = divrem(&a, &b, p);
        assert_eq!(add(&mul(&q, &b, p), &r, p), a);
        assert!(r.len() < b.len());
    }

    #[test]
    fn ext_gcd_gives_inverse() {
        let p = 5;
        // u^3 - 1
        let m = vec![4, 0, 0, 1];
        let a = vec![1, 3]; // 1 - 2u
        let (g, s) = ext_gcd(&a, &m, p);
        assert_eq!(g, vec![1]);
        assert_eq!(s, vec![2, 4, 3]);
    }

    #[test]
    fn irreducibility_small_cases() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[0, 1, 1], 5));
    }

    #[test]
    fn factors_cyclotomic_product() {
        // u^12 - 1 over F_5
        let p = 5;
        let mut f = vec![0u64; 13];
        f[0] = 4;
        f[12] = 1;
        let factors = factor_squarefree(&f, p);
        let prod = factors.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
        assert!(factors.iter().all(|g| is_irreducible(g, p)));
        // ord_d(5) for d | 12 gives 1,1,2,1,2,2 factor degrees: 8 factors total
        assert_eq!(factors.len(), 8);
    }

    #[test]
    fn factors_over_f2() {
        let p = 2;
        let mut f = vec![0u64; 8];
        f[0] = 1;
        f[7] = 1;
        let factors = factor_squarefree(&f, p);
        let degs: Vec<usize> = factors.iter().map(|g| g.len() - 1).collect();
        let mut sorted = degs.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 3, 3]);
        let prod = factors.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
    }
}
