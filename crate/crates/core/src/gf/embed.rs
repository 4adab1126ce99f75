//! Compatible embeddings between canonical fields of one characteristic.
//!
//! For every target `F_{p^n}` we fix, once, an image of the generator of each
//! subfield `F_{p^d}` (`d | n`). Images for the maximal subfields are chosen as
//! the lexicographically smallest roots of their moduli that agree with the
//! already fixed lower levels on every common subfield; the remaining images
//! are pulled down from those. This makes `F_{p^d} -> F_{p^m} -> F_{p^n}`
//! agree with the direct map for all `d | m | n`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use super::{make_field, prime_factors, Field, FieldElt, GfError, Result};

/// Generator images inside one target field, keyed by subfield degree.
type RootSystem = BTreeMap<u32, Vec<u32>>;

fn cache() -> &'static Mutex<HashMap<(u64, u32), Arc<RootSystem>>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u32), Arc<RootSystem>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Evaluates the polynomial with coefficient vector `poly` (over the prime
/// field) at `x`.
fn eval_prime_poly(poly: &[u32], x: &FieldElt) -> FieldElt {
    let f = x.field();
    let mut acc = f.zero();
    for &c in poly.iter().rev() {
        acc = acc.mul(x).unwrap().add(&f.from_int(c as i64)).unwrap();
    }
    acc
}

/// Evaluates an element of a subfield, given by its coefficient vector
/// (a polynomial in the subfield generator), at `root`.
fn eval_coeffs_at(coeffs: &[u32], root: &FieldElt) -> FieldElt {
    eval_prime_poly(coeffs, root)
}

fn root_system(p: u64, n: u32) -> Result<Arc<RootSystem>> {
    if let Some(sys) = cache().lock().unwrap().get(&(p, n)) {
        return Ok(sys.clone());
    }
    let target = make_field(p, n)?;
    let mut sys = RootSystem::new();
    sys.insert(n, target.generator().coeffs().to_vec());
    if n > 1 {
        let tables = target.tables();
        let mut maximal: Vec<u32> = prime_factors(n as u64).into_iter().map(|l| n / l as u32).collect();
        maximal.sort_unstable();
        let mut chosen: Vec<(u32, FieldElt, Arc<RootSystem>)> = Vec::new();
        for &m in &maximal {
            let lower = root_system(p, m)?;
            let sub = make_field(p, m)?;
            let mut roots: Vec<FieldElt> = tables
                .subfield(m)
                .into_iter()
                .map(|i| target.element(i as u64))
                .filter(|x| eval_prime_poly(sub.modulus(), x).is_zero())
                .collect();
            roots.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
            let pick = roots.into_iter().find(|r| {
                chosen.iter().all(|(m2, r2, lower2)| {
                    let g = gcd(m, *m2);
                    eval_coeffs_at(&lower[&g], r) == eval_coeffs_at(&lower2[&g], r2)
                })
            });
            let Some(r) = pick else {
                return Err(GfError::IncompatibleEmbedding { src: p.pow(m), dst: target.size() });
            };
            chosen.push((m, r, lower));
        }
        for d in divisors(n).into_iter().filter(|&d| d != n) {
            let (_, r, lower) = chosen.iter().find(|(m, _, _)| m % d == 0).expect("d divides a maximal divisor");
            sys.insert(d, eval_coeffs_at(&lower[&d], r).coeffs().to_vec());
        }
    }
    let sys = Arc::new(sys);
    let mut c = cache().lock().unwrap();
    Ok(c.entry((p, n)).or_insert(sys).clone())
}

fn check_compatible(src: &Field, dst: &Field) -> Result<()> {
    if src.char() != dst.char() || dst.degree() % src.degree() != 0 {
        return Err(GfError::IncompatibleEmbedding { src: src.size(), dst: dst.size() });
    }
    Ok(())
}

/// Image of the generator of `src` under the canonical embedding into `dst`.
pub fn embedding_root(src: &Field, dst: &Field) -> Result<FieldElt> {
    check_compatible(src, dst)?;
    let sys = root_system(dst.char(), dst.degree())?;
    dst.from_coeffs(sys[&src.degree()].clone())
}

/// Maps `a` along the canonical ring embedding `src -> dst`.
pub fn embed(src: &Field, dst: &Field, a: &FieldElt) -> Result<FieldElt> {
    if a.field() != src {
        return Err(GfError::MismatchedFields(a.field().size(), src.size()));
    }
    let root = embedding_root(src, dst)?;
    Ok(eval_coeffs_at(a.coeffs(), &root))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unital_and_identity() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        assert!(embed(&f2, &f4, &f2.one()).unwrap().is_one());
        let g = f4.generator();
        assert_eq!(embed(&f4, &f4, &g).unwrap(), g);
    }

    #[test]
    fn order_is_preserved() {
        let f4 = make_field(2, 2).unwrap();
        let f16 = make_field(2, 4).unwrap();
        let img = embed(&f4, &f16, &f4.generator()).unwrap();
        assert_eq!(img.order(), Some(3));
    }

    #[test]
    fn rejects_incompatible_pairs() {
        let f4 = make_field(2, 2).unwrap();
        let f8 = make_field(2, 3).unwrap();
        let f9 = make_field(3, 2).unwrap();
        assert!(matches!(embed(&f4, &f8, &f4.one()), Err(GfError::IncompatibleEmbedding { .. })));
        assert!(matches!(embed(&f4, &f9, &f4.one()), Err(GfError::IncompatibleEmbedding { .. })));
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        let src = make_field(3, 2).unwrap();
        let dst = make_field(3, 4).unwrap();
        let elems: Vec<FieldElt> = src.elements().collect();
        for a in &elems {
            for b in &elems {
                let ea = embed(&src, &dst, a).unwrap();
                let eb = embed(&src, &dst, b).unwrap();
                assert_eq!(embed(&src, &dst, &a.mul(b).unwrap()).unwrap(), ea.mul(&eb).unwrap());
                assert_eq!(embed(&src, &dst, &a.add(b).unwrap()).unwrap(), ea.add(&eb).unwrap());
            }
        }
    }

    #[test]
    fn towers_are_coherent() {
        let towers: &[(u64, u32, u32, u32)] =
            &[(2, 1, 2, 4), (2, 2, 4, 8), (2, 2, 6, 12), (2, 3, 6, 12), (3, 1, 3, 6), (3, 2, 4, 8), (5, 1, 2, 4), (2, 1, 3, 6)];
        for &(p, d, m, n) in towers {
            let fd = make_field(p, d).unwrap();
            let fm = make_field(p, m).unwrap();
            let fn_ = make_field(p, n).unwrap();
            for a in fd.elements() {
                let two_step = embed(&fm, &fn_, &embed(&fd, &fm, &a).unwrap()).unwrap();
                assert_eq!(two_step, embed(&fd, &fn_, &a).unwrap(), "p={p} {d}|{m}|{n}");
            }
        }
    }

    #[test]
    fn embedding_commutes_with_frobenius_on_image() {
        let src = make_field(2, 3).unwrap();
        let dst = make_field(2, 6).unwrap();
        for a in src.elements() {
            let img = embed(&src, &dst, &a).unwrap();
            assert_eq!(img.frobenius(src.degree()), img);
            assert_eq!(embed(&src, &dst, &a.frobenius(1)).unwrap(), img.frobenius(1));
        }
    }
}
