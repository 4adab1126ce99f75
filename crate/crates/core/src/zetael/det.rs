//! Based complexes, their torsion, and changes of basis.

use rand::Rng;

use crate::algebra::{det, CommRing, Matrix};
use crate::coeff::{LevelElt, LevelRing, PAdicApprox, PAdicRing};

/// Rings in which a unit can be recognized and inverted.
pub(crate) trait UnitRing: CommRing {
    fn unit_inverse(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn random_elem(&self, rng: &mut impl Rng) -> Self::Elem;

    fn random_unit(&self, rng: &mut impl Rng) -> (Self::Elem, Self::Elem) {
        loop {
            let a = self.random_elem(rng);
            if let Some(b) = self.unit_inverse(&a) {
                return (a, b);
            }
        }
    }
}

impl UnitRing for PAdicRing {
    fn unit_inverse(&self, a: &PAdicApprox) -> Option<PAdicApprox> {
        a.inv().ok()
    }

    fn random_elem(&self, rng: &mut impl Rng) -> PAdicApprox {
        self.from_i64(rng.gen_range(0..self.p.pow(self.k)) as i64)
    }
}

impl UnitRing for LevelRing {
    fn unit_inverse(&self, a: &LevelElt) -> Option<LevelElt> {
        a.invert().ok()
    }

    fn random_elem(&self, rng: &mut impl Rng) -> LevelElt {
        let m = self.modulus() as i64;
        let coeffs: Vec<i64> = (0..self.n).map(|_| rng.gen_range(0..m)).collect();
        self.element(&coeffs)
    }
}

/// Rings over which Gaussian elimination can pick pivots.
pub(crate) trait Eliminate: CommRing {
    /// Preference for `a` as a pivot (lower is better), `None` if unusable.
    fn pivot_rank(&self, a: &Self::Elem) -> Option<i64>;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
}

impl Eliminate for PAdicRing {
    fn pivot_rank(&self, a: &PAdicApprox) -> Option<i64> {
        (!a.is_indeterminate()).then_some(a.val)
    }

    fn inverse(&self, a: &PAdicApprox) -> PAdicApprox {
        a.inv().expect("pivots are determinate")
    }
}

/// The local factor `e R_{n,k}` for a primitive idempotent `e`, its elements
/// stored as multiples of `e` inside `R_{n,k}`.
#[derive(Debug, Clone)]
pub(crate) struct LocalComponent {
    ring: LevelRing,
    e: LevelElt,
    complement: LevelElt,
}

impl LocalComponent {
    pub(crate) fn new(ring: LevelRing, e: LevelElt) -> Self {
        let complement = ring.sub(&ring.one(), &e);
        LocalComponent { ring, e, complement }
    }
}

impl CommRing for LocalComponent {
    type Elem = LevelElt;

    fn zero(&self) -> LevelElt {
        self.ring.zero()
    }
    fn one(&self) -> LevelElt {
        self.e.clone()
    }
    fn add(&self, a: &LevelElt, b: &LevelElt) -> LevelElt {
        self.ring.add_elts(a, b)
    }
    fn neg(&self, a: &LevelElt) -> LevelElt {
        self.ring.neg_elt(a)
    }
    fn mul(&self, a: &LevelElt, b: &LevelElt) -> LevelElt {
        self.ring.mul_elts(a, b)
    }
    fn from_i64(&self, n: i64) -> LevelElt {
        self.ring.mul_elts(&self.ring.constant(n), &self.e)
    }
    fn is_zero(&self, a: &LevelElt) -> bool {
        a.is_zero()
    }
}

impl Eliminate for LocalComponent {
    fn pivot_rank(&self, a: &LevelElt) -> Option<i64> {
        self.ring.add_elts(a, &self.complement).is_unit().then_some(0)
    }

    fn inverse(&self, a: &LevelElt) -> LevelElt {
        let full = self.ring.add_elts(a, &self.complement).invert().expect("pivot is a unit");
        self.ring.mul_elts(&full, &self.e)
    }
}

/// A bounded complex of free modules with chosen bases: terms in degrees
/// `start, start + 1, ...` and differentials `d^m : F^m -> F^{m+1}` as
/// matrices acting on column vectors.
#[derive(Debug, Clone)]
pub struct BasedComplex<R: CommRing> {
    ring: R,
    start: i32,
    ranks: Vec<usize>,
    diffs: Vec<Matrix<R::Elem>>,
}

impl<R: CommRing + Clone> BasedComplex<R> {
    pub fn new(ring: R, start: i32, ranks: Vec<usize>, diffs: Vec<Matrix<R::Elem>>) -> Self {
        assert_eq!(diffs.len(), ranks.len().saturating_sub(1), "one differential between consecutive terms");
        for (i, d) in diffs.iter().enumerate() {
            assert_eq!((d.rows(), d.cols()), (ranks[i + 1], ranks[i]), "differential shape");
        }
        BasedComplex { ring, start, ranks, diffs }
    }

    /// `Fib(1 - φ : C -> C)` for a complex `C` with zero differential given
    /// by `(degree, φ)` pairs. `F^m = C^{m-1} ⊕ C^m` (that order) and
    /// `d(y, x) = ((1 - φ_m) x, 0)`.
    pub fn fiber(ring: R, terms: &[(i32, Matrix<R::Elem>)]) -> Self {
        let Some(lo) = terms.iter().map(|(m, _)| *m).min() else {
            return BasedComplex { ring, start: 0, ranks: Vec::new(), diffs: Vec::new() };
        };
        let hi = terms.iter().map(|(m, _)| *m).max().unwrap();
        let c_rank = |m: i32| terms.iter().find(|(d, _)| *d == m).map_or(0, |(_, a)| a.rows());
        let ranks: Vec<usize> = (lo..=hi + 1).map(|m| c_rank(m - 1) + c_rank(m)).collect();
        let mut diffs = Vec::new();
        for m in lo..=hi {
            let (rows, cols) = (c_rank(m) + c_rank(m + 1), c_rank(m - 1) + c_rank(m));
            let mut d = Matrix::zeros(&ring, rows, cols);
            if let Some((_, phi)) = terms.iter().find(|(d, _)| *d == m) {
                let off = c_rank(m - 1);
                for r in 0..phi.rows() {
                    for c in 0..phi.cols() {
                        let id = if r == c { ring.one() } else { ring.zero() };
                        d.set(r, off + c, ring.sub(&id, phi.get(r, c)));
                    }
                }
            }
            diffs.push(d);
        }
        BasedComplex { ring, start: lo, ranks, diffs }
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn start(&self) -> i32 {
        self.start
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn diffs(&self) -> &[Matrix<R::Elem>] {
        &self.diffs
    }

    /// Whether consecutive differentials compose to zero.
    pub fn is_complex(&self) -> bool {
        self.diffs.windows(2).all(|w| {
            let prod = w[1].mul(&self.ring, &w[0]);
            (0..prod.rows()).all(|r| (0..prod.cols()).all(|c| self.ring.is_zero(prod.get(r, c))))
        })
    }

    pub(crate) fn map_ring<S: CommRing + Clone>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> BasedComplex<S> {
        BasedComplex {
            ring: target,
            start: self.start,
            ranks: self.ranks.clone(),
            diffs: self.diffs.iter().map(|d| d.map(&f)).collect(),
        }
    }

    /// Differentials in new bases: column `j` of `ps[m].0` expresses the
    /// `j`-th new basis vector of `F^m` in the old basis, and `ps[m].1` is
    /// its inverse.
    pub(crate) fn rebased(&self, ps: &[(Matrix<R::Elem>, Matrix<R::Elem>)]) -> Self {
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| ps[i + 1].1.mul(&self.ring, &d.mul(&self.ring, &ps[i].0)))
            .collect();
        BasedComplex { ring: self.ring.clone(), start: self.start, ranks: self.ranks.clone(), diffs }
    }
}

/// A random invertible `r x r` matrix and its inverse, as a product of
/// transvections, swaps and unit scalings.
pub(crate) fn random_invertible<R: UnitRing>(ring: &R, r: usize, rng: &mut impl Rng) -> (Matrix<R::Elem>, Matrix<R::Elem>) {
    let mut p = Matrix::identity(ring, r);
    let mut pinv = Matrix::identity(ring, r);
    if r == 0 {
        return (p, pinv);
    }
    for _ in 0..3 * r + 2 {
        let (e, einv) = match rng.gen_range(0..3) {
            0 if r > 1 => {
                let i = rng.gen_range(0..r);
                let j = (i + rng.gen_range(1..r)) % r;
                let a = ring.random_elem(rng);
                let mut e = Matrix::identity(ring, r);
                let mut einv = Matrix::identity(ring, r);
                e.set(i, j, a.clone());
                einv.set(i, j, ring.neg(&a));
                (e, einv)
            }
            1 if r > 1 => {
                let i = rng.gen_range(0..r);
                let j = (i + rng.gen_range(1..r)) % r;
                let mut s = Matrix::identity(ring, r);
                s.set(i, i, ring.zero());
                s.set(j, j, ring.zero());
                s.set(i, j, ring.one());
                s.set(j, i, ring.one());
                (s.clone(), s)
            }
            _ => {
                let i = rng.gen_range(0..r);
                let (u, uinv) = ring.random_unit(rng);
                let mut d = Matrix::identity(ring, r);
                let mut dinv = Matrix::identity(ring, r);
                d.set(i, i, u);
                dinv.set(i, i, uinv);
                (d, dinv)
            }
        };
        p = p.mul(ring, &e);
        pinv = einv.mul(ring, &pinv);
    }
    (p, pinv)
}

/// `prod_m det(P_m)^{(-1)^m}`: how the reference generator of `det F` scales
/// under the change of basis.
pub(crate) fn basis_change_factor<R: UnitRing>(ring: &R, start: i32, ps: &[(Matrix<R::Elem>, Matrix<R::Elem>)]) -> R::Elem {
    let mut acc = ring.one();
    for (i, (p, _)) in ps.iter().enumerate() {
        let d = det(ring, p);
        let f = if (start + i as i32).rem_euclid(2) == 0 {
            d
        } else {
            ring.unit_inverse(&d).expect("invertible change of basis")
        };
        acc = ring.mul(&acc, &f);
    }
    acc
}

/// Image of the reference generator `⊗_m det(basis of F^m)^{(-1)^m}` under
/// the trivialization of `det F` by acyclicity, by Gaussian elimination:
/// a unit pivot `β` at row `i`, column `j` of `d^m` contributes
/// `(-1)^{i+j} β^{(-1)^m}` and leaves the Schur complement. `None` when no
/// usable pivot remains while some term is nonzero.
pub(crate) fn torsion<R: Eliminate + Clone>(cx: &BasedComplex<R>) -> Option<R::Elem> {
    let ring = &cx.ring;
    let mut ranks = cx.ranks.clone();
    let mut diffs = cx.diffs.clone();
    let mut tau = ring.one();
    while ranks.iter().any(|&r| r > 0) {
        let mut best: Option<(i64, usize, usize, usize)> = None;
        for (t, d) in diffs.iter().enumerate() {
            for i in 0..d.rows() {
                for j in 0..d.cols() {
                    if let Some(score) = ring.pivot_rank(d.get(i, j)) {
                        if best.is_none_or(|b| score < b.0) {
                            best = Some((score, t, i, j));
                        }
                    }
                }
            }
        }
        let (_, t, i, j) = best?;
        let d = &diffs[t];
        let beta = d.get(i, j).clone();
        let beta_inv = ring.inverse(&beta);
        let factor = if (cx.start + t as i32).rem_euclid(2) == 0 { beta } else { beta_inv.clone() };
        tau = ring.mul(&tau, &factor);
        if (i + j) % 2 == 1 {
            tau = ring.neg(&tau);
        }
        let schur = Matrix::from_fn(d.rows() - 1, d.cols() - 1, |r, c| {
            let r0 = if r < i { r } else { r + 1 };
            let c0 = if c < j { c } else { c + 1 };
            let corr = ring.mul(&ring.mul(d.get(r0, j), &beta_inv), d.get(i, c0));
            ring.sub(d.get(r0, c0), &corr)
        });
        diffs[t] = schur;
        if t > 0 {
            diffs[t - 1] = diffs[t - 1].without_row(j);
        }
        if t + 1 < diffs.len() {
            diffs[t + 1] = diffs[t + 1].without_col(i);
        }
        ranks[t] -= 1;
        ranks[t + 1] -= 1;
    }
    Some(tau)
}

/// Torsion over `R_{n,k}`, assembled from its local components.
pub(crate) fn level_torsion(cx: &BasedComplex<LevelRing>) -> Option<LevelElt> {
    let ring = cx.ring;
    let mut total = ring.zero();
    for e in ring.local_idempotents().iter() {
        let comp = LocalComponent::new(ring, e.clone());
        let local = cx.map_ring(comp, |x| ring.mul_elts(x, e));
        total = ring.add_elts(&total, &torsion(&local)?);
    }
    Some(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn padic(p: u64, k: u32, rows: &[&[i64]]) -> (PAdicRing, Matrix<PAdicApprox>) {
        let ring = PAdicRing::new(p, k).unwrap();
        let m = Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| ring.from_i64(x)).collect()).collect());
        (ring, m)
    }

    #[test]
    fn two_term_torsion_is_determinant() {
        let (ring, d) = padic(5, 4, &[&[2, 1], &[7, 3]]);
        let cx = BasedComplex::new(ring, 0, vec![2, 2], vec![d.clone()]);
        let tau = torsion(&cx).unwrap();
        assert!(tau.agrees_with(&det(&ring, &d)));
        let odd = BasedComplex::new(ring, 1, vec![2, 2], vec![d.clone()]);
        assert!(torsion(&odd).unwrap().agrees_with(&det(&ring, &d).inv().unwrap()));
    }

    #[test]
    fn three_term_complex() {
        // 0 -> R --(1,1)^T--> R^2 --(1,-1)--> R -> 0 is exact
        let (ring, d0) = padic(7, 3, &[&[1], &[1]]);
        let (_, d1) = padic(7, 3, &[&[1, -1]]);
        let cx = BasedComplex::new(ring, 0, vec![1, 2, 1], vec![d0, d1]);
        assert!(cx.is_complex());
        let tau = torsion(&cx).unwrap();
        assert!(tau.agrees_with(&ring.from_i64(1)) || tau.agrees_with(&ring.from_i64(-1)));
        let empty: BasedComplex<PAdicRing> = BasedComplex::fiber(ring, &[]);
        assert_eq!(torsion(&empty), Some(ring.one()));
    }

    #[test]
    fn non_acyclic_has_no_torsion() {
        let (ring, d) = padic(5, 2, &[&[1, 2], &[2, 4]]);
        assert_eq!(torsion(&BasedComplex::new(ring, 0, vec![2, 2], vec![d])), None);
    }

    #[test]
    fn level_torsion_handles_non_local_rings() {
        // e and 1 - e from R_{2,1} at p = 5: no single entry of the matrix
        // below is a unit, but its determinant 2e - 1 is
        let ring = LevelRing::new(5, 1, 2).unwrap();
        let es = ring.local_idempotents();
        assert_eq!(es.len(), 2);
        let (e, f) = (es[0].clone(), es[1].clone());
        let d = Matrix::from_rows(vec![vec![e.clone(), f.clone()], vec![f.clone(), e.clone()]]);
        assert!(!e.is_unit() && !f.is_unit());
        let cx = BasedComplex::new(ring, 0, vec![2, 2], vec![d.clone()]);
        assert_eq!(level_torsion(&cx).unwrap(), det(&ring, &d));
    }

    #[test]
    fn random_invertible_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let ring = LevelRing::new(3, 2, 4).unwrap();
        for r in 0..4 {
            let (p, pinv) = random_invertible(&ring, r, &mut rng);
            assert_eq!(p.mul(&ring, &pinv), Matrix::identity(&ring, r));
        }
    }
}
