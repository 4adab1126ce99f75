//! Commutative-ring interface and dense matrices used by the determinant
//! machinery.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A commutative ring whose elements are plain values.
///
/// The ring object carries the parameters (modulus, precision, ...) so that
/// elements of the same type can be interpreted in different rings.
pub trait CommRing {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The integers.
#[derive(Debug, Clone, Copy, Default)]
pub struct Integers;

impl CommRing for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn from_i64(&self, n: i64) -> BigInt {
        BigInt::from(n)
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
}

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: fmt::Debug> fmt::Debug for Matrix<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[E]> = (0..self.rows).map(|r| &self.data[r * self.cols..(r + 1) * self.cols]).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<E>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn map<F: Clone>(&self, f: impl FnMut(&E) -> F) -> Matrix<F> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.data[r * self.cols..(r + 1) * self.cols].to_vec()).collect()
    }

    /// Matrix without row `r` and column `c`.
    pub fn without(&self, r: usize, c: usize) -> Matrix<E> {
        let mut data = Vec::with_capacity(self.rows.saturating_sub(1) * self.cols.saturating_sub(1));
        for i in (0..self.rows).filter(|&i| i != r) {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.rows - 1, cols: self.cols - 1, data }
    }

    pub fn without_row(&self, r: usize) -> Matrix<E> {
        let data = (0..self.rows)
            .filter(|&i| i != r)
            .flat_map(|i| self.data[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        Matrix { rows: self.rows - 1, cols: self.cols, data }
    }

    pub fn without_col(&self, c: usize) -> Matrix<E> {
        let mut data = Vec::with_capacity(self.rows * self.cols.saturating_sub(1));
        for i in 0..self.rows {
            for j in (0..self.cols).filter(|&j| j != c) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.rows, cols: self.cols - 1, data }
    }
}

impl<E: Clone> Matrix<E> {
    pub fn zeros<R: CommRing<Elem = E>>(ring: &R, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| ring.zero())
    }

    pub fn identity<R: CommRing<Elem = E>>(ring: &R, n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { ring.one() } else { ring.zero() })
    }

    pub fn mul<R: CommRing<Elem = E>>(&self, ring: &R, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        Matrix::from_fn(self.rows, other.cols, |r, c| {
            let mut acc = ring.zero();
            for k in 0..self.cols {
                let a = self.get(r, k);
                if ring.is_zero(a) {
                    continue;
                }
                acc = ring.add(&acc, &ring.mul(a, other.get(k, c)));
            }
            acc
        })
    }

    pub fn scale<R: CommRing<Elem = E>>(&self, ring: &R, s: &E) -> Matrix<E> {
        self.map(|a| ring.mul(a, s))
    }

    pub fn sub<R: CommRing<Elem = E>>(&self, ring: &R, other: &Matrix<E>) -> Matrix<E> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.rows, self.cols, |r, c| ring.sub(self.get(r, c), other.get(r, c)))
    }

    /// Block-diagonal sum.
    pub fn direct_sum<R: CommRing<Elem = E>>(ring: &R, blocks: &[Matrix<E>]) -> Matrix<E> {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(ring, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for r in 0..b.rows {
                for c in 0..b.cols {
                    out.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

/// Coefficients `c_0, ..., c_n` of `det(1 - t A) = sum c_i t^i`, computed
/// division-free (Berkowitz), so valid over any commutative ring.
pub fn reversed_charpoly<R: CommRing>(ring: &R, a: &Matrix<R::Elem>) -> Vec<R::Elem> {
    assert!(a.is_square(), "characteristic polynomial of a non-square matrix");
    let n = a.rows();
    let mut c = vec![ring.one()];
    for r in 0..n {
        // Toeplitz column: 1, -a_rr, -R C, -R A C, ..., -R A^{r-1} C
        let mut t = Vec::with_capacity(r + 2);
        t.push(ring.one());
        t.push(ring.neg(a.get(r, r)));
        let mut v: Vec<R::Elem> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for _ in 0..r {
            let mut dot = ring.zero();
            for (j, vj) in v.iter().enumerate() {
                dot = ring.add(&dot, &ring.mul(a.get(r, j), vj));
            }
            t.push(ring.neg(&dot));
            v = (0..r)
                .map(|i| {
                    let mut acc = ring.zero();
                    for (j, vj) in v.iter().enumerate() {
                        acc = ring.add(&acc, &ring.mul(a.get(i, j), vj));
                    }
                    acc
                })
                .collect();
        }
        let mut next = Vec::with_capacity(r + 2);
        for i in 0..=r + 1 {
            let mut acc = ring.zero();
            for j in 0..=i.min(r) {
                acc = ring.add(&acc, &ring.mul(&t[i - j], &c[j]));
            }
            next.push(acc);
        }
        c = next;
    }
    c
}

/// Determinant via [`reversed_charpoly`].
pub fn det<R: CommRing>(ring: &R, a: &Matrix<R::Elem>) -> R::Elem {
    let c = reversed_charpoly(ring, a);
    let top = c.last().unwrap().clone();
    if a.rows() % 2 == 0 {
        top
    } else {
        ring.neg(&top)
    }
}
