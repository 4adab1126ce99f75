use super::{Field, FieldElt};

const NO_LOG: u32 = u32::MAX;
const ADD_TABLE_LIMIT: u64 = 1024;

/// Discrete-log tables over element indices.
///
/// Elements are addressed by their enumeration index; multiplication goes
/// through logarithms to a fixed primitive element and addition is done
/// digit-wise on the base-`p` expansion of the index.
pub struct IndexTables {
    p: u32,
    e: u32,
    q: u32,
    primitive: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    place: Vec<u32>,
    add_table: Option<Vec<u32>>,
}

impl IndexTables {
    pub(super) fn build(field: &Field) -> Self {
        let q = field.size();
        let p = field.char() as u32;
        let e = field.degree();
        let g = (1..q)
            .map(|i| field.element(i))
            .find(|a| a.order() == Some(q - 1))
            .expect("the multiplicative group is cyclic");
        let mut exp = Vec::with_capacity((q - 1) as usize);
        let mut log = vec![NO_LOG; q as usize];
        let mut cur = field.one();
        for i in 0..(q - 1) {
            let idx = cur.index() as u32;
            exp.push(idx);
            log[idx as usize] = i as u32;
            cur = FieldElt { field: field.clone(), coeffs: field.mul_coeffs(&cur.coeffs, &g.coeffs) };
        }
        let mut place = vec![1u32; e as usize];
        for i in (0..e as usize - 1).rev() {
            place[i] = place[i + 1] * p;
        }
        let mut tables = IndexTables {
            p,
            e,
            q: q as u32,
            primitive: g.index() as u32,
            exp,
            log,
            place,
            add_table: None,
        };
        if p != 2 && q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q as u32 {
                for b in 0..q as u32 {
                    t[(a * q as u32 + b) as usize] = tables.add_digits(a, b);
                }
            }
            tables.add_table = Some(t);
        }
        tables
    }

    /// Index of the multiplicative identity.
    pub fn one(&self) -> u32 {
        self.place[0]
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    /// Index of the primitive element the logarithms refer to.
    pub fn primitive(&self) -> u32 {
        self.primitive
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> u32 {
        let p = self.p;
        let mut out = 0u32;
        for &w in self.place.iter().rev() {
            let s = (a % p + b % p) % p;
            out += s * w;
            a /= p;
            b /= p;
        }
        out
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.add_table {
            Some(t) => t[(a * self.q + b) as usize],
            None => self.add_digits(a, b),
        }
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.p == 2 {
            return a;
        }
        let p = self.p;
        let mut x = a;
        let mut out = 0u32;
        for &w in self.place.iter().rev() {
            out += ((p - x % p) % p) * w;
            x /= p;
        }
        out
    }

    /// Logarithm of a nonzero element, `None` for zero.
    #[inline]
    pub fn log(&self, a: u32) -> Option<u32> {
        let l = self.log[a as usize];
        (l != NO_LOG).then_some(l)
    }

    /// `g^i` with `i` taken modulo `q - 1`.
    #[inline]
    pub fn exp(&self, i: u64) -> u32 {
        self.exp[(i % (self.q as u64 - 1)) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        match (self.log(a), self.log(b)) {
            (Some(x), Some(y)) => self.exp(x as u64 + y as u64),
            _ => 0,
        }
    }

    pub fn pow(&self, a: u32, k: u64) -> u32 {
        if k == 0 {
            return self.one();
        }
        match self.log(a) {
            Some(x) => self.exp((x as u128 * k as u128 % (self.q as u128 - 1)) as u64),
            None => 0,
        }
    }

    /// Indices of the subfield with `p^d` elements, `d` dividing the degree.
    pub fn subfield(&self, d: u32) -> Vec<u32> {
        assert!(self.e % d == 0);
        let sub = (self.p as u64).pow(d);
        let step = (self.q as u64 - 1) / (sub - 1);
        let mut out = vec![0u32];
        out.extend((0..sub - 1).map(|j| self.exp(j * step)));
        out
    }
}
