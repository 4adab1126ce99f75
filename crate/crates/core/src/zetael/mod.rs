//! φ-modules, determinant lines of the fibre of `1 - φ`, zeta elements at
//! finite Iwasawa level, and the checks relating them to L-functions.
//!
//! Conventions (one set, used everywhere, see [`CONVENTION`]):
//! - `u` is geometric Frobenius and the level twist multiplies φ by `u`;
//! - `RΓ_c(X, F) = Fib(1 - φ : C -> C)` with `F^m = C^{m-1} ⊕ C^m`, the
//!   `C^{m-1}` block first, and `d(y, x) = ((1 - φ) x, 0)`;
//! - `det F = ⊗_m det(F^m)^{(-1)^m}` as ungraded lines, no Koszul signs;
//! - the zeta element lives in `det^{-1} F`, so on a single point with
//!   `φ = c` its acyclicity coordinate is `(1 - c)^{-1}`.

mod catalog;
mod det;
mod element;
mod verify;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{reversed_charpoly, Integers, Matrix};
use crate::coeff::{CoeffError, LevelElt, LevelRing, PAdicApprox, PAdicRing};
use crate::variety::VarietyError;
use crate::zetafn::{lfunction_from_cohomology, RationalFn, ZetaError};

pub use catalog::{catalog_entry, elliptic_entry, validate_catalog, validate_catalog_with, CatalogEntry, CATALOG_NAMES};
pub use det::BasedComplex;
pub use element::{acyclicity_coordinate, zeta_element, Acyclicity, DetLine, ZetaElement};
pub use verify::{
    check_regimes, verify_base_change, verify_norm_system, verify_pushforward, verify_triangle, verify_zeta_eq_element,
    verify_zeta_value, LevelInfo, Report, Verdict,
};

/// Tag recorded in every report; identifies the orientation and sign
/// conventions listed in the module documentation.
pub const CONVENTION: &str = "geom-frob/twist=phi*u/fib(1-phi)/det-ungraded-asc/zeta=(1-c)^-1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaElError {
    #[error("phi is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("det(phi) is divisible by {p}; Frobenius must act invertibly")]
    NotInvertible { p: u64 },
    #[error("coefficient prime {p} equals the characteristic of F_{q}")]
    CharacteristicClash { p: u64, q: u64 },
    #[error("modules over different primes ({0} and {1})")]
    MixedPrimes(u64, u64),
    #[error("degree {0} appears twice in a complex")]
    DuplicateDegree(i32),
    #[error("point degree must be positive")]
    ZeroDegree,
    #[error("block structure mismatch: {0}")]
    BlockMismatch(String),
    #[error("levels {0:?} do not form a divisor chain")]
    NotDivisorChain(Vec<usize>),
    #[error("unknown catalog entry {0:?}")]
    UnknownCatalog(String),
    #[error("object has no modules, so no coefficient prime")]
    EmptyObject,
    #[error("catalog entry {0} has no defining scheme to validate against")]
    NoScheme(String),
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
}

pub type Result<T> = std::result::Result<T, ZetaElError>;

/// A free `Z_p`-module with an invertible Frobenius, given by an integral
/// matrix. It is reduced into whatever coefficient ring a computation uses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiModule {
    p: u64,
    phi: Vec<Vec<i64>>,
}

impl PhiModule {
    pub fn new(p: u64, phi: Vec<Vec<i64>>) -> Result<Self> {
        crate::coeff::PAdicRing::new(p, 1)?;
        let rows = phi.len();
        if let Some(row) = phi.iter().find(|r| r.len() != rows) {
            return Err(ZetaElError::NotSquare { rows, cols: row.len() });
        }
        let m = PhiModule { p, phi };
        let det = m.det();
        if (det % BigInt::from(p)).is_zero() && rows > 0 {
            return Err(ZetaElError::NotInvertible { p });
        }
        Ok(m)
    }

    /// Rank one with `φ = c`.
    pub fn scalar(p: u64, c: i64) -> Result<Self> {
        Self::new(p, vec![vec![c]])
    }

    /// The zero module.
    pub fn zero(p: u64) -> Result<Self> {
        Self::new(p, Vec::new())
    }

    pub fn diagonal(p: u64, entries: &[i64]) -> Result<Self> {
        let r = entries.len();
        Self::new(p, (0..r).map(|i| (0..r).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect())
    }

    /// Companion matrix `[[0, -c_r], [1, -c_{r-1}], ...]` with
    /// `det(1 - φ t) = 1 + c_1 t + ... + c_r t^r`; `coeffs` starts at `c_1`.
    pub fn companion(p: u64, coeffs: &[i64]) -> Result<Self> {
        let r = coeffs.len();
        let mut phi = vec![vec![0i64; r]; r];
        for i in 1..r {
            phi[i][i - 1] = 1;
        }
        for (i, row) in phi.iter_mut().enumerate() {
            row[r - 1] = -coeffs[r - 1 - i];
        }
        Self::new(p, phi)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.phi.len()
    }

    pub fn phi(&self) -> &[Vec<i64>] {
        &self.phi
    }

    pub(crate) fn int_matrix(&self) -> Matrix<BigInt> {
        Matrix::from_rows(self.phi.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn det(&self) -> BigInt {
        crate::algebra::det(&Integers, &self.int_matrix())
    }

    /// `det(1 - φ t)` over `Z`, ascending.
    pub fn charpoly(&self) -> Vec<BigInt> {
        reversed_charpoly(&Integers, &self.int_matrix())
    }

    pub fn direct_sum(&self, other: &PhiModule) -> Result<PhiModule> {
        if self.p != other.p {
            return Err(ZetaElError::MixedPrimes(self.p, other.p));
        }
        let m = Matrix::direct_sum(&Integers, &[self.int_matrix(), other.int_matrix()]);
        Ok(PhiModule { p: self.p, phi: m.map(|x| i64::try_from(x).unwrap()).to_rows() })
    }

    /// The module induced along `Spec F_{q^d} -> Spec F_q`: `d` copies of
    /// the module, Frobenius moving copy `i` to copy `i + 1` and applying φ
    /// on the way back to copy 0, so `det(1 - Φ t) = det(1 - φ t^d)`.
    pub fn induced(&self, d: u32) -> Result<PhiModule> {
        if d == 0 {
            return Err(ZetaElError::ZeroDegree);
        }
        let r = self.rank();
        let d = d as usize;
        let mut phi = vec![vec![0i64; r * d]; r * d];
        for i in 0..d - 1 {
            for a in 0..r {
                phi[(i + 1) * r + a][i * r + a] = 1;
            }
        }
        for a in 0..r {
            for b in 0..r {
                phi[a][(d - 1) * r + b] = self.phi[a][b];
            }
        }
        Ok(PhiModule { p: self.p, phi })
    }

    /// A random module of the given rank with entries in `[0, bound)` and
    /// `det φ` prime to `p`.
    pub fn random(rng: &mut impl Rng, p: u64, rank: usize, bound: i64) -> PhiModule {
        loop {
            let phi = (0..rank).map(|_| (0..rank).map(|_| rng.gen_range(0..bound)).collect()).collect();
            if let Ok(m) = PhiModule::new(p, phi) {
                return m;
            }
        }
    }

    /// Whether `det(1 - φ)` is a unit mod `p`.
    pub fn one_minus_phi_is_unit(&self) -> bool {
        let s: BigInt = self.charpoly().iter().sum();
        !(s % BigInt::from(self.p)).is_zero()
    }
}

impl fmt::Display for PhiModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.phi.iter().map(|r| format!("[{}]", r.iter().map(i64::to_string).collect::<Vec<_>>().join(","))).collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// Graded φ-modules with zero differential: a model of `RΓ_c(X ⊗ F̄_q, F)`
/// by its cohomology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiComplex {
    p: u64,
    terms: Vec<(i32, PhiModule)>,
}

impl PhiComplex {
    pub fn new(p: u64, mut terms: Vec<(i32, PhiModule)>) -> Result<Self> {
        terms.sort_by_key(|(m, _)| *m);
        for w in terms.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(ZetaElError::DuplicateDegree(w[0].0));
            }
        }
        if let Some((_, m)) = terms.iter().find(|(_, m)| m.p != p) {
            return Err(ZetaElError::MixedPrimes(p, m.p));
        }
        Ok(PhiComplex { p, terms })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn terms(&self) -> &[(i32, PhiModule)] {
        &self.terms
    }

    /// `prod_m det(1 - φ u | C^m)^{(-1)^{m+1}}`.
    pub fn lfunction(&self) -> Result<RationalFn> {
        let cx: Vec<(i32, Vec<BigInt>)> = self.terms.iter().map(|(m, phi)| (*m, phi.charpoly())).collect();
        Ok(lfunction_from_cohomology(&cx)?)
    }
}

/// The pair `(X, F)` in one of the two computable forms.
#[derive(Debug, Clone)]
pub enum SiteObject {
    /// `⊔ Spec F_{q^{d_i}}` over `F_q` with module `M_i` on each component.
    Points { q: u64, components: Vec<(u32, PhiModule)> },
    /// A catalogued variety with a model of its compact-support cohomology.
    Catalog(CatalogEntry),
}

impl SiteObject {
    pub fn point(q: u64, module: PhiModule) -> Self {
        SiteObject::Points { q, components: vec![(1, module)] }
    }

    pub fn q(&self) -> u64 {
        match self {
            SiteObject::Points { q, .. } => *q,
            SiteObject::Catalog(c) => c.q,
        }
    }

    pub fn p(&self) -> Option<u64> {
        match self {
            SiteObject::Points { components, .. } => components.first().map(|(_, m)| m.p),
            SiteObject::Catalog(c) => Some(c.complex.p),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SiteObject::Points { q, components } => {
                let parts: Vec<String> = components.iter().map(|(d, m)| format!("Spec F_{q}^{d} phi={m}")).collect();
                format!("points over F_{q}: {}", parts.join(" + "))
            }
            SiteObject::Catalog(c) => c.name.clone(),
        }
    }

    /// The geometric complex without level, over `Z`.
    pub fn geometric_complex(&self) -> Result<PhiComplex> {
        match self {
            SiteObject::Points { components, .. } => {
                let p = self.p().unwrap_or(2);
                let mut total = PhiModule::zero(p)?;
                for (d, m) in components {
                    total = total.direct_sum(&m.induced(*d)?)?;
                }
                PhiComplex::new(p, vec![(0, total)])
            }
            SiteObject::Catalog(c) => Ok(c.complex.clone()),
        }
    }

    /// `L(X/F_q, F, u)`.
    pub fn lfunction(&self) -> Result<RationalFn> {
        self.geometric_complex()?.lfunction()
    }

    fn check_prime(&self, p: u64) -> Result<()> {
        let q = self.q();
        if q % p == 0 {
            return Err(ZetaElError::CharacteristicClash { p, q });
        }
        if let Some(own) = self.p() {
            if own != p {
                return Err(ZetaElError::MixedPrimes(own, p));
            }
        }
        Ok(())
    }
}

/// Coefficients of a computation: `Z/p^k` (with `Q_p` coordinates) or the
/// group ring `R_{n,k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Plain(PAdicRing),
    Group(LevelRing),
}

impl Level {
    pub fn plain(p: u64, k: u32) -> Result<Self> {
        Ok(Level::Plain(PAdicRing::new(p, k)?))
    }

    pub fn group(p: u64, k: u32, n: usize) -> Result<Self> {
        Ok(Level::Group(LevelRing::new(p, k, n)?))
    }

    pub fn p(&self) -> u64 {
        match self {
            Level::Plain(r) => r.p,
            Level::Group(r) => r.p,
        }
    }

    pub fn k(&self) -> u32 {
        match self {
            Level::Plain(r) => r.k,
            Level::Group(r) => r.k,
        }
    }

    pub fn n(&self) -> Option<usize> {
        match self {
            Level::Plain(_) => None,
            Level::Group(r) => Some(r.n),
        }
    }
}

/// A coordinate: in `Q_p` for plain coefficients, in `R_{n,k}` at a level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Coord {
    PAdic(PAdicApprox),
    Group(LevelElt),
}

impl Coord {
    /// Equality to the precision both sides carry. Indeterminate p-adic
    /// values agree with nothing.
    pub fn agrees_with(&self, other: &Coord) -> bool {
        match (self, other) {
            (Coord::PAdic(a), Coord::PAdic(b)) => !a.is_indeterminate() && !b.is_indeterminate() && a.agrees_with(b),
            (Coord::Group(a), Coord::Group(b)) => a == b,
            _ => false,
        }
    }

    pub fn mul(&self, other: &Coord) -> Coord {
        match (self, other) {
            (Coord::PAdic(a), Coord::PAdic(b)) => Coord::PAdic(a.mul(b)),
            (Coord::Group(a), Coord::Group(b)) => Coord::Group(a.ring().mul_elts(a, b)),
            _ => panic!("multiplying coordinates from different coefficient rings"),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("coordinates serialize")
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::PAdic(a) => write!(f, "{a}"),
            Coord::Group(a) => write!(f, "{a}"),
        }
    }
}

/// A complex of free modules over the coefficients of a level.
#[derive(Debug, Clone)]
pub enum TwistedComplex {
    Plain { ring: PAdicRing, terms: Vec<(i32, Matrix<PAdicApprox>)> },
    Group { ring: LevelRing, terms: Vec<(i32, Matrix<LevelElt>)> },
}

/// `RΓ_c(X ⊗ F̄_q, F)` with its Frobenius, base-changed to the coefficients
/// of `level`; at a group level Frobenius is twisted to `φ ⊗ u`.
pub fn gamma_c(s: &SiteObject, level: &Level) -> Result<TwistedComplex> {
    s.check_prime(level.p())?;
    let cx = s.geometric_complex()?;
    Ok(match level {
        Level::Plain(ring) => TwistedComplex::Plain {
            ring: *ring,
            terms: cx.terms.iter().map(|(m, phi)| (*m, phi.int_matrix().map(|x| ring.from_big(x)))).collect(),
        },
        Level::Group(ring) => {
            let u = ring.u_pow(1);
            TwistedComplex::Group {
                ring: *ring,
                terms: cx
                    .terms
                    .iter()
                    .map(|(m, phi)| {
                        let mat = phi.int_matrix().map(|x| ring.mul_elts(&ring.from_poly(std::slice::from_ref(x)), &u));
                        (*m, mat)
                    })
                    .collect(),
            }
        }
    })
}

impl TwistedComplex {
    /// `det(1 - φ t)` on each term, over the coefficient ring.
    pub fn charpolys(&self) -> Vec<(i32, Vec<Coord>)> {
        match self {
            TwistedComplex::Plain { ring, terms } => terms
                .iter()
                .map(|(m, a)| (*m, reversed_charpoly(ring, a).into_iter().map(Coord::PAdic).collect()))
                .collect(),
            TwistedComplex::Group { ring, terms } => terms
                .iter()
                .map(|(m, a)| (*m, reversed_charpoly(ring, a).into_iter().map(Coord::Group).collect()))
                .collect(),
        }
    }
}
