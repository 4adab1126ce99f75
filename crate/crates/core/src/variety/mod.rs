//! Schemes cut out by polynomials over `F_q`, point counts over `F_{q^n}`
//! and closed points as Frobenius orbits.

mod file;
mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::gf::{embed, make_field, Field, FieldElt, GfError, IndexTables};

pub use file::{parse_scheme_file, SchemeFileError};
pub use poly::{PolyParseError, Polynomial, MAX_EXPONENT};

/// Default cap on the number of tuples enumerated by one call.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Largest admissible ambient dimension.
pub const MAX_AMBIENT_DIM: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("enumeration over F_{field_size} needs {needed} tuples, budget is {budget}")]
    BudgetExceeded { field_size: u64, needed: u128, budget: u64 },
    #[error("ambient dimension {0} exceeds {MAX_AMBIENT_DIM}")]
    DimensionTooLarge(usize),
    #[error("projective equation {0} is not homogeneous")]
    NotHomogeneous(usize),
    #[error("inequations are only supported on affine space")]
    ProjectiveInequation,
    #[error("polynomial has {found} variables, the ambient space has {expected}")]
    WrongVariableCount { expected: usize, found: usize },
    #[error("polynomial is over {found}, the scheme is over {expected}")]
    WrongField { expected: String, found: String },
    #[error("extension degree must be positive")]
    ZeroDegree,
    #[error(transparent)]
    Field(#[from] GfError),
}

pub type Result<T> = std::result::Result<T, VarietyError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    Affine(usize),
    Projective(usize),
}

impl Ambient {
    pub fn dim(&self) -> usize {
        match *self {
            Ambient::Affine(n) | Ambient::Projective(n) => n,
        }
    }

    /// Number of coordinates.
    pub fn nvars(&self) -> usize {
        match *self {
            Ambient::Affine(n) => n,
            Ambient::Projective(n) => n + 1,
        }
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::Affine(n) => write!(f, "affine {n}"),
            Ambient::Projective(n) => write!(f, "projective {n}"),
        }
    }
}

/// `X = V(equations) \ V(prod inequations)` inside affine or projective space.
#[derive(Debug, Clone)]
pub struct SchemeSpec {
    base: Field,
    ambient: Ambient,
    equations: Vec<Polynomial>,
    inequations: Vec<Polynomial>,
    budget: u64,
}

impl SchemeSpec {
    pub fn new(base: Field, ambient: Ambient, equations: Vec<Polynomial>, inequations: Vec<Polynomial>) -> Result<Self> {
        if ambient.dim() > MAX_AMBIENT_DIM {
            return Err(VarietyError::DimensionTooLarge(ambient.dim()));
        }
        for f in equations.iter().chain(&inequations) {
            if f.nvars() != ambient.nvars() {
                return Err(VarietyError::WrongVariableCount { expected: ambient.nvars(), found: f.nvars() });
            }
            if f.field() != &base {
                return Err(VarietyError::WrongField { expected: format!("{base:?}"), found: format!("{:?}", f.field()) });
            }
        }
        if let Ambient::Projective(_) = ambient {
            if !inequations.is_empty() {
                return Err(VarietyError::ProjectiveInequation);
            }
            if let Some(i) = equations.iter().position(|f| !f.is_homogeneous()) {
                return Err(VarietyError::NotHomogeneous(i));
            }
        }
        Ok(SchemeSpec { base, ambient, equations, inequations, budget: DEFAULT_BUDGET })
    }

    /// Builds a scheme from equations in the text syntax of [`Polynomial::parse`].
    pub fn parse(base: Field, ambient: Ambient, equations: &[&str], inequations: &[&str]) -> std::result::Result<Self, SchemeFileError> {
        let nv = ambient.nvars();
        let parse = |s: &&str| Polynomial::parse(s, &base, nv).map_err(|e| SchemeFileError::at(s, e.offset, e.message));
        let eqs = equations.iter().map(parse).collect::<std::result::Result<Vec<_>, _>>()?;
        let ineqs = inequations.iter().map(parse).collect::<std::result::Result<Vec<_>, _>>()?;
        SchemeSpec::new(base, ambient, eqs, ineqs).map_err(SchemeFileError::Invalid)
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    pub fn inequations(&self) -> &[Polynomial] {
        &self.inequations
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    /// SHA-256 of a canonical description; equal schemes written differently
    /// (term order, spacing) share a digest. The budget is not part of it.
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("p={};e={};{}\n", self.base.char(), self.base.degree(), self.ambient));
        for f in &self.equations {
            h.update(format!("eq {}\n", f.canonical()));
        }
        for f in &self.inequations {
            h.update(format!("ne {}\n", f.canonical()));
        }
        hex::encode(h.finalize())
    }

    /// Number of tuples [`count_points`] enumerates over `F_{q^n}`.
    pub fn enumeration_size(&self, n: u32) -> u128 {
        let big_q = (self.base.size() as u128).saturating_pow(n);
        match self.ambient {
            Ambient::Affine(d) => big_q.saturating_pow(d as u32),
            Ambient::Projective(d) => (0..=d as u32).fold(0u128, |acc, j| acc.saturating_add(big_q.saturating_pow(j))),
        }
    }

    fn check_budget(&self, n: u32) -> Result<()> {
        let needed = self.enumeration_size(n);
        if needed > self.budget as u128 {
            return Err(VarietyError::BudgetExceeded {
                field_size: (self.base.size() as u128).saturating_pow(n).min(u64::MAX as u128) as u64,
                needed,
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn extension(&self, n: u32) -> Result<Field> {
        if n == 0 {
            return Err(VarietyError::ZeroDegree);
        }
        let e = self.base.degree().checked_mul(n).ok_or(GfError::OutOfBounds { p: self.base.char(), e: u32::MAX })?;
        Ok(make_field(self.base.char(), e)?)
    }
}

/// A polynomial prepared for evaluation on element indices: each term is a
/// coefficient logarithm and its variable exponents.
struct Compiled {
    terms: Vec<(u64, Vec<(usize, u64)>)>,
}

impl Compiled {
    fn new(f: &Polynomial, ext: &Field, t: &IndexTables) -> Self {
        let terms = f
            .terms()
            .map(|(exps, c)| {
                let img = embed(f.field(), ext, c).expect("base embeds in its extensions");
                let log = t.log(img.index() as u32).expect("stored coefficients are nonzero") as u64;
                let vars = exps.iter().enumerate().filter(|(_, &e)| e > 0).map(|(i, &e)| (i, e as u64)).collect();
                (log, vars)
            })
            .collect();
        Compiled { terms }
    }

    #[inline]
    fn eval(&self, t: &IndexTables, logs: &[Option<u32>]) -> u32 {
        let mut acc = 0u32;
        'terms: for (c, vars) in &self.terms {
            let mut l = *c;
            for &(i, e) in vars {
                match logs[i] {
                    Some(li) => l += li as u64 * e,
                    None => continue 'terms,
                }
            }
            acc = t.add(acc, t.exp(l));
        }
        acc
    }
}

struct Evaluator {
    tables: std::sync::Arc<IndexTables>,
    equations: Vec<Compiled>,
    inequations: Vec<Compiled>,
}

impl Evaluator {
    fn new(s: &SchemeSpec, ext: &Field) -> Self {
        let tables = ext.tables();
        let equations = s.equations.iter().map(|f| Compiled::new(f, ext, &tables)).collect();
        let inequations = s.inequations.iter().map(|f| Compiled::new(f, ext, &tables)).collect();
        Evaluator { tables, equations, inequations }
    }

    fn accepts(&self, x: &[u32], logs: &mut [Option<u32>]) -> bool {
        let t = &*self.tables;
        for (l, &xi) in logs.iter_mut().zip(x) {
            *l = t.log(xi);
        }
        self.equations.iter().all(|f| f.eval(t, logs) == 0) && self.inequations.iter().all(|f| f.eval(t, logs) != 0)
    }
}

/// Calls `visit` on every tuple of `x[from..]` over `0..q`, with `x[..from]`
/// fixed.
fn odometer(x: &mut [u32], from: usize, q: u32, mut visit: impl FnMut(&[u32])) {
    for v in &mut x[from..] {
        *v = 0;
    }
    loop {
        visit(x);
        let mut i = x.len();
        loop {
            if i == from {
                return;
            }
            i -= 1;
            x[i] += 1;
            if x[i] < q {
                break;
            }
            x[i] = 0;
        }
    }
}

/// Visits every point of the ambient space over the field of `q` elements,
/// projective points as normalized representatives. Work is split across
/// threads by the first free coordinate; `visit` runs per worker on a local
/// accumulator.
fn enumerate<A: Send>(
    ambient: Ambient,
    q: u32,
    one: u32,
    init: impl Fn() -> A + Sync,
    visit: impl Fn(&mut A, &[u32]) + Sync,
) -> Vec<A> {
    let nv = ambient.nvars();
    // (number of leading zeros, whether a normalized 1 follows)
    let shapes: Vec<(usize, bool)> = match ambient {
        Ambient::Affine(_) => vec![(0, false)],
        Ambient::Projective(d) => (0..=d).map(|j| (j, true)).collect(),
    };
    let mut out = Vec::new();
    for (zeros, normalized) in shapes {
        let fixed = zeros + usize::from(normalized);
        let run = |first: Option<u32>| {
            let mut acc = init();
            let mut x = vec![0u32; nv];
            if normalized {
                x[zeros] = one;
            }
            let from = match first {
                Some(v) => {
                    x[fixed] = v;
                    fixed + 1
                }
                None => fixed,
            };
            odometer(&mut x, from, q, |t| visit(&mut acc, t));
            acc
        };
        if fixed < nv {
            out.extend((0..q).into_par_iter().map(|v| run(Some(v))).collect::<Vec<_>>());
        } else {
            out.push(run(None));
        }
    }
    out
}

fn memo() -> &'static Mutex<HashMap<(String, u32), u64>> {
    static MEMO: OnceLock<Mutex<HashMap<(String, u32), u64>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `#X(F_{q^n})` by exhaustive enumeration.
pub fn count_points(s: &SchemeSpec, n: u32) -> Result<u64> {
    let key = (s.digest(), n);
    if let Some(&c) = memo().lock().unwrap().get(&key) {
        return Ok(c);
    }
    s.check_budget(n)?;
    let ext = s.extension(n)?;
    let ev = Evaluator::new(s, &ext);
    let q = ext.size() as u32;
    let one = ev.tables.one();
    let nv = s.ambient.nvars();
    let parts = enumerate(
        s.ambient,
        q,
        one,
        || (0u64, vec![None; nv]),
        |(count, logs), x| {
            if ev.accepts(x, logs) {
                *count += 1;
            }
        },
    );
    let total = parts.into_iter().map(|(c, _)| c).sum();
    memo().lock().unwrap().insert(key, total);
    Ok(total)
}

/// `(#X(F_q), ..., #X(F_{q^N}))`, reusing memoized counts.
pub fn count_series(s: &SchemeSpec, big_n: u32) -> Result<Vec<u64>> {
    (1..=big_n).map(|n| count_points(s, n)).collect()
}

/// A closed point: a Frobenius orbit of geometric points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedPoint {
    pub degree: u32,
    /// The orbit, starting at its lexicographically smallest tuple and
    /// proceeding by the `q`-power map on coordinates.
    pub orbit: Vec<Vec<FieldElt>>,
}

impl ClosedPoint {
    pub fn representative(&self) -> &[FieldElt] {
        &self.orbit[0]
    }
}

impl fmt::Display for ClosedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = self.representative().iter().map(|c| c.to_string()).collect();
        write!(f, "deg {} ({})", self.degree, coords.join(", "))
    }
}

/// All closed points of degree at most `max_degree`, by increasing degree.
pub fn closed_points(s: &SchemeSpec, max_degree: u32) -> Result<Vec<ClosedPoint>> {
    for d in 1..=max_degree {
        s.check_budget(d)?;
    }
    let q = s.base.size();
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let ext = s.extension(d)?;
        let ev = Evaluator::new(s, &ext);
        let t = ev.tables.clone();
        let nv = s.ambient.nvars();
        let frob = |x: &[u32]| -> Vec<u32> { x.iter().map(|&c| t.pow(c, q)).collect() };
        let parts = enumerate(
            s.ambient,
            ext.size() as u32,
            t.one(),
            || (Vec::new(), vec![None; nv]),
            |(found, logs): &mut (Vec<Vec<Vec<u32>>>, Vec<Option<u32>>), x| {
                if !ev.accepts(x, logs) {
                    return;
                }
                let mut orbit = vec![x.to_vec()];
                loop {
                    let next = frob(orbit.last().unwrap());
                    if next.as_slice() == x {
                        break;
                    }
                    if next.as_slice() < x || orbit.len() >= d as usize {
                        return;
                    }
                    orbit.push(next);
                }
                if orbit.len() == d as usize {
                    found.push(orbit);
                }
            },
        );
        let mut orbits: Vec<Vec<Vec<u32>>> = parts.into_iter().flat_map(|(f, _)| f).collect();
        orbits.sort();
        out.extend(orbits.into_iter().map(|orbit| ClosedPoint {
            degree: d,
            orbit: orbit.into_iter().map(|x| x.into_iter().map(|c| ext.element(c as u64)).collect()).collect(),
        }));
    }
    Ok(out)
}
