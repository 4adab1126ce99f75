//! Checks relating zeta elements to L-functions and to each other.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Value};

use super::element::{acyclicity_coordinate, zeta_element, Acyclicity};
use super::{Coord, Level, PhiModule, Result, SiteObject, ZetaElError, CONVENTION};
use crate::coeff::{eval_at_one, project, reduce_precision, reduce_rational, LevelElt, Reduction};
use crate::zetafn::{euler_product, series_equal_through, LocalFactor};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    /// The identity's hypothesis does not hold for this input.
    HypothesisFailure,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "INCONCLUSIVE",
            Verdict::HypothesisFailure => "HYPOTHESIS-FAILURE",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelInfo {
    pub p: u64,
    pub k: u32,
    pub n: Option<usize>,
}

impl LevelInfo {
    fn of(level: &Level) -> Self {
        LevelInfo { p: level.p(), k: level.k(), n: level.n() }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub check: String,
    pub object: String,
    pub level: LevelInfo,
    pub lhs: Value,
    pub rhs: Value,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub convention: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
    #[serde(skip)]
    pub lhs_text: String,
    #[serde(skip)]
    pub rhs_text: String,
}

impl Report {
    pub fn new(check: &str, object: &str, level: LevelInfo) -> Self {
        Report {
            check: check.to_string(),
            object: object.to_string(),
            level,
            lhs: Value::Null,
            rhs: Value::Null,
            verdict: Verdict::Inconclusive,
            seed: None,
            convention: CONVENTION.to_string(),
            detail: String::new(),
            lhs_text: String::new(),
            rhs_text: String::new(),
        }
    }

    pub fn sides(mut self, lhs: Value, lhs_text: String, rhs: Value, rhs_text: String) -> Self {
        (self.lhs, self.lhs_text, self.rhs, self.rhs_text) = (lhs, lhs_text, rhs, rhs_text);
        self
    }

    pub fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }

    /// Appends a note.
    pub fn detail(mut self, d: impl Into<String>) -> Self {
        if !self.detail.is_empty() {
            self.detail += "; ";
        }
        self.detail += &d.into();
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.level.n.map_or(String::new(), |n| format!(" n={n}"));
        writeln!(f, "[{}] {} on {} (p={} k={}{n})", self.verdict, self.check, self.object, self.level.p, self.level.k)?;
        writeln!(f, "  lhs: {}", self.lhs_text)?;
        write!(f, "  rhs: {}", self.rhs_text)?;
        if !self.detail.is_empty() {
            write!(f, "\n  note: {}", self.detail)?;
        }
        if let Some(seed) = self.seed {
            write!(f, "\n  seed: {seed}")?;
        }
        Ok(())
    }
}

fn side(a: &Acyclicity) -> (Value, String) {
    match a {
        Acyclicity::Value(c) => (c.to_json(), c.to_string()),
        Acyclicity::Inconclusive { reason } => (json!({ "inconclusive": reason }), format!("undefined ({reason})")),
    }
}

fn elt_side(e: &LevelElt) -> (Value, String) {
    (serde_json::to_value(e).expect("serializable"), e.to_string())
}

fn coordinate(s: &SiteObject, level: &Level) -> Result<Acyclicity> {
    Ok(acyclicity_coordinate(&zeta_element(s, level)?))
}

fn group_coordinate(s: &SiteObject, p: u64, k: u32, n: usize) -> Result<Option<LevelElt>> {
    Ok(match coordinate(s, &Level::group(p, k, n)?)? {
        Acyclicity::Value(Coord::Group(e)) => Some(e),
        _ => None,
    })
}

fn prime_of(s: &SiteObject) -> Result<u64> {
    s.p().ok_or(ZetaElError::EmptyObject)
}

/// Whether the Euler product over the components of a points object agrees
/// with the expansion of its L-function through `u^order`. `None` for
/// catalogued varieties, which carry no closed-point data.
pub fn check_regimes(s: &SiteObject, order: usize) -> Result<Option<bool>> {
    let SiteObject::Points { components, .. } = s else {
        return Ok(None);
    };
    let factors: Vec<LocalFactor> =
        components.iter().map(|(d, m)| LocalFactor { degree: *d as usize, charpoly: m.charpoly() }).collect();
    let euler = euler_product(&factors, order, order)?;
    Ok(Some(series_equal_through(&euler, &s.lfunction()?.expand(order), order)))
}

/// The L-function reduced into `R_{n,k}` against the acyclicity coordinate
/// of the zeta element at that level.
pub fn verify_zeta_eq_element(s: &SiteObject, n: usize, k: u32) -> Result<Report> {
    let level = Level::group(prime_of(s)?, k, n)?;
    let Level::Group(ring) = level else { unreachable!() };
    let lhs = coordinate(s, &level)?;
    let l = s.lfunction()?;
    let rhs = reduce_rational(&l, &ring);
    let (lj, lt) = side(&lhs);
    let (rj, rt) = match &rhs {
        Reduction::Defined(e) => elt_side(e),
        Reduction::Inconclusive { image_mod_p } => (
            json!({ "inconclusive": "denominator is not a unit", "image_mod_p": image_mod_p }),
            format!("undefined (denominator mod p is {image_mod_p:?}, not a unit)"),
        ),
    };
    let regimes = check_regimes(s, n + 2)?;
    let verdict = match (lhs.value(), &rhs) {
        _ if regimes == Some(false) => Verdict::Fail,
        (Some(Coord::Group(a)), Reduction::Defined(b)) if a == b => Verdict::Pass,
        (Some(_), Reduction::Defined(_)) => Verdict::Fail,
        _ => Verdict::Inconclusive,
    };
    let mut detail = format!("L = {l}");
    if let Some(ok) = regimes {
        detail += if ok { "; Euler product agrees" } else { "; Euler product DISAGREES" };
        detail += &format!(" through u^{}", n + 2);
    }
    Ok(Report::new("zeta-eq-element", &s.describe(), LevelInfo::of(&level)).sides(lj, lt, rj, rt).verdict(verdict).detail(detail))
}

/// `L(1)` in `Q_p` against the acyclicity coordinate without level, when
/// `1 - φ` is injective on every term over `Q`.
pub fn verify_zeta_value(s: &SiteObject, k: u32) -> Result<Report> {
    let level = Level::plain(prime_of(s)?, k)?;
    let report = Report::new("zeta-value", &s.describe(), LevelInfo::of(&level));
    let cx = s.geometric_complex()?;
    if let Some((m, _)) = cx.terms().iter().find(|(_, phi)| phi.charpoly().iter().sum::<num_bigint::BigInt>().is_zero()) {
        return Ok(report
            .verdict(Verdict::HypothesisFailure)
            .detail(format!("det(1 - phi) = 0 on degree {m}: cohomology does not vanish rationally")));
    }
    let lhs = coordinate(s, &level)?;
    let l = s.lfunction()?;
    let rhs = eval_at_one(&l, level.p(), k)?;
    let (lj, lt) = side(&lhs);
    let verdict = match lhs.value() {
        Some(c) if c.agrees_with(&Coord::PAdic(rhs)) => Verdict::Pass,
        Some(_) => Verdict::Fail,
        None => Verdict::Inconclusive,
    };
    Ok(report
        .sides(lj, lt, json!(rhs), rhs.to_string())
        .verdict(verdict)
        .detail(format!("L = {l}, L(1) = {}", num_rational::BigRational::new(l.at_one().0, l.at_one().1))))
}

/// Pairs of coordinates where a transition map was checked.
struct Comparisons {
    lhs: Vec<Value>,
    rhs: Vec<Value>,
    text: (Vec<String>, Vec<String>),
    failed: bool,
    undefined: bool,
}

impl Comparisons {
    fn new() -> Self {
        Comparisons { lhs: Vec::new(), rhs: Vec::new(), text: (Vec::new(), Vec::new()), failed: false, undefined: false }
    }

    fn push(&mut self, a: Option<LevelElt>, b: Option<LevelElt>) {
        match (a, b) {
            (Some(a), Some(b)) => {
                self.failed |= a != b;
                let ((aj, at), (bj, bt)) = (elt_side(&a), elt_side(&b));
                self.lhs.push(aj);
                self.rhs.push(bj);
                self.text.0.push(at);
                self.text.1.push(bt);
            }
            _ => {
                self.undefined = true;
                self.lhs.push(Value::Null);
                self.rhs.push(Value::Null);
                self.text.0.push("undefined".into());
                self.text.1.push("undefined".into());
            }
        }
    }

    /// Fail on any mismatch; Pass when every comparison that could be made
    /// agreed, and at least one could be made or none was asked for.
    fn verdict(&self) -> Verdict {
        let defined = self.lhs.iter().filter(|v| !v.is_null()).count();
        if self.failed {
            Verdict::Fail
        } else if defined == 0 && self.undefined {
            Verdict::Inconclusive
        } else {
            Verdict::Pass
        }
    }

    fn skipped(&self) -> usize {
        self.lhs.iter().filter(|v| v.is_null()).count()
    }

    fn into_report(self, r: Report) -> Report {
        let v = self.verdict();
        let r = match self.skipped() {
            0 => r,
            m => r.detail(format!("{m} comparison(s) skipped: coordinate undefined at that level")),
        };
        r.sides(Value::Array(self.lhs), self.text.0.join("; "), Value::Array(self.rhs), self.text.1.join("; ")).verdict(v)
    }
}

/// `z_{n'}` projected to level `n` against `z_n`, and `z_n` at precision
/// `k` reduced to `k - 1` against `z_n` computed at `k - 1`.
pub fn verify_base_change(s: &SiteObject, n_big: usize, n: usize, k: u32) -> Result<Report> {
    if n == 0 || n_big % n != 0 {
        return Err(ZetaElError::NotDivisorChain(vec![n, n_big]));
    }
    let p = prime_of(s)?;
    let level = Level::group(p, k, n)?;
    let big = group_coordinate(s, p, k, n_big)?;
    let small = group_coordinate(s, p, k, n)?;
    let mut cmp = Comparisons::new();
    cmp.push(big.map(|z| project(&z, n)).transpose()?, small.clone());
    if k > 1 {
        let lower = group_coordinate(s, p, k - 1, n)?;
        cmp.push(small.map(|z| reduce_precision(&z, k - 1)).transpose()?, lower);
    }
    let detail = format!("projection R_({n_big},{k}) -> R_({n},{k})") + if k > 1 { ", then precision k -> k-1" } else { "" };
    Ok(cmp.into_report(Report::new("base-change", &s.describe(), LevelInfo::of(&level))).detail(detail))
}

/// The adjacent projections along a divisor chain `n_1 | n_2 | ...`.
pub fn verify_norm_system(s: &SiteObject, chain: &[usize], k: u32) -> Result<Report> {
    if chain.is_empty() || chain[0] == 0 || chain.windows(2).any(|w| w[1] % w[0] != 0) {
        return Err(ZetaElError::NotDivisorChain(chain.to_vec()));
    }
    let p = prime_of(s)?;
    let top = *chain.last().unwrap();
    let coords = chain.iter().map(|&n| group_coordinate(s, p, k, n)).collect::<Result<Vec<_>>>()?;
    let mut cmp = Comparisons::new();
    for (i, w) in coords.windows(2).enumerate() {
        cmp.push(w[1].as_ref().map(|z| project(z, chain[i])).transpose()?, w[0].clone());
    }
    let chain_text = chain.iter().map(usize::to_string).collect::<Vec<_>>().join("|");
    let report = Report::new("norm", &s.describe(), LevelInfo { p, k, n: Some(top) });
    Ok(cmp.into_report(report).detail(format!("chain {chain_text}")))
}

fn check_blocks(sub: &PhiModule, total: &PhiModule, quot: &PhiModule) -> Result<()> {
    let (a, b) = (sub.rank(), quot.rank());
    if total.rank() != a + b {
        return Err(ZetaElError::BlockMismatch(format!("rank {} is not {a} + {b}", total.rank())));
    }
    let t = total.phi();
    for i in 0..a + b {
        for j in 0..a + b {
            let want = match (i < a, j < a) {
                (true, true) => Some(sub.phi()[i][j]),
                (false, false) => Some(quot.phi()[i - a][j - a]),
                (false, true) => Some(0),
                (true, false) => None,
            };
            if want.is_some_and(|w| w != t[i][j]) {
                return Err(ZetaElError::BlockMismatch(format!("entry ({i},{j}) of total is {}", t[i][j])));
            }
        }
    }
    Ok(())
}

/// For `0 -> sub -> total -> quot -> 0` on a point over `F_q` (`total` block
/// upper triangular), `z(total) = z(sub) z(quot)`.
pub fn verify_triangle(q: u64, sub: &PhiModule, total: &PhiModule, quot: &PhiModule, level: &Level) -> Result<Report> {
    check_blocks(sub, total, quot)?;
    let z = |m: &PhiModule| coordinate(&SiteObject::point(q, m.clone()), level);
    let (zt, zs, zq) = (z(total)?, z(sub)?, z(quot)?);
    let object = format!("point over F_{q}: {sub} -> {total} -> {quot}");
    let report = Report::new("triangle", &object, LevelInfo::of(level));
    let (lj, lt) = side(&zt);
    Ok(match (zt.value(), zs.value(), zq.value()) {
        (Some(t), Some(a), Some(b)) => {
            let prod = a.mul(b);
            let v = if t.agrees_with(&prod) { Verdict::Pass } else { Verdict::Fail };
            report.sides(lj, lt, prod.to_json(), prod.to_string()).verdict(v)
        }
        _ => {
            let text = format!("{} * {}", side(&zs).1, side(&zq).1);
            report.sides(lj, lt, json!([side(&zs).0, side(&zq).0]), text).verdict(Verdict::Inconclusive)
        }
    })
}

/// The induced module written in the basis `e_(a,i) -> a d + i`, where
/// Frobenius sends `e_(a,i)` to `e_(a,i+1)` and `e_(b,d-1)` to
/// `sum_a φ_ab e_(a,0)`.
fn interleaved_induction(m: &PhiModule, d: u32) -> Result<PhiModule> {
    if d == 0 {
        return Err(ZetaElError::ZeroDegree);
    }
    let (r, d) = (m.rank(), d as usize);
    let mut phi = vec![vec![0i64; r * d]; r * d];
    for a in 0..r {
        for i in 0..d - 1 {
            phi[a * d + i + 1][a * d + i] = 1;
        }
        for b in 0..r {
            phi[a * d][b * d + d - 1] = m.phi()[a][b];
        }
    }
    PhiModule::new(m.p(), phi)
}

/// `z(Spec F_{q^d}, M)` against `z(Spec F_q, Ind M)`.
pub fn verify_pushforward(q: u64, d: u32, m: &PhiModule, level: &Level) -> Result<Report> {
    let upstairs = SiteObject::Points { q, components: vec![(d, m.clone())] };
    let pushed = SiteObject::point(q, interleaved_induction(m, d)?);
    let (a, b) = (coordinate(&upstairs, level)?, coordinate(&pushed, level)?);
    let verdict = match (a.value(), b.value()) {
        (Some(x), Some(y)) if x.agrees_with(y) => Verdict::Pass,
        (Some(_), Some(_)) => Verdict::Fail,
        (None, None) => Verdict::Inconclusive,
        _ => Verdict::Fail,
    };
    let ((lj, lt), (rj, rt)) = (side(&a), side(&b));
    Ok(Report::new("pushforward", &upstairs.describe(), LevelInfo::of(level))
        .sides(lj, lt, rj, rt)
        .verdict(verdict)
        .detail(format!("pushed to F_{q}: phi = {}", pushed_module_text(&pushed))))
}

fn pushed_module_text(s: &SiteObject) -> String {
    match s {
        SiteObject::Points { components, .. } => components[0].1.to_string(),
        SiteObject::Catalog(c) => c.name.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(p: u64, c: i64) -> PhiModule {
        PhiModule::scalar(p, c).unwrap()
    }

    #[test]
    fn zeta_eq_element_examples() {
        let s = SiteObject::point(3, scalar(5, 2));
        let r = verify_zeta_eq_element(&s, 3, 1).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.lhs_text, "2 + 4u + 3u^2");
        assert_eq!(r.rhs_text, "2 + 4u + 3u^2");
        let s = SiteObject::point(3, scalar(5, 1));
        for n in [1, 3, 4] {
            assert_eq!(verify_zeta_eq_element(&s, n, 2).unwrap().verdict, Verdict::Inconclusive);
        }
        let e = super::super::catalog_entry("E/F2", 5).unwrap();
        assert_eq!(verify_zeta_eq_element(&SiteObject::Catalog(e), 3, 1).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn zeta_value_examples() {
        let r = verify_zeta_value(&SiteObject::point(2, scalar(5, 2)), 2).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.lhs_text, "24 + O(5^2)");
        let m = PhiModule::diagonal(7, &[2, 3]).unwrap();
        let r = verify_zeta_value(&SiteObject::point(2, m), 3).unwrap();
        assert_eq!((r.verdict, r.lhs_text.as_str()), (Verdict::Pass, "172 + O(7^3)"));
        let r = verify_zeta_value(&SiteObject::point(2, scalar(5, 1)), 2).unwrap();
        assert_eq!(r.verdict, Verdict::HypothesisFailure);
    }

    #[test]
    fn base_change_and_norm_examples() {
        let s = SiteObject::point(2, scalar(5, 2));
        assert_eq!(verify_base_change(&s, 6, 3, 2).unwrap().verdict, Verdict::Pass);
        assert_eq!(verify_base_change(&s, 3, 3, 3).unwrap().verdict, Verdict::Pass);
        // 1 - 2u vanishes at u = 3, a fourth root of unity mod 5
        assert_eq!(verify_base_change(&s, 4, 4, 3).unwrap().verdict, Verdict::Inconclusive);
        assert!(verify_base_change(&s, 6, 4, 1).is_err());
        assert_eq!(verify_norm_system(&s, &[1, 2, 6, 12], 2).unwrap().verdict, Verdict::Pass);
        assert_eq!(verify_norm_system(&s, &[5], 2).unwrap().verdict, Verdict::Pass);
        assert!(verify_norm_system(&s, &[1, 2, 4, 12, 5], 2).is_err());
        let c = SiteObject::point(2, PhiModule::companion(5, &[0, 2]).unwrap());
        assert_eq!(verify_norm_system(&c, &[1, 3], 2).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn triangle_examples() {
        let lvl = Level::group(7, 2, 4).unwrap();
        let total = PhiModule::diagonal(7, &[2, 3]).unwrap();
        assert_eq!(verify_triangle(2, &scalar(7, 2), &total, &scalar(7, 3), &lvl).unwrap().verdict, Verdict::Pass);
        let skew = PhiModule::new(7, vec![vec![2, 5], vec![0, 3]]).unwrap();
        assert_eq!(verify_triangle(2, &scalar(7, 2), &skew, &scalar(7, 3), &lvl).unwrap().verdict, Verdict::Pass);
        let zero = PhiModule::zero(7).unwrap();
        assert_eq!(verify_triangle(2, &zero, &scalar(7, 3), &scalar(7, 3), &lvl).unwrap().verdict, Verdict::Pass);
        let lower = PhiModule::new(7, vec![vec![2, 0], vec![1, 3]]).unwrap();
        assert!(matches!(
            verify_triangle(2, &scalar(7, 2), &lower, &scalar(7, 3), &lvl),
            Err(ZetaElError::BlockMismatch(_))
        ));
    }

    #[test]
    fn pushforward_examples() {
        let lvl = Level::group(5, 2, 3).unwrap();
        for (d, c) in [(1, 2), (3, 2), (2, 3)] {
            assert_eq!(verify_pushforward(2, d, &scalar(5, c), &lvl).unwrap().verdict, Verdict::Pass);
        }
        // φ = 1 pushed along F_4 / F_2: 1 - u^2 is never a unit
        assert_eq!(verify_pushforward(2, 2, &scalar(5, 1), &lvl).unwrap().verdict, Verdict::Inconclusive);
        let plain = Level::plain(7, 3).unwrap();
        let m = PhiModule::new(7, vec![vec![1, 2], vec![3, 1]]).unwrap();
        assert_eq!(verify_pushforward(2, 3, &m, &plain).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn regimes_agree_on_points() {
        let s = SiteObject::Points {
            q: 3,
            components: vec![(1, scalar(5, 2)), (2, PhiModule::companion(5, &[1, 3]).unwrap())],
        };
        assert_eq!(check_regimes(&s, 8).unwrap(), Some(true));
    }

    #[test]
    fn report_json_carries_convention() {
        let r = verify_zeta_eq_element(&SiteObject::point(3, scalar(5, 2)), 3, 1).unwrap().with_seed(9);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["convention"], CONVENTION);
        assert_eq!(v["level"], json!({"p": 5, "k": 1, "n": 3}));
        assert_eq!(v["verdict"], "Pass");
        assert_eq!(v["lhs"]["coeffs"], json!([2, 4, 3]));
        assert_eq!(v["seed"], 9);
    }
}
