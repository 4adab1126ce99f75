//! Zeta elements as points of determinant lines.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::det::{basis_change_factor, level_torsion, random_invertible, torsion, BasedComplex};
use super::{gamma_c, Coord, Level, Result, SiteObject, TwistedComplex};
use crate::algebra::CommRing;
use crate::coeff::{LevelRing, PAdicRing};

/// A determinant line `det^{-1} F` with a chosen basis of `F`, and a point
/// on it given by its coordinate against the generator dual to that basis.
#[derive(Debug, Clone, Serialize)]
pub struct DetLine {
    pub generator: String,
    pub coordinate: Coord,
}

#[derive(Debug, Clone)]
enum Based {
    Plain(BasedComplex<PAdicRing>),
    Group(BasedComplex<LevelRing>),
}

/// The zeta element of `(X, F)` at a level.
#[derive(Debug, Clone)]
pub struct ZetaElement {
    object: String,
    level: Level,
    complex: Based,
    line: DetLine,
}

impl ZetaElement {
    pub fn object(&self) -> &str {
        &self.object
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn line(&self) -> &DetLine {
        &self.line
    }

    pub fn coordinate(&self) -> &Coord {
        &self.line.coordinate
    }

    /// Ranks of the terms of `RΓ_c`, lowest degree first.
    pub fn ranks(&self) -> Vec<usize> {
        match &self.complex {
            Based::Plain(c) => c.ranks().to_vec(),
            Based::Group(c) => c.ranks().to_vec(),
        }
    }

    /// The same element after a random change of basis of every term,
    /// drawn from `seed`.
    pub fn rebased(&self, seed: u64) -> ZetaElement {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (complex, coordinate) = match (&self.complex, &self.line.coordinate) {
            (Based::Plain(c), Coord::PAdic(x)) => {
                let ps: Vec<_> = c.ranks().iter().map(|&r| random_invertible(c.ring(), r, &mut rng)).collect();
                let f = basis_change_factor(c.ring(), c.start(), &ps);
                (Based::Plain(c.rebased(&ps)), Coord::PAdic(x.mul(&f)))
            }
            (Based::Group(c), Coord::Group(x)) => {
                let ps: Vec<_> = c.ranks().iter().map(|&r| random_invertible(c.ring(), r, &mut rng)).collect();
                let f = basis_change_factor(c.ring(), c.start(), &ps);
                (Based::Group(c.rebased(&ps)), Coord::Group(c.ring().mul(x, &f)))
            }
            _ => unreachable!("coordinate matches complex"),
        };
        ZetaElement {
            object: self.object.clone(),
            level: self.level,
            complex,
            line: DetLine { generator: format!("{} rebased with seed {seed}", self.line.generator), coordinate },
        }
    }
}

/// Builds `ζ(X, F)` at `level`. `Fib(1 - φ)` is the cone of a map between
/// two copies of the same complex, so `det^{-1}` of it is canonically
/// trivial; `ζ` is the image of `1` there, and has coordinate `1` against
/// the generator of the term-wise matching basis.
pub fn zeta_element(s: &SiteObject, level: &Level) -> Result<ZetaElement> {
    let complex = match gamma_c(s, level)? {
        TwistedComplex::Plain { ring, terms } => Based::Plain(BasedComplex::fiber(ring, &terms)),
        TwistedComplex::Group { ring, terms } => Based::Group(BasedComplex::fiber(ring, &terms)),
    };
    let coordinate = match level {
        Level::Plain(r) => Coord::PAdic(r.one()),
        Level::Group(r) => Coord::Group(r.one()),
    };
    Ok(ZetaElement {
        object: s.describe(),
        level: *level,
        complex,
        line: DetLine { generator: "matched bases of C^{m-1} + C^m".to_string(), coordinate },
    })
}

/// A coordinate of `ζ` under the trivialization of `det F` by acyclicity,
/// or why none is available.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Acyclicity {
    Value(Coord),
    Inconclusive { reason: String },
}

impl Acyclicity {
    pub fn value(&self) -> Option<&Coord> {
        match self {
            Acyclicity::Value(c) => Some(c),
            Acyclicity::Inconclusive { .. } => None,
        }
    }
}

/// `ζ` read through the acyclicity trivialization `det^{-1} F ≅ R`.
pub fn acyclicity_coordinate(z: &ZetaElement) -> Acyclicity {
    match (&z.complex, &z.line.coordinate) {
        (Based::Plain(c), Coord::PAdic(x)) => match torsion(c) {
            Some(tau) if !tau.is_indeterminate() => Acyclicity::Value(Coord::PAdic(x.div(&tau).expect("determinate torsion"))),
            _ => Acyclicity::Inconclusive {
                reason: format!("1 - phi is not invertible to precision p^{}", c.ring().k),
            },
        },
        (Based::Group(c), Coord::Group(x)) => match level_torsion(c).and_then(|t| t.invert().ok()) {
            Some(inv) => Acyclicity::Value(Coord::Group(c.ring().mul(x, &inv))),
            None => Acyclicity::Inconclusive { reason: "det(1 - phi u) is not a unit of the level ring".to_string() },
        },
        _ => unreachable!("coordinate matches complex"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zetael::{PhiModule, SiteObject};
    use proptest::prelude::*;

    fn coord(s: &SiteObject, level: &Level) -> Acyclicity {
        acyclicity_coordinate(&zeta_element(s, level).unwrap())
    }

    #[test]
    fn single_point_at_level() {
        // φ = 2 on a point over F_3, p = 5, level (3, 1): (1 - 2u)^{-1} = 2 + 4u + 3u^2
        let s = SiteObject::point(3, PhiModule::scalar(5, 2).unwrap());
        let lvl = Level::group(5, 1, 3).unwrap();
        let Level::Group(ring) = lvl else { unreachable!() };
        assert_eq!(coord(&s, &lvl), Acyclicity::Value(Coord::Group(ring.element(&[2, 4, 3]))));
    }

    #[test]
    fn zero_module_gives_one() {
        let s = SiteObject::point(3, PhiModule::zero(5).unwrap());
        let lvl = Level::group(5, 2, 4).unwrap();
        let Level::Group(ring) = lvl else { unreachable!() };
        assert_eq!(coord(&s, &lvl), Acyclicity::Value(Coord::Group(ring.one())));
        let plain = Level::plain(5, 2).unwrap();
        assert_eq!(coord(&s, &plain).value().unwrap().to_string(), "1 + O(5^2)");
    }

    #[test]
    fn plain_rank_one_and_non_unit() {
        let lvl = Level::plain(5, 3).unwrap();
        let s = SiteObject::point(2, PhiModule::scalar(5, 3).unwrap());
        let want = Coord::PAdic(crate::coeff::PAdicApprox::from_ratio(5, &(-1).into(), &2.into(), 3).unwrap());
        assert!(coord(&s, &lvl).value().unwrap().agrees_with(&want));
        // 1 - φ = -5: coordinate -1/5 with reduced relative precision
        let s = SiteObject::point(2, PhiModule::scalar(5, 6).unwrap());
        let Acyclicity::Value(Coord::PAdic(x)) = coord(&s, &lvl) else { panic!() };
        assert_eq!(x.val, -1);
        // 1 - φ = 0 exactly
        let s = SiteObject::point(2, PhiModule::scalar(5, 1).unwrap());
        assert!(matches!(coord(&s, &lvl), Acyclicity::Inconclusive { .. }));
    }

    #[test]
    fn non_unit_at_level_is_inconclusive() {
        // 1 - u vanishes under the augmentation
        let s = SiteObject::point(2, PhiModule::scalar(5, 1).unwrap());
        assert!(matches!(coord(&s, &Level::group(5, 1, 3).unwrap()), Acyclicity::Inconclusive { .. }));
    }

    fn arb_module(p: u64, max_rank: usize) -> impl Strategy<Value = PhiModule> {
        (0..=max_rank, any::<u64>()).prop_map(move |(r, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            PhiModule::random(&mut rng, p, r, 30)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn basis_independence(m in arb_module(5, 3), n in 1usize..=4, seed in any::<u64>()) {
            let lvl = Level::group(5, 2, n).unwrap();
            let z = zeta_element(&SiteObject::point(3, m), &lvl).unwrap();
            prop_assert_eq!(acyclicity_coordinate(&z), acyclicity_coordinate(&z.rebased(seed)));
        }

        #[test]
        fn basis_independence_plain(m in arb_module(7, 3), seed in any::<u64>()) {
            let lvl = Level::plain(7, 4).unwrap();
            let z = zeta_element(&SiteObject::point(2, m), &lvl).unwrap();
            let (a, b) = (acyclicity_coordinate(&z), acyclicity_coordinate(&z.rebased(seed)));
            match (a.value(), b.value()) {
                (Some(x), Some(y)) => prop_assert!(x.agrees_with(y), "{} vs {}", x, y),
                (None, None) => {}
                _ => prop_assert!(false, "only one side defined"),
            }
        }

        #[test]
        fn multiplicative_in_direct_sums(a in arb_module(5, 2), b in arb_module(5, 2), n in 1usize..=3) {
            let lvl = Level::group(5, 2, n).unwrap();
            let sum = a.direct_sum(&b).unwrap();
            let ca = coord(&SiteObject::point(2, a), &lvl);
            let cb = coord(&SiteObject::point(2, b), &lvl);
            let cs = coord(&SiteObject::point(2, sum), &lvl);
            if let (Some(x), Some(y)) = (ca.value(), cb.value()) {
                prop_assert_eq!(cs.value().unwrap(), &x.mul(y));
            }
        }
    }
}
