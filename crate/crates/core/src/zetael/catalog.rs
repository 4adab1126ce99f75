//! Varieties whose compact-support cohomology is known in closed form.

use serde_json::json;

use super::verify::{LevelInfo, Report, Verdict};
use super::{PhiComplex, PhiModule, Result, ZetaElError};
use crate::gf::{make_field, prime_factors};
use crate::variety::{count_points, count_series, Ambient, SchemeSpec};
use crate::zetafn::reconstruct_from_counts;

/// Families in the catalog; each takes a `/F<q>` suffix, e.g. `P2/F3`.
/// `E` without a scheme is the curve `Y^2 Z + Y Z^2 = X^3` over `F_2`.
pub const CATALOG_NAMES: &[&str] = &["A1", "A2", "A3", "P1", "P2", "P3", "Gm", "E"];

/// A catalogued `X/F_q` with `RΓ_c(X ⊗ F̄_q, Z_p)` modelled by its
/// cohomology, and a scheme cutting out `X` when one is known.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub q: u64,
    pub complex: PhiComplex,
    pub scheme: Option<SchemeSpec>,
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let fs = prime_factors(q);
    if fs.len() != 1 {
        return None;
    }
    let p = fs[0];
    let (mut e, mut r) = (0, q);
    while r % p == 0 {
        r /= p;
        e += 1;
    }
    Some((p, e))
}

fn scalar(p: u64, q: u64, power: u32) -> Result<PhiModule> {
    let c = q.checked_pow(power).and_then(|c| i64::try_from(c).ok()).ok_or(ZetaElError::NotInvertible { p })?;
    PhiModule::scalar(p, c)
}

fn clash(p: u64, q: u64) -> Result<()> {
    if q % p == 0 {
        return Err(ZetaElError::CharacteristicClash { p, q });
    }
    Ok(())
}

/// Looks up `name` (e.g. `"P2/F3"`, `"Gm/F4"`, `"E/F2"`) with
/// coefficients `Z_p`.
pub fn catalog_entry(name: &str, p: u64) -> Result<CatalogEntry> {
    let unknown = || ZetaElError::UnknownCatalog(name.to_string());
    let (family, field) = name.split_once('/').ok_or_else(unknown)?;
    let q: u64 = field.strip_prefix('F').and_then(|s| s.parse().ok()).ok_or_else(unknown)?;
    let (ch, e) = prime_power(q).ok_or_else(unknown)?;
    if !CATALOG_NAMES.contains(&family) {
        return Err(unknown());
    }
    if family == "E" {
        if q != 2 {
            return Err(unknown());
        }
        return elliptic_entry(default_curve(), p);
    }
    clash(p, q)?;
    let base = make_field(ch, e).map_err(|_| unknown())?;
    let (terms, scheme) = match family {
        "Gm" => (
            vec![(1, scalar(p, q, 0)?), (2, scalar(p, q, 1)?)],
            SchemeSpec::parse(base, Ambient::Affine(1), &[], &["x0"]),
        ),
        _ => {
            let n = family[1..].parse::<u32>().map_err(|_| unknown())?;
            if family.starts_with('A') {
                (vec![(2 * n as i32, scalar(p, q, n)?)], SchemeSpec::parse(base, Ambient::Affine(n as usize), &[], &[]))
            } else {
                let terms = (0..=n).map(|i| Ok((2 * i as i32, scalar(p, q, i)?))).collect::<Result<Vec<_>>>()?;
                (terms, SchemeSpec::parse(base, Ambient::Projective(n as usize), &[], &[]))
            }
        }
    };
    Ok(CatalogEntry {
        name: format!("{family}/F{q}"),
        q,
        complex: PhiComplex::new(p, terms)?,
        scheme: Some(scheme.expect("catalog schemes are well formed")),
    })
}

fn default_curve() -> SchemeSpec {
    let f2 = make_field(2, 1).expect("F_2");
    SchemeSpec::parse(f2, Ambient::Projective(2), &["x1^2*x2 + x1*x2^2 = x0^3"], &[]).expect("well formed")
}

/// The catalog entry of a plane cubic, assumed smooth: `H^1` has
/// `det(1 - φ t) = 1 - a t + q t^2` with `a = q + 1 - #E(F_q)`.
pub fn elliptic_entry(scheme: SchemeSpec, p: u64) -> Result<CatalogEntry> {
    let q = scheme.base().size();
    clash(p, q)?;
    if scheme.ambient() != Ambient::Projective(2) || scheme.equations().len() != 1 {
        return Err(ZetaElError::UnknownCatalog("elliptic curves are single plane cubics".to_string()));
    }
    let count = count_points(&scheme, 1)?;
    let a = q as i64 + 1 - count as i64;
    let terms = vec![(0, scalar(p, q, 0)?), (1, PhiModule::companion(p, &[-a, q as i64])?), (2, scalar(p, q, 1)?)];
    Ok(CatalogEntry { name: format!("E/F{q}"), q, complex: PhiComplex::new(p, terms)?, scheme: Some(scheme) })
}

/// Compares the L-function of the catalogued cohomology with the zeta
/// function reconstructed from point counts of the scheme.
pub fn validate_catalog(entry: &CatalogEntry) -> Result<Report> {
    let scheme = entry.scheme.as_ref().ok_or_else(|| ZetaElError::NoScheme(entry.name.clone()))?;
    validate_catalog_with(entry, |n| Ok(count_series(scheme, n)?))
}

/// [`validate_catalog`] with point counts `#X(F_{q^1..q^N})` supplied by
/// `counts(N)`, e.g. from a persistent cache.
pub fn validate_catalog_with<E>(entry: &CatalogEntry, mut counts: impl FnMut(u32) -> std::result::Result<Vec<u64>, E>) -> std::result::Result<Report, E>
where
    E: From<ZetaElError> + From<crate::zetafn::ZetaError>,
{
    if entry.scheme.is_none() {
        return Err(ZetaElError::NoScheme(entry.name.clone()).into());
    }
    let expected = entry.complex.lfunction().map_err(E::from)?;
    let rec = reconstruct_from_counts(|order| counts(order as u32))?;
    let verdict = if rec.function == expected { Verdict::Pass } else { Verdict::Fail };
    Ok(Report::new("catalog", &entry.name, LevelInfo { p: entry.complex.p(), k: 1, n: None })
        .sides(json!(expected), expected.to_string(), json!(rec.function), rec.function.to_string())
        .verdict(verdict)
        .detail(format!("reconstructed from {} point counts, degree bounds {:?}", rec.counts_used, rec.bounds)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zetafn::RationalFn;

    #[test]
    fn names_parse() {
        let e = catalog_entry("P2/F3", 5).unwrap();
        assert_eq!((e.name.as_str(), e.q), ("P2/F3", 3));
        assert_eq!(e.complex.terms().len(), 3);
        assert!(matches!(catalog_entry("P2/F6", 5), Err(ZetaElError::UnknownCatalog(_))));
        assert!(matches!(catalog_entry("Q1/F2", 5), Err(ZetaElError::UnknownCatalog(_))));
        assert!(matches!(catalog_entry("P1/F25", 5), Err(ZetaElError::CharacteristicClash { .. })));
    }

    #[test]
    fn gm_lfunction() {
        let e = catalog_entry("Gm/F4", 3).unwrap();
        assert_eq!(e.complex.lfunction().unwrap(), RationalFn::from_i64(&[1, -1], &[1, -4]).unwrap());
    }

    #[test]
    fn default_curve_is_supersingular() {
        let e = catalog_entry("E/F2", 3).unwrap();
        assert_eq!(e.complex.lfunction().unwrap(), RationalFn::from_i64(&[1, 0, 2], &[1, -3, 2]).unwrap());
    }

    #[test]
    fn validation_passes_on_small_entries() {
        for name in ["A1/F2", "P1/F3", "Gm/F4", "E/F2"] {
            let r = validate_catalog(&catalog_entry(name, 7).unwrap()).unwrap();
            assert_eq!(r.verdict, Verdict::Pass, "{name}: {r:?}");
        }
    }
}
