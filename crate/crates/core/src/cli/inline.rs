//! Inline object descriptions for `--phi`.
//!
//! - `catalog:NAME`, e.g. `catalog:P1/F2`;
//! - a `;`-separated list of `d:MATRIX` components, one `Spec F_{q^d}` each,
//!   with `MATRIX` a JSON array of rows, e.g. `1:[[2]];2:[[1,0],[0,3]]`. A
//!   bare `MATRIX` means `d = 1`.

use super::CliError;
use crate::zetael::{catalog_entry, PhiModule, SiteObject};

pub fn parse_object(src: &str, p: u64, q: u64) -> Result<SiteObject, CliError> {
    if let Some(name) = src.strip_prefix("catalog:") {
        return Ok(SiteObject::Catalog(catalog_entry(name.trim(), p)?));
    }
    let mut components = Vec::new();
    for part in src.split(';').map(str::trim).filter(|s| !s.is_empty()) {
        let (d, matrix) = match part.split_once(':') {
            Some((d, m)) => {
                let d = d.trim().parse::<u32>().map_err(|_| CliError::Usage(format!("bad degree in {part:?}")))?;
                (d, m)
            }
            None => (1, part),
        };
        let phi: Vec<Vec<i64>> =
            serde_json::from_str(matrix.trim()).map_err(|e| CliError::Usage(format!("bad matrix in {part:?}: {e}")))?;
        if d == 0 {
            return Err(CliError::Usage(format!("degree must be positive in {part:?}")));
        }
        components.push((d, PhiModule::new(p, phi)?));
    }
    if components.is_empty() {
        return Err(CliError::Usage("empty --phi".into()));
    }
    Ok(SiteObject::Points { q, components })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_components() {
        let SiteObject::Points { q, components } = parse_object("1:[[2]]; 2:[[1,0],[0,3]]", 5, 2).unwrap() else {
            panic!()
        };
        assert_eq!(q, 2);
        assert_eq!(components.len(), 2);
        assert_eq!(components[1].0, 2);
        assert_eq!(components[1].1.rank(), 2);
        assert!(matches!(parse_object("[[2]]", 5, 2).unwrap(), SiteObject::Points { .. }));
        assert!(matches!(parse_object("catalog:P1/F2", 5, 2).unwrap(), SiteObject::Catalog(_)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "x:[[1]]", "1:[[1,2]]", "1:[[5]]", "0:[[1]]", "1:[[1]", "catalog:Q9/F2"] {
            assert!(parse_object(bad, 5, 2).is_err(), "{bad}");
        }
    }
}
