//! Scheme definition files.
//!
//! A scheme file is TOML with these keys:
//!
//! ```toml
//! base_char = 2                 # p
//! base_deg = 1                  # e, so q = p^e (default 1)
//! ambient = "projective 2"      # or "affine N", N <= 4
//! equations = ["x1^2*x2 + x1*x2^2 = x0^3"]
//! inequations = []              # affine only
//! ```
//!
//! Equations use the syntax of [`Polynomial::parse`]. Errors report the
//! line and column in the file.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;
use toml::Spanned;

use super::{Ambient, Polynomial, SchemeSpec, VarietyError};
use crate::gf::make_field;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SchemeFileError {
    #[error("{line}:{col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error(transparent)]
    Invalid(#[from] VarietyError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl SchemeFileError {
    /// Error at byte `offset` of `src`.
    pub(crate) fn at(src: &str, offset: usize, message: impl Into<String>) -> Self {
        let (line, col) = line_col(src, offset);
        SchemeFileError::Syntax { line, col, message: message.into() }
    }
}

/// One-based line and column (in characters) of a byte offset.
fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScheme {
    base_char: Spanned<u64>,
    #[serde(default)]
    base_deg: Option<Spanned<u32>>,
    ambient: Spanned<String>,
    #[serde(default)]
    equations: Vec<Spanned<String>>,
    #[serde(default)]
    inequations: Vec<Spanned<String>>,
}

fn parse_ambient(s: &str) -> Option<Ambient> {
    let mut words = s.split_whitespace();
    let kind = words.next()?;
    let n: usize = words.next()?.parse().ok()?;
    if words.next().is_some() {
        return None;
    }
    match kind {
        "affine" => Some(Ambient::Affine(n)),
        "projective" => Some(Ambient::Projective(n)),
        _ => None,
    }
}

/// Byte offset where the contents of the string value at `span` begin.
/// Offsets inside the string are exact for strings without escapes.
fn content_start(src: &str, span: &std::ops::Range<usize>) -> usize {
    let raw = &src[span.clone()];
    if raw.starts_with("\"\"\"") || raw.starts_with("'''") {
        span.start + 3
    } else {
        span.start + 1
    }
}

/// Parses the text of a scheme file.
pub fn parse_scheme_file(src: &str) -> Result<SchemeSpec, SchemeFileError> {
    let raw: RawScheme = toml::from_str(src).map_err(|e| {
        let offset = e.span().map_or(0, |s| s.start);
        SchemeFileError::at(src, offset, e.message().trim().to_string())
    })?;
    let deg = raw.base_deg.as_ref().map_or(1, |d| *d.get_ref());
    let base = make_field(*raw.base_char.get_ref(), deg).map_err(|e| {
        let span = raw.base_deg.as_ref().filter(|_| deg != 1).map_or(raw.base_char.span(), |d| d.span());
        SchemeFileError::at(src, span.start, e.to_string())
    })?;
    let ambient = parse_ambient(raw.ambient.get_ref()).ok_or_else(|| {
        SchemeFileError::at(src, raw.ambient.span().start, "ambient must be \"affine N\" or \"projective N\"")
    })?;
    let nv = ambient.nvars();
    let parse_all = |list: &[Spanned<String>]| -> Result<Vec<Polynomial>, SchemeFileError> {
        list.iter()
            .map(|s| {
                Polynomial::parse(s.get_ref(), &base, nv)
                    .map_err(|e| SchemeFileError::at(src, content_start(src, &s.span()) + e.offset, e.message))
            })
            .collect()
    };
    let equations = parse_all(&raw.equations)?;
    let inequations = parse_all(&raw.inequations)?;
    Ok(SchemeSpec::new(base, ambient, equations, inequations)?)
}

impl SchemeSpec {
    /// Reads and parses a scheme file.
    pub fn from_file(path: impl AsRef<Path>) -> Result<SchemeSpec, SchemeFileError> {
        let path = path.as_ref();
        let src = std::fs::read_to_string(path)
            .map_err(|e| SchemeFileError::Io { path: path.display().to_string(), message: e.to_string() })?;
        parse_scheme_file(&src)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_cubic() {
        let src = "base_char = 2\nambient = \"projective 2\"\nequations = [\"x1^2*x2 + x1*x2^2 = x0^3\"]\n";
        let s = parse_scheme_file(src).unwrap();
        assert_eq!(s.ambient(), Ambient::Projective(2));
        assert_eq!(s.base().size(), 2);
        assert_eq!(s.equations().len(), 1);
    }

    #[test]
    fn equation_errors_have_file_positions() {
        let src = "base_char = 3\nambient = \"affine 2\"\nequations = [\n  \"x0 + x1\",\n  \"x0 * x5\",\n]\n";
        match parse_scheme_file(src).unwrap_err() {
            SchemeFileError::Syntax { line, col, message } => {
                assert_eq!((line, col), (5, 9));
                assert!(message.contains("x5"), "{message}");
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn toml_errors_have_file_positions() {
        let src = "base_char = 3\nambient = affine\n";
        assert!(matches!(parse_scheme_file(src), Err(SchemeFileError::Syntax { line: 2, .. })));
        let src = "base_char = 3\nambient = \"affine 2\"\nequaitons = []\n";
        assert!(matches!(parse_scheme_file(src), Err(SchemeFileError::Syntax { line: 3, .. })));
        let src = "base_char = 3\nambient = \"conic 2\"\n";
        assert!(matches!(parse_scheme_file(src), Err(SchemeFileError::Syntax { line: 2, col: 11, .. })));
        let src = "base_char = 6\nambient = \"affine 1\"\n";
        assert!(matches!(parse_scheme_file(src), Err(SchemeFileError::Syntax { line: 1, col: 13, .. })));
    }

    #[test]
    fn structural_errors_pass_through() {
        let src = "base_char = 2\nambient = \"projective 1\"\nequations = [\"x0^2 + x1\"]\n";
        assert_eq!(parse_scheme_file(src).unwrap_err(), SchemeFileError::Invalid(VarietyError::NotHomogeneous(0)));
    }
}
