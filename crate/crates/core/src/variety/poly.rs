//! Polynomials over the base field and their text syntax.
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! equation := expr ( "=" expr )?
//! expr     := [ "+" | "-" ] term ( ( "+" | "-" ) term )*
//! term     := power ( [ "*" ] power )*
//! power    := atom ( "^" integer )?
//! atom     := integer | "x" index | "g" | "(" expr ")"
//! ```
//!
//! Integers are mapped into the base field, `g` is the generator of the base
//! field, and `x0, x1, ...` are the coordinates.

use std::collections::BTreeMap;
use std::fmt;

use crate::gf::{Field, FieldElt};

/// Largest exponent accepted in the text syntax.
pub const MAX_EXPONENT: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyParseError {
    /// Byte offset into the source text.
    pub offset: usize,
    pub message: String,
}

/// A polynomial in `nvars` variables with coefficients in the base field.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: Field,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, FieldElt>,
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(exps, c)| {
                let mut factors = Vec::new();
                if !c.is_one() || exps.iter().all(|&e| e == 0) {
                    factors.push(format!("({c})"));
                }
                for (i, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => factors.push(format!("x{i}")),
                        _ => factors.push(format!("x{i}^{e}")),
                    }
                }
                factors.join("*")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl Polynomial {
    pub fn zero(field: &Field, nvars: usize) -> Self {
        Polynomial { field: field.clone(), nvars, terms: BTreeMap::new() }
    }

    pub fn constant(c: FieldElt, nvars: usize) -> Self {
        let mut p = Self::zero(c.field(), nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(field: &Field, nvars: usize, i: usize) -> Self {
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        let mut p = Self::zero(field, nvars);
        p.terms.insert(exps, field.one());
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs.
    pub fn from_terms(field: &Field, nvars: usize, terms: impl IntoIterator<Item = (FieldElt, Vec<u32>)>) -> Self {
        let mut p = Self::zero(field, nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent vector of the wrong length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, exps: Vec<u32>, c: FieldElt) {
        let sum = match self.terms.get(&exps) {
            Some(old) => old.add(&c).expect("same field"),
            None => c,
        };
        if sum.is_zero() {
            self.terms.remove(&exps);
        } else {
            self.terms.insert(exps, sum);
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &FieldElt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect();
        Polynomial { terms, ..self.clone() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Self::zero(&self.field, self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2).expect("same field"));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut acc = Self::constant(self.field.one(), self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &FieldElt) -> Polynomial {
        self.mul(&Self::constant(c.clone(), self.nvars))
    }

    /// Value at a point whose coordinates lie in an extension of the base
    /// field (they must share one field).
    pub fn eval(&self, point: &[FieldElt]) -> FieldElt {
        assert_eq!(point.len(), self.nvars);
        let ext = point.first().map_or_else(|| self.field.clone(), |x| x.field().clone());
        let mut acc = ext.zero();
        for (exps, c) in &self.terms {
            let mut v = crate::gf::embed(&self.field, &ext, c).expect("point in an extension of the base field");
            for (x, &e) in point.iter().zip(exps) {
                v = v.mul(&x.pow(e as u128)).unwrap();
            }
            acc = acc.add(&v).unwrap();
        }
        acc
    }

    /// Stable textual form used for hashing.
    pub(crate) fn canonical(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let exps: Vec<String> = e.iter().map(u32::to_string).collect();
                format!("{}@{}", c.index(), exps.join(","))
            })
            .collect();
        parts.join(";")
    }

    /// Parses an equation (see the module documentation).
    pub fn parse(src: &str, field: &Field, nvars: usize) -> Result<Polynomial, PolyParseError> {
        let mut p = Parser { src, pos: 0, field, nvars };
        let lhs = p.expr()?;
        p.skip_ws();
        let poly = if p.eat('=') {
            let rhs = p.expr()?;
            lhs.add(&rhs.neg())
        } else {
            lhs
        };
        p.skip_ws();
        if p.pos < src.len() {
            return Err(p.error("unexpected character"));
        }
        Ok(poly)
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    field: &'a Field,
    nvars: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: &str) -> PolyParseError {
        let found = match self.peek() {
            Some(c) => format!("{msg} (found '{c}')"),
            None => format!("{msg} (found end of input)"),
        };
        PolyParseError { offset: self.pos, message: found }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += self.peek().unwrap().len_utf8();
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.src[start..self.pos])
    }

    fn expr(&mut self) -> Result<Polynomial, PolyParseError> {
        let negate = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        let first = self.term()?;
        let mut acc = if negate { first.neg() } else { first };
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.add(&self.term()?.neg());
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_atom(&mut self) -> bool {
        self.skip_ws();
        matches!(self.peek(), Some(c) if c.is_ascii_digit() || c == 'x' || c == 'g' || c == '(')
    }

    fn term(&mut self) -> Result<Polynomial, PolyParseError> {
        let mut acc = self.power()?;
        loop {
            // `*` may be omitted: `2x0`, `x0 x1`
            if self.eat('*') || self.starts_atom() {
                acc = acc.mul(&self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<Polynomial, PolyParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        self.skip_ws();
        let at = self.pos;
        let Some(d) = self.digits() else {
            return Err(self.error("expected an exponent"));
        };
        match d.parse::<u32>() {
            Ok(e) if e <= MAX_EXPONENT => Ok(base.pow(e)),
            _ => Err(PolyParseError { offset: at, message: format!("exponent {d} exceeds {MAX_EXPONENT}") }),
        }
    }

    fn atom(&mut self) -> Result<Polynomial, PolyParseError> {
        self.skip_ws();
        let at = self.pos;
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some('g') => {
                self.pos += 1;
                Ok(Polynomial::constant(self.field.generator(), self.nvars))
            }
            Some('x') => {
                self.pos += 1;
                let Some(d) = self.digits() else {
                    return Err(self.error("expected a variable index after 'x'"));
                };
                match d.parse::<usize>() {
                    Ok(i) if i < self.nvars => Ok(Polynomial::var(self.field, self.nvars, i)),
                    _ => Err(PolyParseError {
                        offset: at,
                        message: format!("unknown variable x{d}; this ambient space has x0..x{}", self.nvars.saturating_sub(1)),
                    }),
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits().unwrap();
                let p = self.field.char();
                // reduce digit by digit so literals of any length are accepted
                let r = d.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p);
                Ok(Polynomial::constant(self.field.from_int(r as i64), self.nvars))
            }
            _ => Err(self.error("expected a number, a variable, 'g' or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::make_field;

    #[test]
    fn parses_and_expands() {
        let f = make_field(3, 1).unwrap();
        let a = Polynomial::parse("(x0 + x1)^2", &f, 2).unwrap();
        let b = Polynomial::parse("x0^2 + 2*x0*x1 + x1^2", &f, 2).unwrap();
        assert_eq!(a, b);
        let c = Polynomial::parse("x1^2 = x0^3 - x0", &f, 2).unwrap();
        let d = Polynomial::parse("-x0^3 + x0 + x1^2", &f, 2).unwrap();
        assert_eq!(c, d);
        assert_eq!(Polynomial::parse("4 x0", &f, 1).unwrap(), Polynomial::var(&f, 1, 0));
        assert!(Polynomial::parse("3", &f, 1).unwrap().is_zero());
    }

    #[test]
    fn generator_symbol() {
        let f = make_field(2, 2).unwrap();
        let p = Polynomial::parse("g^2 + g + 1", &f, 1).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn homogeneity() {
        let f = make_field(2, 1).unwrap();
        assert!(Polynomial::parse("x1^2*x2 + x1*x2^2 + x0^3", &f, 3).unwrap().is_homogeneous());
        assert!(!Polynomial::parse("x1^2 + x0^3", &f, 3).unwrap().is_homogeneous());
    }

    #[test]
    fn errors_point_at_offending_text() {
        let f = make_field(5, 1).unwrap();
        let e = Polynomial::parse("x0 + x3", &f, 2).unwrap_err();
        assert_eq!(e.offset, 5);
        let e = Polynomial::parse("x0 + ", &f, 2).unwrap_err();
        assert_eq!(e.offset, 5);
        let e = Polynomial::parse("(x0 + 1", &f, 2).unwrap_err();
        assert_eq!(e.offset, 7);
        let e = Polynomial::parse("x0 $", &f, 2).unwrap_err();
        assert_eq!(e.offset, 3);
    }

    #[test]
    fn evaluation_in_extension() {
        let f2 = make_field(2, 1).unwrap();
        let f4 = make_field(2, 2).unwrap();
        let p = Polynomial::parse("x0^2 + x0 + 1", &f2, 1).unwrap();
        let roots = f4.elements().filter(|a| p.eval(&[a.clone()]).is_zero()).count();
        assert_eq!(roots, 2);
    }
}
