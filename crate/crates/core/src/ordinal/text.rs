//! Text syntax: `0`, naturals, `w^E*c` terms joined by `+`, and atoms `o(aleph_i)`.
//!
//! The printer emits canonical CNF; the parser accepts any expression built
//! from `+`, `*` and `w^` and normalizes it, so `parse(print(x)) == x`.

use std::fmt;

use super::{CardinalSym, Exp, Ordinal, Term};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("ordinal syntax error at {pos}: {msg}")]
pub struct ParseOrdinalError {
    pub pos: usize,
    pub msg: String,
}

impl ParseOrdinalError {
    pub(crate) fn new(pos: usize, msg: impl Into<String>) -> Self {
        ParseOrdinalError { pos, msg: msg.into() }
    }
}

pub(super) fn write_ordinal(x: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if x.terms.is_empty() {
        return f.write_str("0");
    }
    for (i, t) in x.terms.iter().enumerate() {
        if i > 0 {
            f.write_str("+")?;
        }
        write_term(t, f)?;
    }
    Ok(())
}

fn write_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match &t.exp {
        Exp::Plain(e) if e.is_zero() => return write!(f, "{}", t.coeff),
        Exp::Plain(e) if e.as_nat() == Some(1) => f.write_str("w")?,
        Exp::Plain(e) => {
            f.write_str("w^")?;
            if e.as_nat().is_some() || *e == Ordinal::omega() {
                write!(f, "{e}")?;
            } else {
                write!(f, "({e})")?;
            }
        }
        Exp::Initial(idx) => {
            f.write_str("o(")?;
            write_aleph(idx, f)?;
            f.write_str(")")?;
        }
    }
    if t.coeff > 1 {
        write!(f, "*{}", t.coeff)?;
    }
    Ok(())
}

pub(super) fn write_aleph(idx: &Ordinal, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if idx.as_nat().is_some() || *idx == Ordinal::omega() {
        write!(f, "aleph_{idx}")
    } else {
        write!(f, "aleph_({idx})")
    }
}

pub(crate) struct Parser<'a> {
    src: &'a [u8],
    pub(crate) pos: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(src: &'a str) -> Self {
        Parser { src: src.as_bytes(), pos: 0 }
    }

    pub(crate) fn with_pos(src: &'a str, pos: usize) -> Self {
        Parser { src: src.as_bytes(), pos }
    }

    fn err(&self, msg: impl Into<String>) -> ParseOrdinalError {
        ParseOrdinalError::new(self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok.as_bytes()) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<(), ParseOrdinalError> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{tok}`")))
        }
    }

    pub(crate) fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn nat(&mut self) -> Result<u64, ParseOrdinalError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a natural number"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| ParseOrdinalError::new(start, "natural number out of range"))
    }

    /// sum := product ("+" product)*
    pub(crate) fn ordinal(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.product()?;
        while self.eat("+") {
            let rhs = self.product()?;
            acc = acc.add(&rhs);
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let mut acc = self.power()?;
        while self.eat("*") {
            let rhs = self.power()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        let start = self.pos;
        let base = self.primary()?;
        if self.eat("^") {
            let exp = self.primary()?;
            if base == Ordinal::omega() {
                return Ok(Ordinal::omega_pow(&exp));
            }
            if base.is_finite() && exp.is_finite() {
                let (b, e) = (base.as_nat().unwrap(), exp.as_nat().unwrap());
                let v = u32::try_from(e)
                    .ok()
                    .and_then(|e| b.checked_pow(e))
                    .ok_or_else(|| ParseOrdinalError::new(start, "natural power out of range"))?;
                return Ok(Ordinal::nat(v));
            }
            return Err(ParseOrdinalError::new(start, "only `w` may be raised to an infinite power"));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Ordinal, ParseOrdinalError> {
        match self.peek() {
            Some(b'0'..=b'9') => Ok(Ordinal::nat(self.nat()?)),
            Some(b'(') => {
                self.pos += 1;
                let v = self.ordinal()?;
                self.expect(")")?;
                Ok(v)
            }
            Some(b'w') => {
                self.pos += 1;
                Ok(Ordinal::omega())
            }
            Some(b'o') if self.src[self.pos..].starts_with(b"o(") => {
                self.pos += 2;
                let card = self.cardinal_sym()?;
                self.expect(")")?;
                match card {
                    CardinalSym::Aleph(i) => Ok(Ordinal::initial(&i)),
                    CardinalSym::Continuum => {
                        Err(self.err("o(c) is not expressible: the continuum has no fixed aleph index"))
                    }
                }
            }
            _ => Err(self.err("expected an ordinal")),
        }
    }

    /// `aleph_N`, `aleph_w`, `aleph_(ord)` or `c`.
    pub(crate) fn cardinal_sym(&mut self) -> Result<CardinalSym, ParseOrdinalError> {
        if self.eat("aleph_") {
            let idx = match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let v = self.ordinal()?;
                    self.expect(")")?;
                    v
                }
                Some(b'w') => {
                    self.pos += 1;
                    Ordinal::omega()
                }
                _ => Ordinal::nat(self.nat()?),
            };
            if !idx.is_plain() {
                return Err(self.err("aleph indices must be free of o(...) atoms"));
            }
            return Ok(CardinalSym::Aleph(idx));
        }
        if self.eat("c") {
            return Ok(CardinalSym::Continuum);
        }
        Err(self.err("expected `aleph_<index>` or `c`"))
    }
}

pub(super) fn parse_ordinal(s: &str) -> Result<Ordinal, ParseOrdinalError> {
    let mut p = Parser::new(s);
    let v = p.ordinal()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

pub(super) fn parse_cardinal_sym(s: &str) -> Result<CardinalSym, ParseOrdinalError> {
    let mut p = Parser::new(s);
    let v = p.cardinal_sym()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_printing() {
        let cases = [
            ("0", "0"),
            ("7", "7"),
            ("w", "w"),
            ("w*5+3", "w*5+3"),
            ("w^2*3+w*5+1", "w^2*3+w*5+1"),
            ("w^w", "w^w"),
            ("w^(w+1)*2", "w^(w+1)*2"),
            ("o(aleph_1)", "o(aleph_1)"),
            ("o(aleph_1)*w", "w^(o(aleph_1)+1)"),
            ("o(aleph_w)+o(aleph_2)*3+w", "o(aleph_w)+o(aleph_2)*3+w"),
            ("o(aleph_(w+1))", "o(aleph_(w+1))"),
            ("1 + w", "w"),
            ("(w+1)*w", "w^2"),
            ("2^3", "8"),
            ("w^o(aleph_1)", "o(aleph_1)"),
        ];
        for (src, want) in cases {
            let v = parse_ordinal(src).unwrap();
            assert_eq!(v.to_string(), want, "{src}");
            assert_eq!(parse_ordinal(want).unwrap(), v);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_ordinal("").is_err());
        assert!(parse_ordinal("w^").is_err());
        assert!(parse_ordinal("2^w").is_err());
        assert!(parse_ordinal("o(c)").is_err());
        assert!(parse_ordinal("w+").is_err());
        assert!(parse_ordinal("o(aleph_(o(aleph_1)))").is_err());
        let e = parse_ordinal("w*2 x").unwrap_err();
        assert_eq!(e.pos, 4);
    }
}
