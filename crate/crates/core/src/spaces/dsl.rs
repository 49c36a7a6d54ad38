//! Recursive-descent parser and canonical printer for the space DSL.
//!
//! ```text
//! expr  := "ord[" ord "]" | "ord[" ord ")" | "rev(" expr ")"
//!        | "concat(" expr ("," expr)* ")" | "msum(" expr ("," expr)* ")"
//!        | "prod(" expr "," expr ")" | "hedge(" spine ("," spine)* ")"
//!        | "ladder(" nat ")" | "z" | "lex[" ord "," ord "](" ord ":" expr ("," ord ":" expr)* ")"
//! spine := "(" expr "," point ")" ("*" (nat | aleph))? | "tower[" ord "]"
//! ```

use std::fmt;

use super::{Block, Coord, PointName, SpaceError, SpaceExpr, Spine};
use crate::ordinal::text::Parser as OrdParser;
use crate::ordinal::{Cardinal, CardinalSym, Ordinal};

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SpaceError> {
        Err(SpaceError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek_str(&mut self, tok: &str) -> bool {
        self.skip_ws();
        self.src[self.pos..].starts_with(tok)
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.peek_str(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    /// A keyword followed by an opening bracket, with optional whitespace between.
    fn kw(&mut self, word: &str, open: &str) -> bool {
        let save = self.pos;
        if self.eat(word) && self.eat(open) {
            return true;
        }
        self.pos = save;
        false
    }

    fn expect(&mut self, tok: &str) -> Result<(), SpaceError> {
        if self.eat(tok) {
            Ok(())
        } else {
            self.err(format!("expected `{tok}`"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.src.len()
    }

    fn ordinal(&mut self) -> Result<Ordinal, SpaceError> {
        self.skip_ws();
        let mut p = OrdParser::with_pos(self.src, self.pos);
        let v = p.ordinal().map_err(|e| SpaceError::Syntax { pos: e.pos, msg: e.msg })?;
        self.pos = p.pos;
        Ok(v)
    }

    fn nat(&mut self) -> Result<u64, SpaceError> {
        self.skip_ws();
        let digits = self.src[self.pos..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected a natural number");
        }
        let v = self.src[self.pos..self.pos + digits].parse().or_else(|_| self.err("number out of range"))?;
        self.pos += digits;
        Ok(v)
    }

    fn expr(&mut self) -> Result<SpaceExpr, SpaceError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let e = if self.kw("ord", "[") {
            let theta = self.ordinal()?;
            let open_top = if self.eat("]") {
                false
            } else if self.eat(")") {
                true
            } else {
                return self.err("expected `]` or `)` after the interval bound");
            };
            SpaceExpr::OrdInterval { theta, open_top }
        } else if self.kw("rev", "(") {
            let inner = self.expr()?;
            self.expect(")")?;
            SpaceExpr::rev(inner)
        } else if self.kw("concat", "(") {
            SpaceExpr::Concat { parts: self.expr_list()? }
        } else if self.kw("msum", "(") {
            SpaceExpr::MetricSum { parts: self.expr_list()? }
        } else if self.kw("prod", "(") {
            let left = self.expr()?;
            self.expect(",")?;
            let right = self.expr()?;
            self.expect(")")?;
            SpaceExpr::prod(left, right)
        } else if self.kw("hedge", "(") {
            let mut spines = vec![self.spine()?];
            while self.eat(",") {
                spines.push(self.spine()?);
            }
            self.expect(")")?;
            SpaceExpr::Hedgehog { spines }
        } else if self.kw("ladder", "(") {
            let n = self.nat()?;
            self.expect(")")?;
            SpaceExpr::PuncturedLadder { n }
        } else if self.kw("lex", "[") {
            let lo = self.ordinal()?;
            self.expect(",")?;
            let hi = self.ordinal()?;
            self.expect("]")?;
            self.expect("(")?;
            let mut blocks = vec![self.block()?];
            while self.eat(",") {
                blocks.push(self.block()?);
            }
            self.expect(")")?;
            SpaceExpr::LexSum { lo, hi, blocks }
        } else if self.eat("z") {
            SpaceExpr::ZAtom
        } else {
            return self.err("expected a space expression");
        };
        e.validate().map_err(|err| match err {
            SpaceError::Invalid(m) => SpaceError::Invalid(format!("{m} (at {start})")),
            other => other,
        })?;
        Ok(e)
    }

    fn expr_list(&mut self) -> Result<Vec<SpaceExpr>, SpaceError> {
        let mut parts = vec![self.expr()?];
        while self.eat(",") {
            parts.push(self.expr()?);
        }
        self.expect(")")?;
        Ok(parts)
    }

    fn block(&mut self) -> Result<Block, SpaceError> {
        let at = self.ordinal()?;
        self.expect(":")?;
        let space = self.expr()?;
        Ok(Block { at, space })
    }

    fn spine(&mut self) -> Result<Spine, SpaceError> {
        if self.kw("tower", "[") {
            let limit = self.ordinal()?;
            self.expect("]")?;
            return Ok(Spine::Tower { limit });
        }
        self.expect("(")?;
        let space = self.expr()?;
        self.expect(",")?;
        let base = self.point()?;
        self.expect(")")?;
        let mult = if self.eat("*") {
            self.skip_ws();
            if self.src[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
                Cardinal::Finite(self.nat()?)
            } else {
                let mut p = OrdParser::with_pos(self.src, self.pos);
                let sym = p.cardinal_sym().map_err(|e| SpaceError::Syntax { pos: e.pos, msg: e.msg })?;
                self.pos = p.pos;
                match sym {
                    CardinalSym::Aleph(i) => Cardinal::Aleph(i),
                    CardinalSym::Continuum => return self.err("spine multiplicity must be a natural or an aleph"),
                }
            }
        } else {
            Cardinal::Finite(1)
        };
        Ok(Spine::Family { space, base, mult })
    }

    fn point(&mut self) -> Result<PointName, SpaceError> {
        let mut coords = vec![self.coord()?];
        while self.eat("/") {
            coords.push(self.coord()?);
        }
        Ok(PointName(coords))
    }

    fn coord(&mut self) -> Result<Coord, SpaceError> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if self.eat("#") {
            return Ok(Coord::Part(self.nat()? as usize));
        }
        if self.eat("@") {
            return Ok(Coord::Index(self.ordinal()?));
        }
        if self.kw("t", "[") {
            let b = self.ordinal()?;
            self.expect("]")?;
            return Ok(Coord::Tower(b));
        }
        if self.kw("e", "(") {
            let m = self.nat()?;
            self.expect(",")?;
            let k = self.nat()?;
            self.expect(")")?;
            return Ok(Coord::Ladder(m, k));
        }
        if rest.starts_with('s') {
            self.pos += 1;
            let family = self.nat()? as usize;
            let copy = if self.src[self.pos..].starts_with('.') {
                self.pos += 1;
                Some(self.nat()?)
            } else {
                None
            };
            return Ok(Coord::Spine { family, copy });
        }
        if rest.starts_with('o') && !rest.starts_with("o(") {
            self.pos += 1;
            return Ok(Coord::Body);
        }
        if rest.starts_with('(') && pair_ahead(rest) {
            self.pos += 1;
            let p = self.point()?;
            self.expect(";")?;
            let q = self.point()?;
            self.expect(")")?;
            return Ok(Coord::Pair(p, q));
        }
        Ok(Coord::Ord(self.ordinal()?))
    }
}

/// Whether the parenthesis opening `s` contains a `;` at its own nesting level.
fn pair_ahead(s: &str) -> bool {
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth == 0 {
                    return false;
                }
            }
            ';' if depth == 1 => return true,
            _ => {}
        }
    }
    false
}

pub fn parse_expr(text: &str) -> Result<SpaceExpr, SpaceError> {
    let mut lx = Lexer { src: text, pos: 0 };
    let e = lx.expr()?;
    if !lx.at_end() {
        return lx.err("trailing input");
    }
    Ok(e)
}

pub fn parse_point(text: &str) -> Result<PointName, SpaceError> {
    let mut lx = Lexer { src: text, pos: 0 };
    let p = lx.point()?;
    if !lx.at_end() {
        return lx.err("trailing input");
    }
    Ok(p)
}

fn write_list(f: &mut fmt::Formatter<'_>, name: &str, parts: &[SpaceExpr]) -> fmt::Result {
    write!(f, "{name}(")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str(")")
}

impl fmt::Display for SpaceExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceExpr::OrdInterval { theta, open_top: false } => write!(f, "ord[{theta}]"),
            SpaceExpr::OrdInterval { theta, open_top: true } => write!(f, "ord[{theta})"),
            SpaceExpr::ZAtom => f.write_str("z"),
            SpaceExpr::Reverse { inner } => write!(f, "rev({inner})"),
            SpaceExpr::Concat { parts } => write_list(f, "concat", parts),
            SpaceExpr::MetricSum { parts } => write_list(f, "msum", parts),
            SpaceExpr::Product { left, right } => write!(f, "prod({left},{right})"),
            SpaceExpr::PuncturedLadder { n } => write!(f, "ladder({n})"),
            SpaceExpr::LexSum { lo, hi, blocks } => {
                write!(f, "lex[{lo},{hi}](")?;
                for (i, b) in blocks.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{}:{}", b.at, b.space)?;
                }
                f.write_str(")")
            }
            SpaceExpr::Hedgehog { spines } => {
                f.write_str("hedge(")?;
                for (i, s) in spines.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    match s {
                        Spine::Tower { limit } => write!(f, "tower[{limit}]")?,
                        Spine::Family { space, base, mult } => {
                            write!(f, "({space},{base})")?;
                            if *mult != Cardinal::Finite(1) {
                                write!(f, "*{mult}")?;
                            }
                        }
                    }
                }
                f.write_str(")")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(parse_expr("ord[w^2]").unwrap(), SpaceExpr::ord("w^2".parse().unwrap()));
        let c = parse_expr("concat(ord[w], rev(ord[w]))").unwrap();
        assert!(matches!(c, SpaceExpr::Concat { ref parts } if parts.len() == 2));
        let h = parse_expr("hedge((ord[w],w),(ord[w],w))").unwrap();
        match h {
            SpaceExpr::Hedgehog { spines } => {
                assert_eq!(spines.len(), 2);
                for s in spines {
                    assert!(matches!(s, Spine::Family { base, .. } if base == PointName::ord(Ordinal::omega())));
                }
            }
            _ => panic!("not a hedgehog"),
        }
    }

    #[test]
    fn whitespace_is_ignored() {
        let a = parse_expr(" hedge ( ( z , w ) * aleph_1 , tower[ w ] ) ").unwrap();
        assert_eq!(a.to_string(), "hedge((z,w)*aleph_1,tower[w])");
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match parse_expr("concat(ord[w],, z)") {
            Err(SpaceError::Syntax { pos, .. }) => assert_eq!(pos, 14),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expr("ord[w"), Err(SpaceError::Syntax { .. })));
        assert!(matches!(parse_expr("ord[w] z"), Err(SpaceError::Syntax { .. })));
    }

    #[test]
    fn point_paths_round_trip() {
        for s in ["w^2+3", "#1/@w+1/w*2", "s0.3/(w;(5;o))", "t[w+2]/(w*2+1;0)", "o", "e(3,7)", "(o(aleph_1);w)"] {
            let p = parse_point(s).unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert_eq!(parse_point("(w+1)*2").unwrap(), PointName::ord("w*2+1".parse().unwrap()));
    }
}
