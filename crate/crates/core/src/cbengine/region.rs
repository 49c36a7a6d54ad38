use std::fmt;

use crate::ordinal::{Cardinal, Ordinal};
use crate::spaces::{tower_point, tower_space, Coord, PointName};

/// The set of points covered by one point class.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Region {
    Point(PointName),
    /// Interval points `offset + b` with `lo < b < hi`, named as ordinals or as lex indices.
    Span { prefix: Vec<Coord>, index: bool, offset: Ordinal, lo: Ordinal, hi: Ordinal },
    /// Every ladder point except the maximum `e(1,1)`.
    Ladder { prefix: Vec<Coord> },
    Pair { prefix: Vec<Coord>, left: Box<Region>, right: Box<Region> },
    /// The same region inside every copy of a spine family.
    Spine { prefix: Vec<Coord>, family: usize, copies: Cardinal, inner: Box<Region> },
    /// The non-body points of the tower spines `Z_b`, `1 <= b < limit`.
    Tower { prefix: Vec<Coord>, limit: Ordinal, bodies_only: bool },
    Minus { inner: Box<Region>, point: PointName },
}

fn strip<'a>(prefix: &[Coord], path: &'a [Coord]) -> Option<&'a [Coord]> {
    path.strip_prefix(prefix)
}

impl Region {
    pub fn under(self, head: Coord) -> Region {
        let push = |mut p: Vec<Coord>| {
            p.insert(0, head.clone());
            p
        };
        match self {
            Region::Point(n) => Region::Point(n.under(head)),
            Region::Span { prefix, index, offset, lo, hi } => Region::Span { prefix: push(prefix), index, offset, lo, hi },
            Region::Ladder { prefix } => Region::Ladder { prefix: push(prefix) },
            Region::Pair { prefix, left, right } => Region::Pair { prefix: push(prefix), left, right },
            Region::Spine { prefix, family, copies, inner } => {
                Region::Spine { prefix: push(prefix), family, copies, inner }
            }
            Region::Tower { prefix, limit, bodies_only } => Region::Tower { prefix: push(prefix), limit, bodies_only },
            Region::Minus { inner, point } => Region::Minus { inner: Box::new(inner.under(head.clone())), point: point.under(head) },
        }
    }

    /// Structural membership. Tower regions answer for all non-body points.
    pub fn contains(&self, p: &PointName) -> bool {
        self.contains_path(&p.0)
    }

    fn contains_path(&self, path: &[Coord]) -> bool {
        match self {
            Region::Point(n) => n.0 == path,
            Region::Span { prefix, index, offset, lo, hi } => match strip(prefix, path) {
                Some([Coord::Index(g)]) if *index => in_span(offset, lo, hi, g),
                Some([Coord::Ord(g)]) if !*index => in_span(offset, lo, hi, g),
                _ => false,
            },
            Region::Ladder { prefix } => {
                matches!(strip(prefix, path), Some([Coord::Ladder(m, k)]) if (*m, *k) != (1, 1))
            }
            Region::Pair { prefix, left, right } => match strip(prefix, path) {
                Some([Coord::Pair(p, q)]) => left.contains(p) && right.contains(q),
                _ => false,
            },
            Region::Spine { prefix, family, inner, .. } => match strip(prefix, path) {
                Some([Coord::Spine { family: f, .. }, rest @ ..]) if f == family => inner.contains_path(rest),
                _ => false,
            },
            Region::Tower { prefix, limit, .. } => match strip(prefix, path) {
                Some([Coord::Tower(b), rest @ ..]) => {
                    !b.is_zero()
                        && b < limit
                        && rest != tower_point(b).0.as_slice()
                        && tower_space(b).resolve(&PointName(rest.to_vec())).is_ok()
                }
                _ => false,
            },
            Region::Minus { inner, point } => point.0 != path && inner.contains_path(path),
        }
    }
}

fn in_span(offset: &Ordinal, lo: &Ordinal, hi: &Ordinal, g: &Ordinal) -> bool {
    match offset.sub_left(g) {
        Some(b) => *lo < b && b < *hi,
        None => false,
    }
}

fn write_prefix(f: &mut fmt::Formatter<'_>, prefix: &[Coord]) -> fmt::Result {
    for c in prefix {
        write!(f, "{c}/")?;
    }
    Ok(())
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Point(n) => write!(f, "{n}"),
            Region::Span { prefix, index, offset, lo, hi } => {
                write_prefix(f, prefix)?;
                let at = if *index { "@" } else { "" };
                write!(f, "{at}]{}, {}[", offset.add(lo), offset.add(hi))
            }
            Region::Ladder { prefix } => {
                write_prefix(f, prefix)?;
                f.write_str("e(m,k) except e(1,1)")
            }
            Region::Pair { prefix, left, right } => {
                write_prefix(f, prefix)?;
                write!(f, "({left};{right})")
            }
            Region::Spine { prefix, family, copies, inner } => {
                write_prefix(f, prefix)?;
                if *copies == Cardinal::Finite(1) {
                    write!(f, "s{family}/{inner}")
                } else {
                    write!(f, "s{family}.*/{inner}")
                }
            }
            Region::Tower { prefix, limit, bodies_only } => {
                write_prefix(f, prefix)?;
                if *bodies_only {
                    write!(f, "t[1..{limit}[/ non-compact inner bodies")
                } else {
                    write!(f, "t[1..{limit}[/*")
                }
            }
            Region::Minus { inner, point } => write!(f, "{inner} minus {point}"),
        }
    }
}

impl serde::Serialize for Region {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn span_membership_with_offset() {
        let r = Region::Span {
            prefix: vec![],
            index: true,
            offset: "w*2".parse().unwrap(),
            lo: Ordinal::zero(),
            hi: "w".parse().unwrap(),
        };
        assert!(r.contains(&"@w*2+5".parse().unwrap()));
        assert!(!r.contains(&"@w*2".parse().unwrap()));
        assert!(!r.contains(&"@w*3".parse().unwrap()));
        assert_eq!(r.to_string(), "@]w*2, w*3[");
    }
}
