use std::fmt;

use serde::{Deserialize, Serialize};

use super::SpaceError;
use crate::ordinal::Ordinal;

/// One step of a point path.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coord {
    /// An ordinal inside an interval (or inside `z`).
    Ord(Ordinal),
    /// `#k`: part `k` of a concat or metrical sum.
    Part(usize),
    /// `o`: the body of a hedgehog.
    Body,
    /// `sK` or `sK.J`: spine family `K`, copy `J` when the family has several copies.
    Spine { family: usize, copy: Option<u64> },
    /// `t[b]`: the tower spine `Z_b`.
    Tower(Ordinal),
    /// `(p;q)`: a point of a product.
    Pair(PointName, PointName),
    /// `@g`: index point `g` of a lex sum, or the block sitting at `g`.
    Index(Ordinal),
    /// `e(m,k)`: a ladder point.
    Ladder(u64, u64),
}

/// A `/`-separated path of coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointName(pub Vec<Coord>);

impl PointName {
    pub fn ord(b: Ordinal) -> PointName {
        PointName(vec![Coord::Ord(b)])
    }

    pub fn body() -> PointName {
        PointName(vec![Coord::Body])
    }

    /// `head/self`.
    pub fn under(&self, head: Coord) -> PointName {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(head);
        v.extend(self.0.iter().cloned());
        PointName(v)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Ord(b) => write!(f, "{b}"),
            Coord::Part(k) => write!(f, "#{k}"),
            Coord::Body => f.write_str("o"),
            Coord::Spine { family, copy: None } => write!(f, "s{family}"),
            Coord::Spine { family, copy: Some(c) } => write!(f, "s{family}.{c}"),
            Coord::Tower(b) => write!(f, "t[{b}]"),
            Coord::Pair(p, q) => write!(f, "({p};{q})"),
            Coord::Index(g) => write!(f, "@{g}"),
            Coord::Ladder(m, k) => write!(f, "e({m},{k})"),
        }
    }
}

impl fmt::Display for PointName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("/")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PointName {
    type Err = SpaceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        super::parse_point(s)
    }
}

impl Serialize for PointName {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PointName {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
