use std::fmt;

use super::text::{self, ParseOrdinalError};
use super::Ordinal;

/// Cardinality of a definite set: finite, or `aleph_index` for an atom-free index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cardinal {
    Finite(u64),
    Aleph(Ordinal),
}

impl Cardinal {
    pub fn aleph0() -> Cardinal {
        Cardinal::Aleph(Ordinal::zero())
    }

    pub fn aleph(n: u64) -> Cardinal {
        Cardinal::Aleph(Ordinal::nat(n))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Cardinal::Aleph(_))
    }

    pub fn is_uncountable(&self) -> bool {
        matches!(self, Cardinal::Aleph(i) if !i.is_zero())
    }

    /// The successor cardinal `k+`.
    pub fn successor(&self) -> Cardinal {
        match self {
            Cardinal::Finite(n) => Cardinal::Finite(n + 1),
            Cardinal::Aleph(i) => Cardinal::Aleph(i.succ()),
        }
    }

    /// `o(k)`, the least ordinal of this cardinality.
    pub fn initial_ordinal(&self) -> Ordinal {
        match self {
            Cardinal::Finite(n) => Ordinal::nat(*n),
            Cardinal::Aleph(i) => Ordinal::initial(i),
        }
    }

    /// Cardinal product.
    pub fn mul(&self, other: &Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(0), _) | (_, Cardinal::Finite(0)) => Cardinal::Finite(0),
            (Cardinal::Finite(a), Cardinal::Finite(b)) => {
                Cardinal::Finite(a.checked_mul(*b).expect("finite cardinal overflow"))
            }
            (a, b) => a.clone().max(b.clone()),
        }
    }

    /// Cardinal sum.
    pub fn add(&self, other: &Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Finite(a), Cardinal::Finite(b)) => {
                Cardinal::Finite(a.checked_add(*b).expect("finite cardinal overflow"))
            }
            (a, b) => a.clone().max(b.clone()),
        }
    }

    /// Index `i` of `aleph_i`.
    pub fn aleph_index(&self) -> Option<&Ordinal> {
        match self {
            Cardinal::Aleph(i) => Some(i),
            Cardinal::Finite(_) => None,
        }
    }

    /// Regularity of an infinite cardinal. Indices are countable ordinals, so
    /// every limit-index aleph is singular (its cofinality is `aleph_0`).
    pub fn regularity(&self) -> Regularity {
        match self {
            Cardinal::Finite(_) => Regularity::Singular,
            Cardinal::Aleph(i) if i.is_zero() || i.is_successor() => Regularity::Regular,
            Cardinal::Aleph(_) => Regularity::Singular,
        }
    }

    pub fn is_regular(&self) -> bool {
        self.regularity() == Regularity::Regular
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regularity {
    Regular,
    Singular,
    /// Not decidable without further set-theoretic assumptions.
    Unknown,
}

/// A cardinal named by the user: an aleph, or the continuum `c` with no assumed index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CardinalSym {
    Aleph(Ordinal),
    Continuum,
}

impl CardinalSym {
    pub fn aleph(n: u64) -> CardinalSym {
        CardinalSym::Aleph(Ordinal::nat(n))
    }

    pub fn as_cardinal(&self) -> Option<Cardinal> {
        match self {
            CardinalSym::Aleph(i) => Some(Cardinal::Aleph(i.clone())),
            CardinalSym::Continuum => None,
        }
    }

    pub fn regularity(&self) -> Regularity {
        match self.as_cardinal() {
            Some(c) => c.regularity(),
            None => Regularity::Unknown,
        }
    }

    pub fn is_uncountable(&self) -> bool {
        match self {
            CardinalSym::Aleph(i) => !i.is_zero(),
            CardinalSym::Continuum => true,
        }
    }
}

impl From<Cardinal> for CardinalSym {
    fn from(c: Cardinal) -> Self {
        match c {
            Cardinal::Aleph(i) => CardinalSym::Aleph(i),
            Cardinal::Finite(_) => panic!("finite cardinals are not cardinal symbols"),
        }
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Finite(n) => write!(f, "{n}"),
            Cardinal::Aleph(i) => text::write_aleph(i, f),
        }
    }
}

impl fmt::Display for CardinalSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CardinalSym::Aleph(i) => text::write_aleph(i, f),
            CardinalSym::Continuum => f.write_str("c"),
        }
    }
}

impl std::str::FromStr for Cardinal {
    type Err = ParseOrdinalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if let Ok(n) = s.parse::<u64>() {
            return Ok(Cardinal::Finite(n));
        }
        match s.parse::<CardinalSym>()? {
            CardinalSym::Aleph(i) => Ok(Cardinal::Aleph(i)),
            CardinalSym::Continuum => Err(ParseOrdinalError::new(0, "the continuum has no definite aleph index")),
        }
    }
}

impl std::str::FromStr for CardinalSym {
    type Err = ParseOrdinalError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        text::parse_cardinal_sym(s)
    }
}

impl serde::Serialize for CardinalSym {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for CardinalSym {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl serde::Serialize for Cardinal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Cardinal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regularity_bookkeeping() {
        assert!(Cardinal::aleph0().is_regular());
        assert!(Cardinal::aleph(1).is_regular());
        assert!(Cardinal::aleph(7).is_regular());
        let aleph_w: Cardinal = "aleph_w".parse().unwrap();
        assert_eq!(aleph_w.regularity(), Regularity::Singular);
        assert!(aleph_w.successor().is_regular());
        assert_eq!(CardinalSym::Continuum.regularity(), Regularity::Unknown);
    }

    #[test]
    fn ordering_by_index() {
        assert!(Cardinal::Finite(10) < Cardinal::aleph0());
        assert!(Cardinal::aleph(3) < "aleph_w".parse().unwrap());
        assert_eq!(Cardinal::aleph(1).initial_ordinal().to_string(), "o(aleph_1)");
        assert_eq!(Cardinal::aleph0().initial_ordinal().to_string(), "w");
    }
}
