//! Expression trees for scattered linearly ordered (and ultrametric) spaces.
//!
//! A [`SpaceExpr`] names a space built from ordinal intervals by reversal,
//! ordered sums, products with a first-derivative-finite left factor,
//! ultrametric hedgehogs, metrical sums, punctured ladders and lexicographic
//! block substitution. Points are addressed by [`PointName`] paths.

mod dsl;
mod point;
mod sample;

pub use dsl::{parse_expr, parse_point};
pub use point::{Coord, PointName};
pub use sample::points_of_truncation;

use serde::{Deserialize, Serialize};

use crate::ordinal::{Cardinal, Ordinal};

/// Version tag written into every JSON document produced by this crate.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpaceError {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("invalid expression: {0}")]
    Invalid(String),
    #[error("point `{path}` does not resolve: {reason}")]
    Unresolved { path: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpaceExpr {
    /// `[0, theta]`, or `[0, theta[` when `open_top` is set.
    OrdInterval { theta: Ordinal, open_top: bool },
    /// `{0} u {2^-n}`, i.e. `[0, w]` with designated point `w`.
    ZAtom,
    Reverse { inner: Box<SpaceExpr> },
    /// Ordered sum of linear parts, left to right.
    Concat { parts: Vec<SpaceExpr> },
    /// The index interval `[lo, hi]` with the listed index points replaced by blocks.
    LexSum { lo: Ordinal, hi: Ordinal, blocks: Vec<Block> },
    Product { left: Box<SpaceExpr>, right: Box<SpaceExpr> },
    Hedgehog { spines: Vec<Spine> },
    /// Metrical sum: the parts at mutual distance 1.
    MetricSum { parts: Vec<SpaceExpr> },
    /// The discrete array `E_n` accumulating at the point to its left.
    PuncturedLadder { n: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Block {
    pub at: Ordinal,
    pub space: SpaceExpr,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Spine {
    /// `mult` identical copies of `space` glued at `base`.
    Family { space: SpaceExpr, base: PointName, mult: Cardinal },
    /// The spines `(Z_b, z_b)` for `1 <= b < limit`.
    Tower { limit: Ordinal },
}

/// JSON envelope for a single expression.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub schema_version: u32,
    pub text: String,
    pub expr: SpaceExpr,
}

impl SpaceDoc {
    pub fn new(expr: &SpaceExpr) -> SpaceDoc {
        SpaceDoc { schema_version: SCHEMA_VERSION, text: expr.to_string(), expr: expr.clone() }
    }
}

/// `Z` with its basepoint `w`.
pub fn z_atom() -> SpaceExpr {
    SpaceExpr::ZAtom
}

/// The space `Z_beta` with `Z_beta^(beta) = {z_beta}`: `Z` for 1, `Z x Z_gamma` for
/// successors and the tower hedgehog for limits.
pub fn tower_space(beta: &Ordinal) -> SpaceExpr {
    assert!(!beta.is_zero(), "Z_0 is not defined");
    if *beta == Ordinal::one() {
        SpaceExpr::ZAtom
    } else if let Some(prev) = beta.pred() {
        SpaceExpr::Product { left: Box::new(SpaceExpr::ZAtom), right: Box::new(tower_space(&prev)) }
    } else {
        SpaceExpr::Hedgehog { spines: vec![Spine::Tower { limit: beta.clone() }] }
    }
}

/// The designated point `z_beta` of [`tower_space`].
pub fn tower_point(beta: &Ordinal) -> PointName {
    if *beta == Ordinal::one() {
        PointName::ord(Ordinal::omega())
    } else if let Some(prev) = beta.pred() {
        PointName(vec![Coord::Pair(PointName::ord(Ordinal::omega()), tower_point(&prev))])
    } else {
        PointName(vec![Coord::Body])
    }
}

impl SpaceExpr {
    pub fn ord(theta: Ordinal) -> SpaceExpr {
        SpaceExpr::OrdInterval { theta, open_top: false }
    }

    pub fn ord_open(theta: Ordinal) -> SpaceExpr {
        SpaceExpr::OrdInterval { theta, open_top: true }
    }

    pub fn rev(inner: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Reverse { inner: Box::new(inner) }
    }

    pub fn concat(parts: Vec<SpaceExpr>) -> SpaceExpr {
        SpaceExpr::Concat { parts }
    }

    pub fn prod(left: SpaceExpr, right: SpaceExpr) -> SpaceExpr {
        SpaceExpr::Product { left: Box::new(left), right: Box::new(right) }
    }

    pub fn msum(parts: Vec<SpaceExpr>) -> SpaceExpr {
        SpaceExpr::MetricSum { parts }
    }

    /// Order-topology spaces; only these may be reversed, concatenated or used as blocks.
    pub fn is_linear(&self) -> bool {
        match self {
            SpaceExpr::OrdInterval { .. } | SpaceExpr::ZAtom | SpaceExpr::PuncturedLadder { .. } => true,
            SpaceExpr::Reverse { .. } | SpaceExpr::Concat { .. } | SpaceExpr::LexSum { .. } => true,
            SpaceExpr::Product { .. } | SpaceExpr::Hedgehog { .. } | SpaceExpr::MetricSum { .. } => false,
        }
    }

    /// True when some `o(aleph_i)` atom occurs in the expression.
    pub fn has_atoms(&self) -> bool {
        match self {
            SpaceExpr::OrdInterval { theta, .. } => !theta.is_plain(),
            SpaceExpr::ZAtom | SpaceExpr::PuncturedLadder { .. } => false,
            SpaceExpr::Reverse { inner } => inner.has_atoms(),
            SpaceExpr::Concat { parts } | SpaceExpr::MetricSum { parts } => parts.iter().any(|p| p.has_atoms()),
            SpaceExpr::LexSum { lo, hi, blocks } => {
                !lo.is_plain() || !hi.is_plain() || blocks.iter().any(|b| b.space.has_atoms())
            }
            SpaceExpr::Product { left, right } => left.has_atoms() || right.has_atoms(),
            SpaceExpr::Hedgehog { spines } => spines.iter().any(|s| match s {
                Spine::Family { space, mult, .. } => space.has_atoms() || mult.is_uncountable(),
                Spine::Tower { .. } => false,
            }),
        }
    }

    /// Check the structural invariants that need no derivative computation.
    pub fn validate(&self) -> Result<(), SpaceError> {
        let bad = |m: String| Err(SpaceError::Invalid(m));
        match self {
            SpaceExpr::OrdInterval { theta, open_top } => {
                if *open_top && theta.is_zero() {
                    return bad("ord[0) is empty".into());
                }
                Ok(())
            }
            SpaceExpr::ZAtom => Ok(()),
            SpaceExpr::PuncturedLadder { n } => {
                if *n == 0 {
                    return bad("ladder index must be positive".into());
                }
                Ok(())
            }
            SpaceExpr::Reverse { inner } => {
                if !inner.is_linear() {
                    return bad(format!("rev needs a linearly ordered argument, got {inner}"));
                }
                inner.validate()
            }
            SpaceExpr::Concat { parts } => {
                if parts.is_empty() {
                    return bad("concat needs at least one part".into());
                }
                for p in parts {
                    if !p.is_linear() {
                        return bad(format!("concat parts must be linearly ordered, got {p}"));
                    }
                    p.validate()?;
                }
                Ok(())
            }
            SpaceExpr::MetricSum { parts } => {
                if parts.is_empty() {
                    return bad("msum needs at least one part".into());
                }
                parts.iter().try_for_each(|p| p.validate())
            }
            SpaceExpr::LexSum { lo, hi, blocks } => {
                if lo > hi {
                    return bad(format!("lex index [{lo}, {hi}] is empty"));
                }
                if blocks.is_empty() {
                    return bad("lex needs at least one block".into());
                }
                for (i, b) in blocks.iter().enumerate() {
                    if b.at < *lo || b.at > *hi {
                        return bad(format!("block index {} outside [{lo}, {hi}]", b.at));
                    }
                    if i > 0 && blocks[i - 1].at >= b.at {
                        return bad("block indices must be strictly increasing".into());
                    }
                    if !b.space.is_linear() {
                        return bad(format!("lex blocks must be linearly ordered, got {}", b.space));
                    }
                    b.space.validate()?;
                }
                Ok(())
            }
            SpaceExpr::Product { left, right } => {
                left.validate()?;
                right.validate()
            }
            SpaceExpr::Hedgehog { spines } => {
                if spines.is_empty() {
                    return bad("hedge needs at least one spine".into());
                }
                for s in spines {
                    match s {
                        Spine::Family { space, base, mult } => {
                            space.validate()?;
                            if *mult == Cardinal::Finite(0) {
                                return bad("spine multiplicity must be positive".into());
                            }
                            space.resolve(base)?;
                        }
                        Spine::Tower { limit } => {
                            if !limit.is_limit() || !limit.is_plain() {
                                return bad(format!("tower[{limit}] needs a countable limit ordinal"));
                            }
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Check that `p` names exactly one point of the space.
    pub fn resolve(&self, p: &PointName) -> Result<(), SpaceError> {
        self.resolve_at(&p.0).map_err(|reason| SpaceError::Unresolved { path: p.to_string(), reason })
    }

    fn resolve_at(&self, path: &[Coord]) -> Result<(), String> {
        let (head, rest) = path.split_first().ok_or_else(|| "path ends before reaching a point".to_string())?;
        let leaf = |ok: bool, why: &str| -> Result<(), String> {
            if !rest.is_empty() {
                return Err(format!("trailing coordinates after {head}"));
            }
            if ok {
                Ok(())
            } else {
                Err(why.to_string())
            }
        };
        match (self, head) {
            (SpaceExpr::OrdInterval { theta, open_top }, Coord::Ord(b)) => {
                leaf(if *open_top { b < theta } else { b <= theta }, "ordinal outside the interval")
            }
            (SpaceExpr::ZAtom, Coord::Ord(b)) => leaf(*b <= Ordinal::omega(), "ordinal outside [0, w]"),
            (SpaceExpr::Reverse { inner }, _) => inner.resolve_at(path),
            (SpaceExpr::Concat { parts }, Coord::Part(k)) | (SpaceExpr::MetricSum { parts }, Coord::Part(k)) => {
                parts.get(*k).ok_or_else(|| format!("no part #{k}"))?.resolve_at(rest)
            }
            (SpaceExpr::LexSum { lo, hi, blocks }, Coord::Index(g)) => match blocks.iter().find(|b| b.at == *g) {
                Some(b) => b.space.resolve_at(rest),
                None => leaf(lo <= g && g <= hi, "index outside the lex interval"),
            },
            (SpaceExpr::Product { left, right }, Coord::Pair(p, q)) => {
                leaf(true, "")?;
                left.resolve_at(&p.0)?;
                right.resolve_at(&q.0)
            }
            (SpaceExpr::Hedgehog { .. }, Coord::Body) => leaf(true, ""),
            (SpaceExpr::Hedgehog { spines }, Coord::Spine { family, copy }) => match spines.get(*family) {
                Some(Spine::Family { space, base, mult }) => {
                    match (copy, mult) {
                        (None, Cardinal::Finite(1)) => {}
                        (Some(c), Cardinal::Finite(m)) if c < m => {}
                        (Some(_), Cardinal::Aleph(_)) => {}
                        _ => return Err(format!("bad copy index for spine family s{family} of multiplicity {mult}")),
                    }
                    if rest == base.0.as_slice() {
                        return Err("spine basepoints are identified with the body `o`".into());
                    }
                    space.resolve_at(rest)
                }
                _ => Err(format!("no spine family s{family}")),
            },
            (SpaceExpr::Hedgehog { spines }, Coord::Tower(b)) => {
                let limit = spines
                    .iter()
                    .find_map(|s| match s {
                        Spine::Tower { limit } => Some(limit),
                        _ => None,
                    })
                    .ok_or_else(|| "hedgehog has no tower spines".to_string())?;
                if b.is_zero() || b >= limit {
                    return Err(format!("tower spine index must lie in [1, {limit}["));
                }
                if rest == tower_point(b).0.as_slice() {
                    return Err("spine basepoints are identified with the body `o`".into());
                }
                tower_space(b).resolve_at(rest)
            }
            (SpaceExpr::PuncturedLadder { .. }, Coord::Ladder(m, k)) => leaf(*m >= 1 && *k >= 1, "ladder coordinates start at 1"),
            (_, c) => Err(format!("coordinate {c} does not fit {}", self.kind_name())),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            SpaceExpr::OrdInterval { .. } => "ord",
            SpaceExpr::ZAtom => "z",
            SpaceExpr::Reverse { .. } => "rev",
            SpaceExpr::Concat { .. } => "concat",
            SpaceExpr::LexSum { .. } => "lex",
            SpaceExpr::Product { .. } => "prod",
            SpaceExpr::Hedgehog { .. } => "hedge",
            SpaceExpr::MetricSum { .. } => "msum",
            SpaceExpr::PuncturedLadder { .. } => "ladder",
        }
    }

    /// The designated point of the atoms that carry one (`z`, tower spaces).
    pub fn designated_point(&self) -> Option<PointName> {
        match self {
            SpaceExpr::ZAtom => Some(PointName::ord(Ordinal::omega())),
            SpaceExpr::Hedgehog { .. } => Some(PointName(vec![Coord::Body])),
            _ => None,
        }
    }
}

impl std::str::FromStr for SpaceExpr {
    type Err = SpaceError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_expr(s)
    }
}
