//! Generators for the named families of spaces, with their designated points.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::ordinal::{Cardinal, CardinalSym, Ordinal};
use crate::spaces::{tower_point, tower_space, Block, Coord, PointName, SpaceExpr, Spine};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FamilyError {
    #[error("the parameter set is empty")]
    Empty,
    #[error("parameter out of range: {0}")]
    OutOfRange(String),
    #[error("cardinal {0} not allowed here: {1}")]
    BadCardinal(String, String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Prop2,
    Prop2Closure,
    Prop2Order,
    Prop3,
    Prop4,
    Thm1,
    Thm2Regular,
    Thm2Singular,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Prop2 => "prop2",
            Variant::Prop2Closure => "prop2_closure",
            Variant::Prop2Order => "prop2_order",
            Variant::Prop3 => "prop3",
            Variant::Prop4 => "prop4",
            Variant::Thm1 => "thm1",
            Variant::Thm2Regular => "thm2_regular",
            Variant::Thm2Singular => "thm2_singular",
        })
    }
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "prop2" => Variant::Prop2,
            "prop2_closure" => Variant::Prop2Closure,
            "prop2_order" => Variant::Prop2Order,
            "prop3" => Variant::Prop3,
            "prop4" => Variant::Prop4,
            "thm1" => Variant::Thm1,
            "thm2_regular" | "thm2_h" => Variant::Thm2Regular,
            "thm2_singular" | "thm2_g" => Variant::Thm2Singular,
            _ => return Err(format!("unknown family `{s}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub variant: Variant,
    /// `S` or `L`; ignored by `prop3` and `prop4`.
    #[serde(default)]
    pub set: Vec<Ordinal>,
    pub kappa: Option<CardinalSym>,
    /// The index of `prop4`.
    pub alpha: Option<Ordinal>,
}

/// A generated space with the points the construction singles out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Member {
    pub expr: SpaceExpr,
    pub designated: Vec<PointName>,
}

fn nat_set(s: &[u64]) -> Result<BTreeSet<u64>, FamilyError> {
    let set: BTreeSet<u64> = s.iter().copied().collect();
    if set.is_empty() {
        return Err(FamilyError::Empty);
    }
    if let Some(n) = set.iter().find(|n| **n < 2) {
        return Err(FamilyError::OutOfRange(format!("{n} is below 2")));
    }
    Ok(set)
}

fn ord_pow(n: u64) -> SpaceExpr {
    SpaceExpr::ord(Ordinal::omega_pow(&Ordinal::nat(n)))
}

/// `[0, w^2[` reversed: the ladder with its column limits put back, left end still open.
fn closed_ladder() -> SpaceExpr {
    SpaceExpr::rev(SpaceExpr::ord_open(Ordinal::omega_pow(&Ordinal::nat(2))))
}

/// One block `[0, w^n]` followed by the punctured ladder `E_n`, per `n` in `S`.
pub fn prop2_space(s: &[u64]) -> Result<SpaceExpr, FamilyError> {
    Ok(SpaceExpr::msum(
        nat_set(s)?
            .into_iter()
            .map(|n| SpaceExpr::concat(vec![ord_pow(n), SpaceExpr::PuncturedLadder { n }]))
            .collect(),
    ))
}

/// As [`prop2_space`] with every ladder completed; a compact space.
pub fn prop2_closure(s: &[u64]) -> Result<SpaceExpr, FamilyError> {
    Ok(SpaceExpr::msum(nat_set(s)?.into_iter().map(|n| SpaceExpr::concat(vec![ord_pow(n), closed_ladder()])).collect()))
}

/// The completed blocks laid out one after another in a single linear order.
pub fn prop2_order_variant(s: &[u64]) -> Result<SpaceExpr, FamilyError> {
    Ok(SpaceExpr::concat(nat_set(s)?.into_iter().flat_map(|n| [ord_pow(n), closed_ladder()]).collect()))
}

fn uncountable(k: &CardinalSym) -> Result<Cardinal, FamilyError> {
    match k.as_cardinal() {
        Some(c) if c.is_uncountable() => Ok(c),
        Some(_) => Err(FamilyError::BadCardinal(k.to_string(), "must be uncountable".into())),
        None => Err(FamilyError::BadCardinal(k.to_string(), "needs a definite aleph index".into())),
    }
}

/// `k` copies of `z` glued at their limit points.
pub fn prop3_y(k: &CardinalSym) -> Result<SpaceExpr, FamilyError> {
    let mult = uncountable(k)?;
    Ok(SpaceExpr::Hedgehog {
        spines: vec![Spine::Family { space: SpaceExpr::ZAtom, base: PointName::ord(Ordinal::omega()), mult }],
    })
}

/// `Z_alpha`, whose derivative of order `alpha` is the single point [`tower_point`].
pub fn prop4_z(alpha: &Ordinal) -> Result<SpaceExpr, FamilyError> {
    if alpha.is_zero() {
        return Err(FamilyError::OutOfRange("Z_0 is not defined".into()));
    }
    if !alpha.is_plain() {
        return Err(FamilyError::OutOfRange(format!("{alpha} must be countable")));
    }
    Ok(tower_space(alpha))
}

fn ord_set(s: &[Ordinal]) -> Result<BTreeSet<Ordinal>, FamilyError> {
    let set: BTreeSet<Ordinal> = s.iter().cloned().collect();
    if set.is_empty() {
        return Err(FamilyError::Empty);
    }
    Ok(set)
}

/// Metrical sum over `a` in `L` of the hedgehog joining `Y_k` and `Z_a` at their designated points.
pub fn thm1_space(l: &[Ordinal], k: &CardinalSym) -> Result<SpaceExpr, FamilyError> {
    uncountable(k)?;
    let y = prop3_y(k)?;
    let mut parts = Vec::new();
    for a in ord_set(l)? {
        if a < Ordinal::omega() || !a.is_plain() {
            return Err(FamilyError::OutOfRange(format!("{a} must be a countable ordinal >= w")));
        }
        parts.push(SpaceExpr::Hedgehog {
            spines: vec![
                Spine::Family { space: y.clone(), base: PointName::body(), mult: Cardinal::Finite(1) },
                Spine::Family { space: tower_space(&a), base: tower_point(&a), mult: Cardinal::Finite(1) },
            ],
        });
    }
    Ok(SpaceExpr::msum(parts))
}

fn thm2_check(s: &[Ordinal], k: &Cardinal) -> Result<BTreeSet<Ordinal>, FamilyError> {
    let set = ord_set(s)?;
    let ok = k.initial_ordinal();
    for xi in &set {
        let limit = xi.pred().filter(|p| p.is_limit());
        if limit.is_none() {
            return Err(FamilyError::OutOfRange(format!("{xi} is not the successor of a limit ordinal")));
        }
        if Ordinal::omega_pow(xi).cardinality() >= *k || xi.succ() >= ok {
            return Err(FamilyError::OutOfRange(format!("w^{xi} is not below {k}")));
        }
    }
    Ok(set)
}

fn thm2_lex(set: BTreeSet<Ordinal>, k: &Cardinal, tail: impl Fn(&Ordinal) -> SpaceExpr) -> SpaceExpr {
    let mut blocks = Vec::new();
    for xi in set {
        blocks.push(Block { at: xi.clone(), space: SpaceExpr::ord(Ordinal::omega_pow(&xi)) });
        blocks.push(Block { at: xi.succ(), space: tail(&xi) });
    }
    SpaceExpr::LexSum { lo: Ordinal::omega(), hi: k.initial_ordinal(), blocks }
}

/// The index interval `[w, o(k)]` with `[0, w^x]` at each `x` in `S` and a reversed
/// `[0, o(k)[` right after it.
pub fn thm2_h(s: &[Ordinal], k: &CardinalSym) -> Result<SpaceExpr, FamilyError> {
    let kc = uncountable(k)?;
    if !kc.is_regular() {
        return Err(FamilyError::BadCardinal(k.to_string(), "must be regular".into()));
    }
    let set = thm2_check(s, &kc)?;
    let tail = SpaceExpr::rev(SpaceExpr::ord_open(kc.initial_ordinal()));
    Ok(thm2_lex(set, &kc, |_| tail.clone()))
}

/// As [`thm2_h`] for singular `k`, with the reversed block after `x` of length `o(|x|+)`.
pub fn thm2_g(s: &[Ordinal], k: &CardinalSym) -> Result<SpaceExpr, FamilyError> {
    let kc = uncountable(k)?;
    if kc.is_regular() {
        return Err(FamilyError::BadCardinal(k.to_string(), "must be singular".into()));
    }
    let set = thm2_check(s, &kc)?;
    Ok(thm2_lex(set, &kc, |xi| {
        let card = Cardinal::aleph0().max(xi.cardinality());
        SpaceExpr::rev(SpaceExpr::ord_open(card.successor().initial_ordinal()))
    }))
}

fn need_kappa(p: &FamilyParams) -> Result<&CardinalSym, FamilyError> {
    p.kappa.as_ref().ok_or_else(|| FamilyError::BadCardinal("none".into(), format!("{} needs a cardinal", p.variant)))
}

fn need_nats(p: &FamilyParams) -> Result<Vec<u64>, FamilyError> {
    p.set
        .iter()
        .map(|o| o.as_nat().ok_or_else(|| FamilyError::OutOfRange(format!("{o} is not a natural number"))))
        .collect()
}

/// Build a family member together with its designated points.
pub fn generate(p: &FamilyParams) -> Result<Member, FamilyError> {
    let (expr, designated) = match p.variant {
        Variant::Prop2 | Variant::Prop2Closure | Variant::Prop2Order => {
            let s = need_nats(p)?;
            let expr = match p.variant {
                Variant::Prop2 => prop2_space(&s)?,
                Variant::Prop2Closure => prop2_closure(&s)?,
                _ => prop2_order_variant(&s)?,
            };
            let tops = nat_set(&s)?.into_iter().enumerate().map(|(k, n)| {
                let top = PointName::ord(Ordinal::omega_pow(&Ordinal::nat(n)));
                if p.variant == Variant::Prop2Order {
                    top.under(Coord::Part(2 * k))
                } else {
                    top.under(Coord::Part(0)).under(Coord::Part(k))
                }
            });
            let designated = tops.collect();
            (expr, designated)
        }
        Variant::Prop3 => (prop3_y(need_kappa(p)?)?, vec![PointName::body()]),
        Variant::Prop4 => {
            let a = p.alpha.clone().ok_or_else(|| FamilyError::OutOfRange("prop4 needs alpha".into()))?;
            (prop4_z(&a)?, vec![tower_point(&a)])
        }
        Variant::Thm1 => {
            let expr = thm1_space(&p.set, need_kappa(p)?)?;
            let n = ord_set(&p.set)?.len();
            (expr, (0..n).map(|k| PointName::body().under(Coord::Part(k))).collect())
        }
        Variant::Thm2Regular | Variant::Thm2Singular => {
            let k = need_kappa(p)?;
            let expr = if p.variant == Variant::Thm2Regular { thm2_h(&p.set, k)? } else { thm2_g(&p.set, k)? };
            let designated = ord_set(&p.set)?
                .into_iter()
                .map(|xi| PointName::ord(Ordinal::omega_pow(&xi)).under(Coord::Index(xi)))
                .collect();
            (expr, designated)
        }
    };
    Ok(Member { expr, designated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cbengine::rank_of_point;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn shapes() {
        assert_eq!(prop2_space(&[5, 2]).unwrap().to_string(), "msum(concat(ord[w^2],ladder(2)),concat(ord[w^5],ladder(5)))");
        assert_eq!(prop3_y(&CardinalSym::aleph(1)).unwrap().to_string(), "hedge((z,w)*aleph_1)");
        assert_eq!(
            thm2_h(&[o("w+1")], &CardinalSym::aleph(1)).unwrap().to_string(),
            "lex[w,o(aleph_1)](w+1:ord[w^(w+1)],w+2:rev(ord[o(aleph_1))))"
        );
        assert!(prop2_space(&[]).is_err());
        assert!(prop2_space(&[1, 3]).is_err());
        assert!(prop3_y(&CardinalSym::aleph(0)).is_err());
        assert!(thm2_h(&[o("w+2")], &CardinalSym::aleph(1)).is_err());
        assert!(thm2_h(&[o("w+1")], &"aleph_w".parse().unwrap()).is_err());
        assert!(thm1_space(&[o("5")], &CardinalSym::aleph(1)).is_err());
    }

    #[test]
    fn designated_points_resolve() {
        let cases = [
            FamilyParams { variant: Variant::Prop2, set: vec![o("2"), o("4")], kappa: None, alpha: None },
            FamilyParams { variant: Variant::Prop2Order, set: vec![o("2"), o("4")], kappa: None, alpha: None },
            FamilyParams { variant: Variant::Prop4, set: vec![], kappa: None, alpha: Some(o("w+2")) },
            FamilyParams { variant: Variant::Thm1, set: vec![o("w"), o("w*2")], kappa: Some(CardinalSym::aleph(1)), alpha: None },
            FamilyParams {
                variant: Variant::Thm2Singular,
                set: vec![o("w+1"), o("w^2+1")],
                kappa: Some("aleph_w".parse().unwrap()),
                alpha: None,
            },
        ];
        for p in cases {
            let m = generate(&p).unwrap();
            for d in &m.designated {
                m.expr.resolve(d).unwrap();
            }
        }
        let z = generate(&cases_prop4()).unwrap();
        assert_eq!(rank_of_point(&z.expr, &z.designated[0]).unwrap(), o("w+2"));
    }

    fn cases_prop4() -> FamilyParams {
        FamilyParams { variant: Variant::Prop4, set: vec![], kappa: None, alpha: Some(o("w+2")) }
    }
}
