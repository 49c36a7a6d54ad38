//! Homeomorphism invariants computed from the point classes of a space:
//! the non-locally-compact part `Gamma`, the rank sets `Sigma` and `Sigma[k]`,
//! `k`-condensation points and the `Psi` sets of `sup Omega_k` values.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::cbengine::{analyze, locate, EngineError, Local, PointClass, RankSet, Region};
use crate::ordinal::{Cardinal, CardinalSym, Ordinal};
use crate::spaces::{PointName, SpaceExpr, SCHEMA_VERSION};

pub type OrdSet = BTreeSet<Ordinal>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("{0} is not a regular uncountable cardinal")]
    NotRegular(String),
    #[error("{0} is not uncountable")]
    Countable(String),
    #[error("{0} is not a singular cardinal")]
    NotSingular(String),
    #[error("undecidable under ZFC-neutral assumptions: {0}")]
    Undecidable(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("`{point}` is not a {kappa}-condensation point")]
    NotCondensation { point: String, kappa: String },
}

/// A class restricted to its points of local cardinality exactly `k`.
struct Portion {
    ranks: RankSet,
    omegas: OrdSet,
}

fn portion(local: &Local, ranks: &RankSet, k: &Cardinal) -> Result<Option<Portion>, InvariantError> {
    if ranks.is_single() {
        let r = ranks.min();
        if local.lc(&r) != *k {
            return Ok(None);
        }
        let omegas = OrdSet::from([local.omega(&r, k)]);
        return Ok(Some(Portion { ranks: ranks.clone(), omegas }));
    }
    match local {
        Local::Ordinal => {
            let ok = k.initial_ordinal();
            let Some(p) = ranks.restrict(&ok, Some(&k.successor().initial_ordinal())) else {
                return Ok(None);
            };
            // every rank r here has Omega either [0, o(k)[ or {0}, decided by cf(w^r)
            let a = p.min();
            let cf = Ordinal::omega_pow(&a).cofinality();
            let mut omegas = OrdSet::new();
            if !p.is_single() || p.all_successors() || cf < *k {
                omegas.insert(ok.clone());
            }
            if cf == *k || p.contains(&a.add(&ok)) {
                omegas.insert(Ordinal::zero());
            }
            Ok(Some(Portion { ranks: p, omegas }))
        }
        Local::Product { shift, inner, .. } => Ok(portion(inner, &ranks.unshifted(*shift), k)?.map(|p| {
            let ok = k.initial_ordinal();
            Portion {
                ranks: p.ranks.shifted(*shift),
                omegas: p.omegas.into_iter().map(|w| if w == ok { w } else { w.add(&Ordinal::nat(*shift)) }).collect(),
            }
        })),
        other => Err(InvariantError::Inconclusive(format!("no rule for a multi-rank class of shape {other:?}"))),
    }
}

fn is_countable(classes: &[PointClass]) -> bool {
    classes.iter().all(|c| c.count <= Cardinal::aleph0())
}

/// `Some(k)` for an uncountable aleph, `None` when `k = c` and the space is countable
/// (every invariant at `c` is then empty).
fn resolve_kappa(k: &CardinalSym, classes: &[PointClass]) -> Result<Option<Cardinal>, InvariantError> {
    match k.as_cardinal() {
        Some(c) if c.is_uncountable() => Ok(Some(c)),
        Some(c) => Err(InvariantError::Countable(c.to_string())),
        None if is_countable(classes) => Ok(None),
        None => Err(InvariantError::Undecidable(format!(
            "the space is uncountable and c has no fixed aleph index, so its {k}-condensation points are not determined"
        ))),
    }
}

fn portions(x: &SpaceExpr, k: &CardinalSym) -> Result<Vec<(Region, Portion)>, InvariantError> {
    let a = analyze(x)?;
    let Some(k) = resolve_kappa(k, &a.classes)? else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for c in &a.classes {
        if let Some(p) = portion(&c.local, &c.ranks, &k)? {
            out.push((c.region.clone(), p));
        }
    }
    Ok(out)
}

/// Regions of points with no compact neighbourhood.
pub fn gamma(x: &SpaceExpr) -> Result<Vec<Region>, InvariantError> {
    Ok(analyze(x)?.classes.into_iter().filter(|c| c.gamma).map(|c| c.region).collect())
}

/// The positive integers `k` with a point of `Gamma` of rank exactly `k`.
pub fn sigma(x: &SpaceExpr) -> Result<BTreeSet<u64>, InvariantError> {
    let mut out = BTreeSet::new();
    for c in analyze(x)?.classes.iter().filter(|c| c.gamma) {
        let fin = c.ranks.finite_elements().ok_or_else(|| {
            InvariantError::Inconclusive(format!("class {} has infinitely many finite ranks", c.region))
        })?;
        out.extend(fin.into_iter().filter(|r| *r > 0));
    }
    Ok(out)
}

/// The `k`-condensation points, as class regions with the ranks they cover.
pub fn condensation_points(x: &SpaceExpr, k: &CardinalSym) -> Result<Vec<(Region, RankSet)>, InvariantError> {
    Ok(portions(x, k)?.into_iter().map(|(r, p)| (r, p.ranks)).collect())
}

/// Nonzero ranks of `k`-condensation points.
pub fn sigma_kappa(x: &SpaceExpr, k: &CardinalSym) -> Result<OrdSet, InvariantError> {
    let mut out = OrdSet::new();
    for (region, p) in portions(x, k)? {
        let els = p.ranks.elements(64).ok_or_else(|| {
            InvariantError::Inconclusive(format!("{region} contributes the infinite rank set {}", p.ranks))
        })?;
        out.extend(els.into_iter().filter(|r| !r.is_zero()));
    }
    Ok(out)
}

fn require_regular(k: &CardinalSym) -> Result<(), InvariantError> {
    match k.as_cardinal() {
        Some(c) if c.is_uncountable() && c.is_regular() => Ok(()),
        Some(_) => Err(InvariantError::NotRegular(k.to_string())),
        None => Err(InvariantError::Undecidable(format!("regularity of {k} is not fixed"))),
    }
}

/// The set of `sup Omega_k(x)` over all `k`-condensation points `x`.
pub fn psi(x: &SpaceExpr, k: &CardinalSym) -> Result<OrdSet, InvariantError> {
    if !matches!(k, CardinalSym::Continuum) {
        require_regular(k)?;
    }
    Ok(portions(x, k)?.into_iter().flat_map(|(_, p)| p.omegas).collect())
}

/// `sup Omega_k(p)` for a single `k`-condensation point.
pub fn omega_kappa_sup(x: &SpaceExpr, p: &PointName, k: &CardinalSym) -> Result<Ordinal, InvariantError> {
    require_regular(k)?;
    let k = k.as_cardinal().unwrap();
    let pl = locate(x, p)?;
    if pl.local.lc(&pl.rank) != k {
        return Err(InvariantError::NotCondensation { point: p.to_string(), kappa: k.to_string() });
    }
    Ok(pl.local.omega(&pl.rank, &k))
}

/// Regular uncountable `l < k` at which some point has local cardinality `l`
/// with a `sup Omega_l` value that can be a successor.
fn union_candidates(classes: &[PointClass], k: &Cardinal) -> Result<BTreeSet<Cardinal>, InvariantError> {
    let keep = |l: &Cardinal| l.is_uncountable() && l.is_regular() && l < k;
    let mut out = BTreeSet::new();
    for c in classes {
        if c.ranks.is_single() {
            let l = c.local.lc(&c.ranks.min());
            if keep(&l) {
                out.insert(l);
            }
            continue;
        }
        match &c.local {
            // Omega values of interval classes are 0 or o(l), both limits
            Local::Ordinal => {}
            _ => {
                let index = |o: &Ordinal| match o.cardinality() {
                    Cardinal::Aleph(i) => i.as_nat(),
                    Cardinal::Finite(_) => Some(0),
                };
                let (Some(lo), Some(hi)) = (index(&c.ranks.min()), index(&c.ranks.height())) else {
                    return Err(InvariantError::Inconclusive(format!(
                        "class {} spans infinitely many cardinalities",
                        c.region
                    )));
                };
                out.extend((lo.max(1)..=hi).map(Cardinal::aleph).filter(|l| keep(l)));
            }
        }
    }
    Ok(out)
}

/// `(U Psi[X, l] over regular uncountable l < k)` minus the limit ordinals, for singular `k`.
pub fn singular_union(x: &SpaceExpr, k: &CardinalSym) -> Result<OrdSet, InvariantError> {
    let kc = match k.as_cardinal() {
        Some(c) if c.is_infinite() && !c.is_regular() => c,
        _ => return Err(InvariantError::NotSingular(k.to_string())),
    };
    let a = analyze(x)?;
    let mut out = OrdSet::new();
    for l in union_candidates(&a.classes, &kc)? {
        for c in &a.classes {
            if let Some(p) = portion(&c.local, &c.ranks, &l)? {
                out.extend(p.omegas.into_iter().filter(|w| w.is_successor()));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignatureReport {
    pub schema_version: u32,
    pub space: String,
    pub sigma: BTreeSet<u64>,
    pub sigma_kappa: BTreeMap<String, OrdSet>,
    /// Only for the regular cardinals in the request.
    pub psi: BTreeMap<String, OrdSet>,
    pub gamma_points: Vec<String>,
    pub condensation_points: BTreeMap<String, Vec<String>>,
}

pub fn default_kappas() -> Vec<CardinalSym> {
    vec![CardinalSym::aleph(1), CardinalSym::aleph(2)]
}

pub fn signature(x: &SpaceExpr, kappas: &[CardinalSym]) -> Result<SignatureReport, InvariantError> {
    let mut report = SignatureReport {
        schema_version: SCHEMA_VERSION,
        space: x.to_string(),
        sigma: sigma(x)?,
        sigma_kappa: BTreeMap::new(),
        psi: BTreeMap::new(),
        gamma_points: gamma(x)?.iter().map(|r| r.to_string()).collect(),
        condensation_points: BTreeMap::new(),
    };
    for k in kappas {
        let key = k.to_string();
        report.sigma_kappa.insert(key.clone(), sigma_kappa(x, k)?);
        let cps = condensation_points(x, k)?;
        report.condensation_points.insert(key.clone(), cps.iter().map(|(r, ranks)| format!("{r} {ranks}")).collect());
        if k.regularity() != crate::ordinal::Regularity::Singular {
            report.psi.insert(key, psi(x, k)?);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::parse_expr;

    fn x(s: &str) -> SpaceExpr {
        parse_expr(s).unwrap()
    }

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn set(v: &[&str]) -> OrdSet {
        v.iter().map(|s| o(s)).collect()
    }

    fn k1() -> CardinalSym {
        CardinalSym::aleph(1)
    }

    #[test]
    fn sigma_of_ladder_sums() {
        let s = x("msum(concat(ord[w^2],ladder(2)),concat(ord[w^5],ladder(5)))");
        assert_eq!(sigma(&s).unwrap(), BTreeSet::from([2, 5]));
        assert_eq!(gamma(&s).unwrap().len(), 2);
        assert!(sigma(&x("ord[w^3]")).unwrap().is_empty());
        assert!(gamma(&x("msum(z,z)")).unwrap().is_empty());
    }

    #[test]
    fn initial_ordinal_interval() {
        let s = x("ord[o(aleph_1)]");
        let cps = condensation_points(&s, &k1()).unwrap();
        assert_eq!(cps.len(), 1);
        assert_eq!(cps[0].0.to_string(), "o(aleph_1)");
        assert_eq!(psi(&s, &k1()).unwrap(), set(&["0"]));
        assert_eq!(psi(&x("ord[o(aleph_1)*w]"), &k1()).unwrap(), set(&["0", "o(aleph_1)"]));
        assert!(condensation_points(&x("ord[w^w]"), &k1()).unwrap().is_empty());
    }

    #[test]
    fn block_top_carries_its_exponent() {
        let h = x("lex[w,o(aleph_1)](w+1:ord[w^(w+1)],w+2:rev(ord[o(aleph_1))))");
        let p: PointName = "@w+1/w^(w+1)".parse().unwrap();
        assert_eq!(omega_kappa_sup(&h, &p, &k1()).unwrap(), o("w+1"));
        let top: PointName = "@o(aleph_1)".parse().unwrap();
        assert_eq!(omega_kappa_sup(&h, &top, &k1()).unwrap(), o("0"));
        assert_eq!(psi(&h, &k1()).unwrap(), set(&["0", "w+1"]));
        assert!(matches!(psi(&h, &"aleph_w".parse().unwrap()), Err(InvariantError::NotRegular(_))));
    }

    #[test]
    fn hedgehog_condensation() {
        assert_eq!(sigma_kappa(&x("hedge((z,w)*aleph_1)"), &k1()).unwrap(), set(&["1"]));
        assert!(sigma_kappa(&x("ord[w^w]"), &k1()).unwrap().is_empty());
    }

    #[test]
    fn continuum_is_only_decided_for_countable_spaces() {
        assert!(psi(&x("ord[w^w]"), &CardinalSym::Continuum).unwrap().is_empty());
        assert!(matches!(sigma_kappa(&x("ord[o(aleph_1)]"), &CardinalSym::Continuum), Err(InvariantError::Undecidable(_))));
    }

    #[test]
    fn singular_union_drops_limits() {
        let g = x("lex[w,o(aleph_w)](w+1:ord[w^(w+1)],w+2:rev(ord[o(aleph_1))),o(aleph_1)+1:ord[w^(o(aleph_1)+1)],o(aleph_1)+2:rev(ord[o(aleph_2))))");
        let k: CardinalSym = "aleph_w".parse().unwrap();
        assert_eq!(singular_union(&g, &k).unwrap(), set(&["w+1", "o(aleph_1)+1"]));
        assert!(singular_union(&g, &k1()).is_err());
    }
}
