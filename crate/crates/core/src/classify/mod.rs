//! Homeomorphism decisions: the complete invariant `(alpha, n)` for countable
//! compact spaces, and refutation by invariants everywhere else.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::cbengine::{analyze, Analysis, EngineError};
use crate::invariants::{self, InvariantError};
use crate::ordinal::{Cardinal, CardinalSym, Ordinal, Regularity};
use crate::spaces::{SpaceExpr, Spine, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("not compact: {0}")]
    NotCompact(String),
    #[error("not countable: {0}")]
    NotCountable(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl From<EngineError> for ClassifyError {
    fn from(e: EngineError) -> Self {
        ClassifyError::Invariant(e.into())
    }
}

/// The space is homeomorphic to `[0, w^alpha * n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MSCharacteristic {
    pub alpha: Ordinal,
    pub n: u64,
}

impl fmt::Display for MSCharacteristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.alpha, self.n)
    }
}

fn countable(a: &Analysis) -> bool {
    a.classes.iter().all(|c| c.count <= Cardinal::aleph0())
}

fn characteristic_of(a: &Analysis) -> Result<MSCharacteristic, ClassifyError> {
    if !countable(a) {
        return Err(ClassifyError::NotCountable("some class has uncountably many points".into()));
    }
    if !a.compact {
        return Err(ClassifyError::NotCompact("an end point is missing, a cut is open or a spine family is infinite".into()));
    }
    let alpha = a.classes.iter().filter_map(|c| c.ranks.max()).max().expect("spaces are nonempty");
    let mut n = 0u64;
    for c in &a.classes {
        if !c.ranks.reaches(&alpha) {
            continue;
        }
        match (c.ranks.max(), &c.top_count) {
            (Some(m), Some(Cardinal::Finite(t))) if m == alpha => n += t,
            _ => {
                return Err(ClassifyError::NotCompact(format!(
                    "class {} has infinitely many points of the top rank",
                    c.region
                )))
            }
        }
    }
    Ok(MSCharacteristic { alpha, n })
}

pub fn ms_characteristic(x: &SpaceExpr) -> Result<MSCharacteristic, ClassifyError> {
    characteristic_of(&analyze(x)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Homeomorphic,
    Distinct,
}

/// A named invariant that a certificate can be re-checked against.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Invariant {
    Characteristic,
    Compact,
    Countable,
    Sigma,
    SigmaKappa(CardinalSym),
    Psi(CardinalSym),
    /// The normalized expression text: equal texts name the same space.
    Expression,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Invariant::Characteristic => f.write_str("ms_characteristic"),
            Invariant::Compact => f.write_str("compact"),
            Invariant::Countable => f.write_str("countable"),
            Invariant::Sigma => f.write_str("sigma"),
            Invariant::SigmaKappa(k) => write!(f, "sigma_kappa[{k}]"),
            Invariant::Psi(k) => write!(f, "psi[{k}]"),
            Invariant::Expression => f.write_str("expression"),
        }
    }
}

impl Serialize for Invariant {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which invariants a refutation may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Selector {
    #[default]
    All,
    Characteristic,
    Sigma,
    SigmaKappa,
    Psi,
}

impl Selector {
    fn allows(&self, inv: &Invariant) -> bool {
        match self {
            Selector::All => true,
            Selector::Characteristic => matches!(inv, Invariant::Characteristic),
            Selector::Sigma => matches!(inv, Invariant::Sigma),
            Selector::SigmaKappa => matches!(inv, Invariant::SigmaKappa(_)),
            Selector::Psi => matches!(inv, Invariant::Psi(_)),
        }
    }
}

impl std::str::FromStr for Selector {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "all" => Selector::All,
            "characteristic" | "ms" => Selector::Characteristic,
            "sigma" => Selector::Sigma,
            "sigma_kappa" => Selector::SigmaKappa,
            "psi" => Selector::Psi,
            _ => return Err(format!("unknown invariant selector `{s}`")),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub verdict: Verdict,
    pub invariant: Invariant,
    pub left: String,
    pub right: String,
    pub left_value: String,
    pub right_value: String,
    pub notes: Vec<String>,
}

const CONCAT_NOTE: &str = "concat places its parts side by side as an ordered sum; \
                           no end points are shared between consecutive parts";

fn uses_concat(x: &SpaceExpr) -> bool {
    match x {
        SpaceExpr::Concat { .. } => true,
        SpaceExpr::OrdInterval { .. } | SpaceExpr::ZAtom | SpaceExpr::PuncturedLadder { .. } => false,
        SpaceExpr::Reverse { inner } => uses_concat(inner),
        SpaceExpr::LexSum { blocks, .. } => blocks.iter().any(|b| uses_concat(&b.space)),
        SpaceExpr::Product { left, right } => uses_concat(left) || uses_concat(right),
        SpaceExpr::MetricSum { parts } => parts.iter().any(uses_concat),
        SpaceExpr::Hedgehog { spines } => spines.iter().any(|s| match s {
            Spine::Family { space, .. } => uses_concat(space),
            Spine::Tower { .. } => false,
        }),
    }
}

fn show_set<T: fmt::Display>(s: impl IntoIterator<Item = T>) -> String {
    let items: Vec<String> = s.into_iter().map(|v| v.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

/// Evaluate one invariant, rendered as text so values of different types compare uniformly.
pub fn evaluate(x: &SpaceExpr, inv: &Invariant) -> Result<String, ClassifyError> {
    Ok(match inv {
        Invariant::Characteristic => ms_characteristic(x)?.to_string(),
        Invariant::Compact => analyze(x)?.compact.to_string(),
        Invariant::Countable => countable(&analyze(x)?).to_string(),
        Invariant::Sigma => show_set(invariants::sigma(x)?),
        Invariant::SigmaKappa(k) => show_set::<&Ordinal>(&invariants::sigma_kappa(x, k)?),
        Invariant::Psi(k) => show_set::<&Ordinal>(&invariants::psi(x, k)?),
        Invariant::Expression => x.to_string(),
    })
}

/// Invariant values of one space, in refutation order.
struct Profile {
    characteristic: Option<MSCharacteristic>,
    values: Vec<(Invariant, Result<String, String>)>,
    concat: bool,
    text: String,
}

fn refutation_order(kappas: &[CardinalSym]) -> Vec<Invariant> {
    let mut v = vec![Invariant::Compact, Invariant::Countable, Invariant::Sigma];
    v.extend(kappas.iter().cloned().map(Invariant::SigmaKappa));
    v.extend(kappas.iter().filter(|k| k.regularity() == Regularity::Regular).cloned().map(Invariant::Psi));
    v
}

fn profile(x: &SpaceExpr, kappas: &[CardinalSym], sel: Selector) -> Result<Profile, ClassifyError> {
    let a = analyze(x)?;
    let characteristic = if sel.allows(&Invariant::Characteristic) && countable(&a) && a.compact {
        Some(characteristic_of(&a)?)
    } else {
        None
    };
    let values = refutation_order(kappas)
        .into_iter()
        .filter(|inv| sel.allows(inv))
        .map(|inv| {
            let v = evaluate(x, &inv).map_err(|e| e.to_string());
            (inv, v)
        })
        .collect();
    Ok(Profile { characteristic, values, concat: uses_concat(x), text: x.to_string() })
}

fn compare(a: &Profile, b: &Profile) -> Result<Certificate, ClassifyError> {
    let notes = if a.concat || b.concat { vec![CONCAT_NOTE.to_string()] } else { Vec::new() };
    let cert = |verdict, invariant, lv: String, rv: String| Certificate {
        schema_version: SCHEMA_VERSION,
        verdict,
        invariant,
        left: a.text.clone(),
        right: b.text.clone(),
        left_value: lv,
        right_value: rv,
        notes: notes.clone(),
    };
    if let (Some(ca), Some(cb)) = (&a.characteristic, &b.characteristic) {
        let verdict = if ca == cb { Verdict::Homeomorphic } else { Verdict::Distinct };
        return Ok(cert(verdict, Invariant::Characteristic, ca.to_string(), cb.to_string()));
    }
    if a.text == b.text {
        return Ok(cert(Verdict::Homeomorphic, Invariant::Expression, a.text.clone(), b.text.clone()));
    }
    let mut unevaluated = Vec::new();
    for ((inv, va), (_, vb)) in a.values.iter().zip(&b.values) {
        match (va, vb) {
            (Ok(x), Ok(y)) if x != y => return Ok(cert(Verdict::Distinct, inv.clone(), x.clone(), y.clone())),
            (Ok(_), Ok(_)) => {}
            (Err(e), _) | (_, Err(e)) => unevaluated.push(format!("{inv}: {e}")),
        }
    }
    let mut msg = "every computed invariant agrees and no classification theorem applies".to_string();
    if !unevaluated.is_empty() {
        msg.push_str(&format!(" (not evaluated: {})", unevaluated.join("; ")));
    }
    Err(ClassifyError::Inconclusive(msg))
}

/// Decide homeomorphism where the invariants allow it.
pub fn homeomorphic(a: &SpaceExpr, b: &SpaceExpr, kappas: &[CardinalSym]) -> Result<Certificate, ClassifyError> {
    let (pa, pb) = rayon::join(|| profile(a, kappas, Selector::All), || profile(b, kappas, Selector::All));
    compare(&pa?, &pb?)
}

impl Certificate {
    /// Recompute the witnessing invariant on both spaces and confirm the recorded values.
    pub fn recheck(&self, a: &SpaceExpr, b: &SpaceExpr) -> Result<bool, ClassifyError> {
        let (va, vb) = (evaluate(a, &self.invariant)?, evaluate(b, &self.invariant)?);
        let consistent = match self.verdict {
            Verdict::Homeomorphic => va == vb,
            Verdict::Distinct => va != vb,
        };
        Ok(consistent && va == self.left_value && vb == self.right_value)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairEntry {
    pub i: usize,
    pub j: usize,
    pub certificate: Option<Certificate>,
    /// Set when no verdict could be reached for this pair.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistinctnessMatrix {
    pub schema_version: u32,
    pub members: Vec<String>,
    pub pairs: Vec<PairEntry>,
    pub all_distinct: bool,
}

pub fn pairwise_distinct(
    family: &[SpaceExpr],
    kappas: &[CardinalSym],
    sel: Selector,
) -> Result<DistinctnessMatrix, ClassifyError> {
    if family.len() < 2 {
        return Err(ClassifyError::Inconclusive("a family needs at least two members".into()));
    }
    let profiles: Vec<Profile> =
        family.par_iter().map(|x| profile(x, kappas, sel)).collect::<Result<_, _>>()?;
    let index: Vec<(usize, usize)> =
        (0..family.len()).flat_map(|i| (i + 1..family.len()).map(move |j| (i, j))).collect();
    let pairs: Vec<PairEntry> = index
        .par_iter()
        .map(|&(i, j)| match compare(&profiles[i], &profiles[j]) {
            Ok(c) => PairEntry { i, j, certificate: Some(c), error: None },
            Err(e) => PairEntry { i, j, certificate: None, error: Some(e.to_string()) },
        })
        .collect();
    let all_distinct =
        pairs.iter().all(|p| p.certificate.as_ref().is_some_and(|c| c.verdict == Verdict::Distinct));
    Ok(DistinctnessMatrix {
        schema_version: SCHEMA_VERSION,
        members: family.iter().map(|x| x.to_string()).collect(),
        pairs,
        all_distinct,
    })
}

/// The distinct invariant names used by the certificates of a matrix.
pub fn witnesses(m: &DistinctnessMatrix) -> BTreeSet<String> {
    m.pairs.iter().filter_map(|p| p.certificate.as_ref()).map(|c| c.invariant.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::default_kappas;
    use crate::spaces::parse_expr;

    fn x(s: &str) -> SpaceExpr {
        parse_expr(s).unwrap()
    }

    fn ms(s: &str) -> (String, u64) {
        let c = ms_characteristic(&x(s)).unwrap();
        (c.alpha.to_string(), c.n)
    }

    #[test]
    fn characteristics() {
        assert_eq!(ms("ord[w^2*3+w*7+4]"), ("2".into(), 3));
        assert_eq!(ms("ord[0]"), ("0".into(), 1));
        assert_eq!(ms("msum(z,z,z)"), ("1".into(), 3));
        for n in 2..=4 {
            assert_eq!(ms(&format!("concat(ord[w^{n}],rev(ord[w^2)))")), (n.to_string(), 1));
        }
        assert!(matches!(ms_characteristic(&x("ord[w)")), Err(ClassifyError::NotCompact(_))));
        assert!(matches!(ms_characteristic(&x("ord[o(aleph_1)]")), Err(ClassifyError::NotCountable(_))));
    }

    #[test]
    fn certificates() {
        let k = default_kappas();
        let c = homeomorphic(&x("ord[w*2]"), &x("ord[w*2+5]"), &k).unwrap();
        assert_eq!(c.verdict, Verdict::Homeomorphic);
        assert_eq!(c.left_value, "(1, 2)");
        let a = x("msum(concat(ord[w^2],ladder(2)),concat(ord[w^5],ladder(5)))");
        let b = x("msum(concat(ord[w^2],ladder(2)),concat(ord[w^7],ladder(7)))");
        let d = homeomorphic(&a, &b, &k).unwrap();
        assert_eq!(d.verdict, Verdict::Distinct);
        assert_eq!(d.invariant, Invariant::Sigma);
        assert_eq!((d.left_value.as_str(), d.right_value.as_str()), ("{2, 5}", "{2, 7}"));
        assert!(d.recheck(&a, &b).unwrap());
        assert_eq!(d.notes.len(), 1);
        let same = homeomorphic(&a, &a, &k).unwrap();
        assert_eq!((same.verdict, same.invariant.clone()), (Verdict::Homeomorphic, Invariant::Expression));
        assert!(same.recheck(&a, &a).unwrap());
        let open = homeomorphic(&x("ord[w^2)"), &x("concat(ord[w^2),ord[w^2))"), &k);
        assert!(matches!(open, Err(ClassifyError::Inconclusive(_))));
    }

    #[test]
    fn matrix() {
        let fam = vec![x("ord[w]"), x("ord[w^2]"), x("ord[w^2]")];
        let m = pairwise_distinct(&fam, &default_kappas(), Selector::All).unwrap();
        assert_eq!(m.pairs.len(), 3);
        assert!(!m.all_distinct);
        assert_eq!(witnesses(&m), BTreeSet::from(["ms_characteristic".to_string()]));
    }
}
