//! A reference derivative calculus on definable sets of ordinals.
//!
//! Sets are finite unions of divisibility atoms, optionally carrying a tail:
//! `{ m + t : m in D, t in T }` where `D` holds the positive multiples of
//! `w^xi` in an interval and `T` is a set of ordinals below `w^xi`. Derived
//! sets are computed straight from the limit-point definition, atom by atom.
//! Nothing here goes through the engine's point classes.

use std::fmt;

use serde::Serialize;

use crate::cbengine::{rank_of_point, EngineError};
use crate::ordinal::Ordinal;
use crate::spaces::{points_of_truncation, Coord, PointName, SpaceExpr};

/// Iterations after which a rank computation gives up.
pub const MAX_ITERATIONS: u64 = 256;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("sup of the set is {found}, expected {expected}")]
    BadSupremum { expected: Ordinal, found: String },
    #[error("set is not below {0}")]
    NotBelow(Ordinal),
    #[error("only plain ordinals are supported, got {0}")]
    NotPlain(Ordinal),
    #[error("derivative iteration exceeded {0} steps")]
    TooDeep(u64),
    #[error("unsupported expression for the oracle: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// `{ m + t }` with `m` a multiple of `w^xi` between `a` and `b` (positive when
/// `xi > 0`) and `t` in `tail` (`{0}` when absent).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Atom {
    pub xi: Ordinal,
    pub a: Ordinal,
    pub b: Ordinal,
    pub lo_open: bool,
    pub hi_open: bool,
    pub tail: Option<Box<DefSet>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct DefSet {
    pub atoms: Vec<Atom>,
}

impl Atom {
    /// The closed atom `D(xi, a, b)`.
    pub fn new(xi: Ordinal, a: Ordinal, b: Ordinal) -> Atom {
        Atom { xi, a, b, lo_open: false, hi_open: false, tail: None }
    }

    pub fn with_bounds(mut self, lo_open: bool, hi_open: bool) -> Atom {
        self.lo_open = lo_open;
        self.hi_open = hi_open;
        self
    }

    pub fn with_tail(mut self, tail: DefSet) -> Atom {
        self.tail = Some(Box::new(tail));
        self
    }

    fn in_bounds(&self, m: &Ordinal) -> bool {
        let lo = if self.lo_open { *m > self.a } else { *m >= self.a };
        let hi = if self.hi_open { *m < self.b } else { *m <= self.b };
        lo && hi
    }

    fn base_contains(&self, m: &Ordinal) -> bool {
        m.divisible_by_omega_pow(&self.xi) && (self.xi.is_zero() || !m.is_zero()) && self.in_bounds(m)
    }

    pub fn contains(&self, beta: &Ordinal) -> bool {
        let m = beta.floor_multiple(&self.xi);
        let t = m.sub_left(beta).expect("floor is below");
        self.base_contains(&m)
            && match &self.tail {
                None => t.is_zero(),
                Some(s) => s.contains(&t),
            }
    }

    /// Least base element.
    fn least(&self) -> Option<Ordinal> {
        let unit = Ordinal::omega_pow(&self.xi);
        let f = self.a.floor_multiple(&self.xi);
        let mut m = if f == self.a { f } else { f.add(&unit) };
        if self.lo_open && m == self.a {
            m = m.add(&unit);
        }
        if m.is_zero() && !self.xi.is_zero() {
            m = unit;
        }
        self.in_bounds(&m).then_some(m)
    }

    /// Greatest base element, if there is one.
    fn greatest(&self) -> Option<Ordinal> {
        let f = self.b.floor_multiple(&self.xi);
        let m = if self.hi_open && f == self.b {
            // the largest multiple below `b` exists only when `b` ends in a `w^xi` term
            match self.b.cnf().last() {
                Some((e, c)) if *e == self.xi => {
                    let top = self.b.cnf();
                    let mut out = Ordinal::zero();
                    for (i, (e, c2)) in top.iter().enumerate() {
                        let c2 = if i + 1 == top.len() { c - 1 } else { *c2 };
                        out = out.add(&Ordinal::monomial(e, c2));
                    }
                    out
                }
                _ => return None,
            }
        } else {
            f
        };
        self.base_contains(&m).then_some(m)
    }

    pub fn is_empty(&self) -> bool {
        self.least().is_none() || self.tail.as_ref().is_some_and(|t| t.is_empty())
    }

    /// Same set, with bounds tightened to attained elements where possible.
    fn normalized(mut self) -> Atom {
        if let Some(m) = self.least() {
            self.a = m;
            self.lo_open = false;
        }
        if let Some(m) = self.greatest() {
            self.b = m;
            self.hi_open = false;
        }
        if let Some(t) = self.tail.take() {
            let t = t.normalized();
            if t.atoms != [Atom::new(Ordinal::zero(), Ordinal::zero(), Ordinal::zero())] {
                self.tail = Some(Box::new(t));
            }
        }
        self
    }

    /// Limit points of the atom.
    pub fn derive(&self) -> DefSet {
        // blocks accumulate at the positive multiples of w^(xi+1) in ]a, b]
        let stack = Atom::new(self.xi.succ(), self.a.clone(), self.b.clone()).with_bounds(true, false);
        let mut out = vec![stack];
        if let Some(t) = &self.tail {
            let inner = t.derive();
            if !inner.is_empty() {
                let mut a = self.clone();
                a.tail = Some(Box::new(inner));
                out.push(a);
            }
        }
        DefSet::from_atoms(out)
    }

    /// The first `cap` blocks and the last one, for sampling.
    fn sample(&self, cap: usize, out: &mut Vec<Ordinal>) {
        let unit = Ordinal::omega_pow(&self.xi);
        let tails = match &self.tail {
            None => vec![Ordinal::zero()],
            Some(t) => t.sample_points(cap),
        };
        let mut bases = Vec::new();
        let mut m = self.least();
        while let Some(x) = m {
            if bases.len() >= cap {
                break;
            }
            bases.push(x.clone());
            let next = x.add(&unit);
            m = self.base_contains(&next).then_some(next);
        }
        if let Some(g) = self.greatest() {
            bases.push(g);
        }
        for b in bases {
            out.extend(tails.iter().map(|t| b.add(t)));
        }
    }
}

impl DefSet {
    pub fn empty() -> DefSet {
        DefSet::default()
    }

    /// `[lo, hi]`.
    pub fn interval(lo: Ordinal, hi: Ordinal) -> DefSet {
        DefSet::from_atoms(vec![Atom::new(Ordinal::zero(), lo, hi)])
    }

    /// Drops empty atoms, normalizes bounds and sorts.
    pub fn from_atoms(atoms: Vec<Atom>) -> DefSet {
        let mut atoms: Vec<Atom> = atoms.into_iter().filter(|a| !a.is_empty()).map(Atom::normalized).collect();
        atoms.sort();
        atoms.dedup();
        DefSet { atoms }
    }

    fn normalized(self) -> DefSet {
        DefSet::from_atoms(self.atoms)
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, beta: &Ordinal) -> bool {
        self.atoms.iter().any(|a| a.contains(beta))
    }

    pub fn union(&self, other: &DefSet) -> DefSet {
        DefSet::from_atoms(self.atoms.iter().chain(&other.atoms).cloned().collect())
    }

    /// The derived set.
    pub fn derive(&self) -> DefSet {
        DefSet::from_atoms(self.atoms.iter().flat_map(|a| a.derive().atoms).collect())
    }

    pub fn closure(&self) -> DefSet {
        self.union(&self.derive())
    }

    /// A finite sample of elements, sorted.
    pub fn sample_points(&self, cap: usize) -> Vec<Ordinal> {
        let mut out = Vec::new();
        for a in &self.atoms {
            a.sample(cap, &mut out);
        }
        out.sort();
        out.dedup();
        out
    }

    /// Bounds and least elements of every atom, and one point past each upper bound.
    pub fn endpoints(&self) -> Vec<Ordinal> {
        let mut out = Vec::new();
        for a in &self.atoms {
            out.push(a.a.clone());
            out.push(a.b.clone());
            out.push(a.b.succ());
            out.extend(a.least());
            out.extend(a.greatest());
        }
        out.sort();
        out.dedup();
        out
    }
}

/// One derivative step.
pub fn def_derive(s: &DefSet) -> DefSet {
    s.derive()
}

/// `n` derivative steps.
pub fn def_derive_n(s: &DefSet, n: u64) -> DefSet {
    let mut cur = s.clone();
    for _ in 0..n {
        if cur.is_empty() {
            break;
        }
        cur = cur.derive();
    }
    cur
}

/// The derivative iterates `s, s', s'', ...` up to the first empty one (excluded).
pub fn def_stages(s: &DefSet) -> Result<Vec<DefSet>, OracleError> {
    let mut out = Vec::new();
    let mut cur = s.clone();
    while !cur.is_empty() {
        if out.len() as u64 >= MAX_ITERATIONS {
            return Err(OracleError::TooDeep(MAX_ITERATIONS));
        }
        let next = cur.derive();
        out.push(cur);
        cur = next;
    }
    Ok(out)
}

/// The last stage containing `beta`, if `beta` lies in the first one.
pub fn stage_index<T>(stages: &[T], mut holds: impl FnMut(&T) -> bool) -> Option<u64> {
    let n = stages.iter().take_while(|s| holds(s)).count();
    (n > 0).then(|| n as u64 - 1)
}

/// A finite union of rectangles `A x B`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RectUnion {
    pub rects: Vec<(DefSet, DefSet)>,
}

impl RectUnion {
    pub fn new(rects: Vec<(DefSet, DefSet)>) -> RectUnion {
        let mut rects: Vec<_> = rects.into_iter().filter(|(a, b)| !a.is_empty() && !b.is_empty()).collect();
        rects.sort();
        rects.dedup();
        RectUnion { rects }
    }

    pub fn is_empty(&self) -> bool {
        self.rects.is_empty()
    }

    pub fn contains(&self, x: &Ordinal, y: &Ordinal) -> bool {
        self.rects.iter().any(|(a, b)| a.contains(x) && b.contains(y))
    }
}

/// Derived set of a union of rectangles.
///
/// A point of `A x B` is isolated iff both coordinates are isolated, and a
/// point outside it is a limit iff one coordinate is a limit and the other
/// lies in the closure. So `(A x B)' = A' x cl(B) u cl(A) x B'`.
pub fn rect_derive(r: &RectUnion) -> RectUnion {
    let mut out = Vec::new();
    for (a, b) in &r.rects {
        let (da, db) = (a.derive(), b.derive());
        out.push((da.clone(), b.union(&db)));
        out.push((a.union(&da), db));
    }
    RectUnion::new(out)
}

pub fn rect_stages(r: &RectUnion) -> Result<Vec<RectUnion>, OracleError> {
    let mut out = Vec::new();
    let mut cur = r.clone();
    while !cur.is_empty() {
        if out.len() as u64 >= MAX_ITERATIONS {
            return Err(OracleError::TooDeep(MAX_ITERATIONS));
        }
        let next = rect_derive(&cur);
        out.push(cur);
        cur = next;
    }
    Ok(out)
}

/// A finite union of boxes `A_1 x ... x A_n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BoxUnion {
    pub boxes: Vec<Vec<DefSet>>,
}

impl BoxUnion {
    pub fn new(boxes: Vec<Vec<DefSet>>) -> BoxUnion {
        let mut boxes: Vec<_> = boxes.into_iter().filter(|b| b.iter().all(|s| !s.is_empty())).collect();
        boxes.sort();
        boxes.dedup();
        BoxUnion { boxes }
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.is_empty()
    }

    pub fn contains(&self, p: &[Ordinal]) -> bool {
        self.boxes.iter().any(|b| b.len() == p.len() && b.iter().zip(p).all(|(s, x)| s.contains(x)))
    }
}

/// The same isolation rule in `n` coordinates: a point is a limit iff one
/// coordinate is a limit and the others lie in the closures.
pub fn box_derive(u: &BoxUnion) -> BoxUnion {
    let mut out = Vec::new();
    for b in &u.boxes {
        let closures: Vec<DefSet> = b.iter().map(DefSet::closure).collect();
        for i in 0..b.len() {
            let mut nb = closures.clone();
            nb[i] = b[i].derive();
            out.push(nb);
        }
    }
    BoxUnion::new(out)
}

pub fn box_stages(u: &BoxUnion) -> Result<Vec<BoxUnion>, OracleError> {
    let mut out = Vec::new();
    let mut cur = u.clone();
    while !cur.is_empty() {
        if out.len() as u64 >= MAX_ITERATIONS {
            return Err(OracleError::TooDeep(MAX_ITERATIONS));
        }
        let next = box_derive(&cur);
        out.push(cur);
        cur = next;
    }
    Ok(out)
}

/// Whether `gamma` survives `xi` derivatives of `U = u_{a in A} [a, a + w^xi]`.
/// `A` must lie in `[0, gamma]` with supremum `gamma`. Derivatives are taken
/// in the closure of `U`, so `xi = 0` always succeeds.
pub fn lemma3_witness(a: &DefSet, xi: u64, gamma: &Ordinal) -> Result<bool, OracleError> {
    check_sup(a, gamma)?;
    let step = Ordinal::omega_pow(&Ordinal::nat(xi));
    let mut parts = Vec::new();
    for atom in &a.atoms {
        parts.extend(widen(atom, xi, &step)?);
    }
    let u = DefSet::from_atoms(parts);
    Ok(def_derive_n(&u.closure(), xi).contains(gamma))
}

fn check_sup(a: &DefSet, gamma: &Ordinal) -> Result<(), OracleError> {
    if !gamma.is_plain() {
        return Err(OracleError::NotPlain(gamma.clone()));
    }
    if a.is_empty() {
        return Err(OracleError::BadSupremum { expected: gamma.clone(), found: "empty".into() });
    }
    if a.atoms.iter().any(|t| t.b > *gamma) {
        return Err(OracleError::NotBelow(gamma.clone()));
    }
    // sup A = gamma iff gamma is the least point of the closure above A
    let attained = a.atoms.iter().filter_map(|t| t.greatest().map(|g| (g, t))).map(|(g, t)| top_of(t, &g));
    let open = a.atoms.iter().filter(|t| t.greatest().is_none()).map(|t| t.b.clone());
    let sup = attained.chain(open).max().unwrap();
    if sup != *gamma {
        return Err(OracleError::BadSupremum { expected: gamma.clone(), found: sup.to_string() });
    }
    Ok(())
}

/// Top element of the last block `g + T`.
fn top_of(t: &Atom, g: &Ordinal) -> Ordinal {
    match &t.tail {
        None => g.clone(),
        Some(s) => g.add(&s.atoms.iter().map(|x| x.b.clone()).max().unwrap_or_default()),
    }
}

/// `u_{a in atom} [a, a + w^xi]` as atoms.
fn widen(atom: &Atom, xi: u64, step: &Ordinal) -> Result<Vec<Atom>, OracleError> {
    if atom.tail.is_some() {
        return Err(OracleError::Unsupported("witness sets with tails".into()));
    }
    let block = DefSet::interval(Ordinal::zero(), step.clone());
    let xi_o = Ordinal::nat(xi);
    if atom.xi > xi_o {
        // blocks are disjoint: a tail atom
        return Ok(vec![atom.clone().with_tail(block)]);
    }
    let lo = atom.least().expect("nonempty atom");
    // consecutive elements are at most w^xi apart, so the blocks overlap into one interval
    Ok(vec![match atom.greatest() {
        Some(g) => Atom::new(Ordinal::zero(), lo, g.add(step)),
        None => Atom::new(Ordinal::zero(), lo, atom.b.clone()).with_bounds(false, true),
    }])
}

/// One disagreement between engine and oracle.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Divergence {
    pub point: String,
    pub engine_rank: String,
    pub oracle_rank: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub expr: String,
    pub points_checked: usize,
    pub oracle_height: u64,
    pub divergence: Option<Divergence>,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.divergence.is_none()
    }
}

/// The ordinal interval or `z` behind a factor, as a definable set.
fn factor_set(x: &SpaceExpr) -> Result<DefSet, OracleError> {
    match x {
        SpaceExpr::OrdInterval { theta, open_top } => {
            if !theta.is_plain() {
                return Err(OracleError::NotPlain(theta.clone()));
            }
            let a = Atom::new(Ordinal::zero(), Ordinal::zero(), theta.clone()).with_bounds(false, *open_top);
            Ok(DefSet::from_atoms(vec![a]))
        }
        SpaceExpr::ZAtom => Ok(DefSet::interval(Ordinal::zero(), Ordinal::omega())),
        other => Err(OracleError::Unsupported(other.kind_name().into())),
    }
}

/// Factors of a right-nested product of intervals.
fn factors(x: &SpaceExpr) -> Result<Vec<&SpaceExpr>, OracleError> {
    match x {
        SpaceExpr::Product { left, right } => {
            let mut v = factors(left)?;
            v.extend(factors(right)?);
            Ok(v)
        }
        SpaceExpr::OrdInterval { .. } | SpaceExpr::ZAtom => Ok(vec![x]),
        other => Err(OracleError::Unsupported(other.kind_name().into())),
    }
}

/// Coordinates of a point of a nested product, and the inverse.
fn coords(p: &PointName) -> Option<Vec<Ordinal>> {
    match p.0.as_slice() {
        [Coord::Ord(b)] => Some(vec![b.clone()]),
        [Coord::Pair(a, b)] => {
            let mut v = coords(a)?;
            v.extend(coords(b)?);
            Some(v)
        }
        _ => None,
    }
}

fn name_of(x: &SpaceExpr, c: &[Ordinal]) -> PointName {
    match x {
        SpaceExpr::Product { left, right } => {
            let k = factors(left).map(|v| v.len()).unwrap_or(1);
            PointName(vec![Coord::Pair(name_of(left, &c[..k]), name_of(right, &c[k..]))])
        }
        _ => PointName::ord(c[0].clone()),
    }
}

fn fmt_rank(r: Option<u64>) -> String {
    r.map_or_else(|| "none".to_string(), |r| r.to_string())
}

/// The derivative iterates of a nested product of intervals or `z`, as box unions.
pub fn expr_stages(x: &SpaceExpr) -> Result<Vec<BoxUnion>, OracleError> {
    let sets = factors(x)?.into_iter().map(factor_set).collect::<Result<Vec<_>, _>>()?;
    box_stages(&BoxUnion::new(vec![sets]))
}

/// Compare engine ranks with oracle derivative iterates on a point sample.
/// Supports ordinal intervals, `z`, and nested products of them. The sample is the
/// space's truncation points plus every atom endpoint of every oracle stage.
pub fn check_expr(x: &SpaceExpr, depth: u64) -> Result<OracleReport, OracleError> {
    let expr = x.to_string();
    let stages = expr_stages(x)?;
    let dims = stages.first().map_or(0, |s| s.boxes[0].len());
    let mut axes: Vec<Vec<Ordinal>> = vec![Vec::new(); dims];
    for p in points_of_truncation(x, depth) {
        for (axis, c) in axes.iter_mut().zip(coords(&p).expect("products of intervals have ordinal coordinates")) {
            axis.push(c);
        }
    }
    let first = &stages[0].boxes[0];
    for st in &stages {
        for b in &st.boxes {
            for (i, s) in b.iter().enumerate() {
                axes[i].extend(s.endpoints().into_iter().filter(|p| first[i].contains(p)));
            }
        }
    }
    for a in axes.iter_mut() {
        a.sort();
        a.dedup();
    }
    let mut n = 0;
    let mut idx = vec![0usize; dims];
    loop {
        let c: Vec<Ordinal> = idx.iter().zip(&axes).map(|(&i, a)| a[i].clone()).collect();
        let name = name_of(x, &c);
        let engine = rank_of_point(x, &name)?;
        let oracle = stage_index(&stages, |s| s.contains(&c));
        n += 1;
        if engine.as_nat() != oracle {
            let d = Divergence { point: name.to_string(), engine_rank: engine.to_string(), oracle_rank: fmt_rank(oracle) };
            return Ok(OracleReport { expr, points_checked: n, oracle_height: stages.len() as u64, divergence: Some(d) });
        }
        // odometer over the axes
        let mut k = dims;
        loop {
            if k == 0 {
                return Ok(OracleReport { expr, points_checked: n, oracle_height: stages.len() as u64, divergence: None });
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < axes[k].len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let l = if self.lo_open { "]" } else { "[" };
        let r = if self.hi_open { "[" } else { "]" };
        write!(f, "D({}, {l}{}, {}{r})", self.xi, self.a, self.b)?;
        if let Some(t) = &self.tail {
            write!(f, " + {t}")?;
        }
        Ok(())
    }
}

impl fmt::Display for DefSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.atoms.is_empty() {
            return f.write_str("{}");
        }
        let parts: Vec<String> = self.atoms.iter().map(|a| a.to_string()).collect();
        if parts.len() == 1 {
            f.write_str(&parts[0])
        } else {
            write!(f, "({})", parts.join(" u "))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn d(xi: u64, a: &str, b: &str) -> Atom {
        Atom::new(Ordinal::nat(xi), o(a), o(b))
    }

    fn set(atoms: Vec<Atom>) -> DefSet {
        DefSet::from_atoms(atoms)
    }

    #[test]
    fn interval_derivatives() {
        let s = set(vec![d(0, "0", "w*2")]);
        let s1 = def_derive(&s);
        assert_eq!(s1, set(vec![d(1, "w", "w*2")]));
        assert_eq!(s1.sample_points(10), vec![o("w"), o("w*2")]);
        assert!(def_derive(&s1).is_empty());
        for xi in 1..5 {
            let top = Ordinal::omega_pow(&Ordinal::nat(xi));
            let s = DefSet::interval(Ordinal::zero(), top.clone());
            let last = def_derive_n(&s, xi);
            assert_eq!(last.sample_points(10), vec![top], "xi = {xi}");
            assert!(def_derive(&last).is_empty());
        }
    }

    #[test]
    fn open_tops_and_membership() {
        let s = set(vec![d(0, "0", "w^2").with_bounds(false, true)]);
        let s1 = def_derive(&s);
        assert!(s1.contains(&o("w*5")));
        assert!(s1.contains(&o("w^2")));
        assert!(!s1.contains(&o("w*5+1")));
        assert!(def_derive(&s1).contains(&o("w^2")));
        assert!(!s.contains(&o("w^2")));
        assert!(d(1, "0", "w*3").with_bounds(false, true).greatest() == Some(o("w*2")));
        assert!(d(2, "0", "w^2*3+w").with_bounds(false, true).greatest() == Some(o("w^2*3")));
    }

    #[test]
    fn square_of_z() {
        let z = DefSet::interval(Ordinal::zero(), Ordinal::omega());
        let r = RectUnion::new(vec![(z.clone(), z.clone())]);
        let r1 = rect_derive(&r);
        let w = Ordinal::omega();
        for n in [0, 1, 5] {
            assert!(r1.contains(&w, &Ordinal::nat(n)));
            assert!(r1.contains(&Ordinal::nat(n), &w));
            assert!(!r1.contains(&Ordinal::nat(n), &Ordinal::nat(n + 1)));
        }
        let r2 = rect_derive(&r1);
        assert!(r2.contains(&w, &w));
        assert!(!r2.contains(&w, &Ordinal::nat(3)));
        assert!(rect_derive(&r2).is_empty());
        let b = box_derive(&BoxUnion::new(vec![vec![z.clone(), z.clone()]]));
        for p in [[w.clone(), Ordinal::nat(2)], [w.clone(), w.clone()], [Ordinal::nat(1), Ordinal::nat(2)]] {
            assert_eq!(b.contains(&p), r1.contains(&p[0], &p[1]));
        }
    }

    #[test]
    fn witness() {
        let a = set(vec![d(1, "w", "w^2").with_bounds(false, true)]);
        assert!(lemma3_witness(&a, 1, &o("w^2")).unwrap());
        assert!(lemma3_witness(&a, 0, &o("w^2")).unwrap());
        let finite = set(vec![d(0, "3", "5")]);
        assert!(matches!(lemma3_witness(&finite, 1, &o("5")), Ok(false)));
        assert!(matches!(lemma3_witness(&finite, 0, &o("6")), Err(OracleError::BadSupremum { .. })));
        assert!(matches!(lemma3_witness(&a, 1, &o("w^3")), Err(OracleError::BadSupremum { .. })));
        // isolated multiples of w^2 below w^3 with unit blocks
        let b = set(vec![d(2, "0", "w^3").with_bounds(false, true)]);
        assert!(lemma3_witness(&b, 1, &o("w^3")).unwrap());
        assert!(lemma3_witness(&b, 2, &o("w^3")).unwrap());
    }

    #[test]
    fn tail_atoms() {
        let t = DefSet::interval(Ordinal::zero(), Ordinal::omega());
        let s = set(vec![d(2, "0", "w^3").with_bounds(false, true).with_tail(t)]);
        assert!(s.contains(&o("w^2*4+w")));
        assert!(s.contains(&o("w^2*4+7")));
        assert!(!s.contains(&o("w^2*4+w+1")));
        let s1 = def_derive(&s);
        assert!(s1.contains(&o("w^2*4+w")));
        assert!(!s1.contains(&o("w^2*4")));
        assert!(s1.contains(&o("w^3")));
    }

    #[test]
    fn engine_agreement() {
        for e in [
            "ord[w^2*3+w+2]",
            "ord[w^3)",
            "ord[w^4*2]",
            "prod(z,ord[w^2+1])",
            "prod(z,z)",
            "prod(ord[1],ord[w*2])",
            "prod(z,prod(z,z))",
        ] {
            let x: SpaceExpr = crate::spaces::parse_expr(e).unwrap();
            let r = check_expr(&x, 3).unwrap();
            assert!(r.agrees(), "{e}: {:?}", r.divergence);
            assert!(r.points_checked > 3);
        }
    }
}
