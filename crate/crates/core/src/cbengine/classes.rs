//! Partition of a space into point classes: sets of points sharing a local
//! shape, described by a region, the ranks that occur and how many points there are.

use serde::Serialize;

use super::local::{Germ, Local};
use super::locate::{locate, PointLocal};
use super::ranks::RankSet;
use super::region::Region;
use super::EngineError;
use crate::ordinal::{Cardinal, Ordinal};
use crate::spaces::{Block, Coord, PointName, SpaceExpr, Spine};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointClass {
    pub region: Region,
    pub ranks: RankSet,
    pub count: Cardinal,
    /// Number of points of the largest rank, when that rank is attained.
    pub top_count: Option<Cardinal>,
    pub local: Local,
    /// Points whose every neighbourhood contains a non-compact closed piece.
    pub gamma: bool,
}

impl PointClass {
    fn point(name: PointName, left: Germ, right: Germ) -> PointClass {
        let mut c = PointClass {
            region: Region::Point(name),
            ranks: RankSet::single(Ordinal::zero()),
            count: Cardinal::Finite(1),
            top_count: Some(Cardinal::Finite(1)),
            local: Local::Point { left, right },
            gamma: false,
        };
        c.refresh();
        c
    }

    /// Recompute rank and gamma of a single point from its germs.
    fn refresh(&mut self) {
        if let Local::Point { left, right } = &self.local {
            self.ranks = RankSet::single(left.rank().max(right.rank()));
            self.gamma = matches!(left, Germ::Ladder) || matches!(right, Germ::Ladder);
        }
    }

    fn germs_mut(&mut self) -> Option<(&mut Germ, &mut Germ)> {
        match &mut self.local {
            Local::Point { left, right } => Some((left, right)),
            _ => None,
        }
    }

    /// The largest rank, if attained.
    pub fn max_rank(&self) -> Option<Ordinal> {
        self.ranks.max()
    }

    fn under(self, head: Coord) -> PointClass {
        PointClass { region: self.region.under(head), ..self }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Analysis {
    pub classes: Vec<PointClass>,
    pub compact: bool,
}

/// How a linear space ends on one side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Side {
    /// The end point exists and is the single point of this class.
    Attained(usize),
    /// No end point; the cut is approached like this germ.
    Open(Germ),
}

#[derive(Clone, Debug)]
pub(crate) struct Lin {
    classes: Vec<PointClass>,
    left: Side,
    right: Side,
    /// No gaps between consecutive points other than at the ends.
    complete: bool,
}

/// One piece of a lex sum, left to right.
pub(crate) enum Piece<'a> {
    /// Index points `offset + b` for `b < len`, or `b <= len` when closed.
    Segment { offset: Ordinal, len: Ordinal, closed: bool },
    Block(&'a Block),
}

pub(crate) fn lex_pieces<'a>(lo: &Ordinal, hi: &Ordinal, blocks: &'a [Block]) -> Vec<Piece<'a>> {
    let mut out = Vec::with_capacity(2 * blocks.len() + 1);
    let mut start = lo.clone();
    for b in blocks {
        let len = start.sub_left(&b.at).expect("blocks are increasing and inside the index");
        if !len.is_zero() {
            out.push(Piece::Segment { offset: start.clone(), len, closed: false });
        }
        out.push(Piece::Block(b));
        start = b.at.succ();
    }
    if start <= *hi {
        let len = start.sub_left(hi).unwrap();
        out.push(Piece::Segment { offset: start, len, closed: true });
    }
    out
}

/// The effective closed top of `[0, theta]` or `[0, theta[`; `None` for an open limit.
pub(crate) fn closed_top(theta: &Ordinal, open: bool) -> Option<Ordinal> {
    if !open {
        Some(theta.clone())
    } else {
        theta.pred()
    }
}

fn interval_name(offset: &Ordinal, b: &Ordinal, index: bool) -> PointName {
    let g = offset.add(b);
    PointName(vec![if index { Coord::Index(g) } else { Coord::Ord(g) }])
}

/// Points `0 < b < theta` of an ordinal interval.
fn interior_class(theta: &Ordinal, offset: &Ordinal, index: bool) -> Option<PointClass> {
    let d = theta.degree();
    let c = theta.leading_coeff();
    let has_rest = theta.cnf().len() > 1;
    let (ranks, count, top) = if d.is_zero() {
        let n = theta.as_nat()?.checked_sub(1).filter(|n| *n > 0)?;
        (RankSet::single(Ordinal::zero()), Cardinal::Finite(n), Some(Cardinal::Finite(n)))
    } else if c >= 2 || has_rest {
        let top = Cardinal::Finite(c - 1 + u64::from(has_rest));
        (RankSet::closed(Ordinal::zero(), d)?, theta.cardinality(), Some(top))
    } else {
        let top = d.is_successor().then(Cardinal::aleph0);
        (RankSet::below(Ordinal::zero(), d)?, theta.cardinality(), top)
    };
    Some(PointClass {
        region: Region::Span { prefix: vec![], index, offset: offset.clone(), lo: Ordinal::zero(), hi: theta.clone() },
        ranks,
        count,
        top_count: top,
        local: Local::Ordinal,
        gamma: false,
    })
}

fn ord_interval(theta: &Ordinal, open: bool, offset: &Ordinal, index: bool) -> Lin {
    let top = closed_top(theta, open);
    let end = top.clone().unwrap_or_else(|| theta.clone());
    if end.is_zero() {
        let p = PointClass::point(interval_name(offset, &end, index), Germ::End, Germ::End);
        return Lin { classes: vec![p], left: Side::Attained(0), right: Side::Attained(0), complete: true };
    }
    let mut classes = vec![PointClass::point(interval_name(offset, &Ordinal::zero(), index), Germ::End, Germ::Isolated)];
    classes.extend(interior_class(&end, offset, index));
    let right = match top {
        Some(t) => {
            classes.push(PointClass::point(interval_name(offset, &t, index), Germ::ordinal(t.point_rank()), Germ::End));
            Side::Attained(classes.len() - 1)
        }
        None => Side::Open(Germ::ordinal(theta.point_rank())),
    };
    Lin { classes, left: Side::Attained(0), right, complete: true }
}

fn ladder() -> Lin {
    let inner = PointClass {
        region: Region::Ladder { prefix: vec![] },
        ranks: RankSet::single(Ordinal::zero()),
        count: Cardinal::aleph0(),
        top_count: Some(Cardinal::aleph0()),
        local: Local::Ordinal,
        gamma: false,
    };
    let max = PointClass::point(PointName(vec![Coord::Ladder(1, 1)]), Germ::Isolated, Germ::End);
    Lin { classes: vec![inner, max], left: Side::Open(Germ::Ladder), right: Side::Attained(1), complete: false }
}

fn reverse(mut l: Lin) -> Lin {
    for c in &mut l.classes {
        if let Some((a, b)) = c.germs_mut() {
            std::mem::swap(a, b);
        }
    }
    std::mem::swap(&mut l.left, &mut l.right);
    l
}

fn shift_side(s: Side, by: usize) -> Side {
    match s {
        Side::Attained(i) => Side::Attained(i + by),
        open => open,
    }
}

fn concat(parts: Vec<Lin>) -> Lin {
    let mut classes: Vec<PointClass> = Vec::new();
    let mut complete = true;
    let mut left = None;
    let mut prev_right: Option<Side> = None;
    for part in parts {
        let base = classes.len();
        complete &= part.complete;
        let this_left = shift_side(part.left, base);
        let this_right = shift_side(part.right, base);
        classes.extend(part.classes);
        match (prev_right.take(), &this_left) {
            (None, _) => left = Some(this_left.clone()),
            (Some(Side::Attained(i)), Side::Attained(j)) => {
                *classes[i].germs_mut().unwrap().1 = Germ::Isolated;
                *classes[*j].germs_mut().unwrap().0 = Germ::Isolated;
            }
            (Some(Side::Attained(i)), Side::Open(g)) => *classes[i].germs_mut().unwrap().1 = g.clone(),
            (Some(Side::Open(g)), Side::Attained(j)) => *classes[*j].germs_mut().unwrap().0 = g,
            (Some(Side::Open(_)), Side::Open(_)) => complete = false,
        }
        prev_right = Some(this_right);
    }
    for c in &mut classes {
        c.refresh();
    }
    Lin { classes, left: left.expect("nonempty concat"), right: prev_right.unwrap(), complete }
}

fn lin(x: &SpaceExpr) -> Result<Lin, EngineError> {
    Ok(match x {
        SpaceExpr::OrdInterval { theta, open_top } => ord_interval(theta, *open_top, &Ordinal::zero(), false),
        SpaceExpr::ZAtom => ord_interval(&Ordinal::omega(), false, &Ordinal::zero(), false),
        SpaceExpr::PuncturedLadder { .. } => ladder(),
        SpaceExpr::Reverse { inner } => reverse(lin(inner)?),
        SpaceExpr::Concat { parts } => {
            let mut ls = Vec::with_capacity(parts.len());
            for (k, p) in parts.iter().enumerate() {
                let mut l = lin(p)?;
                l.classes = l.classes.into_iter().map(|c| c.under(Coord::Part(k))).collect();
                ls.push(l);
            }
            concat(ls)
        }
        SpaceExpr::LexSum { lo, hi, blocks } => {
            let mut ls = Vec::new();
            for piece in lex_pieces(lo, hi, blocks) {
                ls.push(match piece {
                    Piece::Segment { offset, len, closed } => ord_interval(&len, !closed, &offset, true),
                    Piece::Block(b) => {
                        let mut l = lin(&b.space)?;
                        l.classes = l.classes.into_iter().map(|c| c.under(Coord::Index(b.at.clone()))).collect();
                        l
                    }
                });
            }
            concat(ls)
        }
        other => return Err(EngineError::Unsupported(format!("{} is not linearly ordered", other.kind_name()))),
    })
}

fn finalize(l: Lin) -> Analysis {
    let compact = l.complete && matches!(l.left, Side::Attained(_)) && matches!(l.right, Side::Attained(_));
    let classes = l
        .classes
        .into_iter()
        .map(|c| PointClass { local: c.local.closed_off(), ..c })
        .collect();
    Analysis { classes, compact }
}

fn product(a: Analysis, b: Analysis) -> Result<Analysis, EngineError> {
    let two = Ordinal::nat(2);
    let mut classes = Vec::new();
    for lc in &a.classes {
        if lc.ranks.reaches(&two) {
            return Err(EngineError::UnsupportedProduct(format!(
                "left factor has points of rank >= 2 (class {} with ranks {})",
                lc.region, lc.ranks
            )));
        }
        let has0 = lc.ranks.contains(&Ordinal::zero());
        let has1 = lc.ranks.contains(&Ordinal::one());
        let top = lc.top_count.clone().unwrap_or_else(|| lc.count.clone());
        let mut parts = Vec::new();
        if has0 {
            let n = match (&lc.count, &top) {
                (Cardinal::Finite(n), Cardinal::Finite(t)) if has1 => Cardinal::Finite(n - t),
                _ => lc.count.clone(),
            };
            parts.push((0u64, n));
        }
        if has1 {
            parts.push((1u64, if has0 { top } else { lc.count.clone() }));
        }
        for (s, lcount) in parts {
            let z_lc = lc.local.lc(&Ordinal::nat(s));
            for rc in &b.classes {
                classes.push(PointClass {
                    region: Region::Pair { prefix: vec![], left: Box::new(lc.region.clone()), right: Box::new(rc.region.clone()) },
                    ranks: rc.ranks.shifted(s),
                    count: lcount.mul(&rc.count),
                    top_count: rc.top_count.as_ref().map(|t| lcount.mul(t)),
                    local: Local::Product { shift: s, z_lc: z_lc.clone(), inner: Box::new(rc.local.clone()) },
                    gamma: lc.gamma || rc.gamma,
                });
            }
        }
    }
    Ok(Analysis { classes, compact: a.compact && b.compact })
}

fn product_shift(l: &Local) -> Option<u64> {
    match l {
        Local::Product { shift, .. } => Some(*shift),
        _ => None,
    }
}

/// The local shape of a hedgehog body.
pub(crate) fn body_local(spines: &[Spine]) -> Result<PointLocal, EngineError> {
    let mut rank = Ordinal::zero();
    let mut lc = Cardinal::Finite(1);
    let mut gamma = false;
    let mut parts = Vec::new();
    let mut tower = None;
    for s in spines {
        match s {
            Spine::Family { space, base, mult } => {
                let b = locate(space, base)?;
                lc = lc.max(b.local.lc(&b.rank));
                if mult.is_infinite() && !b.rank.is_zero() {
                    lc = lc.max(mult.clone());
                    gamma = true;
                }
                gamma |= b.gamma;
                rank = rank.max(b.rank.clone());
                parts.push((b.local, b.rank));
            }
            Spine::Tower { limit } => {
                lc = lc.max(Cardinal::aleph0().max(limit.cardinality()));
                gamma = true;
                rank = rank.max(limit.clone());
                tower = Some(limit.clone());
            }
        }
    }
    Ok(PointLocal { rank, local: Local::Body { lc, parts, tower }, gamma })
}

fn hedgehog(spines: &[Spine]) -> Result<Analysis, EngineError> {
    let body = body_local(spines)?;
    let mut classes = vec![PointClass {
        region: Region::Point(PointName::body()),
        ranks: RankSet::single(body.rank),
        count: Cardinal::Finite(1),
        top_count: Some(Cardinal::Finite(1)),
        local: body.local,
        gamma: body.gamma,
    }];
    let mut compact = true;
    for (family, s) in spines.iter().enumerate() {
        match s {
            Spine::Family { space, base, mult } => {
                let a = analyze(space)?;
                let b = locate(space, base)?;
                compact &= a.compact && !mult.is_infinite();
                for mut c in a.classes {
                    let is_base = c.region.contains(base)
                        && c.ranks.contains(&b.rank)
                        && product_shift(&c.local) == product_shift(&b.local);
                    if is_base {
                        if c.count == Cardinal::Finite(1) {
                            continue;
                        }
                        c = remove_point(c, base, &b.rank);
                    }
                    classes.push(PointClass {
                        region: Region::Spine { prefix: vec![], family, copies: mult.clone(), inner: Box::new(c.region) },
                        ranks: c.ranks,
                        count: c.count.mul(mult),
                        top_count: c.top_count.map(|t| t.mul(mult)),
                        local: c.local,
                        gamma: c.gamma,
                    });
                }
            }
            Spine::Tower { limit } => {
                compact = false;
                classes.push(PointClass {
                    region: Region::Tower { prefix: vec![], limit: limit.clone(), bodies_only: false },
                    ranks: RankSet::below(Ordinal::zero(), limit.clone()).expect("tower limit is positive"),
                    count: Cardinal::aleph0(),
                    top_count: None,
                    local: Local::Ordinal,
                    gamma: false,
                });
                if *limit > Ordinal::omega() {
                    classes.push(PointClass {
                        region: Region::Tower { prefix: vec![], limit: limit.clone(), bodies_only: true },
                        ranks: RankSet::below(Ordinal::omega(), limit.clone()).expect("limit above w"),
                        count: Cardinal::aleph0(),
                        top_count: None,
                        local: Local::Ordinal,
                        gamma: true,
                    });
                }
            }
        }
    }
    Ok(Analysis { classes, compact })
}

/// Remove the basepoint from a class with more than one point.
fn remove_point(c: PointClass, base: &PointName, rank: &Ordinal) -> PointClass {
    let count = match c.count {
        Cardinal::Finite(n) => Cardinal::Finite(n - 1),
        inf => inf,
    };
    let mut ranks = c.ranks;
    let mut top = c.top_count;
    if ranks.max().as_ref() == Some(rank) {
        if let Some(Cardinal::Finite(t)) = top {
            if t > 1 {
                top = Some(Cardinal::Finite(t - 1));
            } else {
                ranks = ranks.without_max().expect("class keeps lower ranks");
                top = ranks.max().map(|_| count.clone());
            }
        }
    }
    PointClass {
        region: Region::Minus { inner: Box::new(c.region), point: base.clone() },
        ranks,
        count,
        top_count: top,
        local: c.local,
        gamma: c.gamma,
    }
}

/// Partition `x` into point classes.
pub fn analyze(x: &SpaceExpr) -> Result<Analysis, EngineError> {
    if x.is_linear() {
        return Ok(finalize(lin(x)?));
    }
    match x {
        SpaceExpr::Product { left, right } => product(analyze(left)?, analyze(right)?),
        SpaceExpr::Hedgehog { spines } => hedgehog(spines),
        SpaceExpr::MetricSum { parts } => {
            let mut classes = Vec::new();
            let mut compact = true;
            for (k, p) in parts.iter().enumerate() {
                let a = analyze(p)?;
                compact &= a.compact;
                classes.extend(a.classes.into_iter().map(|c| c.under(Coord::Part(k))));
            }
            Ok(Analysis { classes, compact })
        }
        _ => unreachable!("linear expressions handled above"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::parse_expr;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn an(s: &str) -> Analysis {
        analyze(&parse_expr(s).unwrap()).unwrap()
    }

    #[test]
    fn interval_classes() {
        let a = an("ord[w^2*3+w]");
        assert_eq!(a.classes.len(), 3);
        let mid = &a.classes[1];
        assert_eq!(mid.ranks.max(), Some(o("2")));
        assert_eq!(mid.top_count, Some(Cardinal::Finite(3)));
        assert_eq!(a.classes[2].ranks.max(), Some(o("1")));
        assert!(a.compact);
        let open = an("ord[w^2)");
        assert!(!open.compact);
        assert_eq!(open.classes.len(), 2);
        assert_eq!(open.classes[1].ranks.height(), o("2"));
    }

    #[test]
    fn ladder_junction() {
        let a = an("concat(ord[w^3],ladder(3))");
        let top = a.classes.iter().find(|c| c.region.to_string() == "#0/w^3").unwrap();
        assert!(top.gamma);
        assert_eq!(top.ranks.max(), Some(o("3")));
        assert!(!a.compact);
        let b = an("concat(ladder(1),ord[1])");
        assert!(b.classes.iter().all(|c| !c.gamma));
    }

    #[test]
    fn lex_index_condensation() {
        // the block at w^2 is approached from the left like the top of [0, w^2]
        let a = an("lex[0,w^2+1](w^2:ord[1])");
        let first = a.classes.iter().find(|c| c.region.to_string() == "@w^2/0").unwrap();
        assert_eq!(first.ranks.max(), Some(o("2")));
        assert!(a.compact);
    }

    #[test]
    fn product_counts() {
        let a = an("prod(z,z)");
        let top: Vec<_> = a.classes.iter().filter(|c| c.ranks.max() == Some(o("2"))).collect();
        assert_eq!(top.len(), 1);
        assert_eq!(top[0].count, Cardinal::Finite(1));
        assert!(matches!(analyze(&parse_expr("prod(ord[w^2],z)").unwrap()), Err(EngineError::UnsupportedProduct(_))));
    }

    #[test]
    fn hedgehog_body() {
        let a = an("hedge((z,w)*aleph_1)");
        assert_eq!(a.classes[0].ranks.max(), Some(o("1")));
        assert_eq!(a.classes[0].local.lc(&o("1")), Cardinal::aleph(1));
        assert!(a.classes[0].gamma);
        assert!(a.classes[1..].iter().all(|c| c.ranks.max() == Some(o("0"))));
        let t = an("hedge(tower[w*2])");
        assert_eq!(t.classes[0].ranks.max(), Some(o("w*2")));
        assert_eq!(t.classes.len(), 3);
    }

    #[test]
    fn interior_basepoint_is_removed() {
        let a = an("hedge((ord[w*2],w))");
        let spine = a.classes.iter().find(|c| matches!(c.region, Region::Spine { .. }) && c.ranks.min() == o("0") && !c.ranks.is_single()).map(|c| c.ranks.clone());
        // the only rank-1 interior point was the basepoint
        assert!(spine.is_none());
        assert!(a.classes.iter().any(|c| c.region.to_string().contains("minus w")));
    }
}
