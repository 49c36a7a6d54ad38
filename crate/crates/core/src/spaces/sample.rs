//! Finite, order-respecting point samples of a space.

use super::{tower_point, tower_space, Coord, PointName, SpaceExpr, Spine};
use crate::ordinal::{Cardinal, Ordinal};

/// Ordinals `< theta` reachable with coefficients and nesting bounded by `depth`,
/// in increasing order. Empty when `theta` carries atoms (only endpoints are sampled there).
pub(crate) fn sample_below(theta: &Ordinal, depth: u64) -> Vec<Ordinal> {
    let mut out = Vec::new();
    if theta.is_zero() {
        return out;
    }
    if !theta.is_plain() {
        out.push(Ordinal::zero());
        return out;
    }
    let mut prefix = Ordinal::zero();
    for (e, c) in theta.cnf() {
        let block = Ordinal::omega_pow(&e);
        let tails = sample_power(&e, depth);
        for k in 0..c.min(depth + 1) {
            let base = prefix.add(&block.mul(&Ordinal::nat(k)));
            out.extend(tails.iter().map(|t| base.add(t)));
        }
        if c > depth + 1 {
            // the last copies below the next prefix
            let base = prefix.add(&block.mul(&Ordinal::nat(c - 1)));
            out.extend(tails.iter().map(|t| base.add(t)));
        }
        prefix = prefix.add(&Ordinal::monomial(&e, c));
    }
    out.sort();
    out.dedup();
    out
}

/// Sample of `[0, w^e[`.
fn sample_power(e: &Ordinal, depth: u64) -> Vec<Ordinal> {
    let mut out = vec![Ordinal::zero()];
    if e.is_zero() {
        return out;
    }
    let exps: Vec<Ordinal> = if let Some(n) = e.as_nat() {
        if n <= depth + 1 {
            (0..n).map(Ordinal::nat).collect()
        } else {
            let mut v: Vec<Ordinal> = (0..=depth).map(Ordinal::nat).collect();
            v.push(Ordinal::nat(n - 1));
            v
        }
    } else {
        sample_below(e, depth.saturating_sub(1))
    };
    for f in exps {
        let inner = if depth > 1 { sample_power(&f, depth - 1) } else { vec![Ordinal::zero()] };
        for k in 1..=depth.max(1) {
            let base = Ordinal::monomial(&f, k);
            out.extend(inner.iter().map(|t| base.add(t)));
        }
    }
    out.sort();
    out.dedup();
    out.retain(|b| b < &Ordinal::omega_pow(e));
    out
}

fn interval(theta: &Ordinal, open_top: bool, depth: u64) -> Vec<Ordinal> {
    let mut v = sample_below(theta, depth);
    if !open_top {
        v.push(theta.clone());
    }
    v
}

fn prefixed(head: Coord, pts: Vec<PointName>) -> impl Iterator<Item = PointName> {
    pts.into_iter().map(move |p| p.under(head.clone()))
}

/// A deterministic finite sample of points of `x`. For linear spaces the
/// sample is listed in the order of the space. Designated points (interval
/// tops, hedgehog bodies, ladder maxima) are always included.
pub fn points_of_truncation(x: &SpaceExpr, depth: u64) -> Vec<PointName> {
    match x {
        SpaceExpr::OrdInterval { theta, open_top } => {
            interval(theta, *open_top, depth).into_iter().map(PointName::ord).collect()
        }
        SpaceExpr::ZAtom => interval(&Ordinal::omega(), false, depth).into_iter().map(PointName::ord).collect(),
        SpaceExpr::Reverse { inner } => {
            let mut v = points_of_truncation(inner, depth);
            v.reverse();
            v
        }
        SpaceExpr::Concat { parts } | SpaceExpr::MetricSum { parts } => parts
            .iter()
            .enumerate()
            .flat_map(|(k, p)| prefixed(Coord::Part(k), points_of_truncation(p, depth)))
            .collect(),
        SpaceExpr::LexSum { lo, hi, blocks } => {
            let mut out = Vec::new();
            let mut start = lo.clone();
            for b in blocks {
                let len = start.sub_left(&b.at).expect("blocks lie inside the index");
                for t in sample_below(&len, depth) {
                    out.push(PointName(vec![Coord::Index(start.add(&t))]));
                }
                out.extend(prefixed(Coord::Index(b.at.clone()), points_of_truncation(&b.space, depth)));
                start = b.at.succ();
            }
            if start <= *hi {
                let len = start.sub_left(hi).unwrap();
                for t in interval(&len, false, depth) {
                    out.push(PointName(vec![Coord::Index(start.add(&t))]));
                }
            }
            out
        }
        SpaceExpr::Product { left, right } => {
            let ls = points_of_truncation(left, depth);
            let rs = points_of_truncation(right, depth);
            let mut out = Vec::with_capacity(ls.len() * rs.len());
            for p in &ls {
                for q in &rs {
                    out.push(PointName(vec![Coord::Pair(p.clone(), q.clone())]));
                }
            }
            out
        }
        SpaceExpr::Hedgehog { spines } => {
            let mut out = vec![PointName::body()];
            let inner_depth = depth.saturating_sub(1);
            for (family, s) in spines.iter().enumerate() {
                match s {
                    Spine::Family { space, base, mult } => {
                        let pts: Vec<PointName> =
                            points_of_truncation(space, inner_depth).into_iter().filter(|p| p != base).collect();
                        let copies: Vec<Option<u64>> = match mult {
                            Cardinal::Finite(1) => vec![None],
                            Cardinal::Finite(m) => (0..(*m).min(depth.max(1))).map(Some).collect(),
                            Cardinal::Aleph(_) => (0..depth.max(1)).map(Some).collect(),
                        };
                        for copy in copies {
                            out.extend(prefixed(Coord::Spine { family, copy }, pts.clone()));
                        }
                    }
                    Spine::Tower { limit } => {
                        for b in sample_below(limit, inner_depth.max(1)).into_iter().filter(|b| !b.is_zero()) {
                            let z = tower_point(&b);
                            let pts = points_of_truncation(&tower_space(&b), inner_depth);
                            out.extend(prefixed(Coord::Tower(b), pts.into_iter().filter(|p| *p != z).collect()));
                        }
                    }
                }
            }
            out
        }
        SpaceExpr::PuncturedLadder { .. } => {
            // e(m,k) sits at w*(m-1)+(k-1) of the reversed [0, w^2[, so the order is reversed
            let mut v = Vec::new();
            for m in (1..=depth.max(1)).rev() {
                for k in (1..=depth.max(1)).rev() {
                    v.push(PointName(vec![Coord::Ladder(m, k)]));
                }
            }
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces::parse_expr;

    fn names(x: &str, d: u64) -> Vec<String> {
        points_of_truncation(&parse_expr(x).unwrap(), d).iter().map(|p| p.to_string()).collect()
    }

    #[test]
    fn interval_samples() {
        assert_eq!(names("ord[w]", 3), ["0", "1", "2", "3", "w"]);
        assert_eq!(names("rev(ord[w])", 2), ["w", "2", "1", "0"]);
        assert_eq!(names("ord[o(aleph_1)]", 3), ["0", "o(aleph_1)"]);
        let v = names("ord[w^2]", 2);
        assert_eq!(v, ["0", "1", "2", "w", "w+1", "w*2", "w*2+1", "w^2"]);
    }

    #[test]
    fn samples_resolve_and_respect_order() {
        for src in [
            "ord[w^3*2+w+4]",
            "concat(ord[w],rev(ord[w^2)))",
            "lex[w,w*3+1](w+1:ord[w^2],w+2:rev(ord[w)))",
            "prod(z,ord[w+1])",
            "hedge((z,w)*aleph_1,(ord[w^2],w),tower[w*2])",
            "msum(ladder(3),z)",
            "ord[w^w]",
        ] {
            let x = parse_expr(src).unwrap();
            let pts = points_of_truncation(&x, 3);
            assert!(!pts.is_empty());
            for p in &pts {
                x.resolve(p).unwrap_or_else(|e| panic!("{src}: {e}"));
            }
            let mut dedup = pts.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), pts.len(), "{src}");
        }
        let v = names("ord[w^3*2+w+4]", 2);
        let ords: Vec<Ordinal> = v.iter().map(|s| s.parse().unwrap()).collect();
        assert!(ords.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn hedgehog_sample_shape() {
        assert_eq!(names("hedge((z,w),(z,w))", 2), ["o", "s0/0", "s0/1", "s1/0", "s1/1"]);
    }
}
