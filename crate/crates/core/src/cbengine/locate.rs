use serde::Serialize;

use super::classes::{body_local, closed_top, lex_pieces, Piece};
use super::local::{Germ, Local};
use super::EngineError;
use crate::ordinal::Ordinal;
use crate::spaces::{tower_space, Coord, PointName, SpaceExpr, Spine};

/// Rank and local shape of one named point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PointLocal {
    pub rank: Ordinal,
    pub local: Local,
    pub gamma: bool,
}

pub fn locate(x: &SpaceExpr, p: &PointName) -> Result<PointLocal, EngineError> {
    x.resolve(p)?;
    locate_at(x, &p.0)
}

fn locate_at(x: &SpaceExpr, path: &[Coord]) -> Result<PointLocal, EngineError> {
    if x.is_linear() {
        let (left, right) = germs(x, path);
        let gamma = matches!(left, Germ::Ladder) || matches!(right, Germ::Ladder);
        let rank = left.rank().max(right.rank());
        return Ok(PointLocal { rank, local: Local::Point { left, right }.closed_off(), gamma });
    }
    match (x, path) {
        (SpaceExpr::Product { left, right }, [Coord::Pair(p, q)]) => {
            let z = locate_at(left, &p.0)?;
            let h = locate_at(right, &q.0)?;
            let s = z.rank.as_nat().filter(|s| *s <= 1).ok_or_else(|| {
                EngineError::UnsupportedProduct(format!("left factor point {p} has rank {} >= 2", z.rank))
            })?;
            Ok(PointLocal {
                rank: h.rank.add(&Ordinal::nat(s)),
                local: Local::Product { shift: s, z_lc: z.local.lc(&z.rank), inner: Box::new(h.local) },
                gamma: z.gamma || h.gamma,
            })
        }
        (SpaceExpr::Hedgehog { spines }, [Coord::Body]) => body_local(spines),
        (SpaceExpr::Hedgehog { spines }, [Coord::Spine { family, .. }, rest @ ..]) => match &spines[*family] {
            Spine::Family { space, .. } => locate_at(space, rest),
            Spine::Tower { .. } => unreachable!("resolved paths name families"),
        },
        (SpaceExpr::Hedgehog { .. }, [Coord::Tower(b), rest @ ..]) => locate_at(&tower_space(b), rest),
        (SpaceExpr::MetricSum { parts }, [Coord::Part(k), rest @ ..]) => locate_at(&parts[*k], rest),
        _ => unreachable!("path was resolved against the expression"),
    }
}

/// An end of a linear space: attained by a point, or an open cut.
enum Edge {
    Closed,
    Open(Germ),
}

fn patch(g: Germ, neighbour: Option<Edge>) -> Germ {
    match (g, neighbour) {
        (Germ::End, Some(Edge::Closed)) => Germ::Isolated,
        (Germ::End, Some(Edge::Open(h))) => h,
        (g, _) => g,
    }
}

fn interval_germs(top: &Ordinal, b: &Ordinal) -> (Germ, Germ) {
    let left = if b.is_zero() { Germ::End } else { Germ::ordinal(b.point_rank()) };
    let right = if b == top { Germ::End } else { Germ::Isolated };
    (left, right)
}

fn interval_edges(theta: &Ordinal, open: bool) -> (Edge, Edge) {
    match closed_top(theta, open) {
        Some(_) => (Edge::Closed, Edge::Closed),
        None => (Edge::Closed, Edge::Open(Germ::ordinal(theta.point_rank()))),
    }
}

fn edges(x: &SpaceExpr) -> (Edge, Edge) {
    match x {
        SpaceExpr::OrdInterval { theta, open_top } => interval_edges(theta, *open_top),
        SpaceExpr::ZAtom => (Edge::Closed, Edge::Closed),
        SpaceExpr::PuncturedLadder { .. } => (Edge::Open(Germ::Ladder), Edge::Closed),
        SpaceExpr::Reverse { inner } => {
            let (l, r) = edges(inner);
            (r, l)
        }
        SpaceExpr::Concat { parts } => (edges(&parts[0]).0, edges(parts.last().unwrap()).1),
        SpaceExpr::LexSum { lo, hi, blocks } => {
            let pieces = lex_pieces(lo, hi, blocks);
            (piece_edges(&pieces[0]).0, piece_edges(pieces.last().unwrap()).1)
        }
        _ => unreachable!("only linear spaces have edges"),
    }
}

fn piece_edges(p: &Piece) -> (Edge, Edge) {
    match p {
        Piece::Segment { len, closed, .. } => interval_edges(len, !closed),
        Piece::Block(b) => edges(&b.space),
    }
}

/// Germs of a point of a linear space, with `End` on sides where the space stops.
fn germs(x: &SpaceExpr, path: &[Coord]) -> (Germ, Germ) {
    match (x, path) {
        (SpaceExpr::OrdInterval { theta, open_top }, [Coord::Ord(b)]) => {
            // an open limit top is never reached, so any sentinel above `b` works
            let top = closed_top(theta, *open_top).unwrap_or_else(|| theta.clone());
            interval_germs(&top, b)
        }
        (SpaceExpr::ZAtom, [Coord::Ord(b)]) => interval_germs(&Ordinal::omega(), b),
        (SpaceExpr::PuncturedLadder { .. }, [Coord::Ladder(m, k)]) => {
            (Germ::Isolated, if (*m, *k) == (1, 1) { Germ::End } else { Germ::Isolated })
        }
        (SpaceExpr::Reverse { inner }, _) => {
            let (l, r) = germs(inner, path);
            (r, l)
        }
        (SpaceExpr::Concat { parts }, [Coord::Part(k), rest @ ..]) => {
            let (l, r) = germs(&parts[*k], rest);
            let before = k.checked_sub(1).map(|i| edges(&parts[i]).1);
            let after = parts.get(k + 1).map(|p| edges(p).0);
            (patch(l, before), patch(r, after))
        }
        (SpaceExpr::LexSum { lo, hi, blocks }, [Coord::Index(g), rest @ ..]) => {
            let pieces = lex_pieces(lo, hi, blocks);
            let i = pieces.iter().position(|p| piece_holds(p, g)).expect("resolved index lies in some piece");
            let (l, r) = match &pieces[i] {
                Piece::Block(b) => germs(&b.space, rest),
                Piece::Segment { offset, len, closed } => {
                    let b = offset.sub_left(g).unwrap();
                    let top = closed_top(len, !closed).unwrap_or_else(|| len.clone());
                    interval_germs(&top, &b)
                }
            };
            let before = i.checked_sub(1).map(|j| piece_edges(&pieces[j]).1);
            let after = pieces.get(i + 1).map(|p| piece_edges(p).0);
            (patch(l, before), patch(r, after))
        }
        _ => unreachable!("path was resolved against the expression"),
    }
}

fn piece_holds(p: &Piece, g: &Ordinal) -> bool {
    match p {
        Piece::Block(b) => b.at == *g,
        Piece::Segment { offset, len, closed } => match offset.sub_left(g) {
            Some(b) => b < *len || (*closed && b == *len),
            None => false,
        },
    }
}
