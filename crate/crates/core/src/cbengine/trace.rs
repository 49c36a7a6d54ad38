use serde::Serialize;

use super::classes::{analyze, Analysis, PointClass};
use super::ranks::RankSet;
use super::EngineError;
use crate::ordinal::{Cardinal, Ordinal};
use crate::spaces::SpaceExpr;

/// A multi-point remnant of a class inside one stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegionDesc {
    pub region: String,
    pub ranks: RankSet,
    pub count: Cardinal,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageDesc {
    pub stage_ordinal: Ordinal,
    pub regions: Vec<RegionDesc>,
    pub points: Vec<String>,
}

impl StageDesc {
    pub fn is_empty(&self) -> bool {
        self.regions.is_empty() && self.points.is_empty()
    }
}

/// The derivative sequence at every ordinal where it changes, ending with the empty stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DerivTrace {
    pub expr: String,
    pub height: Ordinal,
    pub stages: Vec<StageDesc>,
}

impl DerivTrace {
    /// The described stage in force at `g`: the last listed stage at or below it.
    pub fn stage_at(&self, g: &Ordinal) -> &StageDesc {
        self.stages.iter().rev().find(|s| s.stage_ordinal <= *g).expect("stage 0 is always listed")
    }
}

pub fn height(a: &Analysis) -> Ordinal {
    a.classes.iter().map(|c| c.ranks.height()).max().unwrap_or_else(Ordinal::zero)
}

fn breakpoints(a: &Analysis, h: &Ordinal) -> Vec<Ordinal> {
    let mut out = vec![Ordinal::zero(), h.clone()];
    for c in &a.classes {
        let lo = c.ranks.min();
        out.push(lo.succ());
        out.push(lo);
        out.push(c.ranks.height());
        if let Some(els) = c.ranks.elements(64) {
            for r in els {
                out.push(r.succ());
                out.push(r);
            }
        }
    }
    out.retain(|g| g <= h);
    out.sort();
    out.dedup();
    out
}

fn remnant(c: &PointClass, g: &Ordinal) -> Option<(RankSet, Cardinal)> {
    let r = c.ranks.restrict(g, None)?;
    let count = if r == c.ranks {
        c.count.clone()
    } else if r.is_single() && r.max() == c.ranks.max() {
        c.top_count.clone().unwrap_or_else(|| c.count.clone())
    } else {
        c.count.clone()
    };
    Some((r, count))
}

fn stage(a: &Analysis, g: &Ordinal) -> StageDesc {
    let mut regions = Vec::new();
    let mut points = Vec::new();
    for c in &a.classes {
        if let Some((ranks, count)) = remnant(c, g) {
            if c.count == Cardinal::Finite(1) {
                points.push(c.region.to_string());
            } else {
                regions.push(RegionDesc { region: c.region.to_string(), ranks, count });
            }
        }
    }
    StageDesc { stage_ordinal: g.clone(), regions, points }
}

pub fn derive_full(x: &SpaceExpr) -> Result<DerivTrace, EngineError> {
    let a = analyze(x)?;
    let h = height(&a);
    let mut stages: Vec<StageDesc> = Vec::new();
    for g in breakpoints(&a, &h) {
        let s = stage(&a, &g);
        let same = stages.last().is_some_and(|p| p.regions == s.regions && p.points == s.points);
        if !same {
            stages.push(s);
        }
    }
    Ok(DerivTrace { expr: x.to_string(), height: h, stages })
}
