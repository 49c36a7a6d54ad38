//! Cantor-Bendixson derivatives of constructor-built spaces.
//!
//! Every space is split into finitely many point classes ([`PointClass`]);
//! each class carries the set of CB ranks of its points, so the stage
//! `X^(g)` is the union of the class remnants with rank `>= g`.

mod classes;
mod local;
mod locate;
mod ranks;
mod region;
mod trace;

pub use classes::{analyze, Analysis, PointClass};
pub use local::{ordinal_omega, Germ, Local};
pub use locate::{locate, PointLocal};
pub use ranks::RankSet;
pub use region::Region;
pub use trace::{derive_full, DerivTrace, RegionDesc, StageDesc};

use crate::ordinal::Ordinal;
use crate::spaces::{PointName, SpaceError, SpaceExpr};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("unsupported product: {0}")]
    UnsupportedProduct(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// The largest `g` with `p` in `X^(g)`.
pub fn rank_of_point(x: &SpaceExpr, p: &PointName) -> Result<Ordinal, EngineError> {
    Ok(locate(x, p)?.rank)
}

/// Whether `p` survives to stage `g`.
pub fn stage_contains(x: &SpaceExpr, p: &PointName, g: &Ordinal) -> Result<bool, EngineError> {
    Ok(rank_of_point(x, p)? >= *g)
}

/// Constructor-built spaces are scattered; the answer carries the CB height.
pub fn is_scattered(x: &SpaceExpr) -> Result<(bool, Ordinal), EngineError> {
    Ok((true, trace::height(&analyze(x)?)))
}
