pub mod ordinal;
pub mod spaces;
pub mod cbengine;
pub mod invariants;
pub mod classify;
pub mod families;
pub mod oracle;
pub mod ultrametric;
pub mod cli;
