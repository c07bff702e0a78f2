//! Tropical bitangents of plane quartics over valued fields: tropicalization,
//! bitangent classes, rational liftability and quadratically enriched counts.

pub mod arrangement;
pub mod bitangent;
pub mod cli;
pub mod geometry;
pub mod gw;
pub mod lifting;
pub mod quartic;
pub mod residue;
pub mod sample;
pub mod svg;
pub mod symbolic;
pub mod tropcurve;
