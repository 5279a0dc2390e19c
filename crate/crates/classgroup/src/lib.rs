//! Class groups and unit groups of number fields.
//!
//! This crate computes the ideal class group and the unit group of the
//! maximal order of a number field K = Q[x]/(f) with the factor-base
//! method: collect elements whose principal ideals factor over a finite
//! set of prime ideals, extract the group structure with exact integer
//! linear algebra, estimate the product h*R analytically to decide when
//! to stop, and certify the result by saturation.
//!
//! Three proof regimes are supported, in increasing strength:
//!
//! * `Heuristic` — stop when the analytic estimate matches within 5%;
//!   nothing is certified.
//! * `GRH` — generators up to the Bach bound, residue estimated by a
//!   GRH-rigorous weighted sum; correct under GRH.
//! * `Full` — generators up to the Minkowski bound and results verified
//!   by l-saturation with exact arithmetic; unconditional (all numerics
//!   run in certified interval arithmetic).
//!
//! Every desk-scale answer can be cross-checked against the independent
//! brute-force oracles in [`oracle`]. See the book under `book/` for a
//! guided tour, and [`pipeline::full_pipeline`] for the main entry point.

pub mod arith;
pub mod dyadic;
pub mod interval;
pub mod intpoly;
pub mod modpoly;
pub mod fpmat;
pub mod roots;
pub mod field;
pub mod ideal;
pub mod powerprod;
pub mod lattice;
pub mod bounds;
pub mod linalg;
pub mod relations;
// pub mod analytic;
// pub mod units;
// pub mod finish;
// pub mod pipeline;
pub mod oracle;
pub mod report;

// mod book;

pub use bounds::ProofLevel;
pub use field::{FieldElement, NumberField};
// pub use pipeline::{Config, PipelineResult};
