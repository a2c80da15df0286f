//! Embedded contact homology of prequantization bundles over closed surfaces.
//!
//! A bundle is determined by the genus of the base and a negative Euler
//! class. Generators of the chain complex are multiplicity words in the fiber
//! orbits over the critical points of a perfect Morse function on the base;
//! this crate enumerates them, grades them by the total index against a base
//! generator, builds the mod-2 chain complex, and computes its homology,
//! together with the combinatorial side conditions (partition paths, writhe
//! bounds, connector classification) that pin the differential down.

pub mod complex;
pub mod connectors;
pub mod grading;
pub mod orbits;
pub mod partitions;
pub mod topology;
pub mod verify;

/// Exact scalar used throughout: machine-integer rationals.
pub type Rational = num::rational::Ratio<i64>;

pub use complex::{
    build_complex, build_fiber_complex, exterior_algebra_dimensions, homology,
    lens_lattice_bijection, stability_census, verify_main_theorem, ChainComplexF2,
    GradedDimensions,
};
pub use grading::{ech_index, IndexBreakdown, TrivializationOffset};
pub use orbits::{MorseData, OrbitKind, OrbitSet};
pub use topology::Bundle;
