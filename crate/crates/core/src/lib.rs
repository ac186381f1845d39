//! Desk-scale machinery for information theory and algorithmic
//! statistics: exact prefix-code constructions, Shannon information
//! measures, a resource-bounded prefix machine whose exhaustive program
//! enumeration stands in for Kolmogorov complexity, algorithmic and
//! probabilistic sufficient statistics, structure functions, a
//! rate-distortion engine, and two-part universal codes.
//!
//! Everything that can be checked in exact rational arithmetic is;
//! quantities that are `O(1)` in the underlying theory become measured
//! slack reports tied to the shipped machine version.

pub mod algstats;
pub mod bits;
pub mod coding;
pub mod corpus;
pub mod error;
pub mod measures;
pub mod numeric;
pub mod probstats;
pub mod ratedist;
pub mod report;
pub mod selftest;
pub mod toyvm;
pub mod ucode;

pub use bits::{BitReader, BitString};
pub use coding::{Dist, Lengths, PrefixCode};
pub use measures::JointDist;
pub use toyvm::{ComplexityOracle, ToyMachine};
