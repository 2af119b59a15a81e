//! Tent-space analysis on finite weighted metric measure spaces.
//!
//! The crate realises a local tent-space theory computationally: admissible
//! balls and regions over a finite point cloud, conical square functionals
//! and tent-space norms, a constructive atomic decomposition with numerical
//! certificates for every inequality it relies on, shifted dyadic systems
//! with maximal-operator comparisons, and sector-based cone covers on flat
//! Euclidean clouds.
//!
//! Entry points: build a [`space::DiscreteSpace`] (or a preset from
//! [`presets`]), lay a [`geometry::TimeGrid`] over it to obtain a
//! [`geometry::RegionGrid`], then evaluate functionals from [`functionals`]
//! or run the certification suites in [`suite`].

// Point ids double as indices into per-point arrays, so indexed loops that
// also pass the id to space methods stay in indexed form throughout.
#![allow(clippy::needless_range_loop)]

pub mod atomic;
pub mod cone_cover;
pub mod corpus;
pub mod dyadic;
pub mod functionals;
pub mod geometry;
pub mod potential;
pub mod presets;
pub mod report;
pub mod space;
pub mod suite;

#[cfg(test)]
pub(crate) mod testutil;
