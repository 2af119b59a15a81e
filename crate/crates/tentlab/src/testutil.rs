//! Shared fixtures for unit tests.

pub use crate::presets::{gaussian_line, gaussian_plane, uniform_local};
