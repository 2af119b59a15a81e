//! Named example spaces and JSON space-definition files.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::potential::PotentialSpec;
use crate::space::{AdmissibilitySpec, DiscreteSpace, SpaceError};

#[derive(Debug, Error)]
pub enum PresetError {
    #[error("unknown space preset '{0}'; expected gaussian_line, gaussian_plane, uniform_local, or polynomial_line")]
    UnknownPreset(String),
    #[error("unknown mu specification '{0}'; expected \"uniform\" or a per-point list")]
    UnknownMu(String),
    #[error("failed to read space file: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to parse space file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Space(#[from] SpaceError),
}

/// Uniform grid on [-4, 4] with the standard Gaussian weight and
/// distance-based admissibility centered at the origin.
pub fn gaussian_line(n: usize) -> DiscreteSpace {
    let h = 8.0 / (n - 1) as f64;
    let points: Vec<Vec<f64>> = (0..n).map(|i| vec![-4.0 + h * i as f64]).collect();
    DiscreteSpace::from_points(
        points,
        vec![h; n],
        PotentialSpec::DistanceFunction {
            origins: vec![(n - 1) / 2],
            a: 0.5 * (2.0 * std::f64::consts::PI).ln(),
            a_prime: 0.5,
        },
        AdmissibilitySpec::DistanceBased,
    )
    .expect("grid construction is valid for n >= 2")
}

/// k-by-k grid on [-2, 2]^2 with the planar Gaussian weight.
pub fn gaussian_plane(k: usize) -> DiscreteSpace {
    let h = 4.0 / (k - 1) as f64;
    let mut points = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            points.push(vec![-2.0 + h * i as f64, -2.0 + h * j as f64]);
        }
    }
    let center = (k / 2) * k + k / 2;
    DiscreteSpace::from_points(
        points,
        vec![h * h; k * k],
        PotentialSpec::DistanceFunction {
            origins: vec![center],
            a: (2.0 * std::f64::consts::PI).ln(),
            a_prime: 0.5,
        },
        AdmissibilitySpec::DistanceBased,
    )
    .expect("grid construction is valid for k >= 2")
}

/// Uniform grid on [0, 1) with a flat potential and m constantly one.
pub fn uniform_local(n: usize) -> DiscreteSpace {
    let h = 1.0 / n as f64;
    let points: Vec<Vec<f64>> = (0..n).map(|i| vec![h * i as f64]).collect();
    DiscreteSpace::from_points(
        points,
        vec![h; n],
        PotentialSpec::Explicit {
            values: vec![0.0; n],
        },
        AdmissibilitySpec::Constant { value: 1.0 },
    )
    .expect("grid construction is valid for n >= 1")
}

/// The Gaussian line again, but with the potential given as a polynomial
/// and admissibility derived from its gradient; exercises the
/// derivative-ratio pathway.
pub fn polynomial_line(n: usize) -> DiscreteSpace {
    let h = 8.0 / (n - 1) as f64;
    let points: Vec<Vec<f64>> = (0..n).map(|i| vec![-4.0 + h * i as f64]).collect();
    DiscreteSpace::from_points(
        points,
        vec![h; n],
        PotentialSpec::Polynomial1d {
            coefficients: vec![0.5 * (2.0 * std::f64::consts::PI).ln(), 0.0, 0.5],
        },
        AdmissibilitySpec::GradientBased {
            condition_b_constant: None,
        },
    )
    .expect("grid construction is valid for n >= 2")
}

/// A named preset at its default size.
pub fn preset(name: &str) -> Result<DiscreteSpace, PresetError> {
    match name {
        "gaussian_line" => Ok(gaussian_line(801)),
        "gaussian_plane" => Ok(gaussian_plane(21)),
        "uniform_local" => Ok(uniform_local(400)),
        "polynomial_line" => Ok(polynomial_line(801)),
        other => Err(PresetError::UnknownPreset(other.to_string())),
    }
}

/// Default time-level count for a named preset.
pub fn default_levels(name: &str) -> usize {
    if name == "gaussian_plane" {
        16
    } else {
        32
    }
}

/// Base weights in a space file: equal weights or a per-point list.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MuSpec {
    Named(String),
    Values(Vec<f64>),
}

/// JSON description of a space.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub points: Vec<Vec<f64>>,
    pub mu: MuSpec,
    pub potential: PotentialSpec,
    pub admissibility: AdmissibilitySpec,
}

impl SpaceFile {
    pub fn build(&self) -> Result<DiscreteSpace, PresetError> {
        let mu = match &self.mu {
            MuSpec::Named(name) if name == "uniform" => vec![1.0; self.points.len()],
            MuSpec::Named(name) => return Err(PresetError::UnknownMu(name.clone())),
            MuSpec::Values(values) => values.clone(),
        };
        Ok(DiscreteSpace::from_points(
            self.points.clone(),
            mu,
            self.potential.clone(),
            self.admissibility.clone(),
        )?)
    }
}

/// Reads and builds a space definition file.
pub fn load_space(path: &Path) -> Result<DiscreteSpace, PresetError> {
    let text = std::fs::read_to_string(path)?;
    let file: SpaceFile = serde_json::from_str(&text)?;
    file.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_presets_build_at_default_sizes() {
        assert_eq!(preset("gaussian_line").unwrap().len(), 801);
        assert_eq!(preset("gaussian_plane").unwrap().len(), 441);
        assert_eq!(preset("uniform_local").unwrap().len(), 400);
        assert_eq!(preset("polynomial_line").unwrap().len(), 801);
        assert!(preset("gaussian_cube").is_err());
    }

    #[test]
    fn polynomial_line_matches_distance_based_admissibility() {
        let poly = polynomial_line(201);
        let dist = gaussian_line(201);
        for i in 0..poly.len() {
            assert!((poly.m(i) - dist.m(i)).abs() <= 1e-12, "point {i}");
            assert!((poly.gamma(i) - dist.gamma(i)).abs() <= 1e-15);
        }
    }

    #[test]
    fn space_file_round_trip() {
        let file = SpaceFile {
            points: (0..10).map(|i| vec![i as f64 * 0.1]).collect(),
            mu: MuSpec::Named("uniform".into()),
            potential: PotentialSpec::Explicit { values: vec![0.0; 10] },
            admissibility: AdmissibilitySpec::Constant { value: 0.5 },
        };
        let text = serde_json::to_string(&file).unwrap();
        let parsed: SpaceFile = serde_json::from_str(&text).unwrap();
        let space = parsed.build().unwrap();
        assert_eq!(space.len(), 10);
        assert_eq!(space.mu(3), 1.0);
        assert_eq!(space.m(3), 0.5);
    }

    #[test]
    fn space_file_rejects_unknown_mu_label() {
        let file = SpaceFile {
            points: vec![vec![0.0], vec![1.0]],
            mu: MuSpec::Named("lebesgue".into()),
            potential: PotentialSpec::Explicit { values: vec![0.0; 2] },
            admissibility: AdmissibilitySpec::Constant { value: 1.0 },
        };
        assert!(matches!(file.build(), Err(PresetError::UnknownMu(_))));
    }
}
