//! Potentials on point clouds and the one-dimensional regularity condition
//! bounding |phi''| by a multiple of |phi'| wherever |phi'| > 1.

use serde::{Deserialize, Serialize};

/// Recipe for the potential `phi` defining the weighted measure
/// `gamma = e^{-phi} mu`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum PotentialSpec {
    /// `phi(x) = a + a_prime * d(x, origins)^2`, the squared distance to a
    /// finite origin set.
    DistanceFunction {
        origins: Vec<usize>,
        a: f64,
        a_prime: f64,
    },
    /// Univariate polynomial in the single coordinate, coefficients in
    /// ascending degree order.
    Polynomial1d { coefficients: Vec<f64> },
    /// Values listed per point.
    Explicit { values: Vec<f64> },
}

/// Evaluates a polynomial with ascending-degree coefficients by Horner's rule.
pub fn poly_eval(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficients of the derivative polynomial.
pub fn poly_derivative(coefficients: &[f64]) -> Vec<f64> {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect()
}

/// Outcome of scanning `|phi''| <= M |phi'|` on `{|phi'| > 1}`.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionBReport {
    /// Smallest constant that bounds `|phi''| / |phi'|` at every sample
    /// point where `|phi'| > 1`; zero when that set is empty.
    pub minimal_constant: f64,
    /// Sample point attaining the maximum ratio.
    pub attained_at: f64,
    /// Sample points where the ratio is not finite. Empty for polynomials.
    pub violations: Vec<f64>,
    /// Number of sample points inspected.
    pub samples: usize,
}

/// Scans a polynomial potential on `interval` with `samples` uniformly spaced
/// points and measures the minimal constant for the derivative-ratio
/// condition.
pub fn verify_condition_b(
    coefficients: &[f64],
    interval: (f64, f64),
    samples: usize,
) -> ConditionBReport {
    assert!(samples >= 2, "need at least two sample points");
    assert!(interval.0 < interval.1, "interval must be nondegenerate");
    let d1 = poly_derivative(coefficients);
    let d2 = poly_derivative(&d1);
    let step = (interval.1 - interval.0) / (samples - 1) as f64;
    let mut minimal_constant = 0.0_f64;
    let mut attained_at = interval.0;
    let mut violations = Vec::new();
    for i in 0..samples {
        let x = interval.0 + step * i as f64;
        let p1 = poly_eval(&d1, x);
        if p1.abs() <= 1.0 {
            continue;
        }
        let ratio = (poly_eval(&d2, x) / p1).abs();
        if !ratio.is_finite() {
            violations.push(x);
            continue;
        }
        if ratio > minimal_constant {
            minimal_constant = ratio;
            attained_at = x;
        }
    }
    ConditionBReport {
        minimal_constant,
        attained_at,
        violations,
        samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_eval_matches_direct_expansion() {
        // 3 - 2x + x^3 at x = 2: 3 - 4 + 8 = 7.
        assert_eq!(poly_eval(&[3.0, -2.0, 0.0, 1.0], 2.0), 7.0);
        assert_eq!(poly_eval(&[], 5.0), 0.0);
    }

    #[test]
    fn poly_derivative_shifts_degrees() {
        assert_eq!(poly_derivative(&[3.0, -2.0, 0.0, 1.0]), vec![-2.0, 0.0, 3.0]);
        assert!(poly_derivative(&[42.0]).is_empty());
    }

    #[test]
    fn gaussian_potential_has_constant_one() {
        // phi = log(2 pi)/2 + x^2/2: phi' = x, phi'' = 1, so the ratio 1/|x|
        // approaches 1 as |x| -> 1 from above.
        let phi = [0.5 * (2.0 * std::f64::consts::PI).ln(), 0.0, 0.5];
        let report = verify_condition_b(&phi, (-10.0, 10.0), 200_001);
        assert!(report.violations.is_empty());
        assert!((report.minimal_constant - 1.0).abs() < 1e-3);
        assert!((report.attained_at.abs() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn quartic_potential_constant_attained_where_slope_is_one() {
        // phi = x^4: ratio 3/|x| on |4x^3| > 1, maximal at |x| = 4^{-1/3}
        // with value 3 * 4^{1/3}.
        let report = verify_condition_b(&[0.0, 0.0, 0.0, 0.0, 1.0], (-2.0, 2.0), 400_001);
        let expected = 3.0 * 4.0_f64.powf(1.0 / 3.0);
        assert!(report.violations.is_empty());
        assert!((report.minimal_constant - expected).abs() < 1e-3);
    }

    #[test]
    fn flat_potential_reports_zero_constant() {
        let report = verify_condition_b(&[1.0], (-1.0, 1.0), 101);
        assert_eq!(report.minimal_constant, 0.0);
        assert!(report.violations.is_empty());
    }
}
