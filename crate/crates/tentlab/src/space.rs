//! Finite weighted metric measure spaces carrying an admissibility function.
//!
//! A `DiscreteSpace` is a finite point cloud with a metric, a base measure
//! `mu`, a potential `phi` inducing the weighted measure `gamma = e^{-phi} mu`,
//! and an admissibility function `m: X -> (0, 1]`. A ball `B(c, r)` is
//! admissible at level `alpha` when `0 < r <= alpha * m(c)`. All balls are
//! open: membership is `d(c, x) < r`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::potential::{poly_derivative, poly_eval, PotentialSpec};

/// Open metric ball, identified by a point index and a radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: usize,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: usize, radius: f64) -> Self {
        Ball { center, radius }
    }

    /// The concentric ball with radius scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Ball {
            center: self.center,
            radius: self.radius * factor,
        }
    }
}

/// Recipe for the admissibility function `m`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum AdmissibilitySpec {
    /// `m(x) = min(1, 1 / d(x, origins))`, with `m = 1` on the origin set.
    /// Requires a distance-function potential to supply the origins.
    DistanceBased,
    /// `m(x) = min(1, 1 / |grad phi(x)|)`, with `m = 1` where the gradient
    /// vanishes. The optional constant is carried for derivative-ratio
    /// cross-checks.
    GradientBased {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        condition_b_constant: Option<f64>,
    },
    /// Constant admissibility in `(0, 1]`.
    Constant { value: f64 },
    /// Values listed per point, each in `(0, 1]`.
    Explicit { values: Vec<f64> },
}

/// Rejection reasons when assembling a space.
#[derive(Debug, Error)]
pub enum SpaceError {
    #[error("space must contain at least one point")]
    Empty,
    #[error("length mismatch: {what} has {got} entries for {expected} points")]
    LengthMismatch {
        what: &'static str,
        got: usize,
        expected: usize,
    },
    #[error("point {index}: {what} is {value}, expected a finite positive value")]
    NonPositiveWeight {
        what: &'static str,
        index: usize,
        value: f64,
    },
    #[error("point {index}: non-finite value in {what}")]
    NonFinite { what: &'static str, index: usize },
    #[error("points {i} and {j} coincide")]
    DuplicatePoints { i: usize, j: usize },
    #[error("distance table is not symmetric at ({i}, {j})")]
    AsymmetricTable { i: usize, j: usize },
    #[error("distance table has nonzero diagonal at {i}")]
    NonzeroDiagonal { i: usize },
    #[error("distance table has a negative or non-finite entry at ({i}, {j})")]
    BadDistance { i: usize, j: usize },
    #[error("origin set is empty")]
    EmptyOrigins,
    #[error("origin index {index} out of range for {n} points")]
    OriginOutOfRange { index: usize, n: usize },
    #[error("admissibility value at point {index} is {value}, expected a value in (0, 1]")]
    BadAdmissibility { index: usize, value: f64 },
    #[error("{spec} requires coordinates of dimension {required}")]
    DimensionRequired { spec: &'static str, required: usize },
    #[error("gradient-based admissibility needs a polynomial or explicit potential")]
    GradientUnsupported,
    #[error("explicit potential and distance-based admissibility cannot supply origins")]
    OriginsUnavailable,
}

/// Per-centre view of the cloud sorted by distance, with measure prefix sums.
///
/// `order[k]` is the index of the k-th closest point (ties by index), so the
/// members of `B(c, r)` are exactly `order[..count_below(r)]` and their
/// gamma mass is `gamma_prefix[count_below(r)]`.
#[derive(Debug, Clone)]
pub(crate) struct DistanceProfile {
    pub order: Vec<u32>,
    pub sorted: Vec<f64>,
    pub gamma_prefix: Vec<f64>,
    pub mu_prefix: Vec<f64>,
}

impl DistanceProfile {
    pub fn count_below(&self, r: f64) -> usize {
        self.sorted.partition_point(|&d| d < r)
    }

    pub fn gamma_ball(&self, r: f64) -> f64 {
        self.gamma_prefix[self.count_below(r)]
    }

    pub fn mu_ball(&self, r: f64) -> f64 {
        self.mu_prefix[self.count_below(r)]
    }

    /// Candidate radii whose balls exhaust every distinct admissible ball at
    /// this centre: member sets change only at distance values, and on each
    /// constancy piece the expanded mass is maximal at the right endpoint.
    pub fn candidate_radii(&self, cap: f64) -> Vec<f64> {
        let mut out = Vec::new();
        if cap.is_nan() || cap <= 0.0 {
            return out;
        }
        let mut last = 0.0;
        for &d in &self.sorted {
            if d <= last {
                continue;
            }
            if d > cap {
                break;
            }
            out.push(d);
            last = d;
        }
        if out.last().copied() != Some(cap) {
            out.push(cap);
        }
        out
    }
}

/// Finite weighted metric measure space with admissibility function.
#[derive(Debug, Clone)]
pub struct DiscreteSpace {
    n: usize,
    points: Option<Vec<Vec<f64>>>,
    dim: Option<usize>,
    dist: Vec<f64>,
    mu: Vec<f64>,
    phi: Vec<f64>,
    gamma: Vec<f64>,
    m: Vec<f64>,
    profiles: Vec<DistanceProfile>,
    potential: PotentialSpec,
    admissibility: AdmissibilitySpec,
}

impl DiscreteSpace {
    /// Builds a space from Euclidean coordinates; distances are computed.
    pub fn from_points(
        points: Vec<Vec<f64>>,
        mu: Vec<f64>,
        potential: PotentialSpec,
        admissibility: AdmissibilitySpec,
    ) -> Result<Self, SpaceError> {
        let n = points.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        let dim = points[0].len();
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(SpaceError::LengthMismatch {
                    what: "coordinate vector",
                    got: p.len(),
                    expected: dim,
                });
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(SpaceError::NonFinite {
                    what: "coordinates",
                    index: i,
                });
            }
        }
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = euclidean(&points[i], &points[j]);
                if d == 0.0 {
                    return Err(SpaceError::DuplicatePoints { i, j });
                }
                dist[i * n + j] = d;
                dist[j * n + i] = d;
            }
        }
        Self::build(n, Some(points), Some(dim), dist, mu, potential, admissibility)
    }

    /// Builds a space from an explicit symmetric distance table.
    pub fn from_distance_table(
        table: Vec<Vec<f64>>,
        mu: Vec<f64>,
        potential: PotentialSpec,
        admissibility: AdmissibilitySpec,
    ) -> Result<Self, SpaceError> {
        let n = table.len();
        if n == 0 {
            return Err(SpaceError::Empty);
        }
        let mut dist = vec![0.0; n * n];
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(SpaceError::LengthMismatch {
                    what: "distance row",
                    got: row.len(),
                    expected: n,
                });
            }
            for (j, &d) in row.iter().enumerate() {
                if !d.is_finite() || d < 0.0 {
                    return Err(SpaceError::BadDistance { i, j });
                }
                dist[i * n + j] = d;
            }
        }
        for i in 0..n {
            if dist[i * n + i] != 0.0 {
                return Err(SpaceError::NonzeroDiagonal { i });
            }
            for j in (i + 1)..n {
                if dist[i * n + j] != dist[j * n + i] {
                    return Err(SpaceError::AsymmetricTable { i, j });
                }
                if dist[i * n + j] == 0.0 {
                    return Err(SpaceError::DuplicatePoints { i, j });
                }
            }
        }
        Self::build(n, None, None, dist, mu, potential, admissibility)
    }

    fn build(
        n: usize,
        points: Option<Vec<Vec<f64>>>,
        dim: Option<usize>,
        dist: Vec<f64>,
        mu: Vec<f64>,
        potential: PotentialSpec,
        admissibility: AdmissibilitySpec,
    ) -> Result<Self, SpaceError> {
        if mu.len() != n {
            return Err(SpaceError::LengthMismatch {
                what: "mu",
                got: mu.len(),
                expected: n,
            });
        }
        for (i, &w) in mu.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(SpaceError::NonPositiveWeight {
                    what: "mu",
                    index: i,
                    value: w,
                });
            }
        }

        let phi = eval_potential(&potential, n, &dist, points.as_deref(), dim)?;
        for (i, &p) in phi.iter().enumerate() {
            if !p.is_finite() {
                return Err(SpaceError::NonFinite {
                    what: "phi",
                    index: i,
                });
            }
        }
        let gamma: Vec<f64> = mu.iter().zip(&phi).map(|(&w, &p)| w * (-p).exp()).collect();
        for (i, &g) in gamma.iter().enumerate() {
            if !g.is_finite() || g <= 0.0 {
                return Err(SpaceError::NonPositiveWeight {
                    what: "gamma",
                    index: i,
                    value: g,
                });
            }
        }

        let m = eval_admissibility(&admissibility, &potential, n, &dist, points.as_deref(), dim)?;
        for (i, &v) in m.iter().enumerate() {
            if !(v > 0.0 && v <= 1.0) {
                return Err(SpaceError::BadAdmissibility { index: i, value: v });
            }
        }

        let profiles = build_profiles(n, &dist, &gamma, &mu);
        Ok(DiscreteSpace {
            n,
            points,
            dim,
            dist,
            mu,
            phi,
            gamma,
            m,
            profiles,
            potential,
            admissibility,
        })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Euclidean dimension when the space was built from coordinates.
    pub fn dim(&self) -> Option<usize> {
        self.dim
    }

    /// Coordinates of point `i`, when available.
    pub fn point(&self, i: usize) -> Option<&[f64]> {
        self.points.as_ref().map(|p| p[i].as_slice())
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    pub fn mu(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn phi(&self, i: usize) -> f64 {
        self.phi[i]
    }

    pub fn gamma(&self, i: usize) -> f64 {
        self.gamma[i]
    }

    pub fn m(&self, i: usize) -> f64 {
        self.m[i]
    }

    pub fn gamma_values(&self) -> &[f64] {
        &self.gamma
    }

    pub fn m_values(&self) -> &[f64] {
        &self.m
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn admissibility(&self) -> &AdmissibilitySpec {
        &self.admissibility
    }

    pub fn total_gamma(&self) -> f64 {
        self.gamma.iter().sum()
    }

    pub fn min_m(&self) -> f64 {
        self.m.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_m(&self) -> f64 {
        self.m.iter().copied().fold(0.0, f64::max)
    }

    /// Largest pairwise distance.
    pub fn diameter(&self) -> f64 {
        (0..self.n)
            .map(|i| *self.profiles[i].sorted.last().unwrap())
            .fold(0.0, f64::max)
    }

    /// Smallest positive pairwise distance.
    pub fn min_spacing(&self) -> f64 {
        (0..self.n)
            .filter_map(|i| self.profiles[i].sorted.get(1).copied())
            .fold(f64::INFINITY, f64::min)
    }

    pub(crate) fn profile(&self, center: usize) -> &DistanceProfile {
        &self.profiles[center]
    }

    /// Member indices of the open ball, in distance order (ties by index).
    pub(crate) fn ball_member_slice(&self, center: usize, radius: f64) -> &[u32] {
        let p = &self.profiles[center];
        &p.order[..p.count_below(radius)]
    }

    /// Sorted point indices of the open ball `{x : d(c, x) < r}`.
    pub fn ball_members(&self, ball: &Ball) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .ball_member_slice(ball.center, ball.radius)
            .iter()
            .map(|&i| i as usize)
            .collect();
        v.sort_unstable();
        v
    }

    /// Gamma mass of the open ball, from the centre's prefix sums.
    pub fn gamma_ball(&self, center: usize, radius: f64) -> f64 {
        self.profiles[center].gamma_ball(radius)
    }

    /// Gamma mass of an arbitrary index set (summed in the order given).
    pub fn gamma_mass(&self, indices: &[usize]) -> f64 {
        indices.iter().map(|&i| self.gamma[i]).sum()
    }

    /// Gamma mass of the points selected by a boolean mask.
    pub fn gamma_mass_mask(&self, mask: &[bool]) -> f64 {
        mask.iter()
            .zip(&self.gamma)
            .filter_map(|(&keep, &g)| keep.then_some(g))
            .sum()
    }

    /// Whether `ball` is admissible at level `alpha`.
    pub fn is_admissible(&self, ball: &Ball, alpha: f64) -> bool {
        ball.radius > 0.0 && ball.radius <= alpha * self.m[ball.center]
    }

    /// Distance from `x` to the nearest point outside the mask, or infinity
    /// when the mask covers the whole space.
    pub fn dist_to_complement(&self, x: usize, mask: &[bool]) -> f64 {
        let p = &self.profiles[x];
        for (k, &idx) in p.order.iter().enumerate() {
            if !mask[idx as usize] {
                return p.sorted[k];
            }
        }
        f64::INFINITY
    }

    /// Measures the doubling constant of the weighted measure over all
    /// admissible balls: `sup gamma(lambda B) / gamma(B)` over balls with
    /// `0 < r <= alpha m(c)`.
    pub fn verify_condition_a(
        &self,
        alpha: f64,
        lambda: f64,
        policy: SamplePolicy,
    ) -> ConditionAReport {
        let mut empirical = 0.0_f64;
        let mut worst = Ball::new(0, 0.0);
        let mut checked = 0usize;
        for c in policy.centers(self.n) {
            let cap = alpha * self.m[c];
            let p = &self.profiles[c];
            for r in p.candidate_radii(cap) {
                let den = p.gamma_ball(r);
                let num = p.gamma_ball(lambda * r);
                checked += 1;
                if num > empirical * den {
                    empirical = num / den;
                    worst = Ball::new(c, r);
                }
            }
        }
        let theoretical_bound = match &self.potential {
            PotentialSpec::DistanceFunction { a_prime, .. } if lambda == 2.0 => Some(
                distance_potential_doubling_bound(self.measure_mu_doubling().constant, *a_prime, alpha),
            ),
            _ => None,
        };
        let pass = theoretical_bound.is_none_or(|b| empirical <= b);
        ConditionAReport {
            alpha,
            lambda,
            empirical_constant: empirical,
            worst_ball: worst,
            theoretical_bound,
            pass,
            balls_checked: checked,
        }
    }

    /// Doubling constant of the base measure over balls of every radius.
    pub fn measure_mu_doubling(&self) -> DoublingReport {
        let mut constant = 0.0_f64;
        let mut worst = Ball::new(0, 0.0);
        for c in 0..self.n {
            let p = &self.profiles[c];
            let cap = *p.sorted.last().unwrap();
            for r in p.candidate_radii(cap) {
                let den = p.mu_ball(r);
                let num = p.mu_ball(2.0 * r);
                if num > constant * den {
                    constant = num / den;
                    worst = Ball::new(c, r);
                }
            }
        }
        DoublingReport {
            constant,
            worst_ball: worst,
        }
    }

    /// Measures `sup m(x)/m(y)` over pairs with `d(x, y) <= alpha * m(x)`.
    pub fn admissibility_ratio(&self, alpha: f64) -> ConditionCReport {
        self.admissibility_ratio_with(|x, d| d <= alpha * self.m[x], alpha)
    }

    /// Measures `sup m(x)/m(y)` over pairs with `d(x, y) <= alpha`.
    pub fn admissibility_ratio_absolute(&self, alpha: f64) -> ConditionCReport {
        self.admissibility_ratio_with(|_, d| d <= alpha, alpha)
    }

    fn admissibility_ratio_with(
        &self,
        admit: impl Fn(usize, f64) -> bool,
        alpha: f64,
    ) -> ConditionCReport {
        let mut empirical = 0.0_f64;
        let mut worst = (0usize, 0usize);
        let mut pairs = 0usize;
        for x in 0..self.n {
            for y in 0..self.n {
                if !admit(x, self.dist(x, y)) {
                    continue;
                }
                pairs += 1;
                let ratio = self.m[x] / self.m[y];
                if ratio > empirical {
                    empirical = ratio;
                    worst = (x, y);
                }
            }
        }
        ConditionCReport {
            alpha,
            empirical_constant: empirical,
            worst_pair: worst,
            pairs_checked: pairs,
        }
    }

    /// Validates metric axioms. Symmetry and the diagonal are exact by
    /// construction; the triangle inequality is checked on every triple when
    /// the triple count fits the budget and on a deterministic stride
    /// otherwise.
    pub fn validate_metric(&self, triple_budget: usize) -> MetricReport {
        let n = self.n;
        let total = n * n * n;
        let stride = if total <= triple_budget {
            1
        } else {
            total / triple_budget + 1
        };
        let mut worst_defect = f64::NEG_INFINITY;
        let mut checked = 0usize;
        let mut t = 0usize;
        while t < total {
            let i = t / (n * n);
            let j = (t / n) % n;
            let k = t % n;
            let defect = self.dist(i, k) - self.dist(i, j) - self.dist(j, k);
            if defect > worst_defect {
                worst_defect = defect;
            }
            checked += 1;
            t += stride;
        }
        MetricReport {
            triangle_ok: worst_defect <= 1e-12,
            worst_defect,
            triples_checked: checked,
        }
    }

    /// Greedy count of pairwise-disjoint half-radius balls contained in each
    /// sampled admissible ball; the witness for geometric doubling.
    pub fn geometric_doubling_witness(&self, alpha: f64, radii_per_center: usize) -> GeometricDoublingReport {
        let mut max_packed = 0usize;
        let mut worst = Ball::new(0, 0.0);
        let mut owner = vec![usize::MAX; self.n];
        let mut inside = vec![false; self.n];
        for c in 0..self.n {
            let cap = alpha * self.m[c];
            let radii = self.profiles[c].candidate_radii(cap);
            let stride = (radii.len() / radii_per_center.max(1)).max(1);
            for r in radii.iter().copied().step_by(stride) {
                let members = self.ball_member_slice(c, r);
                for &z in members {
                    inside[z as usize] = true;
                }
                let mut count = 0usize;
                for &z in members {
                    let z = z as usize;
                    let half = self.ball_member_slice(z, r / 2.0);
                    let ok = half
                        .iter()
                        .all(|&w| inside[w as usize] && owner[w as usize] != c);
                    if ok && !half.is_empty() {
                        for &w in half {
                            owner[w as usize] = c;
                        }
                        count += 1;
                    }
                }
                for &z in members {
                    inside[z as usize] = false;
                    owner[z as usize] = usize::MAX;
                }
                if count > max_packed {
                    max_packed = count;
                    worst = Ball::new(c, r);
                }
            }
        }
        GeometricDoublingReport {
            max_disjoint_half_balls: max_packed,
            worst_ball: worst,
        }
    }
}

/// Centre selection for ball-enumeration scans.
#[derive(Debug, Clone, Copy)]
pub enum SamplePolicy {
    /// Every point is a centre.
    Exhaustive,
    /// Every `stride`-th point is a centre.
    Stride(usize),
}

impl SamplePolicy {
    pub(crate) fn centers(self, n: usize) -> Box<dyn Iterator<Item = usize>> {
        match self {
            SamplePolicy::Exhaustive => Box::new(0..n),
            SamplePolicy::Stride(s) => Box::new((0..n).step_by(s.max(1))),
        }
    }
}

/// Measured doubling behaviour of `gamma` over admissible balls.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionAReport {
    pub alpha: f64,
    pub lambda: f64,
    pub empirical_constant: f64,
    pub worst_ball: Ball,
    /// Closed-form bound, available for distance-function potentials with
    /// doubling factor two.
    pub theoretical_bound: Option<f64>,
    pub pass: bool,
    pub balls_checked: usize,
}

/// Measured doubling constant of the base measure.
#[derive(Debug, Clone, Serialize)]
pub struct DoublingReport {
    pub constant: f64,
    pub worst_ball: Ball,
}

/// Measured admissibility-ratio constant.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCReport {
    pub alpha: f64,
    pub empirical_constant: f64,
    pub worst_pair: (usize, usize),
    pub pairs_checked: usize,
}

/// Triangle-inequality scan result.
#[derive(Debug, Clone, Serialize)]
pub struct MetricReport {
    pub triangle_ok: bool,
    pub worst_defect: f64,
    pub triples_checked: usize,
}

/// Packing witness for geometric doubling.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricDoublingReport {
    pub max_disjoint_half_balls: usize,
    pub worst_ball: Ball,
}

/// Closed-form doubling bound for distance-function potentials:
/// `D * exp(a' * alpha * (5 alpha + 6))`.
pub fn distance_potential_doubling_bound(d_mu: f64, a_prime: f64, alpha: f64) -> f64 {
    d_mu * (a_prime * alpha * (5.0 * alpha + 6.0)).exp()
}

/// Closed-form doubling bound for twice-differentiable potentials with
/// derivative-ratio constant `m_const`: `D * exp(3 alpha e^{m_const alpha})`.
pub fn c2_potential_doubling_bound(d_mu: f64, m_const: f64, alpha: f64) -> f64 {
    d_mu * (3.0 * alpha * (m_const * alpha).exp()).exp()
}

/// Admissibility-ratio bound `e^{m_const * alpha}` implied by the
/// derivative-ratio condition.
pub fn admissibility_ratio_bound(m_const: f64, alpha: f64) -> f64 {
    (m_const * alpha).exp()
}

fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

fn build_profiles(n: usize, dist: &[f64], gamma: &[f64], mu: &[f64]) -> Vec<DistanceProfile> {
    (0..n)
        .map(|c| {
            let mut order: Vec<u32> = (0..n as u32).collect();
            order.sort_unstable_by(|&a, &b| {
                dist[c * n + a as usize]
                    .total_cmp(&dist[c * n + b as usize])
                    .then(a.cmp(&b))
            });
            let sorted: Vec<f64> = order.iter().map(|&i| dist[c * n + i as usize]).collect();
            let mut gamma_prefix = Vec::with_capacity(n + 1);
            let mut mu_prefix = Vec::with_capacity(n + 1);
            let (mut gs, mut ms) = (0.0, 0.0);
            gamma_prefix.push(0.0);
            mu_prefix.push(0.0);
            for &i in &order {
                gs += gamma[i as usize];
                ms += mu[i as usize];
                gamma_prefix.push(gs);
                mu_prefix.push(ms);
            }
            DistanceProfile {
                order,
                sorted,
                gamma_prefix,
                mu_prefix,
            }
        })
        .collect()
}

fn eval_potential(
    spec: &PotentialSpec,
    n: usize,
    dist: &[f64],
    points: Option<&[Vec<f64>]>,
    dim: Option<usize>,
) -> Result<Vec<f64>, SpaceError> {
    match spec {
        PotentialSpec::DistanceFunction { origins, a, a_prime } => {
            if origins.is_empty() {
                return Err(SpaceError::EmptyOrigins);
            }
            for &o in origins {
                if o >= n {
                    return Err(SpaceError::OriginOutOfRange { index: o, n });
                }
            }
            Ok((0..n)
                .map(|x| {
                    let d = origin_distance(x, origins, n, dist);
                    a + a_prime * d * d
                })
                .collect())
        }
        PotentialSpec::Polynomial1d { coefficients } => {
            let points = require_dim1(points, dim, "polynomial potential")?;
            Ok(points.iter().map(|p| poly_eval(coefficients, p[0])).collect())
        }
        PotentialSpec::Explicit { values } => {
            if values.len() != n {
                return Err(SpaceError::LengthMismatch {
                    what: "potential values",
                    got: values.len(),
                    expected: n,
                });
            }
            Ok(values.clone())
        }
    }
}

fn eval_admissibility(
    spec: &AdmissibilitySpec,
    potential: &PotentialSpec,
    n: usize,
    dist: &[f64],
    points: Option<&[Vec<f64>]>,
    dim: Option<usize>,
) -> Result<Vec<f64>, SpaceError> {
    match spec {
        AdmissibilitySpec::DistanceBased => {
            let origins = match potential {
                PotentialSpec::DistanceFunction { origins, .. } => origins,
                _ => return Err(SpaceError::OriginsUnavailable),
            };
            Ok((0..n)
                .map(|x| reciprocal_clamped(origin_distance(x, origins, n, dist)))
                .collect())
        }
        AdmissibilitySpec::GradientBased { .. } => {
            let grad = match potential {
                PotentialSpec::Polynomial1d { coefficients } => {
                    let points = require_dim1(points, dim, "gradient-based admissibility")?;
                    let d1 = poly_derivative(coefficients);
                    points.iter().map(|p| poly_eval(&d1, p[0]).abs()).collect()
                }
                PotentialSpec::Explicit { values } => {
                    let points = require_dim1(points, dim, "gradient-based admissibility")?;
                    finite_difference_gradient(points, values)
                }
                PotentialSpec::DistanceFunction { .. } => {
                    return Err(SpaceError::GradientUnsupported)
                }
            };
            Ok(grad.into_iter().map(reciprocal_clamped).collect())
        }
        AdmissibilitySpec::Constant { value } => {
            if !(*value > 0.0 && *value <= 1.0) {
                return Err(SpaceError::BadAdmissibility {
                    index: 0,
                    value: *value,
                });
            }
            Ok(vec![*value; n])
        }
        AdmissibilitySpec::Explicit { values } => {
            if values.len() != n {
                return Err(SpaceError::LengthMismatch {
                    what: "admissibility values",
                    got: values.len(),
                    expected: n,
                });
            }
            Ok(values.clone())
        }
    }
}

fn require_dim1<'a>(
    points: Option<&'a [Vec<f64>]>,
    dim: Option<usize>,
    spec: &'static str,
) -> Result<&'a [Vec<f64>], SpaceError> {
    match (points, dim) {
        (Some(p), Some(1)) => Ok(p),
        _ => Err(SpaceError::DimensionRequired { spec, required: 1 }),
    }
}

fn origin_distance(x: usize, origins: &[usize], n: usize, dist: &[f64]) -> f64 {
    origins
        .iter()
        .map(|&o| dist[x * n + o])
        .fold(f64::INFINITY, f64::min)
}

/// `min(1, 1/v)`, with the empty-denominator case mapped to 1.
fn reciprocal_clamped(v: f64) -> f64 {
    if v == 0.0 {
        1.0
    } else {
        (1.0 / v).min(1.0)
    }
}

/// Central differences in the interior, one-sided at the ends, on a sorted
/// one-dimensional grid.
fn finite_difference_gradient(points: &[Vec<f64>], values: &[f64]) -> Vec<f64> {
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| points[a][0].total_cmp(&points[b][0]));
    let x = |k: usize| points[order[k]][0];
    let v = |k: usize| values[order[k]];
    let mut grad = vec![0.0; n];
    for k in 0..n {
        let g = if n == 1 {
            0.0
        } else if k == 0 {
            (v(1) - v(0)) / (x(1) - x(0))
        } else if k == n - 1 {
            (v(n - 1) - v(n - 2)) / (x(n - 1) - x(n - 2))
        } else {
            (v(k + 1) - v(k - 1)) / (x(k + 1) - x(k - 1))
        };
        grad[order[k]] = g.abs();
    }
    grad
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line_points(n: usize, lo: f64, hi: f64) -> Vec<Vec<f64>> {
        let h = (hi - lo) / (n - 1) as f64;
        (0..n).map(|i| vec![lo + h * i as f64]).collect()
    }

    fn gaussian_line_small(n: usize) -> DiscreteSpace {
        let points = line_points(n, -4.0, 4.0);
        let h = 8.0 / (n - 1) as f64;
        let origin = (n - 1) / 2;
        DiscreteSpace::from_points(
            points,
            vec![h; n],
            PotentialSpec::DistanceFunction {
                origins: vec![origin],
                a: 0.5 * (2.0 * std::f64::consts::PI).ln(),
                a_prime: 0.5,
            },
            AdmissibilitySpec::DistanceBased,
        )
        .unwrap()
    }

    /// Standard normal CDF via the error function.
    fn normal_cdf(x: f64) -> f64 {
        0.5 * (1.0 + libm::erf(x / std::f64::consts::SQRT_2))
    }

    #[test]
    fn gamma_mass_matches_gaussian_integral() {
        let space = gaussian_line_small(801);
        let h = 0.01;
        // Midpoint rule over cells [-4 - h/2, 4 + h/2].
        let oracle = normal_cdf(4.0 + h / 2.0) - normal_cdf(-4.0 - h / 2.0);
        assert!((space.total_gamma() - oracle).abs() < 1e-5);
        assert!((space.total_gamma() - 0.99994).abs() < 5e-5);
    }

    #[test]
    fn ball_members_use_strict_inequality() {
        let space = gaussian_line_small(801);
        let center = 400; // x = 0
        let members = space.ball_members(&Ball::new(center, 0.5));
        // x = +-0.5 sit exactly at the radius and are excluded.
        assert_eq!(members.len(), 99);
        assert_eq!(members[0], 351);
        assert_eq!(*members.last().unwrap(), 449);
        let mass = space.gamma_mass(&members);
        let oracle = normal_cdf(0.495) - normal_cdf(-0.495);
        assert!((mass - oracle).abs() < 1e-5);
        // Coarse agreement with the continuum ball mass.
        assert!((mass - 0.3829).abs() < 5e-3);
        // Prefix-sum route agrees with explicit summation.
        let via_prefix = space.gamma_ball(center, 0.5);
        assert!((via_prefix - mass).abs() < 1e-14);
    }

    #[test]
    fn admissibility_distance_based_values() {
        let space = gaussian_line_small(801);
        assert_eq!(space.m(400), 1.0); // origin
        assert!((space.m(600) - 0.5).abs() < 1e-12); // x = 2
        assert!((space.m(700) - 1.0 / 3.0).abs() < 1e-12); // x = 3
        assert_eq!(space.m(450), 1.0); // x = 0.5, within unit distance
    }

    #[test]
    fn admissibility_gradient_based_quartic() {
        let n = 401;
        let points = line_points(n, -2.0, 2.0);
        let space = DiscreteSpace::from_points(
            points,
            vec![0.01; n],
            PotentialSpec::Polynomial1d {
                coefficients: vec![0.0, 0.0, 0.0, 0.0, 1.0],
            },
            AdmissibilitySpec::GradientBased {
                condition_b_constant: None,
            },
        )
        .unwrap();
        // |phi'| = 4|x|^3: m(0) = 1, m(1) = 1/4, m(2) = 1/32, m(0.5) = 1.
        assert_eq!(space.m(200), 1.0);
        assert!((space.m(300) - 0.25).abs() < 1e-12);
        assert!((space.m(400) - 1.0 / 32.0).abs() < 1e-12);
        assert_eq!(space.m(250), 1.0);
    }

    #[test]
    fn mu_doubling_on_uniform_grid_attains_discrete_supremum() {
        // At radius exactly h the open ball is a singleton while the double
        // ball holds the two neighbours, so the supremum is at least 3; ties
        // at the double radius can admit the 2h-neighbours as well, never
        // more, so the constant lies in [3, 5].
        let space = gaussian_line_small(801);
        let report = space.measure_mu_doubling();
        assert!(report.constant >= 3.0 - 1e-9);
        assert!(report.constant <= 5.0 + 1e-9);
    }

    #[test]
    fn condition_a_within_closed_form_bound() {
        let space = gaussian_line_small(201);
        for alpha in [0.5, 1.0, 2.0] {
            let report = space.verify_condition_a(alpha, 2.0, SamplePolicy::Exhaustive);
            let bound = report.theoretical_bound.unwrap();
            assert!(
                report.pass,
                "alpha={alpha}: {} > {bound}",
                report.empirical_constant
            );
            assert!(report.empirical_constant > 1.0);
        }
    }

    #[test]
    fn condition_a_enumeration_is_exhaustive_over_radii() {
        // Every distinct admissible ball must appear: sweep a fine radius
        // oracle and check the measured constant is the true supremum.
        let space = gaussian_line_small(51);
        let alpha = 1.0;
        let report = space.verify_condition_a(alpha, 2.0, SamplePolicy::Exhaustive);
        let mut oracle = 0.0_f64;
        for c in 0..space.len() {
            let cap = alpha * space.m(c);
            let mut r = 1e-4;
            while r <= cap {
                let den = space.gamma_ball(c, r);
                if den > 0.0 {
                    oracle = oracle.max(space.gamma_ball(c, 2.0 * r) / den);
                }
                r += 1e-4;
            }
        }
        assert!(report.empirical_constant >= oracle - 1e-12);
    }

    #[test]
    fn admissibility_ratio_bounded_by_exponential() {
        let n = 801;
        let points = line_points(n, -4.0, 4.0);
        let phi = vec![0.5 * (2.0 * std::f64::consts::PI).ln(), 0.0, 0.5];
        let space = DiscreteSpace::from_points(
            points,
            vec![0.01; n],
            PotentialSpec::Polynomial1d { coefficients: phi.clone() },
            AdmissibilitySpec::GradientBased {
                condition_b_constant: None,
            },
        )
        .unwrap();
        let m_const =
            crate::potential::verify_condition_b(&phi, (-10.0, 10.0), 200_001).minimal_constant;
        for alpha in [1.0, 2.0] {
            let measured = space.admissibility_ratio(alpha).empirical_constant;
            let bound = admissibility_ratio_bound(m_const, alpha);
            assert!(measured <= bound, "alpha={alpha}: {measured} > {bound}");
            // Also the absolute-scale variant implied by the same constant.
            let absolute = space.admissibility_ratio_absolute(alpha).empirical_constant;
            assert!(absolute <= bound * (1.0 + 1e-12));
        }
    }

    #[test]
    fn metric_validation_accepts_euclidean_cloud() {
        let space = gaussian_line_small(101);
        let report = space.validate_metric(2_000_000);
        assert!(report.triangle_ok);
    }

    #[test]
    fn rejects_bad_weights_with_index() {
        let points = line_points(5, 0.0, 1.0);
        let mut mu = vec![1.0; 5];
        mu[3] = 0.0;
        let err = DiscreteSpace::from_points(
            points,
            mu,
            PotentialSpec::Explicit { values: vec![0.0; 5] },
            AdmissibilitySpec::Constant { value: 1.0 },
        )
        .unwrap_err();
        match err {
            SpaceError::NonPositiveWeight { index, .. } => assert_eq!(index, 3),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn rejects_empty_origin_set() {
        let points = line_points(5, 0.0, 1.0);
        let err = DiscreteSpace::from_points(
            points,
            vec![1.0; 5],
            PotentialSpec::DistanceFunction {
                origins: vec![],
                a: 0.0,
                a_prime: 1.0,
            },
            AdmissibilitySpec::DistanceBased,
        )
        .unwrap_err();
        assert!(matches!(err, SpaceError::EmptyOrigins));
    }

    #[test]
    fn rejects_duplicate_points() {
        let err = DiscreteSpace::from_points(
            vec![vec![0.0], vec![1.0], vec![0.0]],
            vec![1.0; 3],
            PotentialSpec::Explicit { values: vec![0.0; 3] },
            AdmissibilitySpec::Constant { value: 1.0 },
        )
        .unwrap_err();
        assert!(matches!(err, SpaceError::DuplicatePoints { i: 0, j: 2 }));
    }

    #[test]
    fn distance_table_round_trip() {
        let table = vec![
            vec![0.0, 1.0, 2.0],
            vec![1.0, 0.0, 1.0],
            vec![2.0, 1.0, 0.0],
        ];
        let space = DiscreteSpace::from_distance_table(
            table,
            vec![1.0; 3],
            PotentialSpec::Explicit { values: vec![0.0; 3] },
            AdmissibilitySpec::Constant { value: 0.5 },
        )
        .unwrap();
        assert_eq!(space.dist(0, 2), 2.0);
        assert_eq!(space.ball_members(&Ball::new(1, 1.5)), vec![0, 1, 2]);
        assert_eq!(space.ball_members(&Ball::new(1, 1.0)), vec![1]);
    }

    #[test]
    fn geometric_doubling_witness_is_small_on_line() {
        let space = gaussian_line_small(201);
        let report = space.geometric_doubling_witness(5.0, 8);
        assert!(report.max_disjoint_half_balls <= 4);
        assert!(report.max_disjoint_half_balls >= 1);
    }
}
