//! Constructive atomic decomposition for the `t^{1,q}` tent norm.
//!
//! The pipeline follows the stopping-time pattern: superlevel sets
//! `E_k = {A_q^3 f > 2^k}`, a greedy disjoint-ball cover of each `E_k`
//! whose quintupled tents cover `T(E_k)`, and one atom per cover ball
//! carrying the part of `f` that lives between consecutive tents. Every
//! inequality used along the way is certified by a dedicated check; on a
//! finite space they all hold exactly, so tolerances only absorb float
//! rounding.

use std::collections::HashMap;

use serde::Serialize;

use crate::functionals::{
    conical_averages, conical_averages_masked, lp_norm, tpq_norm, TentFunction,
};
use crate::geometry::{tent, NodeSet, RegionGrid};
use crate::space::{Ball, DiscreteSpace};

/// `gamma^{1/q'}` with the convention that `q = 1` gives exponent zero.
fn gamma_pow_inv_qprime(gamma: f64, q: f64) -> f64 {
    if q == 1.0 {
        1.0
    } else {
        gamma.powf(1.0 - 1.0 / q)
    }
}

/// Greedy disjoint cover of a point set by 1-admissible balls.
///
/// Each step selects the center maximizing the largest radius that keeps
/// the ball inside `E`, inside the admissibility cap, and disjoint from
/// every chosen ball, with ties broken by lowest point index. The chosen
/// radius is the exact supremum, so a node `(y, t)` of `T(E)` always ends
/// up with `B(y, t)` inside the tripled first ball that comes within `t`
/// of `y`.
pub fn vitali_tent_cover(space: &DiscreteSpace, e_mask: &[bool]) -> Vec<Ball> {
    let mut greedy = GreedyCover::start(space, e_mask);
    while greedy.select_next(space).is_some() {}
    greedy.balls
}

/// Incremental state of the greedy cover, for callers that stop early.
struct GreedyCover {
    balls: Vec<Ball>,
    /// Largest admissible disjoint radius per candidate center; zero once
    /// the point is covered or outside `E`.
    limit: Vec<f64>,
}

impl GreedyCover {
    fn start(space: &DiscreteSpace, e_mask: &[bool]) -> Self {
        let limit = (0..space.len())
            .map(|c| {
                if e_mask[c] {
                    space.m(c).min(space.dist_to_complement(c, e_mask))
                } else {
                    0.0
                }
            })
            .collect();
        GreedyCover {
            balls: Vec::new(),
            limit,
        }
    }

    fn select_next(&mut self, space: &DiscreteSpace) -> Option<Ball> {
        let mut best = 0usize;
        let mut best_r = 0.0f64;
        for (c, &r) in self.limit.iter().enumerate() {
            if r > best_r {
                best = c;
                best_r = r;
            }
        }
        if best_r <= 0.0 {
            return None;
        }
        let ball = Ball::new(best, best_r);
        for &z in space.ball_member_slice(best, best_r) {
            // Members of the new ball are covered for good.
            self.limit[z as usize] = 0.0;
        }
        for c in 0..self.limit.len() {
            if self.limit[c] > 0.0 {
                let mut d_ball = f64::INFINITY;
                for &z in space.ball_member_slice(best, best_r) {
                    d_ball = d_ball.min(space.dist(c, z as usize));
                }
                self.limit[c] = self.limit[c].min(d_ball);
            }
        }
        self.balls.push(ball);
        Some(ball)
    }
}

/// Result of checking a cover against its defining predicates.
#[derive(Debug, Clone, Serialize)]
pub struct CoverCertificate {
    pub ball_count: usize,
    pub pairwise_disjoint: bool,
    pub one_admissible: bool,
    pub contained_in_set: bool,
    pub tents_covered: bool,
    pub tent_node_count: usize,
}

impl CoverCertificate {
    pub fn pass(&self) -> bool {
        self.pairwise_disjoint && self.one_admissible && self.contained_in_set && self.tents_covered
    }
}

/// Verifies disjointness, admissibility, containment in `E`, and the
/// node-exact inclusion `T(E) subset of the union of T(5B^j)`.
pub fn verify_tent_cover(
    space: &DiscreteSpace,
    region: &RegionGrid,
    e_mask: &[bool],
    balls: &[Ball],
) -> CoverCertificate {
    let mut owner: Vec<Option<usize>> = vec![None; space.len()];
    let mut pairwise_disjoint = true;
    let mut one_admissible = true;
    let mut contained_in_set = true;
    for (j, ball) in balls.iter().enumerate() {
        if ball.radius > space.m(ball.center) {
            one_admissible = false;
        }
        for &z in space.ball_member_slice(ball.center, ball.radius) {
            let z = z as usize;
            if !e_mask[z] {
                contained_in_set = false;
            }
            if owner[z].is_some() {
                pairwise_disjoint = false;
            }
            owner[z] = Some(j);
        }
    }
    let t_e = tent(space, region, e_mask);
    let mut union5 = NodeSet::empty(region.len());
    let mut mask5 = vec![false; space.len()];
    for ball in balls {
        mask5.fill(false);
        for &z in space.ball_member_slice(ball.center, 5.0 * ball.radius) {
            mask5[z as usize] = true;
        }
        union5.union_with(&tent(space, region, &mask5));
    }
    let tents_covered = t_e.is_subset_of(&union5);
    CoverCertificate {
        ball_count: balls.len(),
        pairwise_disjoint,
        one_admissible,
        contained_in_set,
        tents_covered,
        tent_node_count: t_e.count(),
    }
}

/// Superlevel sets `E_k = {A_q^3 f > 2^k}` over the dyadic range that
/// brackets the support of `f`.
#[derive(Debug, Clone)]
pub struct LevelSets {
    pub k_min: i32,
    pub k_max: i32,
    /// `masks[i]` is the indicator of `E_{k_min + i}`.
    pub masks: Vec<Vec<bool>>,
    /// `A_q^3 f` at every point.
    pub averages3: Vec<f64>,
}

impl LevelSets {
    pub fn threshold(k: i32) -> f64 {
        (k as f64).exp2()
    }

    pub fn mask(&self, k: i32) -> &[bool] {
        &self.masks[(k - self.k_min) as usize]
    }
}

/// Builds the level sets for a nonzero `f`; `k_min` is low enough that
/// every ball of a support node lies in `E_{k_min}`, and `E_{k_max + 1}`
/// is empty.
pub fn level_sets(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    q: f64,
) -> Option<LevelSets> {
    if f.is_zero() {
        return None;
    }
    let averages3 = conical_averages(space, region, f, q, 3.0);
    let max_a = averages3.iter().copied().fold(0.0f64, f64::max);
    // Smallest single-node contribution to any aperture-3 average over a
    // support node's ball: every such member sees at least this much.
    let c_min = f
        .entries()
        .iter()
        .map(|&(node, v)| {
            (v.abs().powf(q) * region.weight_over_ball(node as usize)).powf(1.0 / q)
        })
        .fold(f64::INFINITY, f64::min);
    let k_min = (c_min.log2().floor() as i32) - 1;
    let mut k_max = max_a.log2().floor() as i32;
    if LevelSets::threshold(k_max) >= max_a {
        k_max -= 1;
    }
    let masks = (k_min..=k_max)
        .map(|k| {
            let thr = LevelSets::threshold(k);
            averages3.iter().map(|&a| a > thr).collect()
        })
        .collect();
    Some(LevelSets {
        k_min,
        k_max,
        masks,
        averages3,
    })
}

/// Outcome of the pointwise stopping-time estimate at one threshold.
#[derive(Debug, Clone, Serialize)]
pub struct PointwiseReport {
    pub threshold: f64,
    pub worst_value: f64,
    pub worst_point: usize,
    pub pass: bool,
}

/// Checks `A_q(f 1_{D minus T(E)}) <= lam` everywhere, with
/// `E = {A_q^3 f > lam}`.
pub fn pointwise2_check(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    q: f64,
    lam: f64,
) -> PointwiseReport {
    let averages3 = conical_averages(space, region, f, q, 3.0);
    let e_mask: Vec<bool> = averages3.iter().map(|&a| a > lam).collect();
    pointwise2_check_with_mask(space, region, f, q, lam, &e_mask)
}

/// Same check with the superlevel mask supplied by the caller.
pub fn pointwise2_check_with_mask(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    q: f64,
    lam: f64,
    e_mask: &[bool],
) -> PointwiseReport {
    let t_e = tent(space, region, e_mask);
    let outside = conical_averages_masked(space, region, f, q, 1.0, Some(&t_e.complement()));
    let (mut worst_value, mut worst_point) = (0.0f64, 0usize);
    for (x, &v) in outside.iter().enumerate() {
        if v > worst_value {
            worst_value = v;
            worst_point = x;
        }
    }
    PointwiseReport {
        threshold: lam,
        worst_value,
        worst_point,
        pass: worst_value <= lam * (1.0 + 1e-12),
    }
}

/// Set-level witness behind the pointwise estimate: for `x` in `E`, the
/// cone of `x` minus `T(E)` sits inside the aperture-3 cone of the nearest
/// point outside `E`.
#[derive(Debug, Clone, Serialize)]
pub struct InclusionReport {
    pub x: usize,
    pub nearest_outside: usize,
    pub checked_nodes: usize,
    pub holds: bool,
}

pub fn cone_minus_tent_inclusion(
    space: &DiscreteSpace,
    region: &RegionGrid,
    e_mask: &[bool],
    x: usize,
) -> InclusionReport {
    let t_e = tent(space, region, e_mask);
    let mut nearest = usize::MAX;
    let mut nearest_d = f64::INFINITY;
    for z in 0..space.len() {
        if !e_mask[z] {
            let d = space.dist(x, z);
            if d < nearest_d {
                nearest_d = d;
                nearest = z;
            }
        }
    }
    let mut holds = nearest != usize::MAX;
    let mut checked = 0usize;
    if holds {
        for (id, node) in region.nodes().iter().enumerate() {
            let y = node.point as usize;
            let t = region.time(id);
            if space.dist(x, y) < t && !t_e.contains(id) {
                checked += 1;
                if space.dist(nearest, y) >= 3.0 * t {
                    holds = false;
                }
            }
        }
    }
    InclusionReport {
        x,
        nearest_outside: nearest,
        checked_nodes: checked,
        holds,
    }
}

/// Normalized building block supported in the tent of a 5-admissible ball.
#[derive(Debug, Clone)]
pub struct Atom {
    pub values: TentFunction,
    pub ball: Ball,
    pub q: f64,
}

/// One decomposition term `lambda * atom` with its level and cover indices.
#[derive(Debug, Clone)]
pub struct DecompTerm {
    pub k: i32,
    pub j: usize,
    pub lambda: f64,
    pub atom: Atom,
}

/// Per-level bookkeeping for the counting estimates.
#[derive(Debug, Clone, Serialize)]
pub struct LevelStats {
    pub k: i32,
    pub ball_count: usize,
    pub gamma5_sum: f64,
    pub gamma_level_set: f64,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    pub terms: Vec<DecompTerm>,
    pub q: f64,
    pub k_range: Option<(i32, i32)>,
    pub levels: Vec<LevelStats>,
}

impl Decomposition {
    pub fn lambda_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.lambda).sum()
    }
}

/// Decomposes `f` into scaled atoms: level sets, a truncated greedy cover
/// per level, first-cover assignment of the between-tents nodes, and the
/// scalar `lambda_k^j = gamma(5B)^{1/q'} (int_{5B} A_q(f 1_{A_k})^q
/// dgamma)^{1/q}` per emitted ball.
pub fn atomic_decompose(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    q: f64,
) -> Decomposition {
    let Some(levels) = level_sets(space, region, f, q) else {
        return Decomposition {
            terms: Vec::new(),
            q,
            k_range: None,
            levels: Vec::new(),
        };
    };
    // Distance to the complement of each E_k, per distinct support point:
    // a node belongs to T(E_k) exactly when t <= that distance.
    let mut delta_cache: HashMap<usize, Vec<f64>> = HashMap::new();
    for &(node, _) in f.entries() {
        let y = region.point_of(node as usize);
        delta_cache.entry(y).or_insert_with(|| {
            levels
                .masks
                .iter()
                .map(|mask| space.dist_to_complement(y, mask))
                .collect()
        });
    }
    // Assign each support node to the deepest level whose tent holds it.
    let level_count = levels.masks.len();
    let mut per_level_nodes: Vec<Vec<(u32, f64)>> = vec![Vec::new(); level_count];
    for &(node, v) in f.entries() {
        let id = node as usize;
        let y = region.point_of(id);
        let t = region.time(id);
        let delta = &delta_cache[&y];
        let depth = delta.partition_point(|&d| d >= t);
        assert!(
            depth > 0,
            "support node {id} escapes the lowest level set"
        );
        per_level_nodes[depth - 1].push((node, v));
    }

    let mut terms = Vec::new();
    let mut stats = Vec::new();
    let mut acc = vec![0.0f64; space.len()];
    for (idx, nodes) in per_level_nodes.iter().enumerate() {
        if nodes.is_empty() {
            continue;
        }
        let k = levels.k_min + idx as i32;
        let e_mask = &levels.masks[idx];
        // Accumulate A_q(f 1_{A_k})^q by scattering the level's nodes.
        acc.fill(0.0);
        for &(node, v) in nodes {
            let id = node as usize;
            let y = region.point_of(id);
            let t = region.time(id);
            let c = v.abs().powf(q) * region.weight_over_ball(id);
            for &x in space.ball_member_slice(y, t) {
                acc[x as usize] += c;
            }
        }
        // Truncated greedy: emit balls until every level node's ball lies
        // inside some quintupled cover ball.
        let mut greedy = GreedyCover::start(space, e_mask);
        let mut unassigned: Vec<usize> = (0..nodes.len()).collect();
        let mut assigned: Vec<Vec<usize>> = Vec::new();
        let mut balls: Vec<Ball> = Vec::new();
        while !unassigned.is_empty() {
            let ball = greedy
                .select_next(space)
                .expect("tent cover exhausted before assigning every node");
            let mut taken = Vec::new();
            unassigned.retain(|&slot| {
                let id = nodes[slot].0 as usize;
                let y = region.point_of(id);
                let t = region.time(id);
                let mut far = 0.0f64;
                for &z in space.ball_member_slice(y, t) {
                    far = far.max(space.dist(ball.center, z as usize));
                }
                if far < 5.0 * ball.radius {
                    taken.push(slot);
                    false
                } else {
                    true
                }
            });
            balls.push(ball);
            assigned.push(taken);
        }
        let mut gamma5_sum = 0.0f64;
        for (j, ball) in balls.iter().enumerate() {
            let five = ball.scaled(5.0);
            let gamma5 = space.gamma_ball(five.center, five.radius);
            gamma5_sum += gamma5;
            if assigned[j].is_empty() {
                continue;
            }
            let mut integral = 0.0f64;
            for &x in space.ball_member_slice(five.center, five.radius) {
                integral += acc[x as usize] * space.gamma(x as usize);
            }
            let lambda = gamma_pow_inv_qprime(gamma5, q) * integral.powf(1.0 / q);
            assert!(lambda > 0.0, "assigned ball produced a zero scalar");
            let values = TentFunction::from_pairs(
                assigned[j].iter().map(|&slot| {
                    let (node, v) = nodes[slot];
                    (node as usize, v / lambda)
                }),
            );
            terms.push(DecompTerm {
                k,
                j,
                lambda,
                atom: Atom {
                    values,
                    ball: five,
                    q,
                },
            });
        }
        stats.push(LevelStats {
            k,
            ball_count: balls.len(),
            gamma5_sum,
            gamma_level_set: space.gamma_mass_mask(e_mask),
        });
    }
    Decomposition {
        terms,
        q,
        k_range: Some((levels.k_min, levels.k_max)),
        levels: stats,
    }
}

/// Per-atom certification record.
#[derive(Debug, Clone, Serialize)]
pub struct AtomReport {
    pub support_in_tent: bool,
    pub size_value: f64,
    pub size_bound: f64,
    pub norm_value: f64,
    pub holder_middle: f64,
    pub pass: bool,
}

/// Pinned relative tolerances for the atom invariants.
pub const ATOM_SIZE_RTOL: f64 = 1e-9;
pub const ATOM_NORM_RTOL: f64 = 1e-10;

/// Checks the support, size, and norm chain of one atom: the size bound
/// `sum |a|^q gamma w <= gamma(B)^{1-q}`, then
/// `||a||_{t^{1,q}} <= gamma(B)^{1/q'} (int_B A_q a^q dgamma)^{1/q} <= 1`.
pub fn validate_atom(space: &DiscreteSpace, region: &RegionGrid, atom: &Atom) -> AtomReport {
    let q = atom.q;
    let mut support_in_tent = true;
    let mut size_value = 0.0f64;
    for &(node, v) in atom.values.entries() {
        let id = node as usize;
        if !crate::geometry::node_in_ball_tent(space, region, id, &atom.ball) {
            support_in_tent = false;
        }
        size_value += v.abs().powf(q) * region.gamma_w(id);
    }
    let gamma_b = space.gamma_ball(atom.ball.center, atom.ball.radius);
    let size_bound = gamma_b.powf(1.0 - q);
    let norm_value = tpq_norm(space, region, &atom.values, 1.0, q, 1.0);
    let aq = conical_averages(space, region, &atom.values, q, 1.0);
    let mut integral = 0.0f64;
    for &x in space.ball_member_slice(atom.ball.center, atom.ball.radius) {
        integral += aq[x as usize].powf(q) * space.gamma(x as usize);
    }
    let holder_middle = gamma_pow_inv_qprime(gamma_b, q) * integral.powf(1.0 / q);
    let pass = support_in_tent
        && size_value <= size_bound * (1.0 + ATOM_SIZE_RTOL)
        && norm_value <= holder_middle * (1.0 + ATOM_NORM_RTOL)
        && holder_middle <= 1.0 + ATOM_NORM_RTOL;
    AtomReport {
        support_in_tent,
        size_value,
        size_bound,
        norm_value,
        holder_middle,
        pass,
    }
}

/// Sums `lambda * atom` back into a dense node vector.
pub fn reconstruct(region_len: usize, decomposition: &Decomposition) -> Vec<f64> {
    let mut out = vec![0.0f64; region_len];
    for term in &decomposition.terms {
        for &(node, v) in term.atom.values.entries() {
            out[node as usize] += term.lambda * v;
        }
    }
    out
}

/// Largest relative node-wise reconstruction error.
pub fn reconstruction_error(region_len: usize, f: &TentFunction, d: &Decomposition) -> f64 {
    let rebuilt = reconstruct(region_len, d);
    let dense = f.to_dense(region_len);
    let mut worst = 0.0f64;
    for (a, b) in rebuilt.iter().zip(&dense) {
        let scale = a.abs().max(b.abs()).max(1e-300);
        worst = worst.max((a - b).abs() / scale);
    }
    worst
}

/// Norm-equivalence data for one decomposition.
#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub lambda_sum: f64,
    pub f_norm: f64,
    pub rho: f64,
    /// Aperture 3-to-1 norm ratio of this input.
    pub k3: f64,
}

pub fn equivalence_ratio(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    d: &Decomposition,
) -> EquivalenceReport {
    let q = d.q;
    let f_norm = tpq_norm(space, region, f, 1.0, q, 1.0);
    let norm3 = lp_norm(space, &conical_averages(space, region, f, q, 3.0), 1.0);
    let lambda_sum = d.lambda_sum();
    EquivalenceReport {
        lambda_sum,
        f_norm,
        rho: lambda_sum / f_norm,
        k3: norm3 / f_norm,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::TimeGrid;
    use crate::testutil::{gaussian_line, uniform_local};
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn setup(n: usize, levels: usize) -> (DiscreteSpace, RegionGrid) {
        let space = gaussian_line(n);
        let grid = TimeGrid::default_for_space(&space, levels).unwrap();
        let region = RegionGrid::build(&space, &grid).unwrap();
        (space, region)
    }

    fn random_mask(space: &DiscreteSpace, rng: &mut ChaCha8Rng) -> Vec<bool> {
        loop {
            let p: f64 = rng.random_range(0.2..0.8);
            let mask: Vec<bool> = (0..space.len()).map(|_| rng.random_bool(p)).collect();
            if mask.iter().any(|&b| b) && mask.iter().any(|&b| !b) {
                return mask;
            }
        }
    }

    fn random_function(region: &RegionGrid, rng: &mut ChaCha8Rng, terms: usize) -> TentFunction {
        TentFunction::from_pairs((0..terms).map(|_| {
            let node = rng.random_range(0..region.len());
            let v: f64 = rng.random_range(0.1..3.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            (node, v)
        }))
    }

    #[test]
    fn single_point_set_gets_single_ball() {
        let (space, region) = setup(201, 8);
        let mut e_mask = vec![false; space.len()];
        e_mask[100] = true;
        let balls = vitali_tent_cover(&space, &e_mask);
        assert_eq!(balls.len(), 1);
        assert_eq!(balls[0].center, 100);
        let cert = verify_tent_cover(&space, &region, &e_mask, &balls);
        assert!(cert.pass(), "{cert:?}");
    }

    #[test]
    fn full_space_cover_starts_at_widest_admissible_center() {
        let space = gaussian_line(801);
        let e_mask = vec![true; space.len()];
        let mut greedy = GreedyCover::start(&space, &e_mask);
        let first = greedy.select_next(&space).unwrap();
        // m is one on [-1, 1] and the complement of E is empty, so the
        // first ball has radius one at the lowest qualifying index.
        assert_eq!(first.radius, 1.0);
        assert_eq!(first.center, 300);
    }

    #[test]
    fn random_covers_certify() {
        let (space, region) = setup(201, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let e_mask = random_mask(&space, &mut rng);
            let balls = vitali_tent_cover(&space, &e_mask);
            let cert = verify_tent_cover(&space, &region, &e_mask, &balls);
            assert!(cert.pass(), "{cert:?}");
        }
    }

    #[test]
    fn level_sets_bracket_the_averages() {
        let (space, region) = setup(201, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        let f = random_function(&region, &mut rng, 25);
        let levels = level_sets(&space, &region, &f, 2.0).unwrap();
        let max_a = levels.averages3.iter().copied().fold(0.0f64, f64::max);
        assert!(LevelSets::threshold(levels.k_max) < max_a);
        assert!(max_a <= LevelSets::threshold(levels.k_max + 1));
        for pair in levels.masks.windows(2) {
            for (a, b) in pair[1].iter().zip(&pair[0]) {
                assert!(!a || *b, "level sets must be nested");
            }
        }
        assert!(level_sets(&space, &region, &TentFunction::zero(), 2.0).is_none());
    }

    #[test]
    fn pointwise_estimate_holds_at_decomposition_thresholds() {
        let (space, region) = setup(201, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for q in [1.0, 2.0] {
            let f = random_function(&region, &mut rng, 20);
            let levels = level_sets(&space, &region, &f, q).unwrap();
            for k in levels.k_min..=levels.k_max {
                let report =
                    pointwise2_check(&space, &region, &f, q, LevelSets::threshold(k));
                assert!(report.pass, "q={q} k={k}: {report:?}");
            }
        }
    }

    #[test]
    fn pointwise_estimate_trivial_above_the_maximum() {
        let (space, region) = setup(101, 8);
        let mut rng = ChaCha8Rng::seed_from_u64(53);
        let f = random_function(&region, &mut rng, 15);
        let max_a = conical_averages(&space, &region, &f, 2.0, 3.0)
            .into_iter()
            .fold(0.0f64, f64::max);
        let report = pointwise2_check(&space, &region, &f, 2.0, max_a * 1.01);
        assert!(report.pass);
    }

    #[test]
    fn cone_minus_tent_sits_in_tripled_cone_of_nearest_outsider() {
        let (space, region) = setup(201, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(59);
        let f = random_function(&region, &mut rng, 20);
        let levels = level_sets(&space, &region, &f, 2.0).unwrap();
        let k_mid = (levels.k_min + levels.k_max) / 2;
        let mask = levels.mask(k_mid);
        let inside: Vec<usize> = (0..space.len()).filter(|&x| mask[x]).collect();
        if inside.is_empty() {
            return;
        }
        for _ in 0..20 {
            let x = inside[rng.random_range(0..inside.len())];
            let report = cone_minus_tent_inclusion(&space, &region, mask, x);
            assert!(report.holds, "{report:?}");
        }
    }

    #[test]
    fn unit_point_mass_reconstructs_exactly() {
        let (space, region) = setup(201, 10);
        let id = region.node_id(100, 4).unwrap();
        let f = TentFunction::point_mass(id, 1.0);
        let d = atomic_decompose(&space, &region, &f, 2.0);
        assert!(!d.terms.is_empty());
        assert!(reconstruction_error(region.len(), &f, &d) == 0.0);
        for term in &d.terms {
            let report = validate_atom(&space, &region, &term.atom);
            assert!(report.pass, "{report:?}");
        }
    }

    #[test]
    fn zero_function_decomposes_to_nothing() {
        let (space, region) = setup(101, 8);
        let d = atomic_decompose(&space, &region, &TentFunction::zero(), 1.0);
        assert!(d.terms.is_empty());
        assert!(d.k_range.is_none());
    }

    #[test]
    fn random_decompositions_satisfy_every_per_term_invariant() {
        let (space, region) = setup(201, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for q in [1.0, 2.0] {
            for _ in 0..5 {
                let f = random_function(&region, &mut rng, 25);
                let d = atomic_decompose(&space, &region, &f, q);
                assert!(reconstruction_error(region.len(), &f, &d) <= 1e-10);
                let c15 = space
                    .verify_condition_a(1.0, 5.0, crate::space::SamplePolicy::Exhaustive)
                    .empirical_constant;
                for term in &d.terms {
                    let report = validate_atom(&space, &region, &term.atom);
                    assert!(report.pass, "q={q} k={} j={}: {report:?}", term.k, term.j);
                    let gamma5 =
                        space.gamma_ball(term.atom.ball.center, term.atom.ball.radius);
                    let bound = gamma5 * LevelSets::threshold(term.k + 1);
                    assert!(
                        term.lambda <= bound * (1.0 + 1e-12),
                        "lambda {} exceeds {}",
                        term.lambda,
                        bound
                    );
                }
                for level in &d.levels {
                    assert!(
                        level.gamma5_sum <= c15 * level.gamma_level_set * (1.0 + 1e-12),
                        "k={}: {} vs {}",
                        level.k,
                        level.gamma5_sum,
                        c15 * level.gamma_level_set
                    );
                }
                let eq = equivalence_ratio(&space, &region, &f, &d);
                assert!(eq.rho.is_finite() && eq.rho > 0.0);
                assert!(
                    eq.rho <= 4.0 * c15 * eq.k3 * (1.0 + 1e-12),
                    "q={q}: rho {} vs chain {}",
                    eq.rho,
                    4.0 * c15 * eq.k3
                );
            }
        }
    }

    #[test]
    fn decomposition_works_on_constant_admissibility_space() {
        let space = uniform_local(200);
        let grid = TimeGrid::default_for_space(&space, 8).unwrap();
        let region = RegionGrid::build(&space, &grid).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(67);
        let f = random_function(&region, &mut rng, 20);
        let d = atomic_decompose(&space, &region, &f, 1.0);
        assert!(reconstruction_error(region.len(), &f, &d) <= 1e-10);
        for term in &d.terms {
            assert!(validate_atom(&space, &region, &term.atom).pass);
        }
    }
}
