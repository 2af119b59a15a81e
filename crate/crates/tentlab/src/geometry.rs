//! The admissible region over a space, with cones and tents as exact node
//! sets.
//!
//! The region `D = {(y, t) : t < m(y)}` is discretized by a logarithmic time
//! grid; a node is a (point, level) pair. Cones of aperture `alpha` collect
//! the nodes with `d(x, y) < alpha * t`, and the tent over a point set `O` is
//! the region minus the aperture-1 cones over the complement of `O`, which on
//! a finite cloud coincides node-for-node with open-ball containment
//! `B(y, t) subset O`.

use serde::Serialize;
use thiserror::Error;

use crate::space::{Ball, DiscreteSpace};

#[derive(Debug, Error)]
pub enum RegionError {
    #[error("time grid needs at least {required} levels, got {got}")]
    TooFewLevels { required: usize, got: usize },
    #[error("time levels must be finite, positive and strictly increasing (level {index})")]
    BadLevel { index: usize },
    #[error("time span is empty: t_min {t_min} must be below t_max {t_max}")]
    EmptySpan { t_min: f64, t_max: f64 },
    #[error("region is empty: no admissibility value exceeds the first level")]
    EmptyRegion,
}

/// Logarithmic quadrature grid for the `dt/t` integral.
#[derive(Debug, Clone, Serialize)]
pub struct TimeGrid {
    levels: Vec<f64>,
    weights: Vec<f64>,
}

impl TimeGrid {
    /// `count` geometric levels on `[t_min, t_max)`; the first level is
    /// `t_min` and every weight is `log(t_max / t_min) / count`.
    pub fn log_uniform(t_min: f64, t_max: f64, count: usize) -> Result<Self, RegionError> {
        if count == 0 {
            return Err(RegionError::TooFewLevels { required: 1, got: 0 });
        }
        if !(t_min > 0.0 && t_min.is_finite() && t_max.is_finite() && t_min < t_max) {
            return Err(RegionError::EmptySpan { t_min, t_max });
        }
        let span = t_max / t_min;
        let levels: Vec<f64> = (0..count)
            .map(|l| t_min * span.powf(l as f64 / count as f64))
            .collect();
        let weights = vec![span.ln() / count as f64; count];
        Ok(TimeGrid { levels, weights })
    }

    /// Explicit levels; each weight is the log ratio to the next level, the
    /// last repeating the preceding ratio.
    pub fn from_levels(levels: Vec<f64>) -> Result<Self, RegionError> {
        if levels.len() < 2 {
            return Err(RegionError::TooFewLevels {
                required: 2,
                got: levels.len(),
            });
        }
        for (i, &t) in levels.iter().enumerate() {
            if !(t.is_finite() && t > 0.0) || (i > 0 && t <= levels[i - 1]) {
                return Err(RegionError::BadLevel { index: i });
            }
        }
        let mut weights: Vec<f64> = levels
            .windows(2)
            .map(|w| (w[1] / w[0]).ln())
            .collect();
        weights.push(*weights.last().unwrap());
        Ok(TimeGrid { levels, weights })
    }

    /// Default grid for a space: log-uniform on `[min(m)/8, max(m))`.
    pub fn default_for_space(space: &DiscreteSpace, count: usize) -> Result<Self, RegionError> {
        Self::log_uniform(space.min_m() / 8.0, space.max_m(), count)
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// A region node: point index and time-level index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegionNode {
    pub point: u32,
    pub level: u32,
}

/// Discretized admissible region with per-node quadrature weights and ball
/// masses.
#[derive(Debug, Clone)]
pub struct RegionGrid {
    nodes: Vec<RegionNode>,
    node_lookup: Vec<u32>,
    level_count: usize,
    levels: Vec<f64>,
    weights: Vec<f64>,
    gamma_w: Vec<f64>,
    ball_gamma: Vec<f64>,
    weight_over_ball: Vec<f64>,
}

const NO_NODE: u32 = u32::MAX;

impl RegionGrid {
    /// Enumerates the nodes `{(i, l) : t_l < m(y_i)}` and caches
    /// `gamma_i * w_l` and `gamma(B(y_i, t_l))` per node.
    pub fn build(space: &DiscreteSpace, grid: &TimeGrid) -> Result<Self, RegionError> {
        let n = space.len();
        let level_count = grid.len();
        let mut nodes = Vec::new();
        let mut node_lookup = vec![NO_NODE; n * level_count];
        let mut gamma_w = Vec::new();
        let mut ball_gamma = Vec::new();
        let mut weight_over_ball = Vec::new();
        for i in 0..n {
            let m_i = space.m(i);
            for (l, (&t, &w)) in grid.levels().iter().zip(grid.weights()).enumerate() {
                if t >= m_i {
                    break;
                }
                let id = nodes.len() as u32;
                node_lookup[i * level_count + l] = id;
                nodes.push(RegionNode {
                    point: i as u32,
                    level: l as u32,
                });
                let mass = space.gamma_ball(i, t);
                gamma_w.push(space.gamma(i) * w);
                ball_gamma.push(mass);
                weight_over_ball.push(space.gamma(i) * w / mass);
            }
        }
        if nodes.is_empty() {
            return Err(RegionError::EmptyRegion);
        }
        Ok(RegionGrid {
            nodes,
            node_lookup,
            level_count,
            levels: grid.levels().to_vec(),
            weights: grid.weights().to_vec(),
            gamma_w,
            ball_gamma,
            weight_over_ball,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[RegionNode] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> RegionNode {
        self.nodes[id]
    }

    pub fn node_id(&self, point: usize, level: usize) -> Option<usize> {
        let v = self.node_lookup[point * self.level_count + level];
        (v != NO_NODE).then_some(v as usize)
    }

    pub fn point_of(&self, id: usize) -> usize {
        self.nodes[id].point as usize
    }

    pub fn time(&self, id: usize) -> f64 {
        self.levels[self.nodes[id].level as usize]
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature weight `gamma_i * w_l` of a node.
    pub fn gamma_w(&self, id: usize) -> f64 {
        self.gamma_w[id]
    }

    /// Cached `gamma(B(y_i, t_l))` of a node.
    pub fn ball_gamma(&self, id: usize) -> f64 {
        self.ball_gamma[id]
    }

    /// Cached `gamma_i * w_l / gamma(B(y_i, t_l))`, the node's weight under
    /// the normalized region measure.
    pub fn weight_over_ball(&self, id: usize) -> f64 {
        self.weight_over_ball[id]
    }
}

/// Set of region nodes, packed into 64-bit blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSet {
    blocks: Vec<u64>,
    len: usize,
}

impl NodeSet {
    pub fn empty(len: usize) -> Self {
        NodeSet {
            blocks: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(len: usize) -> Self {
        let mut s = NodeSet {
            blocks: vec![u64::MAX; len.div_ceil(64)],
            len,
        };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let spare = self.blocks.len() * 64 - self.len;
        if spare > 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= u64::MAX >> spare;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn insert(&mut self, i: usize) {
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, i: usize) {
        self.blocks[i / 64] &= !(1 << (i % 64));
    }

    pub fn contains(&self, i: usize) -> bool {
        self.blocks[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn count(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn union_with(&mut self, other: &NodeSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &NodeSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    pub fn subtract(&mut self, other: &NodeSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> NodeSet {
        let mut out = NodeSet {
            blocks: self.blocks.iter().map(|&b| !b).collect(),
            len: self.len,
        };
        out.trim();
        out
    }

    pub fn is_subset_of(&self, other: &NodeSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(&a, &b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let tz = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(bi * 64 + tz)
            })
        })
    }

    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(len);
        for i in indices {
            s.insert(i);
        }
        s
    }
}

/// Nodes of the admissible cone `{(y, t) in D : d(x, y) < alpha * t}`.
pub fn cone(space: &DiscreteSpace, region: &RegionGrid, x: usize, alpha: f64) -> NodeSet {
    let mut out = NodeSet::empty(region.len());
    for (id, node) in region.nodes().iter().enumerate() {
        let t = region.levels()[node.level as usize];
        if space.dist(x, node.point as usize) < alpha * t {
            out.insert(id);
        }
    }
    out
}

/// Union of aperture-`alpha` cones over every point selected by `mask`.
pub fn cone_union(
    space: &DiscreteSpace,
    region: &RegionGrid,
    mask: &[bool],
    alpha: f64,
) -> NodeSet {
    let mut out = NodeSet::empty(region.len());
    for (id, node) in region.nodes().iter().enumerate() {
        let y = node.point as usize;
        let t = region.levels()[node.level as usize];
        // (y, t) lies in some cone over the mask iff the mask meets B(y, alpha t).
        let hit = space
            .ball_member_slice(y, alpha * t)
            .iter()
            .any(|&w| mask[w as usize]);
        if hit {
            out.insert(id);
        }
    }
    out
}

/// Tent over an open point set: the region minus the aperture-1 cones over
/// the complement. Node `(y, t)` survives exactly when every point outside
/// `open_mask` is at distance at least `t` from `y`.
pub fn tent(space: &DiscreteSpace, region: &RegionGrid, open_mask: &[bool]) -> NodeSet {
    let n = space.len();
    let mut delta = vec![f64::INFINITY; n];
    if open_mask.contains(&false) {
        for y in 0..n {
            delta[y] = space.dist_to_complement(y, open_mask);
        }
    }
    let mut out = NodeSet::empty(region.len());
    for (id, node) in region.nodes().iter().enumerate() {
        let t = region.levels()[node.level as usize];
        if t <= delta[node.point as usize] {
            out.insert(id);
        }
    }
    out
}

/// Whether a single node lies in the tent of a ball: every member of the
/// node's ball must lie strictly inside the ball.
pub fn node_in_ball_tent(
    space: &DiscreteSpace,
    region: &RegionGrid,
    node_id: usize,
    ball: &Ball,
) -> bool {
    let y = region.point_of(node_id);
    let t = region.time(node_id);
    space
        .ball_member_slice(y, t)
        .iter()
        .all(|&z| space.dist(ball.center, z as usize) < ball.radius)
}

/// Tent of a ball as a node set.
pub fn tent_of_ball(space: &DiscreteSpace, region: &RegionGrid, ball: &Ball) -> NodeSet {
    let mut out = NodeSet::empty(region.len());
    for id in 0..region.len() {
        if node_in_ball_tent(space, region, id, ball) {
            out.insert(id);
        }
    }
    out
}

/// Point mask of a ball's members.
pub fn ball_mask(space: &DiscreteSpace, ball: &Ball) -> Vec<bool> {
    let mut mask = vec![false; space.len()];
    for &z in space.ball_member_slice(ball.center, ball.radius) {
        mask[z as usize] = true;
    }
    mask
}
