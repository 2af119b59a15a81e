//! Conical averages, tent-space norms, the duality pairing, and the
//! cylindrical operators `J_alpha` and `N_alpha`.
//!
//! Functions on the region are stored sparsely as sorted (node, value)
//! pairs. The conical average of aperture `alpha` at a point `x` sums the
//! normalized node weights over the cone `{(y, t) : d(x, y) < alpha * t}`;
//! scatter (per support node over its `alpha t`-ball members) and gather
//! (per point over the support) produce bitwise-identical values because
//! both accumulate in node order.

use serde::Serialize;

use crate::geometry::{NodeSet, RegionGrid};
use crate::space::{Ball, DiscreteSpace};

/// Sparse real-valued function on region nodes, sorted by node id.
#[derive(Debug, Clone, PartialEq)]
pub struct TentFunction {
    entries: Vec<(u32, f64)>,
}

impl TentFunction {
    pub fn zero() -> Self {
        TentFunction { entries: Vec::new() }
    }

    /// Builds from unsorted pairs, summing duplicate nodes and dropping
    /// exact zeros.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut entries: Vec<(u32, f64)> = pairs
            .into_iter()
            .map(|(n, v)| (n as u32, v))
            .collect();
        entries.sort_by_key(|&(n, _)| n);
        let mut merged: Vec<(u32, f64)> = Vec::with_capacity(entries.len());
        for (n, v) in entries {
            match merged.last_mut() {
                Some(last) if last.0 == n => last.1 += v,
                _ => merged.push((n, v)),
            }
        }
        merged.retain(|&(_, v)| v != 0.0);
        TentFunction { entries: merged }
    }

    pub fn point_mass(node: usize, value: f64) -> Self {
        Self::from_pairs([(node, value)])
    }

    pub fn indicator(nodes: &NodeSet) -> Self {
        Self::from_pairs(nodes.iter().map(|n| (n, 1.0)))
    }

    pub fn entries(&self) -> &[(u32, f64)] {
        &self.entries
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn value_at(&self, node: usize) -> f64 {
        match self.entries.binary_search_by_key(&(node as u32), |&(n, _)| n) {
            Ok(i) => self.entries[i].1,
            Err(_) => 0.0,
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        TentFunction {
            entries: self.entries.iter().map(|&(n, v)| (n, c * v)).collect(),
        }
    }

    /// Restriction `f * 1_G` to a node set.
    pub fn restrict(&self, nodes: &NodeSet) -> Self {
        TentFunction {
            entries: self
                .entries
                .iter()
                .filter(|&&(n, _)| nodes.contains(n as usize))
                .copied()
                .collect(),
        }
    }

    /// Restriction to the complement of a node set.
    pub fn restrict_complement(&self, nodes: &NodeSet) -> Self {
        TentFunction {
            entries: self
                .entries
                .iter()
                .filter(|&&(n, _)| !nodes.contains(n as usize))
                .copied()
                .collect(),
        }
    }

    pub fn support_set(&self, region_len: usize) -> NodeSet {
        NodeSet::from_indices(region_len, self.entries.iter().map(|&(n, _)| n as usize))
    }

    pub fn to_dense(&self, region_len: usize) -> Vec<f64> {
        let mut out = vec![0.0; region_len];
        for &(n, v) in &self.entries {
            out[n as usize] = v;
        }
        out
    }
}

/// Conjugate exponent; q = 1 pairs with the supremum norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum DualExponent {
    Finite(f64),
    Infinity,
}

impl DualExponent {
    pub fn conjugate_of(q: f64) -> Self {
        if q == 1.0 {
            DualExponent::Infinity
        } else {
            DualExponent::Finite(q / (q - 1.0))
        }
    }
}

/// `A_q^alpha f` at every point, by scattering each support node onto the
/// members of its `alpha t`-ball.
pub fn conical_averages(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    q: f64,
    alpha: f64,
) -> Vec<f64> {
    conical_averages_masked(space, region, f, q, alpha, None)
}

/// `A_q^alpha (f * 1_G)` at every point; `mask = None` means `G` is the
/// whole region.
pub fn conical_averages_masked(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    q: f64,
    alpha: f64,
    mask: Option<&NodeSet>,
) -> Vec<f64> {
    let mut acc = vec![0.0f64; space.len()];
    for &(node, v) in f.entries() {
        let id = node as usize;
        if let Some(m) = mask {
            if !m.contains(id) {
                continue;
            }
        }
        let y = region.point_of(id);
        let t = region.time(id);
        let c = v.abs().powf(q) * region.weight_over_ball(id);
        for &x in space.ball_member_slice(y, alpha * t) {
            acc[x as usize] += c;
        }
    }
    for a in &mut acc {
        *a = a.powf(1.0 / q);
    }
    acc
}

/// `A_q^alpha (f * 1_G)(x)` for a single point, by gathering over the
/// support.
pub fn conical_average_at(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    q: f64,
    alpha: f64,
    x: usize,
    mask: Option<&NodeSet>,
) -> f64 {
    let mut acc = 0.0f64;
    for &(node, v) in f.entries() {
        let id = node as usize;
        if let Some(m) = mask {
            if !m.contains(id) {
                continue;
            }
        }
        let y = region.point_of(id);
        let t = region.time(id);
        if space.dist(x, y) < alpha * t {
            acc += v.abs().powf(q) * region.weight_over_ball(id);
        }
    }
    acc.powf(1.0 / q)
}

/// `(sum_x values(x)^p gamma_x)^{1/p}`.
pub fn lp_norm(space: &DiscreteSpace, values: &[f64], p: f64) -> f64 {
    let mut acc = 0.0f64;
    for (x, &v) in values.iter().enumerate() {
        if v != 0.0 {
            acc += v.powf(p) * space.gamma(x);
        }
    }
    acc.powf(1.0 / p)
}

/// Tent-space norm `|| A_q^alpha f ||_{L^p(gamma)}`.
pub fn tpq_norm(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    p: f64,
    q: f64,
    alpha: f64,
) -> f64 {
    lp_norm(space, &conical_averages(space, region, f, q, alpha), p)
}

/// The p = q norm evaluated directly on nodes: `sum |f|^q gamma_i w_l *
/// gamma(B(y, alpha t)) / gamma(B(y, t))`, all to the power 1/q.
pub fn tqq_norm_direct(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    q: f64,
    alpha: f64,
) -> f64 {
    let mut acc = 0.0f64;
    for &(node, v) in f.entries() {
        let id = node as usize;
        let y = region.point_of(id);
        let t = region.time(id);
        acc += v.abs().powf(q) * region.gamma_w(id) * space.gamma_ball(y, alpha * t)
            / region.ball_gamma(id);
    }
    acc.powf(1.0 / q)
}

/// Result of the supremum norm over admissible balls.
#[derive(Debug, Clone, Serialize)]
pub struct TentSupNorm {
    pub value: f64,
    pub witness: Option<Ball>,
    pub balls_scanned: usize,
}

/// `t^{inf, q'}` norm: supremum over `level`-admissible balls `B` of
/// `(gamma(B)^{-1} sum_{T(B)} |g|^{q'} gamma_i w_l)^{1/q'}`, with the
/// essential supremum over `T(B)` when `q'` is infinite.
///
/// For each center, support nodes are ranked by the farthest member of
/// their ball from the center; the tent of `B(c, r)` then captures exactly
/// the nodes ranked below `r`, so one sorted sweep over the merged radius
/// breakpoints evaluates every distinct ball.
pub fn tent_sup_norm(
    space: &DiscreteSpace,
    region: &RegionGrid,
    g: &TentFunction,
    qprime: DualExponent,
    level: f64,
) -> TentSupNorm {
    let mut best = TentSupNorm {
        value: 0.0,
        witness: None,
        balls_scanned: 0,
    };
    if g.is_zero() {
        return best;
    }
    // Farthest ball member per support node is center-dependent; the member
    // slices themselves are not.
    let slices: Vec<&[u32]> = g
        .entries()
        .iter()
        .map(|&(node, _)| {
            let id = node as usize;
            let y = region.point_of(id);
            let t = region.time(id);
            space.ball_member_slice(y, t)
        })
        .collect();
    let mut ranked: Vec<(f64, usize)> = Vec::with_capacity(slices.len());
    for c in 0..space.len() {
        let cap = level * space.m(c);
        ranked.clear();
        for (k, slice) in slices.iter().enumerate() {
            let mut far = 0.0f64;
            for &z in *slice {
                let d = space.dist(c, z as usize);
                if d > far {
                    far = d;
                }
            }
            if far < cap {
                ranked.push((far, k));
            }
        }
        if ranked.is_empty() {
            continue;
        }
        ranked.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut radii = space.profile(c).candidate_radii(cap);
        radii.extend(ranked.iter().map(|&(far, _)| far));
        radii.sort_by(f64::total_cmp);
        radii.dedup();
        let mut next = 0usize;
        let mut running_sum = 0.0f64;
        let mut running_max = 0.0f64;
        for &r in &radii {
            while next < ranked.len() && ranked[next].0 < r {
                let (node, value) = g.entries()[ranked[next].1];
                match qprime {
                    DualExponent::Finite(e) => {
                        running_sum += value.abs().powf(e) * region.gamma_w(node as usize);
                    }
                    DualExponent::Infinity => running_max = running_max.max(value.abs()),
                }
                next += 1;
            }
            best.balls_scanned += 1;
            if next == 0 {
                continue;
            }
            let candidate = match qprime {
                DualExponent::Finite(e) => {
                    (running_sum / space.gamma_ball(c, r)).powf(1.0 / e)
                }
                DualExponent::Infinity => running_max,
            };
            if candidate > best.value {
                best.value = candidate;
                best.witness = Some(Ball::new(c, r));
            }
        }
    }
    best
}

/// Duality pairing `sum_nodes f * g * gamma_i w_l` over the common support.
pub fn pairing(region: &RegionGrid, f: &TentFunction, g: &TentFunction) -> f64 {
    let fe = f.entries();
    let ge = g.entries();
    let (mut i, mut j) = (0usize, 0usize);
    let mut acc = 0.0f64;
    while i < fe.len() && j < ge.len() {
        match fe[i].0.cmp(&ge[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                acc += fe[i].1 * ge[j].1 * region.gamma_w(fe[i].0 as usize);
                i += 1;
                j += 1;
            }
        }
    }
    acc
}

/// Function of (point, node) pairs, stored as one row per region node over
/// the members of the node's `alpha t`-ball.
#[derive(Debug, Clone, PartialEq)]
pub struct CylindricalField {
    pub alpha: f64,
    pub rows: Vec<CylRow>,
}

/// One node's row; `values[k]` belongs to the k-th member of
/// `B(y, alpha t)` in distance order.
#[derive(Debug, Clone, PartialEq)]
pub struct CylRow {
    pub node: u32,
    pub values: Vec<f64>,
}

/// `J_alpha f(x; y, t) = f(y, t)` on the cone incidences `d(x, y) < alpha t`.
pub fn j_alpha(
    space: &DiscreteSpace,
    region: &RegionGrid,
    f: &TentFunction,
    alpha: f64,
) -> CylindricalField {
    let rows = f
        .entries()
        .iter()
        .map(|&(node, v)| {
            let id = node as usize;
            let y = region.point_of(id);
            let t = region.time(id);
            let len = space.ball_member_slice(y, alpha * t).len();
            CylRow {
                node,
                values: vec![v; len],
            }
        })
        .collect();
    CylindricalField { alpha, rows }
}

/// `N_alpha U(x; y, t)`: the gamma-average of `U(.; y, t)` over
/// `B(y, alpha t)`, repeated across the row. Requires the input sparsity
/// aperture to not exceed `alpha`; a constant row averages to itself
/// exactly.
pub fn n_alpha(
    space: &DiscreteSpace,
    region: &RegionGrid,
    u: &CylindricalField,
    alpha: f64,
) -> CylindricalField {
    assert!(
        u.alpha <= alpha,
        "input sparsity aperture {} exceeds {}",
        u.alpha,
        alpha
    );
    let rows = u
        .rows
        .iter()
        .map(|row| {
            let id = row.node as usize;
            let y = region.point_of(id);
            let t = region.time(id);
            let inner = space.ball_member_slice(y, u.alpha * t);
            let outer_len = space.ball_member_slice(y, alpha * t).len();
            debug_assert_eq!(inner.len(), row.values.len());
            let avg = if u.alpha == alpha
                && row.values.windows(2).all(|w| w[0] == w[1])
            {
                row.values.first().copied().unwrap_or(0.0)
            } else {
                let mut acc = 0.0f64;
                for (k, &z) in inner.iter().enumerate() {
                    acc += row.values[k] * space.gamma(z as usize);
                }
                acc / space.gamma_ball(y, alpha * t)
            };
            CylRow {
                node: row.node,
                values: vec![avg; outer_len],
            }
        })
        .collect();
    CylindricalField { alpha, rows }
}

/// Mixed norm `|| x -> || U(x; .) ||_{L^q(region, normalized)} ||_{L^p}`,
/// the cylindrical counterpart of `tpq_norm`; equals it exactly on
/// `J_alpha f` because both sides accumulate the same terms in node order.
pub fn mixed_norm(
    space: &DiscreteSpace,
    region: &RegionGrid,
    u: &CylindricalField,
    p: f64,
    q: f64,
) -> f64 {
    let mut acc = vec![0.0f64; space.len()];
    for row in &u.rows {
        let id = row.node as usize;
        let y = region.point_of(id);
        let t = region.time(id);
        let slice = space.ball_member_slice(y, u.alpha * t);
        let w = region.weight_over_ball(id);
        for (k, &x) in slice.iter().enumerate() {
            let v = row.values[k];
            if v != 0.0 {
                acc[x as usize] += v.abs().powf(q) * w;
            }
        }
    }
    for a in &mut acc {
        *a = a.powf(1.0 / q);
    }
    lp_norm(space, &acc, p)
}

/// Largest relative difference between two fields with identical sparsity.
pub fn max_relative_gap(a: &CylindricalField, b: &CylindricalField) -> f64 {
    assert_eq!(a.rows.len(), b.rows.len());
    let mut worst = 0.0f64;
    for (ra, rb) in a.rows.iter().zip(&b.rows) {
        assert_eq!(ra.node, rb.node);
        assert_eq!(ra.values.len(), rb.values.len());
        for (&va, &vb) in ra.values.iter().zip(&rb.values) {
            let scale = va.abs().max(vb.abs()).max(1e-300);
            worst = worst.max((va - vb).abs() / scale);
        }
    }
    worst
}

/// Scales every row of a field by a per-node factor.
pub fn scale_rows(u: &CylindricalField, factor: impl Fn(u32) -> f64) -> CylindricalField {
    CylindricalField {
        alpha: u.alpha,
        rows: u
            .rows
            .iter()
            .map(|row| CylRow {
                node: row.node,
                values: {
                    let c = factor(row.node);
                    row.values.iter().map(|&v| c * v).collect()
                },
            })
            .collect(),
    }
}
