//! Adjacent shifted dyadic systems on Euclidean point clouds, with dyadic,
//! local, and lattice-valued maximal operators.
//!
//! Each of the `3^n` systems shifts the grid of side `2^-k` by one third or
//! two thirds of the side per coordinate, with the offset alternating
//! between `1/3` and `2/3` as the generation parity flips. This keeps the
//! boundary sets of the three shifts one third of a side apart at every
//! scale while remaining exactly nested: cell indices are computed once at
//! the finest generation and coarsened by integer floor halving, so a
//! child cell lies in precisely one parent by construction. Any ball whose
//! coordinate span per axis stays below a third of some side is then
//! boundary-free in at least one shift per axis, hence contained in a
//! single cube of one system.

use serde::Serialize;
use thiserror::Error;

use crate::functionals::lp_norm;
use crate::space::{Ball, DiscreteSpace, SamplePolicy};

#[derive(Debug, Error)]
pub enum DyadicError {
    #[error("dyadic systems need an embedded point cloud with coordinates")]
    NotEmbedded,
}

const ONE_THIRD: f64 = 1.0 / 3.0;
const TWO_THIRDS: f64 = 2.0 / 3.0;

/// Relative cell offset of shift `s` at generation `k`.
fn offset(s: u8, k: i32) -> f64 {
    match (s, k.rem_euclid(2)) {
        (0, _) => 0.0,
        (1, 0) | (2, 1) => ONE_THIRD,
        _ => TWO_THIRDS,
    }
}

/// One cube: its member points, mass, and diameter.
#[derive(Debug, Clone)]
pub struct Cube {
    pub members: Vec<u32>,
    pub gamma: f64,
    pub diameter: f64,
}

/// One generation: a partition of the points into cubes of side `2^-k`.
#[derive(Debug, Clone)]
pub struct Generation {
    pub k: i32,
    /// Cube id per point.
    pub point_cube: Vec<u32>,
    pub cubes: Vec<Cube>,
}

/// A shifted dyadic system over the full generation range.
#[derive(Debug, Clone)]
pub struct DyadicSystem {
    /// Per-coordinate shift label in {0, 1, 2}.
    pub shift: Vec<u8>,
    pub generations: Vec<Generation>,
}

impl DyadicSystem {
    pub fn k_lo(&self) -> i32 {
        self.generations[0].k
    }

    pub fn k_hi(&self) -> i32 {
        self.generations.last().unwrap().k
    }
}

/// Builds the `3^n` shifted systems. Generations run from a coarsest side
/// of at least three times the largest admissible ball span (capped by the
/// diameter) down to cells finer than the minimum spacing.
pub fn build_shifted_systems(space: &DiscreteSpace) -> Result<Vec<DyadicSystem>, DyadicError> {
    let dim = space.dim().ok_or(DyadicError::NotEmbedded)?;
    let n = space.len();
    let diam = space.diameter();
    let span_cap = (2.0 * 5.0 * space.max_m()).min(diam);
    let mut k_lo = (1.0 / diam).log2().floor() as i32 - 1;
    while (-k_lo as f64).exp2() < 3.0 * span_cap {
        k_lo -= 1;
    }
    let k_hi = (1.0 / space.min_spacing()).log2().ceil() as i32 + 1;
    let shifts = enumerate_shifts(dim);
    let mut systems = Vec::with_capacity(shifts.len());
    for shift in shifts {
        // Cell indices at the finest generation, one float floor per
        // coordinate; every coarser index is an exact integer halving.
        let scale = (k_hi as f64).exp2();
        let mut index: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let p = space.point(i).unwrap();
                (0..dim)
                    .map(|d| (p[d] * scale - offset(shift[d], k_hi)).floor() as i64)
                    .collect()
            })
            .collect();
        let mut generations = vec![make_generation(space, k_hi, &index)];
        let mut k = k_hi;
        while k > k_lo {
            for idx in index.iter_mut() {
                for (d, j) in idx.iter_mut().enumerate() {
                    let carry = (offset(shift[d], k - 1) == TWO_THIRDS) as i64;
                    *j = (*j - carry).div_euclid(2);
                }
            }
            k -= 1;
            generations.push(make_generation(space, k, &index));
        }
        generations.reverse();
        systems.push(DyadicSystem { shift, generations });
    }
    Ok(systems)
}

fn enumerate_shifts(dim: usize) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|base| {
                (0u8..3).map(move |s| {
                    let mut v = base.clone();
                    v.push(s);
                    v
                })
            })
            .collect();
    }
    out
}

fn make_generation(space: &DiscreteSpace, k: i32, index: &[Vec<i64>]) -> Generation {
    let n = space.len();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| index[a as usize].cmp(&index[b as usize]).then(a.cmp(&b)));
    let mut point_cube = vec![0u32; n];
    let mut cubes: Vec<Cube> = Vec::new();
    let mut start = 0usize;
    while start < n {
        let mut end = start + 1;
        while end < n && index[order[end] as usize] == index[order[start] as usize] {
            end += 1;
        }
        let members: Vec<u32> = order[start..end].to_vec();
        let id = cubes.len() as u32;
        let mut gamma = 0.0f64;
        let mut diameter = 0.0f64;
        for (a, &za) in members.iter().enumerate() {
            gamma += space.gamma(za as usize);
            for &zb in &members[a + 1..] {
                diameter = diameter.max(space.dist(za as usize, zb as usize));
            }
        }
        for &z in &members {
            point_cube[z as usize] = id;
        }
        cubes.push(Cube {
            members,
            gamma,
            diameter,
        });
        start = end;
    }
    Generation {
        k,
        point_cube,
        cubes,
    }
}

/// `M_D u(x)`: largest cube average of `|u|` over the cubes containing `x`.
pub fn dyadic_maximal(space: &DiscreteSpace, system: &DyadicSystem, u: &[f64]) -> Vec<f64> {
    let n = space.len();
    let mut out = vec![0.0f64; n];
    for generation in &system.generations {
        let averages: Vec<f64> = generation
            .cubes
            .iter()
            .map(|cube| {
                let mut s = 0.0f64;
                for &z in &cube.members {
                    s += u[z as usize].abs() * space.gamma(z as usize);
                }
                s / cube.gamma
            })
            .collect();
        for x in 0..n {
            let a = averages[generation.point_cube[x] as usize];
            if a > out[x] {
                out[x] = a;
            }
        }
    }
    out
}

/// `M_alpha u(x)`: largest `gamma`-average of `|u|` over the alpha-admissible
/// balls containing `x`, by exhaustive sweep of the distinct balls.
pub fn local_maximal(space: &DiscreteSpace, u: &[f64], alpha: f64) -> Vec<f64> {
    let n = space.len();
    let mut out = vec![0.0f64; n];
    let mut cum = vec![0.0f64; n + 1];
    for c in 0..n {
        let profile = space.profile(c);
        let cap = alpha * space.m(c);
        let radii = profile.candidate_radii(cap);
        if radii.is_empty() {
            continue;
        }
        for (i, &z) in profile.order.iter().enumerate() {
            cum[i + 1] = cum[i] + u[z as usize].abs() * space.gamma(z as usize);
        }
        // Ball averages per candidate radius, then a suffix maximum: the
        // balls containing the i-th closest point are those with radius
        // beyond its distance.
        let averages: Vec<f64> = radii
            .iter()
            .map(|&r| {
                let cnt = profile.count_below(r);
                cum[cnt] / profile.gamma_prefix[cnt]
            })
            .collect();
        let mut suffix = averages.clone();
        for i in (0..suffix.len().saturating_sub(1)).rev() {
            suffix[i] = suffix[i].max(suffix[i + 1]);
        }
        for (i, &z) in profile.order.iter().enumerate() {
            let d = profile.sorted[i];
            if d >= cap {
                break;
            }
            let first = radii.partition_point(|&r| r <= d);
            if first < suffix.len() {
                let z = z as usize;
                if suffix[first] > out[z] {
                    out[z] = suffix[first];
                }
            }
        }
    }
    out
}

/// Weak (1,1) sweep result.
#[derive(Debug, Clone, Serialize)]
pub struct Weak11Report {
    pub checks: usize,
    pub violations: usize,
    /// Largest `lambda * gamma(superlevel) / ||u||_1` observed.
    pub worst_ratio: f64,
}

/// Checks `gamma({M u > lambda}) <= bound / lambda * ||u||_1` over a grid of
/// thresholds; the dyadic operator satisfies it with `bound = 1` exactly.
pub fn weak11_check(
    space: &DiscreteSpace,
    maximal: &[f64],
    u: &[f64],
    lambdas: &[f64],
    bound: f64,
) -> Weak11Report {
    let mut norm1 = 0.0f64;
    for (x, &v) in u.iter().enumerate() {
        norm1 += v.abs() * space.gamma(x);
    }
    let mut report = Weak11Report {
        checks: 0,
        violations: 0,
        worst_ratio: 0.0,
    };
    for &lam in lambdas {
        let mut mass = 0.0f64;
        for (x, &mv) in maximal.iter().enumerate() {
            if mv > lam {
                mass += space.gamma(x);
            }
        }
        let ratio = lam * mass / norm1;
        report.checks += 1;
        report.worst_ratio = report.worst_ratio.max(ratio);
        if ratio > bound * (1.0 + 1e-12) {
            report.violations += 1;
        }
    }
    report
}

/// Containment scan: every sampled admissible ball against the cubes.
#[derive(Debug, Clone, Serialize)]
pub struct ContainmentReport {
    pub balls_checked: usize,
    pub balls_contained: usize,
    /// Largest over balls of the smallest cube-to-ball diameter ratio.
    pub c_x: f64,
    /// Largest over balls of the smallest cube-to-ball mass ratio.
    pub c_tilde: f64,
    pub worst_ball: Option<Ball>,
}

impl ContainmentReport {
    pub fn all_contained(&self) -> bool {
        self.balls_checked == self.balls_contained
    }
}

/// For each sampled alpha-admissible ball, finds the smallest cube of any
/// system containing all its members and records the diameter and mass
/// ratios. Containment is decided per axis on the extreme members, since
/// cell indices are coordinatewise monotone.
pub fn containment_scan(
    space: &DiscreteSpace,
    systems: &[DyadicSystem],
    alpha: f64,
    policy: SamplePolicy,
) -> ContainmentReport {
    let dim = space.dim().expect("systems exist, so the cloud is embedded");
    let mut report = ContainmentReport {
        balls_checked: 0,
        balls_contained: 0,
        c_x: 0.0,
        c_tilde: 0.0,
        worst_ball: None,
    };
    let mut extremes: Vec<usize> = Vec::with_capacity(2 * dim);
    for c in policy.centers(space.len()) {
        let profile = space.profile(c);
        let cap = alpha * space.m(c);
        // Running per-axis extreme members as the ball grows.
        let mut lo = vec![usize::MAX; dim];
        let mut hi = vec![usize::MAX; dim];
        let mut count = 0usize;
        for r in profile.candidate_radii(cap) {
            let cnt = profile.count_below(r);
            for &z in &profile.order[count..cnt] {
                let z = z as usize;
                let p = space.point(z).unwrap();
                for d in 0..dim {
                    if lo[d] == usize::MAX || p[d] < space.point(lo[d]).unwrap()[d] {
                        lo[d] = z;
                    }
                    if hi[d] == usize::MAX || p[d] > space.point(hi[d]).unwrap()[d] {
                        hi[d] = z;
                    }
                }
            }
            count = cnt;
            report.balls_checked += 1;
            extremes.clear();
            extremes.extend(lo.iter().chain(hi.iter()).copied());
            let ball_diam = {
                let mut dd = 0.0f64;
                for (a, &za) in extremes.iter().enumerate() {
                    for &zb in &extremes[a + 1..] {
                        dd = dd.max(space.dist(za, zb));
                    }
                }
                dd
            };
            let mut best: Option<(f64, f64)> = None;
            for system in systems {
                for generation in system.generations.iter().rev() {
                    let id = generation.point_cube[c];
                    if extremes
                        .iter()
                        .all(|&z| generation.point_cube[z] == id)
                    {
                        let cube = &generation.cubes[id as usize];
                        let gamma_ratio = cube.gamma / profile.gamma_ball(r);
                        let diam_ratio = if ball_diam > 0.0 {
                            cube.diameter / ball_diam
                        } else {
                            1.0
                        };
                        match best {
                            Some((dr, _)) if dr <= diam_ratio => {}
                            _ => best = Some((diam_ratio, gamma_ratio)),
                        }
                        break;
                    }
                }
            }
            if let Some((diam_ratio, gamma_ratio)) = best {
                report.balls_contained += 1;
                if diam_ratio > report.c_x {
                    report.c_x = diam_ratio;
                }
                if gamma_ratio > report.c_tilde {
                    report.c_tilde = gamma_ratio;
                }
            } else {
                report.worst_ball = Some(Ball::new(c, r));
            }
        }
    }
    report
}

/// Pointwise domination check `M_alpha u <= c_tilde * sum_D M_D u`.
#[derive(Debug, Clone, Serialize)]
pub struct DominationReport {
    pub worst_ratio: f64,
    pub pass: bool,
}

pub fn domination_check(
    space: &DiscreteSpace,
    systems: &[DyadicSystem],
    u: &[f64],
    alpha: f64,
    c_tilde: f64,
) -> DominationReport {
    let local = local_maximal(space, u, alpha);
    let mut total = vec![0.0f64; space.len()];
    for system in systems {
        for (t, v) in total.iter_mut().zip(dyadic_maximal(space, system, u)) {
            *t += v;
        }
    }
    let mut worst_ratio = 0.0f64;
    for x in 0..space.len() {
        if local[x] > 0.0 {
            worst_ratio = worst_ratio.max(local[x] / total[x]);
        }
    }
    DominationReport {
        worst_ratio,
        pass: worst_ratio <= c_tilde * (1.0 + 1e-12),
    }
}

/// Componentwise local maximal operator on a finite family of functions.
pub fn lattice_local_maximal(
    space: &DiscreteSpace,
    components: &[Vec<f64>],
    alpha: f64,
) -> Vec<Vec<f64>> {
    components
        .iter()
        .map(|u| local_maximal(space, u, alpha))
        .collect()
}

/// Componentwise dyadic maximal operator.
pub fn lattice_dyadic_maximal(
    space: &DiscreteSpace,
    system: &DyadicSystem,
    components: &[Vec<f64>],
) -> Vec<Vec<f64>> {
    components
        .iter()
        .map(|u| dyadic_maximal(space, system, u))
        .collect()
}

/// `|| x -> (sum_s |F_s(x)|^q)^{1/q} ||_{L^p(gamma)}`.
pub fn lattice_norm(space: &DiscreteSpace, components: &[Vec<f64>], p: f64, q: f64) -> f64 {
    let n = space.len();
    let mut pointwise = vec![0.0f64; n];
    for component in components {
        for (acc, &v) in pointwise.iter_mut().zip(component) {
            *acc += v.abs().powf(q);
        }
    }
    for v in &mut pointwise {
        *v = v.powf(1.0 / q);
    }
    lp_norm(space, &pointwise, p)
}

/// Ratio `||M_alpha U||_{L^p(l^q)} / ||U||_{L^p(l^q)}` for each requested p.
pub fn fefferman_stein_ratios(
    space: &DiscreteSpace,
    components: &[Vec<f64>],
    alpha: f64,
    q: f64,
    ps: &[f64],
) -> Vec<(f64, f64)> {
    let maximal = lattice_local_maximal(space, components, alpha);
    ps.iter()
        .map(|&p| {
            let num = lattice_norm(space, &maximal, p, q);
            let den = lattice_norm(space, components, p, q);
            (p, num / den)
        })
        .collect()
}
