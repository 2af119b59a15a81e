//! The default certification suite.
//!
//! One run builds a space and region, draws a seeded corpus of functions
//! and open sets, and executes every check group the library implements,
//! collecting measured constants and pass/fail verdicts into a single
//! report. Runs are deterministic given the configuration and seed.

use std::path::PathBuf;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::atomic::{
    atomic_decompose, cone_minus_tent_inclusion, equivalence_ratio, level_sets,
    pointwise2_check_with_mask, reconstruction_error, validate_atom, verify_tent_cover,
    vitali_tent_cover, LevelSets,
};
use crate::cone_cover::{
    cone_cover, direction_net, extension, geodesic_comparison_check, geodesic_divergence_check,
    pointwise_extension_check, sector_in_set_check, LdaParams,
};
use crate::corpus::{function_corpus, open_set_corpus};
use crate::dyadic::{
    build_shifted_systems, containment_scan, domination_check, dyadic_maximal,
    fefferman_stein_ratios, lattice_dyadic_maximal, lattice_local_maximal, local_maximal,
    weak11_check,
};
use crate::functionals::{
    conical_average_at, conical_averages, j_alpha, lp_norm, max_relative_gap, mixed_norm, n_alpha,
    pairing, scale_rows, tent_sup_norm, tpq_norm, tqq_norm_direct, DualExponent, TentFunction,
};
use crate::geometry::{
    ball_mask, cone, cone_union, tent, tent_of_ball, RegionError, RegionGrid, TimeGrid,
};
use crate::potential::{verify_condition_b, PotentialSpec};
use crate::presets::{default_levels, load_space, preset, PresetError};
use crate::report::{CertificationReport, CheckRecord, Curve};
use crate::space::{admissibility_ratio_bound, Ball, DiscreteSpace, SamplePolicy};

/// Configuration format version.
pub const CONFIG_SCHEMA_VERSION: u32 = 1;

/// Which check groups a run executes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteSelection {
    pub space: bool,
    pub geometry: bool,
    pub functionals: bool,
    pub atomic: bool,
    pub dyadic: bool,
    pub cone_cover: bool,
}

impl Default for SuiteSelection {
    fn default() -> Self {
        SuiteSelection {
            space: true,
            geometry: true,
            functionals: true,
            atomic: true,
            dyadic: true,
            cone_cover: true,
        }
    }
}

impl SuiteSelection {
    pub fn none() -> Self {
        SuiteSelection {
            space: false,
            geometry: false,
            functionals: false,
            atomic: false,
            dyadic: false,
            cone_cover: false,
        }
    }
}

/// One certification scenario: the space, the region resolution, the
/// corpus, and the check groups to run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub schema_version: u32,
    /// Preset name; ignored when `space_file` is set.
    pub space: String,
    /// JSON space description; overrides `space`.
    pub space_file: Option<PathBuf>,
    /// Time-grid level count; preset default when absent.
    pub levels: Option<usize>,
    pub seed: u64,
    pub corpus_size: usize,
    /// Number of random open sets for covering checks.
    pub set_count: usize,
    pub exponents_q: Vec<f64>,
    pub apertures: Vec<f64>,
    pub suites: SuiteSelection,
    pub parallel: bool,
    /// Attach wall-clock durations to records; off by default so that
    /// equal-seed runs are byte-identical.
    pub timings: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        ScenarioConfig {
            schema_version: CONFIG_SCHEMA_VERSION,
            space: "gaussian_line".into(),
            space_file: None,
            levels: None,
            seed: 7,
            corpus_size: 24,
            set_count: 30,
            exponents_q: vec![1.0, 2.0],
            apertures: vec![0.5, 1.0, 2.0, 5.0],
            suites: SuiteSelection::default(),
            parallel: false,
            timings: false,
        }
    }
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<(), SuiteError> {
        if self.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(SuiteError::Config(format!(
                "unsupported schema_version {} (expected {})",
                self.schema_version, CONFIG_SCHEMA_VERSION
            )));
        }
        if self.space.is_empty() && self.space_file.is_none() {
            return Err(SuiteError::Config("no space named".into()));
        }
        if self.exponents_q.is_empty() {
            return Err(SuiteError::Config("exponents_q must not be empty".into()));
        }
        for &q in &self.exponents_q {
            if !q.is_finite() || q < 1.0 {
                return Err(SuiteError::Config(format!(
                    "exponent q = {q} out of range; the atomic and duality checks need q >= 1"
                )));
            }
        }
        if self.apertures.is_empty() {
            return Err(SuiteError::Config("apertures must not be empty".into()));
        }
        for &a in &self.apertures {
            if !a.is_finite() || a <= 0.0 {
                return Err(SuiteError::Config(format!("aperture {a} out of range")));
            }
        }
        if let Some(levels) = self.levels {
            if levels < 2 {
                return Err(SuiteError::Config("levels must be at least 2".into()));
            }
        }
        if self.corpus_size == 0 || self.set_count == 0 {
            return Err(SuiteError::Config(
                "corpus_size and set_count must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Preset(#[from] PresetError),
    #[error(transparent)]
    Region(#[from] RegionError),
}

struct TaskCtx<'a> {
    config: &'a ScenarioConfig,
    space: &'a DiscreteSpace,
    region: &'a RegionGrid,
    functions: &'a [TentFunction],
    sets: &'a [Vec<bool>],
}

struct TaskOutput {
    checks: Vec<CheckRecord>,
    curves: Vec<Curve>,
}

impl TaskOutput {
    fn single(record: CheckRecord) -> Self {
        TaskOutput {
            checks: vec![record],
            curves: Vec::new(),
        }
    }
}

type TaskFn = fn(&TaskCtx) -> TaskOutput;

/// Builds the configured space and runs the suite on it.
pub fn run_suite(config: &ScenarioConfig) -> Result<CertificationReport, SuiteError> {
    config.validate()?;
    let (space, label) = match &config.space_file {
        Some(path) => (load_space(path)?, path.display().to_string()),
        None => (preset(&config.space)?, config.space.clone()),
    };
    run_suite_on(&space, &label, config)
}

/// Runs the suite on an already built space.
pub fn run_suite_on(
    space: &DiscreteSpace,
    label: &str,
    config: &ScenarioConfig,
) -> Result<CertificationReport, SuiteError> {
    config.validate()?;
    let levels = config
        .levels
        .unwrap_or_else(|| default_levels(&config.space));
    let grid = TimeGrid::default_for_space(space, levels)?;
    let region = RegionGrid::build(space, &grid)?;
    let functions = function_corpus(space, &region, config.seed, config.corpus_size);
    let sets = open_set_corpus(space, config.seed.wrapping_add(1), config.set_count);
    let ctx = TaskCtx {
        config,
        space,
        region: &region,
        functions: &functions,
        sets: &sets,
    };

    let mut tasks: Vec<TaskFn> = Vec::new();
    if config.suites.space {
        tasks.extend([
            space_metric as TaskFn,
            space_weights,
            space_packing,
            space_base_doubling,
            space_weighted_doubling,
            space_admissibility,
        ]);
    }
    if config.suites.geometry {
        tasks.extend([geometry_region as TaskFn, geometry_tents, geometry_ball_tents]);
    }
    if config.suites.functionals {
        tasks.extend([
            functionals_scatter as TaskFn,
            functionals_isometry,
            functionals_idempotence,
            functionals_aperture_identity,
            functionals_diagonal,
            functionals_monotonicity,
            functionals_dual_norm,
        ]);
    }
    if config.suites.atomic {
        tasks.extend([
            atomic_cover as TaskFn,
            atomic_core,
            atomic_duality,
            atomic_shelter_inclusion,
            atomic_pairing_ratio,
        ]);
    }
    if config.suites.dyadic {
        tasks.push(dyadic_suite);
    }
    if config.suites.cone_cover {
        tasks.push(cone_cover_suite);
    }

    let run_one = |task: &TaskFn| -> TaskOutput {
        let start = Instant::now();
        let mut out = task(&ctx);
        if config.timings {
            let ms = start.elapsed().as_millis() as u64;
            for check in &mut out.checks {
                check.wall_ms = Some(ms);
            }
        }
        out
    };
    let outputs: Vec<TaskOutput> = if config.parallel {
        tasks.par_iter().map(run_one).collect()
    } else {
        tasks.iter().map(run_one).collect()
    };

    let mut report = CertificationReport::new(label, config.seed);
    for out in outputs {
        report.checks.extend(out.checks);
        report.curves.extend(out.curves);
    }
    Ok(report)
}

fn scan_policy(space: &DiscreteSpace) -> SamplePolicy {
    if space.len() <= 2000 {
        SamplePolicy::Exhaustive
    } else {
        SamplePolicy::Stride(space.len() / 1000)
    }
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn random_u(space: &DiscreteSpace, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..space.len()).map(|_| rng.random_range(-2.0..2.0)).collect()
}

fn histogram(values: &[f64], bins: usize) -> Vec<(f64, f64)> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = ((hi - lo) / bins as f64).max(f64::EPSILON * hi.abs().max(1.0));
    let mut counts = vec![0usize; bins];
    for &v in values {
        let idx = (((v - lo) / width) as usize).min(bins - 1);
        counts[idx] += 1;
    }
    counts
        .iter()
        .enumerate()
        .map(|(i, &c)| (lo + (i as f64 + 0.5) * width, c as f64))
        .collect()
}

fn space_metric(ctx: &TaskCtx) -> TaskOutput {
    let report = ctx.space.validate_metric(2_000_000);
    TaskOutput::single(
        CheckRecord::new("metric_axioms", "point distances satisfy the triangle inequality")
            .passing(report.triangle_ok)
            .constant("worst_defect", report.worst_defect)
            .constant("triples_checked", report.triples_checked as f64),
    )
}

fn space_weights(ctx: &TaskCtx) -> TaskOutput {
    let space = ctx.space;
    let min_gamma = space
        .gamma_values()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let ok = min_gamma > 0.0
        && space.min_m() > 0.0
        && space.max_m() <= 1.0
        && space.min_spacing() > 0.0;
    TaskOutput::single(
        CheckRecord::new(
            "weights_positive",
            "weights are positive and the admissibility profile is capped at one",
        )
        .passing(ok)
        .constant("min_gamma", min_gamma)
        .constant("total_gamma", space.total_gamma())
        .constant("min_m", space.min_m())
        .constant("max_m", space.max_m())
        .constant("min_spacing", space.min_spacing()),
    )
}

fn space_packing(ctx: &TaskCtx) -> TaskOutput {
    let rep = ctx.space.geometric_doubling_witness(1.0, 8);
    TaskOutput::single(
        CheckRecord::new(
            "geometric_doubling",
            "disjoint half-radius packings of admissible balls stay small",
        )
        .constant("max_disjoint_half_balls", rep.max_disjoint_half_balls as f64)
        .witness(
            "worst_ball",
            format!(
                "center {} radius {:.6}",
                rep.worst_ball.center, rep.worst_ball.radius
            ),
        ),
    )
}

fn space_base_doubling(ctx: &TaskCtx) -> TaskOutput {
    let rep = ctx.space.measure_mu_doubling();
    TaskOutput::single(
        CheckRecord::new("base_doubling", "doubling constant of the base measure")
            .constant("d_mu", rep.constant)
            .witness(
                "worst_ball",
                format!(
                    "center {} radius {:.6}",
                    rep.worst_ball.center, rep.worst_ball.radius
                ),
            ),
    )
}

fn space_weighted_doubling(ctx: &TaskCtx) -> TaskOutput {
    let policy = scan_policy(ctx.space);
    let mut rec = CheckRecord::new(
        "weighted_doubling",
        "the weighted measure doubles uniformly over admissible balls",
    );
    let mut ok = true;
    let mut balls = 0usize;
    for &alpha in &ctx.config.apertures {
        let rep = ctx.space.verify_condition_a(alpha, 2.0, policy);
        ok &= rep.pass;
        balls += rep.balls_checked;
        rec = rec.constant(format!("c_{alpha}"), rep.empirical_constant);
        if let Some(bound) = rep.theoretical_bound {
            rec = rec.constant(format!("bound_{alpha}"), bound);
        }
    }
    rec = rec.constant("balls_checked", balls as f64);
    let points: Vec<(f64, f64)> = (0..9)
        .map(|i| {
            let lam = 1.0 + 0.5 * i as f64;
            let c = ctx
                .space
                .verify_condition_a(1.0, lam, policy)
                .empirical_constant;
            (lam, c)
        })
        .collect();
    TaskOutput {
        checks: vec![rec.passing(ok)],
        curves: vec![Curve {
            name: "expansion_constant".into(),
            x_label: "expansion factor".into(),
            y_label: "worst mass ratio over unit-admissible balls".into(),
            points,
        }],
    }
}

fn space_admissibility(ctx: &TaskCtx) -> TaskOutput {
    let space = ctx.space;
    let c1 = space.admissibility_ratio(1.0);
    let c2 = space.admissibility_ratio(2.0);
    let mut rec = CheckRecord::new(
        "admissibility_ratio",
        "the admissibility profile moves by a bounded factor within admissible balls",
    )
    .constant("c_1", c1.empirical_constant)
    .constant("c_2", c2.empirical_constant)
    .constant("pairs_checked", (c1.pairs_checked + c2.pairs_checked) as f64);
    match space.potential() {
        PotentialSpec::Polynomial1d { coefficients } if space.dim() == Some(1) => {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..space.len() {
                let x = space.point(i).expect("embedded")[0];
                lo = lo.min(x);
                hi = hi.max(x);
            }
            let b = verify_condition_b(coefficients, (lo, hi), 100_001);
            let bound1 = admissibility_ratio_bound(b.minimal_constant, 1.0);
            let bound2 = admissibility_ratio_bound(b.minimal_constant, 2.0);
            let ok = b.violations.is_empty()
                && c1.empirical_constant <= bound1
                && c2.empirical_constant <= bound2;
            rec = rec
                .constant("derivative_ratio", b.minimal_constant)
                .constant("bound_1", bound1)
                .constant("bound_2", bound2)
                .witness("ratio_attained_at", format!("{:.6}", b.attained_at))
                .passing(ok);
        }
        _ => {
            rec = rec.witness(
                "derivative_ratio",
                "not measured; the potential is not stored as a polynomial",
            );
        }
    }
    TaskOutput::single(rec)
}

fn geometry_region(ctx: &TaskCtx) -> TaskOutput {
    let region = ctx.region;
    let space = ctx.space;
    let mut strict = true;
    for id in 0..region.len() {
        if region.time(id) >= space.m(region.point_of(id)) {
            strict = false;
        }
    }
    let sorted = region.levels().windows(2).all(|w| w[0] < w[1]);
    TaskOutput::single(
        CheckRecord::new(
            "region_grid",
            "region nodes sit strictly below the admissibility profile",
        )
        .passing(strict && sorted)
        .constant("nodes", region.len() as f64)
        .constant("levels", region.levels().len() as f64)
        .constant("t_min", region.levels()[0])
        .constant("t_max", *region.levels().last().expect("nonempty grid")),
    )
}

fn geometry_tents(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut ok = true;
    let mut sets_checked = 0usize;
    let mut witness: Option<String> = None;
    for mask in ctx.sets.iter().take(12) {
        let tent_set = tent(space, region, mask);
        for id in 0..region.len() {
            let y = region.point_of(id);
            let t = region.time(id);
            let inside = space
                .ball_member_slice(y, t)
                .iter()
                .all(|&w| mask[w as usize]);
            if inside != tent_set.contains(id) {
                ok = false;
                witness.get_or_insert(format!("set {sets_checked} node {id} ball test"));
            }
        }
        let complement: Vec<bool> = mask.iter().map(|b| !b).collect();
        let shadow = cone_union(space, region, &complement, 1.0);
        let via_cones = shadow.complement();
        if !(tent_set.is_subset_of(&via_cones) && via_cones.is_subset_of(&tent_set)) {
            ok = false;
            witness.get_or_insert(format!("set {sets_checked} cone shadow"));
        }
        sets_checked += 1;
    }
    let mut rec = CheckRecord::new(
        "tent_characterizations",
        "tent nodes are the ball-inside nodes and the cone-shadow complement",
    )
    .passing(ok)
    .constant("sets_checked", sets_checked as f64)
    .constant("region_nodes", ctx.region.len() as f64);
    if let Some(w) = witness {
        rec = rec.witness("first_mismatch", w);
    }
    TaskOutput::single(rec)
}

fn geometry_ball_tents(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed.wrapping_add(5));
    let mut ok = true;
    let mut cones_checked = 0usize;
    for _ in 0..20 {
        let c = rng.random_range(0..space.len());
        let r = space.m(c) * rng.random_range(0.2..=1.0);
        let ball = Ball::new(c, r);
        let direct = tent_of_ball(space, region, &ball);
        let via_mask = tent(space, region, &ball_mask(space, &ball));
        if !(direct.is_subset_of(&via_mask) && via_mask.is_subset_of(&direct)) {
            ok = false;
        }
        for _ in 0..10 {
            let x = rng.random_range(0..space.len());
            if space.dist(x, c) >= r {
                let mut outside_cone = cone(space, region, x, 1.0);
                outside_cone.intersect_with(&direct);
                if outside_cone.count() > 0 {
                    ok = false;
                }
                cones_checked += 1;
            }
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "ball_tent_consistency",
            "ball tents match the open-set tent and repel unit cones from outside",
        )
        .passing(ok)
        .constant("balls_checked", 20.0)
        .constant("outside_cones_checked", cones_checked as f64),
    )
}

fn functionals_scatter(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut worst = 0.0f64;
    let mut points = 0usize;
    for f in ctx.functions.iter().take(3) {
        for &q in &ctx.config.exponents_q {
            for alpha in [1.0, 3.0] {
                let averages = conical_averages(space, region, f, q, alpha);
                let stride = (space.len() / 40).max(1);
                for x in (0..space.len()).step_by(stride) {
                    let direct = conical_average_at(space, region, f, q, alpha, x, None);
                    worst = worst.max(rel_gap(direct, averages[x]));
                    points += 1;
                }
            }
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "average_scatter_gather",
            "cone averages agree between the scatter pass and per-point sums",
        )
        .passing(worst <= 1e-12)
        .constant("worst_gap", worst)
        .constant("points_checked", points as f64)
        .tolerance("relative", 1e-12),
    )
}

fn functionals_isometry(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut worst = 0.0f64;
    for f in ctx.functions.iter().take(3) {
        for alpha in [1.0, 2.0] {
            let field = j_alpha(space, region, f, alpha);
            for p in [1.0, 2.0] {
                for &q in &ctx.config.exponents_q {
                    let lhs = mixed_norm(space, region, &field, p, q);
                    let rhs = tpq_norm(space, region, f, p, q, alpha);
                    worst = worst.max(rel_gap(lhs, rhs));
                }
            }
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "embedding_isometry",
            "restricting to cones preserves the mixed norm",
        )
        .passing(worst <= 1e-12)
        .constant("worst_gap", worst)
        .tolerance("relative", 1e-12),
    )
}

fn functionals_idempotence(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut worst = 0.0f64;
    for f in ctx.functions.iter().take(3) {
        for alpha in [1.0, 2.0] {
            let projected = n_alpha(space, region, &j_alpha(space, region, f, alpha), alpha);
            let twice = n_alpha(space, region, &projected, alpha);
            worst = worst.max(max_relative_gap(&projected, &twice));
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "projection_idempotence",
            "ball averaging fixes already averaged fields",
        )
        .passing(worst <= 1e-12)
        .constant("worst_gap", worst)
        .tolerance("relative", 1e-12),
    )
}

fn functionals_aperture_identity(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let pairs = [(1.0, 2.0), (1.0, 3.0), (2.0, 5.0)];
    let mut worst = 0.0f64;
    let mut cases = 0usize;
    for f in ctx.functions.iter().take(20) {
        for &(beta, alpha) in &pairs {
            let lhs = n_alpha(space, region, &j_alpha(space, region, f, beta), alpha);
            let wide = j_alpha(space, region, f, alpha);
            let rhs = scale_rows(&wide, |node| {
                let id = node as usize;
                let y = region.point_of(id);
                let t = region.time(id);
                space.gamma_ball(y, beta * t) / space.gamma_ball(y, alpha * t)
            });
            worst = worst.max(max_relative_gap(&lhs, &rhs));
            cases += 1;
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "aperture_identity",
            "averaging a narrow embedding equals the wide embedding scaled by a mass ratio",
        )
        .passing(worst <= 1e-12)
        .constant("worst_gap", worst)
        .constant("cases", cases as f64)
        .tolerance("relative", 1e-12),
    )
}

fn functionals_diagonal(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut worst = 0.0f64;
    for f in ctx.functions.iter().take(5) {
        for &q in &ctx.config.exponents_q {
            for alpha in [1.0, 3.0] {
                let lhs = tpq_norm(space, region, f, q, q, alpha);
                let rhs = tqq_norm_direct(space, region, f, q, alpha);
                worst = worst.max(rel_gap(lhs, rhs));
            }
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "diagonal_norm_identity",
            "the diagonal tent norm equals its node-side rearrangement",
        )
        .passing(worst <= 1e-12)
        .constant("worst_gap", worst)
        .tolerance("relative", 1e-12),
    )
}

fn functionals_monotonicity(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let c3 = space
        .verify_condition_a(1.0, 3.0, scan_policy(space))
        .empirical_constant;
    let mut ok = true;
    let mut worst_chain = 0.0f64;
    for f in ctx.functions {
        for &q in &ctx.config.exponents_q {
            let narrow = conical_averages(space, region, f, q, 1.0);
            let wide = conical_averages(space, region, f, q, 3.0);
            for (a1, a3) in narrow.iter().zip(&wide) {
                if *a1 > a3 * (1.0 + 1e-12) {
                    ok = false;
                }
            }
            for p in [1.0, 2.0] {
                if lp_norm(space, &narrow, p) > lp_norm(space, &wide, p) * (1.0 + 1e-12) {
                    ok = false;
                }
            }
            let lhs = lp_norm(space, &wide, q).powf(q);
            let rhs = c3 * lp_norm(space, &narrow, q).powf(q);
            worst_chain = worst_chain.max(lhs / rhs.max(1e-300));
            if lhs > rhs * (1.0 + 1e-12) {
                ok = false;
            }
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "aperture_monotonicity",
            "averages grow with aperture and the widening cost stays below the mass-ratio constant",
        )
        .passing(ok)
        .constant("c_tilde_1_3", c3)
        .constant("worst_chain_quotient", worst_chain)
        .tolerance("relative", 1e-12),
    )
}

fn functionals_dual_norm(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed.wrapping_add(4));
    let mut ball = None;
    for _ in 0..40 {
        let c = rng.random_range(0..space.len());
        let r = 5.0 * space.m(c) * rng.random_range(0.3..=1.0);
        let candidate = Ball::new(c, r);
        if tent_of_ball(space, region, &candidate).count() > 0 {
            ball = Some(candidate);
            break;
        }
    }
    let mut ok = true;
    let mut max_value = 0.0f64;
    for &q in &ctx.config.exponents_q {
        let qp = DualExponent::conjugate_of(q);
        for g in ctx.functions.iter().take(3) {
            max_value = max_value.max(tent_sup_norm(space, region, g, qp, 5.0).value);
        }
        if let Some(b) = &ball {
            let tent_b = tent_of_ball(space, region, b);
            let indicator = TentFunction::indicator(&tent_b);
            let value = tent_sup_norm(space, region, &indicator, qp, 5.0).value;
            match qp {
                DualExponent::Infinity => {
                    if (value - 1.0).abs() > 1e-12 {
                        ok = false;
                    }
                }
                DualExponent::Finite(e) => {
                    let mass: f64 = tent_b.iter().map(|id| region.gamma_w(id)).sum();
                    let lower = (mass / space.gamma_ball(b.center, b.radius)).powf(1.0 / e);
                    if value < lower * (1.0 - 1e-12) {
                        ok = false;
                    }
                }
            }
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "dual_norm_witness",
            "the admissible-ball supremum norm dominates its single-ball witnesses",
        )
        .passing(ok && ball.is_some())
        .constant("max_corpus_value", max_value)
        .tolerance("relative", 1e-12),
    )
}

fn atomic_cover(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut all = true;
    let mut total_balls = 0usize;
    let mut max_balls = 0usize;
    let mut tent_nodes = 0usize;
    for mask in ctx.sets {
        let balls = vitali_tent_cover(space, mask);
        let cert = verify_tent_cover(space, region, mask, &balls);
        all &= cert.pass();
        total_balls += cert.ball_count;
        max_balls = max_balls.max(cert.ball_count);
        tent_nodes += cert.tent_node_count;
    }
    TaskOutput::single(
        CheckRecord::new(
            "greedy_tent_cover",
            "disjoint admissible balls whose dilates shelter the tent of every sampled set",
        )
        .passing(all)
        .constant("sets", ctx.sets.len() as f64)
        .constant("total_balls", total_balls as f64)
        .constant("max_balls_per_set", max_balls as f64)
        .constant("tent_nodes_covered", tent_nodes as f64),
    )
}

fn atomic_core(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let c15 = space
        .verify_condition_a(1.0, 5.0, scan_policy(space))
        .empirical_constant;
    let mut recon_worst = 0.0f64;
    let mut atoms = 0usize;
    let mut atom_failures = 0usize;
    let mut scalar_ok = true;
    let mut level_ok = true;
    let mut shelter_ok = true;
    let mut shelter_worst = 0.0f64;
    let mut thresholds = 0usize;
    let mut rhos: Vec<f64> = Vec::new();
    let mut k3_max = 0.0f64;
    let mut bound_slack = 0.0f64;
    let mut decompositions = 0usize;
    for f in ctx.functions {
        for &q in &ctx.config.exponents_q {
            let d = atomic_decompose(space, region, f, q);
            decompositions += 1;
            recon_worst = recon_worst.max(reconstruction_error(region.len(), f, &d));
            for term in &d.terms {
                atoms += 1;
                if !validate_atom(space, region, &term.atom).pass {
                    atom_failures += 1;
                }
                let cap = space.gamma_ball(term.atom.ball.center, term.atom.ball.radius)
                    * ((term.k + 1) as f64).exp2();
                if term.lambda > cap * (1.0 + 1e-12) {
                    scalar_ok = false;
                }
            }
            for ls in &d.levels {
                if ls.gamma5_sum > c15 * ls.gamma_level_set * (1.0 + 1e-12) {
                    level_ok = false;
                }
            }
            if !d.terms.is_empty() {
                let eq = equivalence_ratio(space, region, f, &d);
                rhos.push(eq.rho);
                k3_max = k3_max.max(eq.k3);
                bound_slack = bound_slack.max(eq.rho / (4.0 * c15 * eq.k3));
            }
            if let Some(ls) = level_sets(space, region, f, q) {
                for k in ls.k_min..=ls.k_max {
                    let lam = LevelSets::threshold(k);
                    let rep = pointwise2_check_with_mask(space, region, f, q, lam, ls.mask(k));
                    shelter_ok &= rep.pass;
                    shelter_worst = shelter_worst.max(rep.worst_value / lam);
                    thresholds += 1;
                }
            }
        }
    }
    let decomposition_rec = CheckRecord::new(
        "atomic_decomposition",
        "reconstruction is exact and every atom and scalar meets its budget",
    )
    .passing(recon_worst <= 1e-10 && atom_failures == 0 && scalar_ok && level_ok)
    .constant("decompositions", decompositions as f64)
    .constant("atoms", atoms as f64)
    .constant("worst_reconstruction", recon_worst)
    .constant("atom_failures", atom_failures as f64)
    .tolerance("reconstruction", 1e-10)
    .tolerance("atom_size", crate::atomic::ATOM_SIZE_RTOL)
    .tolerance("scalar_budget", 1e-12);
    let shelter_rec = CheckRecord::new(
        "pointwise_shelter",
        "outside the sheltering tent the functional stays below each stopping threshold",
    )
    .passing(shelter_ok)
    .constant("thresholds_checked", thresholds as f64)
    .constant("worst_quotient", shelter_worst)
    .tolerance("relative", 1e-12);
    let mut equivalence_rec = CheckRecord::new(
        "norm_equivalence",
        "scalar sums stay within the measured multiple of the tent norm",
    )
    .passing(
        rhos.iter().all(|r| r.is_finite() && *r > 0.0) && bound_slack <= 1.0 + 1e-12,
    )
    .constant("c_tilde_1_5", c15)
    .constant("k3_max", k3_max)
    .constant("bound_slack", bound_slack)
    .tolerance("bound", 1e-12);
    let mut curves = Vec::new();
    if !rhos.is_empty() {
        let lo = rhos.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = rhos.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        equivalence_rec = equivalence_rec
            .constant("rho_min", lo)
            .constant("rho_max", hi);
        curves.push(Curve {
            name: "equivalence_ratio_histogram".into(),
            x_label: "scalar sum over tent norm".into(),
            y_label: "count".into(),
            points: histogram(&rhos, 10),
        });
    }
    TaskOutput {
        checks: vec![decomposition_rec, shelter_rec, equivalence_rec],
        curves,
    }
}

fn atomic_duality(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let tests = function_corpus(space, region, ctx.config.seed.wrapping_add(2), 20);
    let mut ok = true;
    let mut worst = 0.0f64;
    let mut pairs = 0usize;
    for &q in &ctx.config.exponents_q {
        let qp = DualExponent::conjugate_of(q);
        let dual_norms: Vec<f64> = tests
            .iter()
            .map(|g| tent_sup_norm(space, region, g, qp, 5.0).value)
            .collect();
        for f in ctx.functions.iter().take(6) {
            let d = atomic_decompose(space, region, f, q);
            for term in &d.terms {
                for (g, &gn) in tests.iter().zip(&dual_norms) {
                    let value = pairing(region, &term.atom.values, g).abs();
                    pairs += 1;
                    if value > gn * (1.0 + 1e-10) {
                        ok = false;
                    }
                    if gn > 0.0 {
                        worst = worst.max(value / gn);
                    }
                }
            }
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "atom_duality",
            "every atom pairs below the dual norm of the test function",
        )
        .passing(ok)
        .constant("pairs_checked", pairs as f64)
        .constant("worst_quotient", worst)
        .tolerance("relative", 1e-10),
    )
}

fn atomic_shelter_inclusion(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed.wrapping_add(6));
    let mut ok = true;
    let mut checked = 0usize;
    for mask in ctx.sets.iter().take(5) {
        let inside: Vec<usize> = (0..space.len()).filter(|&i| mask[i]).collect();
        for _ in 0..4 {
            let x = inside[rng.random_range(0..inside.len())];
            let rep = cone_minus_tent_inclusion(space, region, mask, x);
            ok &= rep.holds;
            checked += 1;
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "cone_escape_inclusion",
            "cone nodes escaping the tent lie in the triple cone at the nearest outside point",
        )
        .passing(ok)
        .constant("points_checked", checked as f64),
    )
}

fn atomic_pairing_ratio(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let tests = function_corpus(space, region, ctx.config.seed.wrapping_add(2), 4);
    let mut worst = 0.0f64;
    for &q in &ctx.config.exponents_q {
        let qp = DualExponent::conjugate_of(q);
        for f in ctx.functions.iter().take(5) {
            let f_norm = tpq_norm(space, region, f, 1.0, q, 1.0);
            for g in &tests {
                let g_norm = tent_sup_norm(space, region, g, qp, 5.0).value;
                let den = f_norm * g_norm;
                if den > 0.0 {
                    worst = worst.max(pairing(region, f, g).abs() / den);
                }
            }
        }
    }
    TaskOutput::single(
        CheckRecord::new(
            "pairing_norm_ratio",
            "measured quotient of the pairing against the product of primal and dual norms",
        )
        .constant("max_quotient", worst),
    )
}

fn dyadic_suite(ctx: &TaskCtx) -> TaskOutput {
    let space = ctx.space;
    let systems = match build_shifted_systems(space) {
        Ok(s) => s,
        Err(err) => {
            return TaskOutput::single(
                CheckRecord::new(
                    "dyadic_systems",
                    "shifted cube systems require an embedded cloud",
                )
                .witness("skipped", err.to_string()),
            )
        }
    };
    let mut checks = Vec::new();

    let mut part_ok = true;
    let mut nest_ok = true;
    let mut mass_ok = true;
    let mut generations = 0usize;
    for sys in &systems {
        generations += sys.generations.len();
        for gen in &sys.generations {
            if gen.point_cube.len() != space.len() {
                part_ok = false;
                continue;
            }
            let mut seen = vec![false; space.len()];
            for (ci, cube) in gen.cubes.iter().enumerate() {
                if cube.members.is_empty() || cube.gamma <= 0.0 {
                    mass_ok = false;
                }
                for &mb in &cube.members {
                    let mb = mb as usize;
                    if seen[mb] || gen.point_cube[mb] as usize != ci {
                        part_ok = false;
                    }
                    seen[mb] = true;
                }
            }
            if seen.iter().any(|s| !s) {
                part_ok = false;
            }
        }
        for pair in sys.generations.windows(2) {
            let (coarse, fine) = (&pair[0], &pair[1]);
            for cube in &fine.cubes {
                let parent = coarse.point_cube[cube.members[0] as usize];
                if cube
                    .members
                    .iter()
                    .any(|&mb| coarse.point_cube[mb as usize] != parent)
                {
                    nest_ok = false;
                }
            }
        }
    }
    checks.push(
        CheckRecord::new(
            "dyadic_partition",
            "every generation partitions the cloud and nests inside the coarser one",
        )
        .passing(part_ok && nest_ok && mass_ok)
        .constant("systems", systems.len() as f64)
        .constant("generations", generations as f64),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed.wrapping_add(3));
    let mut weak_checks = 0usize;
    let mut weak_violations = 0usize;
    let mut weak_worst = 0.0f64;
    for i in 0..200 {
        let u = random_u(space, &mut rng);
        let sys = &systems[i % systems.len()];
        let maximal = dyadic_maximal(space, sys, &u);
        let peak = maximal.iter().copied().fold(0.0f64, f64::max);
        let lambdas: Vec<f64> = (0..10)
            .map(|_| peak * rng.random_range(0.05..1.0))
            .collect();
        let rep = weak11_check(space, &maximal, &u, &lambdas, 1.0);
        weak_checks += rep.checks;
        weak_violations += rep.violations;
        weak_worst = weak_worst.max(rep.worst_ratio);
    }
    checks.push(
        CheckRecord::new(
            "dyadic_weak_type",
            "superlevel mass of the cube maximal function at constant one",
        )
        .passing(weak_violations == 0)
        .constant("thresholds_checked", weak_checks as f64)
        .constant("worst_ratio", weak_worst)
        .tolerance("relative", 1e-12),
    );

    let policy = scan_policy(space);
    let scan1 = containment_scan(space, &systems, 1.0, policy);
    let scan5 = containment_scan(space, &systems, 5.0, policy);
    checks.push(
        CheckRecord::new(
            "ball_cube_containment",
            "every sampled admissible ball fits inside a cube of some system",
        )
        .passing(
            scan1.all_contained()
                && scan5.all_contained()
                && scan1.c_x.is_finite()
                && scan5.c_x.is_finite(),
        )
        .constant("c_x_1", scan1.c_x)
        .constant("c_tilde_1", scan1.c_tilde)
        .constant("c_x_5", scan5.c_x)
        .constant("c_tilde_5", scan5.c_tilde)
        .constant(
            "balls_checked",
            (scan1.balls_checked + scan5.balls_checked) as f64,
        ),
    );

    let mut dom_ok = true;
    let mut dom_worst = 0.0f64;
    for _ in 0..10 {
        let u = random_u(space, &mut rng);
        let rep = domination_check(space, &systems, &u, 1.0, scan1.c_tilde);
        dom_ok &= rep.pass;
        dom_worst = dom_worst.max(rep.worst_ratio);
    }
    checks.push(
        CheckRecord::new(
            "maximal_domination",
            "ball averages are dominated by the summed cube maxima",
        )
        .passing(dom_ok)
        .constant("c_tilde", scan1.c_tilde)
        .constant("worst_quotient", dom_worst)
        .tolerance("relative", 1e-12),
    );

    let budget = systems.len() as f64 * scan1.c_tilde;
    let mut local_checks = 0usize;
    let mut local_violations = 0usize;
    let mut local_worst = 0.0f64;
    for _ in 0..50 {
        let u = random_u(space, &mut rng);
        let maximal = local_maximal(space, &u, 1.0);
        let peak = maximal.iter().copied().fold(0.0f64, f64::max);
        let lambdas: Vec<f64> = (0..10)
            .map(|_| peak * rng.random_range(0.05..1.0))
            .collect();
        let rep = weak11_check(space, &maximal, &u, &lambdas, budget);
        local_checks += rep.checks;
        local_violations += rep.violations;
        local_worst = local_worst.max(rep.worst_ratio);
    }
    checks.push(
        CheckRecord::new(
            "local_weak_type",
            "ball maximal superlevel mass stays within the systems budget",
        )
        .passing(local_violations == 0)
        .constant("budget", budget)
        .constant("thresholds_checked", local_checks as f64)
        .constant("worst_ratio", local_worst)
        .tolerance("relative", 1e-12),
    );

    let mut lat_ok = true;
    let mut identity_gap = 0.0f64;
    for _ in 0..3 {
        let u = random_u(space, &mut rng);
        let single = lattice_local_maximal(space, std::slice::from_ref(&u), 1.0);
        if single[0] != local_maximal(space, &u, 1.0) {
            lat_ok = false;
        }
    }
    let constants: Vec<Vec<f64>> = (1..=3)
        .map(|j| vec![j as f64 * 0.5; space.len()])
        .collect();
    for (j, comp) in lattice_local_maximal(space, &constants, 1.0).iter().enumerate() {
        let expect = (j + 1) as f64 * 0.5;
        for &v in comp {
            identity_gap = identity_gap.max((v - expect).abs() / expect);
        }
    }
    lat_ok &= identity_gap <= 1e-12;
    let components: Vec<Vec<f64>> = (0..4).map(|_| random_u(space, &mut rng)).collect();
    let lat_local = lattice_local_maximal(space, &components, 1.0);
    let mut lat_dyadic_sum = vec![vec![0.0f64; space.len()]; components.len()];
    for sys in &systems {
        for (acc, comp) in lat_dyadic_sum
            .iter_mut()
            .zip(lattice_dyadic_maximal(space, sys, &components))
        {
            for (a, v) in acc.iter_mut().zip(comp) {
                *a += v;
            }
        }
    }
    for (loc, dya) in lat_local.iter().zip(&lat_dyadic_sum) {
        for (l, d) in loc.iter().zip(dya) {
            if *l > scan1.c_tilde * d * (1.0 + 1e-12) {
                lat_ok = false;
            }
        }
    }
    let mut lattice_rec = CheckRecord::new(
        "lattice_maximal",
        "componentwise maximal identities and the summed-cube domination",
    )
    .passing(lat_ok)
    .constant("identity_gap", identity_gap)
    .tolerance("relative", 1e-12);
    for (p, ratio) in fefferman_stein_ratios(space, &components, 1.0, 2.0, &[1.5, 2.0, 4.0]) {
        lattice_rec = lattice_rec.constant(format!("ratio_p_{p}"), ratio);
    }
    checks.push(lattice_rec);

    let mut proj_ok = true;
    let mut proj_worst = 0.0f64;
    for f in ctx.functions.iter().take(2) {
        let small = TentFunction::from_pairs(
            f.entries().iter().take(30).map(|&(n, v)| (n as usize, v)),
        );
        let field = j_alpha(space, ctx.region, &small, 1.0);
        let projected = n_alpha(space, ctx.region, &field, 1.0);
        for (row_f, row_p) in field.rows.iter().zip(&projected.rows) {
            let id = row_f.node as usize;
            let y = ctx.region.point_of(id);
            let t = ctx.region.time(id);
            let slice = space.ball_member_slice(y, t);
            let mut dense = vec![0.0f64; space.len()];
            for (k, &x) in slice.iter().enumerate() {
                dense[x as usize] = row_f.values[k];
            }
            let maximal = local_maximal(space, &dense, 1.0);
            for (k, &x) in slice.iter().enumerate() {
                let lhs = row_p.values[k].abs();
                let bound = maximal[x as usize];
                if lhs > bound * (1.0 + 1e-12) {
                    proj_ok = false;
                }
                proj_worst = proj_worst.max(lhs / bound.max(1e-300));
            }
        }
    }
    checks.push(
        CheckRecord::new(
            "projection_domination",
            "row averages of embedded functions sit below the local maximal function",
        )
        .passing(proj_ok)
        .constant("worst_quotient", proj_worst)
        .tolerance("relative", 1e-12),
    );

    TaskOutput {
        checks,
        curves: Vec::new(),
    }
}

fn cone_cover_suite(ctx: &TaskCtx) -> TaskOutput {
    let (space, region) = (ctx.space, ctx.region);
    let dim = match space.dim() {
        Some(d) if d <= 2 => d,
        Some(d) => {
            return TaskOutput::single(
                CheckRecord::new(
                    "sector_parameters",
                    "cone covering requires a direction net",
                )
                .witness("skipped", format!("no direction net for dimension {d}")),
            )
        }
        None => {
            return TaskOutput::single(
                CheckRecord::new(
                    "sector_parameters",
                    "cone covering requires a direction net",
                )
                .witness("skipped", "needs an embedded cloud"),
            )
        }
    };
    let params = LdaParams::measure(space);
    let net_size = direction_net(dim).expect("dimension checked").len();
    let mut checks = vec![CheckRecord::new(
        "sector_parameters",
        "extension parameters measured from the cloud",
    )
    .constant("beta", params.beta)
    .constant("alpha", params.alpha)
    .constant("lambda", params.lambda)
    .constant("a_beta", params.a_beta)
    .constant("direction_count", net_size as f64)
    .witness("beta_source", LdaParams::BETA_SOURCE)];

    let mut abs_ok = true;
    let mut worst_weak = 0.0f64;
    for mask in ctx.sets.iter().take(10) {
        let ext = extension(space, mask, &params);
        for i in 0..space.len() {
            if mask[i] && !ext.mask[i] {
                abs_ok = false;
            }
        }
        worst_weak = worst_weak.max(ext.weak_ratio());
    }
    checks.push(
        CheckRecord::new(
            "extension_contains_set",
            "the thresholded ball union absorbs the set it extends",
        )
        .passing(abs_ok)
        .constant("lambda", params.lambda)
        .constant("worst_weak_ratio", worst_weak),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(ctx.config.seed.wrapping_add(7));
    let mut cover_ok = true;
    let mut covers = 0usize;
    let mut escaped_max = 0usize;
    let mut cover_witness: Option<String> = None;
    for mask in ctx.sets.iter().take(10) {
        let inside: Vec<usize> = (0..space.len()).filter(|&i| mask[i]).collect();
        let x = inside[rng.random_range(0..inside.len())];
        match cone_cover(space, region, mask, x, &params) {
            Ok(cover) => {
                cover_ok &= cover.certificate.pass;
                escaped_max = escaped_max.max(cover.certificate.escaped_nodes);
                covers += 1;
            }
            Err(err) => {
                cover_ok = false;
                cover_witness.get_or_insert(err.to_string());
            }
        }
    }
    let mut cover_rec = CheckRecord::new(
        "cone_cover_certificates",
        "cone nodes escaping the extension tent are covered by the contact cones",
    )
    .passing(cover_ok)
    .constant("covers_certified", covers as f64)
    .constant("max_escaped_nodes", escaped_max as f64);
    if let Some(w) = cover_witness {
        cover_rec = cover_rec.witness("error", w);
    }
    checks.push(cover_rec);

    let mut pw_ok = true;
    let mut pw_checks = 0usize;
    let mut pw_worst = 0.0f64;
    for f in ctx.functions.iter().take(4) {
        for &q in &ctx.config.exponents_q {
            let peak = conical_averages(space, region, f, q, 1.0)
                .iter()
                .copied()
                .fold(0.0f64, f64::max);
            for frac in [0.3, 0.6, 0.95] {
                match pointwise_extension_check(space, region, f, q, peak * frac, &params) {
                    Ok(rep) => {
                        pw_ok &= rep.pass;
                        pw_worst = pw_worst.max(rep.worst / rep.bound.max(1e-300));
                        pw_checks += 1;
                    }
                    Err(_) => pw_ok = false,
                }
            }
        }
    }
    checks.push(
        CheckRecord::new(
            "pointwise_direction_budget",
            "outside the extension tent the functional stays below the direction-count multiple",
        )
        .passing(pw_ok)
        .constant("thresholds_checked", pw_checks as f64)
        .constant("worst_quotient", pw_worst)
        .constant("direction_count", net_size as f64)
        .tolerance("relative", 1e-12),
    );

    match sector_in_set_check(space, &params, ctx.config.seed.wrapping_add(8), 40) {
        Ok(rep) => checks.push(
            CheckRecord::new(
                "sector_absorption",
                "sets covering a sector absorb the doubled balls of its members in their extension",
            )
            .passing(rep.violations == 0)
            .constant("trials", rep.trials as f64)
            .constant("empty_sectors", rep.empty_sectors as f64)
            .constant("conclusions_checked", rep.conclusions_checked as f64),
        ),
        Err(err) => checks.push(
            CheckRecord::new(
                "sector_absorption",
                "sets covering a sector absorb the doubled balls of its members in their extension",
            )
            .passing(false)
            .witness("error", err.to_string()),
        ),
    }

    let comparison = geodesic_comparison_check(ctx.config.seed.wrapping_add(9), 4000);
    let divergence = geodesic_divergence_check(ctx.config.seed.wrapping_add(10), 4000);
    checks.push(
        CheckRecord::new(
            "flat_geometry",
            "chord comparison and narrow-angle divergence bounds on rays",
        )
        .passing(comparison.worst_excess <= 1e-12 && divergence.worst_excess <= 1e-12)
        .constant("comparison_excess", comparison.worst_excess)
        .constant("divergence_excess", divergence.worst_excess)
        .tolerance("absolute", 1e-12),
    );

    TaskOutput {
        checks,
        curves: Vec::new(),
    }
}
