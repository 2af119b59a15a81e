//! Acceptance run at desk scale: eleven numbered criteria, one test per
//! criterion so the harness prints one pass or fail line for each. The
//! three reference spaces and their decomposition corpora are built once
//! and shared; every tolerance is pinned next to its assertion.

use std::sync::OnceLock;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use tentlab::atomic::{
    atomic_decompose, equivalence_ratio, level_sets, pointwise2_check_with_mask,
    reconstruction_error, validate_atom, vitali_tent_cover, verify_tent_cover, Decomposition,
    LevelSets,
};
use tentlab::cone_cover::{
    cone_cover, direction_net, geodesic_comparison_check, geodesic_divergence_check,
    pointwise_extension_check, LdaParams,
};
use tentlab::corpus::{function_corpus, open_set_corpus};
use tentlab::dyadic::{
    build_shifted_systems, containment_scan, domination_check, dyadic_maximal, weak11_check,
};
use tentlab::functionals::{
    conical_averages, j_alpha, max_relative_gap, n_alpha, pairing, scale_rows, tent_sup_norm,
    DualExponent, TentFunction,
};
use tentlab::geometry::{RegionGrid, TimeGrid};
use tentlab::potential::verify_condition_b;
use tentlab::presets::{gaussian_line, gaussian_plane, polynomial_line, uniform_local};
use tentlab::space::{admissibility_ratio_bound, DiscreteSpace, SamplePolicy};
use tentlab::suite::{run_suite, ScenarioConfig};

const CORPUS_SEED: u64 = 41;
const SET_SEED: u64 = 43;
const POINT_SEED: u64 = 47;
const APEX_SEED: u64 = 53;
const EXPONENTS: [f64; 2] = [1.0, 2.0];

struct Fixture {
    name: &'static str,
    space: DiscreteSpace,
    region: RegionGrid,
    functions: Vec<TentFunction>,
    decomps: OnceLock<Vec<DecompRun>>,
}

struct DecompRun {
    q: f64,
    f_index: usize,
    d: Decomposition,
}

fn build_fixture(name: &'static str, space: DiscreteSpace, levels: usize) -> Fixture {
    let grid = TimeGrid::default_for_space(&space, levels).expect("preset grid");
    let region = RegionGrid::build(&space, &grid).expect("preset region");
    let functions = function_corpus(&space, &region, CORPUS_SEED, 100);
    Fixture {
        name,
        space,
        region,
        functions,
        decomps: OnceLock::new(),
    }
}

fn line() -> &'static Fixture {
    static CELL: OnceLock<Fixture> = OnceLock::new();
    CELL.get_or_init(|| build_fixture("gaussian_line", gaussian_line(801), 32))
}

fn plane() -> &'static Fixture {
    static CELL: OnceLock<Fixture> = OnceLock::new();
    CELL.get_or_init(|| build_fixture("gaussian_plane", gaussian_plane(21), 16))
}

fn local() -> &'static Fixture {
    static CELL: OnceLock<Fixture> = OnceLock::new();
    CELL.get_or_init(|| build_fixture("uniform_local", uniform_local(400), 32))
}

fn fixtures() -> [&'static Fixture; 3] {
    [line(), plane(), local()]
}

/// Decompositions of the whole corpus at both exponents, q-major order.
fn decomps(fix: &'static Fixture) -> &'static [DecompRun] {
    fix.decomps.get_or_init(|| {
        let jobs: Vec<(f64, usize)> = EXPONENTS
            .iter()
            .flat_map(|&q| (0..fix.functions.len()).map(move |i| (q, i)))
            .collect();
        jobs.par_iter()
            .map(|&(q, f_index)| DecompRun {
                q,
                f_index,
                d: atomic_decompose(&fix.space, &fix.region, &fix.functions[f_index], q),
            })
            .collect()
    })
}

#[test]
fn criterion_01_admissible_doubling_on_the_gaussian_line() {
    let fix = line();
    for alpha in [0.5, 1.0, 2.0, 5.0] {
        let rep = fix
            .space
            .verify_condition_a(alpha, 2.0, SamplePolicy::Exhaustive);
        let closed_form = 2.0 * (alpha * (5.0 * alpha + 6.0) / 2.0).exp();
        println!(
            "criterion 1: alpha={alpha} C={:.6e} bound={:.6e} balls={}",
            rep.empirical_constant, closed_form, rep.balls_checked
        );
        assert!(
            rep.pass,
            "measured doubling bound violated at alpha={alpha}: {rep:?}"
        );
        assert!(
            rep.empirical_constant <= closed_form,
            "closed-form bound violated at alpha={alpha}: C={} > {closed_form}",
            rep.empirical_constant
        );
    }
}

#[test]
fn criterion_02_gradient_admissibility_ratio_bound() {
    let space = polynomial_line(801);
    let coefficients = [0.5 * (2.0 * std::f64::consts::PI).ln(), 0.0, 0.5];
    let condition_b = verify_condition_b(&coefficients, (-10.0, 10.0), 200_001);
    assert!(
        condition_b.violations.is_empty(),
        "derivative-ratio condition fails: {:?}",
        condition_b.violations
    );
    let m_const = condition_b.minimal_constant;
    for alpha in [1.0, 2.0] {
        let measured = space.admissibility_ratio(alpha).empirical_constant;
        let bound = admissibility_ratio_bound(m_const, alpha);
        println!("criterion 2: alpha={alpha} c={measured:.6} bound={bound:.6} M={m_const:.6}");
        assert!(
            measured <= bound,
            "admissibility ratio exceeds e^(M alpha) at alpha={alpha}: {measured} > {bound}"
        );
    }
}

#[test]
fn criterion_03_aperture_identity_is_node_exact() {
    let fix = line();
    let pairs = [(1.0, 2.0), (1.0, 3.0), (2.0, 5.0)];
    let mut worst = 0.0f64;
    for f in fix.functions.iter().take(20) {
        for &(beta, alpha) in &pairs {
            let lhs = n_alpha(
                &fix.space,
                &fix.region,
                &j_alpha(&fix.space, &fix.region, f, beta),
                alpha,
            );
            let wide = j_alpha(&fix.space, &fix.region, f, alpha);
            let rhs = scale_rows(&wide, |node| {
                let id = node as usize;
                let y = fix.region.point_of(id);
                let t = fix.region.time(id);
                fix.space.gamma_ball(y, beta * t) / fix.space.gamma_ball(y, alpha * t)
            });
            worst = worst.max(max_relative_gap(&lhs, &rhs));
        }
    }
    println!("criterion 3: worst relative gap {worst:.3e} over 60 cases");
    assert!(worst <= 1e-12, "aperture identity broke: {worst:.3e}");
}

#[test]
fn criterion_04_tent_cover_certificates_on_random_sets() {
    for fix in fixtures() {
        let sets = open_set_corpus(&fix.space, SET_SEED, 100);
        let ball_total: usize = sets
            .par_iter()
            .map(|mask| {
                let balls = vitali_tent_cover(&fix.space, mask);
                let cert = verify_tent_cover(&fix.space, &fix.region, mask, &balls);
                assert!(cert.pass(), "{}: cover certificate failed: {cert:?}", fix.name);
                cert.ball_count
            })
            .sum();
        println!(
            "criterion 4: {} covered 100 sets with {ball_total} balls total",
            fix.name
        );
    }
}

#[test]
fn criterion_05_pointwise_stopping_time_bound_at_every_threshold() {
    for fix in fixtures() {
        let runs = decomps(fix);
        let (thresholds, worst) = runs
            .par_iter()
            .map(|run| {
                let f = &fix.functions[run.f_index];
                let Some(ls) = level_sets(&fix.space, &fix.region, f, run.q) else {
                    return (0usize, 0.0f64);
                };
                assert_eq!(run.d.k_range, Some((ls.k_min, ls.k_max)));
                let mut checked = 0usize;
                let mut worst = 0.0f64;
                for k in ls.k_min..=ls.k_max {
                    let lam = LevelSets::threshold(k);
                    let rep = pointwise2_check_with_mask(
                        &fix.space,
                        &fix.region,
                        f,
                        run.q,
                        lam,
                        ls.mask(k),
                    );
                    assert!(
                        rep.pass,
                        "{}: pointwise bound broke at q={} k={k}: {rep:?}",
                        fix.name, run.q
                    );
                    checked += 1;
                    worst = worst.max(rep.worst_value / lam);
                }
                (checked, worst)
            })
            .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
        println!(
            "criterion 5: {} held at {thresholds} thresholds, worst quotient {worst:.6}",
            fix.name
        );
    }
}

#[test]
fn criterion_06_atomic_decomposition_certificates() {
    for fix in fixtures() {
        let runs = decomps(fix);
        let term_total: usize = runs
            .par_iter()
            .map(|run| {
                let f = &fix.functions[run.f_index];
                let err = reconstruction_error(fix.region.len(), f, &run.d);
                assert!(
                    err <= 1e-10,
                    "{}: reconstruction error {err:.3e} at q={}",
                    fix.name,
                    run.q
                );
                for term in &run.d.terms {
                    let atom = validate_atom(&fix.space, &fix.region, &term.atom);
                    assert!(
                        atom.pass,
                        "{}: atom certificate failed at q={} k={} j={}: {atom:?}",
                        fix.name, run.q, term.k, term.j
                    );
                    let gamma5 = fix
                        .space
                        .gamma_ball(term.atom.ball.center, term.atom.ball.radius);
                    let scalar_bound = gamma5 * ((term.k + 1) as f64).exp2();
                    assert!(
                        term.lambda <= scalar_bound * (1.0 + 1e-12),
                        "{}: scalar bound broke at q={} k={} j={}: {} > {scalar_bound}",
                        fix.name,
                        run.q,
                        term.k,
                        term.j,
                        term.lambda
                    );
                }
                run.d.terms.len()
            })
            .sum();
        println!(
            "criterion 6: {} certified {term_total} terms across {} decompositions",
            fix.name,
            runs.len()
        );
    }
}

#[test]
fn criterion_07_norm_equivalence_within_the_counting_bound() {
    for fix in fixtures() {
        let c15 = fix
            .space
            .verify_condition_a(1.0, 5.0, SamplePolicy::Exhaustive)
            .empirical_constant;
        let runs = decomps(fix);
        let mut rho_min = f64::INFINITY;
        let mut rho_max = 0.0f64;
        let mut k3_max = 0.0f64;
        for run in runs {
            let f = &fix.functions[run.f_index];
            if f.is_zero() {
                continue;
            }
            let eq = equivalence_ratio(&fix.space, &fix.region, f, &run.d);
            assert!(
                eq.rho.is_finite(),
                "{}: rho diverged at q={}",
                fix.name,
                run.q
            );
            assert!(
                eq.rho <= 4.0 * c15 * eq.k3 * (1.0 + 1e-12),
                "{}: counting bound broke at q={}: rho={} > 4 * {c15} * {}",
                fix.name,
                run.q,
                eq.rho,
                eq.k3
            );
            rho_min = rho_min.min(eq.rho);
            rho_max = rho_max.max(eq.rho);
            k3_max = k3_max.max(eq.k3);
        }
        println!(
            "criterion 7: {} rho in [{rho_min:.4}, {rho_max:.4}], C_15={c15:.4}, K3={k3_max:.4}, bound={:.4}",
            fix.name,
            4.0 * c15 * k3_max
        );
        assert!(rho_max <= 4.0 * c15 * k3_max * (1.0 + 1e-12));
    }
}

#[test]
fn criterion_08_atoms_respect_the_duality_bound() {
    for fix in fixtures() {
        let runs = decomps(fix);
        let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED.wrapping_add(2));
        let tests: Vec<TentFunction> = (0..20)
            .map(|_| tentlab::corpus::random_function(&fix.space, &fix.region, &mut rng))
            .collect();
        for &q in &EXPONENTS {
            let qprime = DualExponent::conjugate_of(q);
            let norms: Vec<f64> = tests
                .iter()
                .map(|g| tent_sup_norm(&fix.space, &fix.region, g, qprime, 5.0).value)
                .collect();
            let mut pairs = 0usize;
            for run in runs.iter().filter(|run| run.q == q) {
                for term in &run.d.terms {
                    for (g, &norm) in tests.iter().zip(&norms) {
                        let inner = pairing(&fix.region, &term.atom.values, g).abs();
                        assert!(
                            inner <= norm * (1.0 + 1e-10),
                            "{}: duality bound broke at q={q}: |<a,g>|={inner} > {norm}",
                            fix.name
                        );
                        pairs += 1;
                    }
                }
            }
            println!("criterion 8: {} held on {pairs} pairings at q={q}", fix.name);
        }
    }
}

#[test]
fn criterion_09_dyadic_systems_and_maximal_bounds() {
    for fix in fixtures() {
        let systems = build_shifted_systems(&fix.space).expect("presets are embedded");
        for sys in &systems {
            for gen in &sys.generations {
                let mut seen = vec![false; fix.space.len()];
                for (ci, cube) in gen.cubes.iter().enumerate() {
                    assert!(!cube.members.is_empty() && cube.gamma > 0.0);
                    for &member in &cube.members {
                        let member = member as usize;
                        assert!(!seen[member], "{}: point in two cubes", fix.name);
                        assert_eq!(gen.point_cube[member] as usize, ci);
                        seen[member] = true;
                    }
                }
                assert!(seen.iter().all(|&b| b), "{}: generation misses a point", fix.name);
            }
            for pair in sys.generations.windows(2) {
                let (coarse, fine) = (&pair[0], &pair[1]);
                for cube in &fine.cubes {
                    let parent = coarse.point_cube[cube.members[0] as usize];
                    assert!(
                        cube.members
                            .iter()
                            .all(|&member| coarse.point_cube[member as usize] == parent),
                        "{}: cube split across parents",
                        fix.name
                    );
                }
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(POINT_SEED);
        let mut weak_checks = 0usize;
        for _ in 0..200 {
            let u: Vec<f64> = (0..fix.space.len())
                .map(|_| rng.random_range(-2.0..2.0))
                .collect();
            let sys = &systems[rng.random_range(0..systems.len())];
            let maximal = dyadic_maximal(&fix.space, sys, &u);
            let peak = maximal.iter().copied().fold(0.0f64, f64::max);
            let lambdas: Vec<f64> = (0..10)
                .map(|_| peak * rng.random_range(0.05..1.0))
                .collect();
            let weak = weak11_check(&fix.space, &maximal, &u, &lambdas, 1.0);
            assert_eq!(
                weak.violations, 0,
                "{}: dyadic weak (1,1) violated: {weak:?}",
                fix.name
            );
            weak_checks += weak.checks;
        }

        let scan = containment_scan(&fix.space, &systems, 1.0, SamplePolicy::Exhaustive);
        assert!(
            scan.all_contained(),
            "{}: {} of {} admissible balls uncontained",
            fix.name,
            scan.balls_checked - scan.balls_contained,
            scan.balls_checked
        );
        assert!(scan.c_x.is_finite() && scan.c_x > 0.0);

        for _ in 0..5 {
            let u: Vec<f64> = (0..fix.space.len())
                .map(|_| rng.random_range(-2.0..2.0))
                .collect();
            let domination = domination_check(&fix.space, &systems, &u, 1.0, scan.c_tilde);
            assert!(
                domination.pass,
                "{}: domination broke: {domination:?}",
                fix.name
            );
        }
        println!(
            "criterion 9: {} systems={} weak checks={weak_checks} c_X={:.4} c_tilde={:.4}",
            fix.name,
            systems.len(),
            scan.c_x,
            scan.c_tilde
        );
    }
}

#[test]
fn criterion_10_cone_covering_on_the_plane() {
    let fix = plane();
    assert_eq!(direction_net(2).expect("plane net").len(), 13);
    let params = LdaParams::measure(&fix.space);

    let sets = open_set_corpus(&fix.space, SET_SEED.wrapping_add(1), 50);
    let mut rng = ChaCha8Rng::seed_from_u64(APEX_SEED);
    let certificates: Vec<(Vec<bool>, usize)> = sets
        .into_iter()
        .map(|mask| {
            let inside: Vec<usize> = (0..fix.space.len()).filter(|&i| mask[i]).collect();
            let x = inside[rng.random_range(0..inside.len())];
            (mask, x)
        })
        .collect();
    certificates.par_iter().for_each(|(mask, x)| {
        let cover = cone_cover(&fix.space, &fix.region, mask, *x, &params)
            .expect("plane covers build");
        assert!(
            cover.certificate.pass,
            "cone cover certificate failed at x={x}: {:?}",
            cover.certificate
        );
    });

    let mut pointwise_checks = 0usize;
    let mut worst_quotient = 0.0f64;
    for f in fix.functions.iter().take(10) {
        for &q in &EXPONENTS {
            let peak = conical_averages(&fix.space, &fix.region, f, q, 1.0)
                .into_iter()
                .fold(0.0f64, f64::max);
            if peak <= 0.0 {
                continue;
            }
            for frac in [0.3, 0.6, 0.95] {
                let rep =
                    pointwise_extension_check(&fix.space, &fix.region, f, q, peak * frac, &params)
                        .expect("plane pointwise check");
                assert!(rep.pass, "pointwise direction budget broke: {rep:?}");
                assert_eq!(rep.net_size, 13);
                worst_quotient = worst_quotient.max(rep.worst / rep.bound.max(1e-300));
                pointwise_checks += 1;
            }
        }
    }
    assert!(pointwise_checks > 0);

    let comparison = geodesic_comparison_check(APEX_SEED, 4000);
    let divergence = geodesic_divergence_check(APEX_SEED.wrapping_add(1), 4000);
    assert!(
        comparison.worst_excess <= 1e-12,
        "chord comparison excess {:.3e}",
        comparison.worst_excess
    );
    assert!(
        divergence.worst_excess <= 1e-12,
        "divergence excess {:.3e}",
        divergence.worst_excess
    );
    println!(
        "criterion 10: 50 covers, {pointwise_checks} pointwise checks (worst quotient {worst_quotient:.4}), geometry excesses {:.2e}/{:.2e}",
        comparison.worst_excess, divergence.worst_excess
    );
}

#[test]
fn criterion_11_reports_are_byte_identical_per_seed() {
    let config = ScenarioConfig {
        space: "uniform_local".into(),
        levels: Some(10),
        corpus_size: 8,
        set_count: 8,
        seed: 2026,
        ..ScenarioConfig::default()
    };
    let first = run_suite(&config).expect("suite runs");
    let second = run_suite(&config).expect("suite runs");
    assert!(first.all_passed(), "failed: {:?}", first.failed_names());
    assert_eq!(first.to_json(), second.to_json());
    println!(
        "criterion 11: {} checks serialized identically twice",
        first.checks.len()
    );
}
