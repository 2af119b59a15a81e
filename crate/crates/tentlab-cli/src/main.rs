//! Command-line front end for the tentlab certification library.
//!
//! Every subcommand builds a weighted point cloud, runs the requested
//! computation, and emits a versioned report. Without `--out` the report
//! goes to stdout in the chosen format; with `--out DIR` it is written as
//! `report.json` or `report.csv` next to any tabular artifacts and
//! per-curve plot data. Exit code 0 means every assertive check passed,
//! 1 means at least one failed, and 2 means the invocation itself was
//! unusable.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use tentlab::atomic::{
    atomic_decompose, equivalence_ratio, reconstruction_error, validate_atom, AtomReport,
    Decomposition, ATOM_NORM_RTOL, ATOM_SIZE_RTOL,
};
use tentlab::cone_cover::{cone_cover, extension, ConeCoverError, LdaParams};
use tentlab::corpus::{open_set_corpus, random_function};
use tentlab::dyadic::{
    build_shifted_systems, dyadic_maximal, fefferman_stein_ratios, lattice_local_maximal,
    local_maximal, weak11_check,
};
use tentlab::functionals::{tent_sup_norm, tpq_norm, tqq_norm_direct, DualExponent, TentFunction};
use tentlab::geometry::{tent_of_ball, RegionGrid, TimeGrid};
use tentlab::presets::{default_levels, load_space, preset};
use tentlab::report::{CertificationReport, CheckRecord, CheckStatus, Curve};
use tentlab::space::{Ball, DiscreteSpace};
use tentlab::suite::{run_suite_on, ScenarioConfig, SuiteSelection};

#[derive(Parser, Debug)]
#[command(name = "tentlab", version, about = "Certification harness for tent spaces on weighted point clouds", long_about = None)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Certify the metric, the weights, and the doubling constants of a space.
    Space(CommonArgs),
    /// Certify the region discretization and the tent geometry over it.
    Region(CommonArgs),
    /// Evaluate tent norms of one function across the configured apertures.
    Norms(NormsArgs),
    /// Decompose a function into atoms; emits the term table and a
    /// certification block for the reconstruction and the atom bounds.
    Decompose(DecomposeArgs),
    /// Decompose a function and re-run every atom certificate.
    VerifyAtoms(DecomposeArgs),
    /// Evaluate a maximal operator on a point function.
    Maximal(MaximalArgs),
    /// Build cone covering certificates over random open sets.
    Conecover(ConecoverArgs),
    /// Run the full certification suite.
    Suite(CommonArgs),
}

/// Flags shared by every subcommand. Values given here override the
/// corresponding fields of `--config`.
#[derive(Args, Debug)]
struct CommonArgs {
    /// Scenario configuration JSON.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Preset name (gaussian_line, gaussian_plane, uniform_local,
    /// polynomial_line) or path to a space description JSON.
    #[arg(long)]
    space: Option<String>,
    /// Time-grid level count.
    #[arg(long)]
    levels: Option<usize>,
    /// Seed for every random corpus.
    #[arg(long)]
    seed: Option<u64>,
    /// Directory for report files; stdout when absent.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Run independent checks on worker threads.
    #[arg(long)]
    parallel: bool,
    /// Attach wall-clock timings to check records.
    #[arg(long)]
    timings: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct NormsArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Function input: point_mass, tent_indicator, random_seeded(SEED), or
    /// a CSV path with node,value rows.
    #[arg(long, default_value = "random_seeded(7)")]
    function: String,
    /// Outer Lebesgue exponent.
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    /// Aperture-average exponent.
    #[arg(long, default_value_t = 2.0)]
    q: f64,
}

#[derive(Args, Debug)]
struct DecomposeArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Function input, as in `norms`.
    #[arg(long, default_value = "random_seeded(7)")]
    function: String,
    /// Aperture-average exponent of the decomposed norm.
    #[arg(long, default_value_t = 2.0)]
    q: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MaxOp {
    Dyadic,
    Local,
    Lattice,
}

#[derive(Args, Debug)]
struct MaximalArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Admissibility level of the balls the operator averages over.
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    /// Operator variant.
    #[arg(long, value_enum, default_value_t = MaxOp::Local)]
    op: MaxOp,
    /// Input: random_seeded(SEED) or a CSV path with point,value rows;
    /// extra value columns become lattice components.
    #[arg(long, default_value = "random_seeded(7)")]
    input: String,
    /// Also run the operator's distributional checks: the weak (1,1)
    /// scan for dyadic and local, norm growth ratios for lattice.
    #[arg(long)]
    report: bool,
}

#[derive(Args, Debug)]
struct ConecoverArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Number of random open sets to cover.
    #[arg(long, default_value_t = 10)]
    trials: usize,
    /// Seed for the random sets; scenario seed plus one when absent.
    #[arg(long)]
    set_seed: Option<u64>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TENTLAB_LOG", "warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Space(args) => {
            let mut only = SuiteSelection::none();
            only.space = true;
            run_selected(args, only)
        }
        Command::Region(args) => {
            let mut only = SuiteSelection::none();
            only.geometry = true;
            run_selected(args, only)
        }
        Command::Suite(args) => {
            let config = scenario(args)?;
            let (space, label) = build_space(&config)?;
            let report = run_suite_on(&space, &label, &config)?;
            finish(report, args)
        }
        Command::Norms(args) => run_norms(args),
        Command::Decompose(args) => run_decompose(args, true),
        Command::VerifyAtoms(args) => run_decompose(args, false),
        Command::Maximal(args) => run_maximal(args),
        Command::Conecover(args) => run_conecover(args),
    }
}

fn run_selected(args: &CommonArgs, suites: SuiteSelection) -> Result<bool> {
    let mut config = scenario(args)?;
    config.suites = suites;
    let (space, label) = build_space(&config)?;
    let report = run_suite_on(&space, &label, &config)?;
    finish(report, args)
}

/// Layers the scenario: defaults, then the config file, then the flags.
fn scenario(args: &CommonArgs) -> Result<ScenarioConfig> {
    let mut config: ScenarioConfig = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))?;
            serde_json::from_str(&text)
                .with_context(|| format!("parsing config {}", path.display()))?
        }
        None => ScenarioConfig::default(),
    };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(levels) = args.levels {
        config.levels = Some(levels);
    }
    if let Some(spec) = &args.space {
        if spec.ends_with(".json") || Path::new(spec).is_file() {
            config.space_file = Some(PathBuf::from(spec));
        } else {
            config.space = spec.clone();
            config.space_file = None;
        }
    }
    if args.parallel {
        config.parallel = true;
    }
    if args.timings {
        config.timings = true;
    }
    config.validate()?;
    Ok(config)
}

fn build_space(config: &ScenarioConfig) -> Result<(DiscreteSpace, String)> {
    match &config.space_file {
        Some(path) => {
            let space = load_space(path)
                .with_context(|| format!("loading space {}", path.display()))?;
            Ok((space, path.display().to_string()))
        }
        None => Ok((preset(&config.space)?, config.space.clone())),
    }
}

/// Space and region shared by the single-object subcommands.
struct Workbench {
    config: ScenarioConfig,
    label: String,
    space: DiscreteSpace,
    region: RegionGrid,
}

fn workbench(args: &CommonArgs) -> Result<Workbench> {
    let config = scenario(args)?;
    let (space, label) = build_space(&config)?;
    let levels = config
        .levels
        .unwrap_or_else(|| default_levels(&config.space));
    let grid = TimeGrid::default_for_space(&space, levels)?;
    let region = RegionGrid::build(&space, &grid)?;
    Ok(Workbench {
        config,
        label,
        space,
        region,
    })
}

fn finish(report: CertificationReport, args: &CommonArgs) -> Result<bool> {
    emit_report(&report, args)?;
    announce_failures(&report);
    Ok(report.all_passed())
}

fn announce_failures(report: &CertificationReport) {
    if !report.all_passed() {
        eprintln!("failed checks: {}", report.failed_names().join(", "));
    }
}

fn emit_report(report: &CertificationReport, args: &CommonArgs) -> Result<()> {
    match &args.out {
        None => match args.format {
            Format::Json => print!("{}", report.to_json()),
            Format::Csv => print!("{}", checks_csv(report)),
        },
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = match args.format {
                Format::Json => dir.join("report.json"),
                Format::Csv => dir.join("report.csv"),
            };
            let body = match args.format {
                Format::Json => report.to_json(),
                Format::Csv => checks_csv(report),
            };
            fs::write(&path, body).with_context(|| format!("writing {}", path.display()))?;
            for curve in &report.curves {
                let curve_path = dir.join(format!("curve_{}.csv", curve.name));
                fs::write(&curve_path, curve_csv(curve))
                    .with_context(|| format!("writing {}", curve_path.display()))?;
            }
            info!("wrote {}", path.display());
        }
    }
    Ok(())
}

fn csv_to_string(writer: csv::Writer<Vec<u8>>) -> String {
    let bytes = writer.into_inner().expect("flushing to memory");
    String::from_utf8(bytes).expect("csv output is utf8")
}

fn status_str(status: CheckStatus) -> &'static str {
    match status {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Report => "report",
    }
}

fn fold_constants(map: &BTreeMap<String, f64>) -> String {
    let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join("; ")
}

fn fold_witness(map: &BTreeMap<String, String>) -> String {
    let parts: Vec<String> = map.iter().map(|(k, v)| format!("{k}={v}")).collect();
    parts.join("; ")
}

/// One row per check; key-value maps fold into `k=v; ...` cells.
fn checks_csv(report: &CertificationReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "name",
        "status",
        "anchor",
        "constants",
        "tolerances",
        "witness",
        "wall_ms",
    ])
    .expect("seven header fields");
    for check in &report.checks {
        w.write_record([
            check.name.as_str(),
            status_str(check.status),
            check.anchor.as_str(),
            &fold_constants(&check.constants),
            &fold_constants(&check.tolerances),
            &fold_witness(&check.witness),
            &check.wall_ms.map(|ms| ms.to_string()).unwrap_or_default(),
        ])
        .expect("seven fields per row");
    }
    csv_to_string(w)
}

fn curve_csv(curve: &Curve) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([curve.x_label.as_str(), curve.y_label.as_str()])
        .expect("two header fields");
    for &(x, y) in &curve.points {
        w.write_record([x.to_string(), y.to_string()])
            .expect("two fields per row");
    }
    csv_to_string(w)
}

/// Accepts `random_seeded(SEED)` and returns the seed, or `None` when the
/// spec is something else entirely.
fn parse_seeded(spec: &str) -> Result<Option<u64>> {
    let Some(rest) = spec.strip_prefix("random_seeded(") else {
        return Ok(None);
    };
    let inner = rest
        .strip_suffix(')')
        .ok_or_else(|| anyhow!("malformed `{spec}`; expected random_seeded(SEED)"))?;
    let seed = inner
        .trim()
        .parse()
        .with_context(|| format!("seed in `{spec}`"))?;
    Ok(Some(seed))
}

/// Builds a region function from its command-line description.
fn parse_function(spec: &str, space: &DiscreteSpace, region: &RegionGrid) -> Result<TentFunction> {
    match spec {
        "point_mass" => {
            let point = space.len() / 2;
            let level = region.levels().len() / 2;
            let node = region
                .node_id(point, level)
                .ok_or_else(|| anyhow!("the region has no node over the middle point"))?;
            Ok(TentFunction::point_mass(node, 1.0))
        }
        "tent_indicator" => {
            let center = space.len() / 2;
            let ball = Ball::new(center, 0.8 * space.m(center));
            let nodes = tent_of_ball(space, region, &ball);
            if nodes.count() == 0 {
                bail!("the middle tent is empty at this resolution; raise --levels");
            }
            Ok(TentFunction::indicator(&nodes))
        }
        _ => {
            if let Some(seed) = parse_seeded(spec)? {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                return Ok(random_function(space, region, &mut rng));
            }
            let rows = read_indexed_csv(Path::new(spec), region.len(), "node")?;
            if rows.is_empty() {
                bail!("{spec} holds no node,value rows");
            }
            Ok(TentFunction::from_pairs(
                rows.into_iter().map(|(node, values)| (node, values[0])),
            ))
        }
    }
}

/// Point functions for the maximal operators: one inner vector per value
/// column of the CSV, or `count` random components.
fn parse_point_input(spec: &str, space: &DiscreteSpace, count: usize) -> Result<Vec<Vec<f64>>> {
    if let Some(seed) = parse_seeded(spec)? {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..count.max(1))
            .map(|_| (0..space.len()).map(|_| rng.random_range(0.0..2.0)).collect())
            .collect());
    }
    let rows = read_indexed_csv(Path::new(spec), space.len(), "point")?;
    if rows.is_empty() {
        bail!("{spec} holds no point,value rows");
    }
    let width = rows[0].1.len();
    if rows.iter().any(|(_, values)| values.len() != width) {
        bail!("{spec}: rows have unequal value column counts");
    }
    let mut components = vec![vec![0.0f64; space.len()]; width];
    for (point, values) in rows {
        for (component, &v) in components.iter_mut().zip(&values) {
            component[point] = v;
        }
    }
    Ok(components)
}

/// Rows of `index, value [, value ...]`; a leading non-numeric row is
/// treated as a header and `#` starts a comment line.
fn read_indexed_csv(
    path: &Path,
    index_bound: usize,
    index_name: &str,
) -> Result<Vec<(usize, Vec<f64>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut rows = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("reading {}", path.display()))?;
        if record.len() < 2 {
            bail!(
                "{} line {}: expected {index_name},value columns",
                path.display(),
                line + 1
            );
        }
        if line == 0 && record[0].parse::<usize>().is_err() {
            continue;
        }
        let index: usize = record[0].parse().with_context(|| {
            format!("{} line {}: {index_name} column", path.display(), line + 1)
        })?;
        if index >= index_bound {
            bail!(
                "{} line {}: {index_name} {} is out of range (the space has {})",
                path.display(),
                line + 1,
                index,
                index_bound
            );
        }
        let mut values = Vec::with_capacity(record.len() - 1);
        for field in record.iter().skip(1) {
            values.push(field.parse::<f64>().with_context(|| {
                format!("{} line {}: value column", path.display(), line + 1)
            })?);
        }
        rows.push((index, values));
    }
    Ok(rows)
}

fn rel_gap(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

fn run_norms(args: &NormsArgs) -> Result<bool> {
    if args.p < 1.0 || args.q < 1.0 {
        bail!("norms need p >= 1 and q >= 1");
    }
    let bench = workbench(&args.common)?;
    let f = parse_function(&args.function, &bench.space, &bench.region)?;
    let mut report = CertificationReport::new(bench.label.clone(), bench.config.seed);

    let mut norms = CheckRecord::new("tent_norms", "t^{p,q} norms across the configured apertures")
        .constant("p", args.p)
        .constant("q", args.q)
        .constant("support_nodes", f.support_len() as f64)
        .witness("function", &args.function);
    for &alpha in &bench.config.apertures {
        let value = tpq_norm(&bench.space, &bench.region, &f, args.p, args.q, alpha);
        norms = norms.constant(format!("norm_alpha_{alpha}"), value);
    }
    report.checks.push(norms);

    let via_cone = tpq_norm(&bench.space, &bench.region, &f, args.q, args.q, 1.0);
    let direct = tqq_norm_direct(&bench.space, &bench.region, &f, args.q, 1.0);
    let gap = rel_gap(via_cone, direct);
    report.checks.push(
        CheckRecord::new(
            "diagonal_norm_identity",
            "p = q norm agrees with the direct node sum",
        )
        .constant("via_cone", via_cone)
        .constant("direct", direct)
        .constant("rel_gap", gap)
        .tolerance("rel_gap", 1e-11)
        .passing(gap <= 1e-11),
    );

    let qprime = DualExponent::conjugate_of(args.q);
    let sup = tent_sup_norm(&bench.space, &bench.region, &f, qprime, 1.0);
    let mut dual = CheckRecord::new("dual_sup_norm", "t^{inf,q'} norm over 1-admissible balls")
        .constant("value", sup.value)
        .constant("balls_scanned", sup.balls_scanned as f64);
    if let Some(ball) = sup.witness {
        dual = dual
            .constant("witness_center", ball.center as f64)
            .constant("witness_radius", ball.radius);
    }
    report.checks.push(dual);

    finish(report, &args.common)
}

fn decomposition_report(
    bench: &Workbench,
    f: &TentFunction,
    d: &Decomposition,
    atoms: &[AtomReport],
) -> CertificationReport {
    let mut report = CertificationReport::new(bench.label.clone(), bench.config.seed);

    let rec_err = reconstruction_error(bench.region.len(), f, d);
    let mut rec = CheckRecord::new(
        "atomic_decomposition",
        "terms reassemble the function on every node",
    )
    .constant("term_count", d.terms.len() as f64)
    .constant("lambda_sum", d.lambda_sum())
    .constant("reconstruction_error", rec_err)
    .constant("q", d.q)
    .tolerance("reconstruction_error", 1e-10)
    .passing(rec_err <= 1e-10);
    if let Some((k_min, k_max)) = d.k_range {
        rec = rec
            .constant("k_min", k_min as f64)
            .constant("k_max", k_max as f64);
    }
    report.checks.push(rec);

    let failures = atoms.iter().filter(|a| !a.pass).count();
    let mut worst_size_ratio = 0.0f64;
    let mut worst_norm = 0.0f64;
    for atom in atoms {
        if atom.size_bound > 0.0 {
            worst_size_ratio = worst_size_ratio.max(atom.size_value / atom.size_bound);
        }
        worst_norm = worst_norm.max(atom.norm_value);
    }
    report.checks.push(
        CheckRecord::new(
            "atom_certificates",
            "support, size, and norm bounds of every atom",
        )
        .constant("atoms_checked", atoms.len() as f64)
        .constant("failures", failures as f64)
        .constant("worst_size_ratio", worst_size_ratio)
        .constant("worst_norm", worst_norm)
        .tolerance("size_rtol", ATOM_SIZE_RTOL)
        .tolerance("norm_rtol", ATOM_NORM_RTOL)
        .passing(failures == 0),
    );

    let eq = equivalence_ratio(&bench.space, &bench.region, f, d);
    report.checks.push(
        CheckRecord::new(
            "norm_equivalence",
            "coefficient sum against the tent norm of the input",
        )
        .constant("lambda_sum", eq.lambda_sum)
        .constant("f_norm", eq.f_norm)
        .constant("rho", eq.rho)
        .constant("k3", eq.k3),
    );
    report
}

fn term_table_csv(d: &Decomposition, atoms: &[AtomReport]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "k",
        "j",
        "lambda",
        "ball_center",
        "ball_radius",
        "atom_size",
        "atom_norm",
    ])
    .expect("seven header fields");
    for (term, atom) in d.terms.iter().zip(atoms) {
        w.write_record([
            term.k.to_string(),
            term.j.to_string(),
            term.lambda.to_string(),
            term.atom.ball.center.to_string(),
            term.atom.ball.radius.to_string(),
            atom.size_value.to_string(),
            atom.norm_value.to_string(),
        ])
        .expect("seven fields per row");
    }
    csv_to_string(w)
}

fn run_decompose(args: &DecomposeArgs, write_terms: bool) -> Result<bool> {
    if args.q < 1.0 {
        bail!("decomposition needs q >= 1");
    }
    let bench = workbench(&args.common)?;
    let f = parse_function(&args.function, &bench.space, &bench.region)?;
    if f.is_zero() {
        bail!("cannot decompose the zero function");
    }
    let d = atomic_decompose(&bench.space, &bench.region, &f, args.q);
    let atoms: Vec<AtomReport> = d
        .terms
        .iter()
        .map(|term| validate_atom(&bench.space, &bench.region, &term.atom))
        .collect();
    let report = decomposition_report(&bench, &f, &d, &atoms);

    match (&args.common.out, write_terms) {
        (Some(dir), true) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let table_path = dir.join("terms.csv");
            fs::write(&table_path, term_table_csv(&d, &atoms))
                .with_context(|| format!("writing {}", table_path.display()))?;
            emit_report(&report, &args.common)?;
        }
        (None, true) => match args.common.format {
            Format::Csv => print!("{}", term_table_csv(&d, &atoms)),
            Format::Json => print!("{}", report.to_json()),
        },
        (_, false) => emit_report(&report, &args.common)?,
    }
    announce_failures(&report);
    Ok(report.all_passed())
}

fn run_maximal(args: &MaximalArgs) -> Result<bool> {
    if args.alpha <= 0.0 {
        bail!("alpha must be positive");
    }
    let bench = workbench(&args.common)?;
    let component_count = if args.op == MaxOp::Lattice { 3 } else { 1 };
    let components = parse_point_input(&args.input, &bench.space, component_count)?;
    if components
        .iter()
        .all(|u| u.iter().all(|&v| v == 0.0))
    {
        bail!("the input function is identically zero");
    }
    let u = &components[0];

    let mut report = CertificationReport::new(bench.label.clone(), bench.config.seed);
    report.checks.push(
        CheckRecord::new("maximal_summary", "operator evaluation bookkeeping")
            .constant("alpha", args.alpha)
            .constant("points", bench.space.len() as f64)
            .constant("components", components.len() as f64)
            .witness(
                "op",
                match args.op {
                    MaxOp::Dyadic => "dyadic",
                    MaxOp::Local => "local",
                    MaxOp::Lattice => "lattice",
                },
            )
            .witness("input", &args.input),
    );

    let mut columns: Vec<(String, Vec<f64>)> = Vec::new();
    match args.op {
        MaxOp::Dyadic => {
            let systems =
                build_shifted_systems(&bench.space).context("building dyadic systems")?;
            for (s, system) in systems.iter().enumerate() {
                columns.push((
                    format!("dyadic_{s}"),
                    dyadic_maximal(&bench.space, system, u),
                ));
            }
            if args.report {
                let lambdas = threshold_grid(&columns);
                for (s, (_, maximal)) in columns.iter().enumerate() {
                    let w = weak11_check(&bench.space, maximal, u, &lambdas, 1.0);
                    report.checks.push(
                        CheckRecord::new(
                            format!("dyadic_weak_type_{s}"),
                            "weak (1,1) bound with constant one",
                        )
                        .constant("worst_ratio", w.worst_ratio)
                        .constant("thresholds", w.checks as f64)
                        .passing(w.violations == 0),
                    );
                }
            }
        }
        MaxOp::Local => {
            columns.push(("local".into(), local_maximal(&bench.space, u, args.alpha)));
            if args.report {
                let lambdas = threshold_grid(&columns);
                let w = weak11_check(&bench.space, &columns[0].1, u, &lambdas, f64::INFINITY);
                report.checks.push(
                    CheckRecord::new("local_weak_type", "measured weak (1,1) quotient")
                        .constant("worst_ratio", w.worst_ratio)
                        .constant("thresholds", w.checks as f64),
                );
            }
        }
        MaxOp::Lattice => {
            for (k, values) in lattice_local_maximal(&bench.space, &components, args.alpha)
                .into_iter()
                .enumerate()
            {
                columns.push((format!("lattice_{k}"), values));
            }
            if args.report {
                let ratios = fefferman_stein_ratios(
                    &bench.space,
                    &components,
                    args.alpha,
                    2.0,
                    &[1.0, 2.0, 4.0],
                );
                let mut rec = CheckRecord::new(
                    "lattice_norm_ratios",
                    "L^p(l^2) growth under the componentwise operator",
                );
                for (p, ratio) in ratios {
                    rec = rec.constant(format!("ratio_p_{p}"), ratio);
                }
                report.checks.push(rec);
            }
        }
    }

    match &args.common.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let values_path = dir.join("maximal.csv");
            fs::write(&values_path, values_csv(&components, &columns))
                .with_context(|| format!("writing {}", values_path.display()))?;
            emit_report(&report, &args.common)?;
        }
        None => match args.common.format {
            Format::Csv => print!("{}", values_csv(&components, &columns)),
            Format::Json => print!("{}", report.to_json()),
        },
    }
    announce_failures(&report);
    Ok(report.all_passed())
}

/// Ten evenly spaced thresholds below the largest maximal value.
fn threshold_grid(columns: &[(String, Vec<f64>)]) -> Vec<f64> {
    let peak = columns
        .iter()
        .flat_map(|(_, values)| values.iter())
        .fold(0.0f64, |acc, &v| acc.max(v));
    (1..=10).map(|i| peak * i as f64 / 11.0).collect()
}

fn values_csv(components: &[Vec<f64>], columns: &[(String, Vec<f64>)]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["point".to_string()];
    for k in 0..components.len() {
        header.push(format!("u_{k}"));
    }
    for (name, _) in columns {
        header.push(name.clone());
    }
    w.write_record(&header).expect("header row");
    let n = components.first().map_or(0, Vec::len);
    for x in 0..n {
        let mut row = vec![x.to_string()];
        for component in components {
            row.push(component[x].to_string());
        }
        for (_, values) in columns {
            row.push(values[x].to_string());
        }
        w.write_record(&row).expect("matching row width");
    }
    csv_to_string(w)
}

fn run_conecover(args: &ConecoverArgs) -> Result<bool> {
    if args.trials == 0 {
        bail!("trials must be positive");
    }
    let bench = workbench(&args.common)?;
    let params = LdaParams::measure(&bench.space);
    let seed = args
        .set_seed
        .unwrap_or_else(|| bench.config.seed.wrapping_add(1));
    let sets = open_set_corpus(&bench.space, seed, args.trials);
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));

    let mut report = CertificationReport::new(bench.label.clone(), bench.config.seed);
    report.checks.push(
        CheckRecord::new("sector_parameters", "measured extension and sector constants")
            .constant("beta", params.beta)
            .constant("alpha", params.alpha)
            .constant("lambda", params.lambda)
            .constant("a_beta", params.a_beta)
            .witness("beta_source", LdaParams::BETA_SOURCE),
    );

    let mut table = csv::Writer::from_writer(Vec::new());
    table
        .write_record([
            "trial",
            "apex",
            "set_points",
            "extension_points",
            "cone_nodes",
            "escaped_nodes",
            "uncovered_nodes",
            "pass",
        ])
        .expect("eight header fields");
    let mut covered = 0usize;
    let mut failures = 0usize;
    let mut skipped = 0usize;
    let mut worst_uncovered = 0usize;
    for (trial, set) in sets.iter().enumerate() {
        let inside: Vec<usize> = set
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
            .collect();
        if inside.is_empty() || inside.len() == bench.space.len() {
            skipped += 1;
            continue;
        }
        let x = inside[rng.random_range(0..inside.len())];
        let ext = extension(&bench.space, set, &params);
        let extension_points = ext.mask.iter().filter(|&&b| b).count();
        match cone_cover(&bench.space, &bench.region, set, x, &params) {
            Ok(cover) => {
                let cert = &cover.certificate;
                if cert.pass {
                    covered += 1;
                } else {
                    failures += 1;
                }
                worst_uncovered = worst_uncovered.max(cert.uncovered_nodes);
                table
                    .write_record([
                        trial.to_string(),
                        x.to_string(),
                        inside.len().to_string(),
                        extension_points.to_string(),
                        cert.cone_nodes.to_string(),
                        cert.escaped_nodes.to_string(),
                        cert.uncovered_nodes.to_string(),
                        cert.pass.to_string(),
                    ])
                    .expect("eight fields per row");
            }
            Err(ConeCoverError::SetEmptyOrFull) => skipped += 1,
            Err(err @ ConeCoverError::NotEmbedded)
            | Err(err @ ConeCoverError::UnsupportedDimension(_)) => {
                return Err(anyhow!(err).context("cone covers need a 1- or 2-dimensional cloud"));
            }
            Err(err) => return Err(anyhow!(err)),
        }
    }
    report.checks.push(
        CheckRecord::new(
            "cone_cover_certificates",
            "every cone node over the set escapes it or is direction-covered",
        )
        .constant("trials", sets.len() as f64)
        .constant("covered", covered as f64)
        .constant("failures", failures as f64)
        .constant("skipped", skipped as f64)
        .constant("worst_uncovered_nodes", worst_uncovered as f64)
        .passing(failures == 0 && covered > 0),
    );

    let table = csv_to_string(table);
    match &args.common.out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let table_path = dir.join("trials.csv");
            fs::write(&table_path, &table)
                .with_context(|| format!("writing {}", table_path.display()))?;
            emit_report(&report, &args.common)?;
        }
        None => match args.common.format {
            Format::Csv => print!("{table}"),
            Format::Json => print!("{}", report.to_json()),
        },
    }
    announce_failures(&report);
    Ok(report.all_passed())
}
