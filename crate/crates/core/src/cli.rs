//! The `hamlab` command line.
//!
//! Every subcommand writes one [`RunReport`] as JSON to `--out` or stdout and
//! a short human summary to stderr. Exit codes: 0 all checks passed, 1 a check
//! failed, 2 usage or input error, 3 internal inconsistency.

use std::ffi::OsString;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::error::Error;
use crate::gibbs::{
    boundary_law_residual, boundary_laws, brute_force_partition, compatibility_residual,
    count_ti_gibbs, leaf_summed_partition, log_partition_function, model_from_constructed,
    model_from_xi, shell_size, CompatibilityOptions, TreeModel,
};
use crate::input::{KernelSpec, KernelSpecFile, Table};
use crate::kernel::{analytic_fixed_point, build_kernel, positivity_check, zeta0, zeta0_exact};
use crate::operators::{h_residual, uniqueness_certificate, Kernel};
use crate::quadrature::{GridFunction, QuadratureRule};
use crate::report::{Check, RunReport, Solution};
use crate::solver::{count_fixed_points, multi_start, SeedSpec, SolveConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "HAMLAB_THREADS";

/// Largest enumeration the brute-force partition cross-check attempts.
const BRUTE_FORCE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Parser)]
#[command(
    name = "hamlab",
    version,
    about = "Positive solutions of homogeneous Hammerstein equations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build K_(n,p)(·,·;k) and check its positivity on a grid.
    BuildKernel(BuildKernelArgs),
    /// Check the designed fixed points g_j and the biorthogonality of φ_s.
    Verify(VerifyArgs),
    /// Multi-start search for fixed points of R_α.
    Solve(SolveArgs),
    /// Sufficient condition for a unique positive fixed point.
    Uniqueness(UniquenessArgs),
    /// Boundary laws and finite-volume compatibility on the Cayley tree.
    Gibbs(GibbsArgs),
}

#[derive(Debug, Args)]
pub struct BuildKernelArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub k: u64,
    /// Points per side of the positivity grid.
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,
    /// Also write the kernel sampled on a uniform grid as a table.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, default_value_t = 101)]
    pub table_grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub p: usize,
    #[arg(long)]
    pub k: u64,
    #[arg(long, default_value_t = 32)]
    pub nodes: usize,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub kernel_spec: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    /// Comma-separated: constant[:c], random[:count], designed[:j], file:<path>.
    #[arg(long, default_value = "constant")]
    pub seeds: String,
    #[arg(long, default_value_t = 0.5)]
    pub damping: f64,
    /// Residual tolerance; defaults to 1e-9, or 1e-6 for α > 10⁶.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1e-4)]
    pub dedupe_tol: f64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct UniquenessArgs {
    #[arg(long)]
    pub kernel_spec: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1001)]
    pub grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GibbsArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub p: Option<usize>,
    #[arg(long)]
    pub k: Option<u64>,
    /// Interaction ξ as a table; Q = exp(Jβξ).
    #[arg(long)]
    pub xi_table: Option<PathBuf>,
    #[arg(long = "J")]
    pub coupling: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Tree order for `--xi-table` models.
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub depth: usize,
    #[arg(long, default_value_t = 16)]
    pub nodes: usize,
    #[arg(long, default_value_t = 4)]
    pub random_seeds: usize,
    /// Largest acceptable compatibility residual.
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub rng_seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A run that could not start or finish, with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::InvalidParameter(_)
            | Error::Parse(_)
            | Error::Io(_)
            | Error::Domain(_)
            | Error::Evaluation { .. } => EXIT_USAGE,
            Error::SingularMatrix(_)
            | Error::PreconditionViolation { .. }
            | Error::Divergence { .. } => EXIT_INTERNAL,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}

type Outcome = std::result::Result<RunReport, Failure>;

/// Parses `args` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    if let Err(failure) = configure_threads() {
        eprintln!("error: {}", failure.message);
        return failure.code;
    }
    let echo: Vec<String> = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let start = Instant::now();
    let (outcome, out) = match &cli.command {
        Command::BuildKernel(a) => (build_kernel_cmd(a, echo), &a.out),
        Command::Verify(a) => (verify_cmd(a, echo), &a.out),
        Command::Solve(a) => (solve_cmd(a, echo), &a.out),
        Command::Uniqueness(a) => (uniqueness_cmd(a, echo), &a.out),
        Command::Gibbs(a) => (gibbs_cmd(a, echo), &a.out),
    };
    match outcome {
        Ok(mut report) => {
            report
                .timings_ms
                .insert("total".into(), start.elapsed().as_secs_f64() * 1e3);
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for c in &report.checks {
                eprintln!(
                    "{} {}: {}",
                    if c.passed { "pass" } else { "FAIL" },
                    c.name,
                    describe(c)
                );
            }
            if let Err(err) = report.write(out.as_deref()) {
                eprintln!("error: {err}");
                return EXIT_USAGE;
            }
            let internal = report
                .data
                .get("internal_failure")
                .and_then(|v| v.as_bool())
                .unwrap_or(false);
            if internal {
                EXIT_INTERNAL
            } else if report.all_passed() {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

fn describe(c: &Check) -> String {
    let mut parts = Vec::new();
    if let Some(m) = c.measured {
        parts.push(format!("measured {m:e}"));
    }
    if let Some(t) = c.threshold {
        parts.push(format!("threshold {t:e}"));
    }
    if let Some(d) = &c.detail {
        parts.push(d.clone());
    }
    parts.join(", ")
}

fn configure_threads() -> std::result::Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Failure::usage(format!(
            "{THREADS_ENV} must be a positive integer, got `{raw}`"
        ))
    })?;
    // a pool built earlier in the same process stays in place
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

fn gauss_rule(nodes: usize) -> std::result::Result<Arc<QuadratureRule>, Failure> {
    Ok(Arc::new(QuadratureRule::gauss_legendre(nodes)?))
}

fn build_kernel_cmd(a: &BuildKernelArgs, echo: Vec<String>) -> Outcome {
    let mut report = RunReport::new("build-kernel", echo);
    let kernel = build_kernel(a.n, a.p, a.k)?;
    report.param("n", a.n);
    report.param("p", a.p);
    report.param("k", a.k);
    report.param("grid", a.grid);

    let threshold = zeta0(a.n);
    let meets = kernel.meets_positivity_threshold();
    report.datum("zeta0", threshold);
    report.datum("zeta0_exact", zeta0_exact(a.n).to_string());
    report.datum("meets_threshold", meets);
    report.datum(
        "phi_coefficients",
        kernel
            .phis()
            .iter()
            .map(|phi| phi.coeffs.clone())
            .collect::<Vec<_>>(),
    );

    let positivity = positivity_check(&|t, u| kernel.eval(t, u), a.grid)?;
    report.datum("positivity", positivity);
    if meets {
        report.check(Check {
            name: "kernel_min".into(),
            passed: positivity.is_positive(),
            measured: Some(positivity.min_value),
            threshold: Some(0.0),
            detail: Some(format!(
                "strictly positive; argmin (t={}, u={})",
                positivity.argmin.0, positivity.argmin.1
            )),
        });
        if !positivity.is_positive() {
            report.datum("internal_failure", true);
        }
    } else {
        report.warnings.push(format!(
            "k = {} is below ζ₀({}) = {threshold}; positivity is unverified by theory (grid minimum {})",
            a.k, a.n, positivity.min_value
        ));
    }

    if let Some(path) = &a.table {
        if a.table_grid < 2 {
            return Err(Failure::usage("--table-grid needs at least 2 points"));
        }
        let coords = crate::kernel::uniform_grid(a.table_grid);
        let table = Table::from_fn(coords, |t, u| kernel.eval(t, u))?;
        std::fs::write(path, table.to_tsv()).map_err(Error::from)?;
        report.datum("table", path.display().to_string());
    }
    Ok(report)
}

fn verify_cmd(a: &VerifyArgs, echo: Vec<String>) -> Outcome {
    let mut report = RunReport::new("verify", echo);
    if !(a.tol > 0.0) {
        return Err(Failure::usage(format!(
            "--tol must be positive, got {}",
            a.tol
        )));
    }
    report.param("n", a.n);
    report.param("p", a.p);
    report.param("k", a.k);
    report.param("nodes", a.nodes);
    report.param("tol", a.tol);
    let constructed = build_kernel(a.n, a.p, a.k)?;
    if !constructed.meets_positivity_threshold() {
        report
            .warnings
            .push(format!("k = {} is below ζ₀({}) = {}", a.k, a.n, zeta0(a.n)));
    }
    let rule = gauss_rule(a.nodes)?;
    let kernel = Kernel::new(constructed.evaluator(), Arc::clone(&rule))?;
    let mut residuals = Vec::new();
    for j in 1..=a.n {
        let g = analytic_fixed_point(j, a.p, a.k, Arc::clone(&rule))?;
        let residual = h_residual(&kernel, a.k as f64, &g)?;
        residuals.push(residual);
        report.check(Check::at_most(format!("h_residual_g{j}"), residual, a.tol));
    }
    report.datum("h_residuals", &residuals);

    let mut biorthogonality: f64 = 0.0;
    let mut mean: f64 = 0.0;
    for phi in constructed.phis() {
        for j in 1..=a.n {
            let q = crate::kernel::odd_exponent(a.p, j);
            let moment = rule.integrate_centered(|u| phi.eval(u) * u.powi(q));
            let want = if phi.s == j { 1.0 } else { 0.0 };
            biorthogonality = biorthogonality.max((moment - want).abs());
        }
        mean = mean.max(rule.integrate_centered(|u| phi.eval(u)).abs());
    }
    report.check(Check::at_most("biorthogonality", biorthogonality, a.tol));
    report.check(Check::at_most("phi_mean", mean, a.tol));
    Ok(report)
}

fn parse_seeds(text: &str, spec: &KernelSpec) -> std::result::Result<Vec<SeedSpec>, Failure> {
    let mut seeds = Vec::new();
    for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (name, arg) = match token.split_once(':') {
            Some((name, arg)) => (name, Some(arg)),
            None => (token, None),
        };
        let bad = || Failure::usage(format!("cannot parse seed `{token}`"));
        match (name, arg) {
            ("constant", None) => seeds.push(SeedSpec::Constant(1.0)),
            ("constant", Some(c)) => {
                let c: f64 = c.parse().map_err(|_| bad())?;
                seeds.push(SeedSpec::Constant(c));
            }
            ("random", None) => seeds.push(SeedSpec::Random),
            ("random", Some(count)) => {
                let count: usize = count.parse().map_err(|_| bad())?;
                seeds.extend(std::iter::repeat_n(SeedSpec::Random, count));
            }
            ("designed", arg) => {
                let KernelSpec::Constructed { n, p, .. } = *spec else {
                    return Err(Failure::usage("designed seeds need a constructed kernel"));
                };
                match arg {
                    None => seeds.extend((1..=n).map(|j| SeedSpec::Designed { j, p })),
                    Some(j) => {
                        let j: usize = j.parse().map_err(|_| bad())?;
                        if j == 0 || j > n {
                            return Err(Failure::usage(format!(
                                "designed seed {j} outside 1..={n}"
                            )));
                        }
                        seeds.push(SeedSpec::Designed { j, p });
                    }
                }
            }
            ("file", Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("cannot read seed file {path}: {e}")))?;
                let values = text
                    .split_whitespace()
                    .map(|w| w.parse::<f64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Failure::usage(format!("seed file {path} holds a non-number")))?;
                seeds.push(SeedSpec::Values(values));
            }
            _ => return Err(bad()),
        }
    }
    if seeds.is_empty() {
        return Err(Failure::usage("no seeds given"));
    }
    Ok(seeds)
}

fn solve_cmd(a: &SolveArgs, echo: Vec<String>) -> Outcome {
    let mut report = RunReport::new("solve", echo);
    let spec = KernelSpecFile::read(&a.kernel_spec)?;
    if !(a.alpha > 0.0 && a.alpha.is_finite()) {
        return Err(Failure::usage(format!(
            "--alpha must be positive, got {}",
            a.alpha
        )));
    }
    let seeds = parse_seeds(&a.seeds, &spec.kernel)?;
    let base = SolveConfig::for_alpha(a.alpha);
    let config = SolveConfig {
        damping: a.damping,
        tol: a.tol.unwrap_or(base.tol),
        max_iter: a.max_iter,
        dedupe_tol: a.dedupe_tol,
        seeds,
        rng_seed: a.rng_seed,
        keep_trace: false,
    };
    config.validate()?;
    report.rng_seed = Some(a.rng_seed);
    report.param("kernel_spec", a.kernel_spec.display().to_string());
    report.param("alpha", a.alpha);
    report.param("nodes", spec.nodes);
    report.param("scheme", spec.scheme);
    report.param("config", &config);
    let built = spec.build()?;

    let search = if a.alpha > 1.0 {
        let count = count_fixed_points(&built.kernel, a.alpha, &config)?;
        report.datum("count_r", count.count_r);
        report.datum("count_h", count.count_h);
        report.datum("matched", count.matched);
        report.datum("max_round_trip_r", count.max_round_trip_r);
        report.datum("max_round_trip_h", count.max_round_trip_h);
        count.search
    } else {
        multi_start(&built.kernel, a.alpha, &config)?
    };
    report.datum("runs", &search.runs);
    report.solutions = search.solutions.iter().map(Solution::from).collect();
    report.check(Check::at_least(
        "converged_solutions",
        search.solutions.len() as f64,
        1.0,
    ));
    Ok(report)
}

fn uniqueness_cmd(a: &UniquenessArgs, echo: Vec<String>) -> Outcome {
    let mut report = RunReport::new("uniqueness", echo);
    let spec = KernelSpecFile::read(&a.kernel_spec)?;
    let built = spec.build()?;
    report.param("kernel_spec", a.kernel_spec.display().to_string());
    report.param("alpha", a.alpha);
    report.param("grid", a.grid);
    let certificate = uniqueness_certificate(built.kernel.evaluator().as_ref(), a.alpha, a.grid)?;
    eprintln!(
        "min {:e}  max {:e}  min(t=0) {:e}  max(t=0) {:e}",
        certificate.extrema.min,
        certificate.extrema.max,
        certificate.extrema.min_zero_row,
        certificate.extrema.max_zero_row
    );
    eprintln!(
        "lhs {:e}  1/alpha {:e}  verdict {}",
        certificate.lhs, certificate.bound, certificate.verdict
    );
    report.datum("certificate", certificate);
    report.datum("verdict", certificate.verdict.to_string());
    Ok(report)
}

fn gibbs_cmd(a: &GibbsArgs, echo: Vec<String>) -> Outcome {
    let mut report = RunReport::new("gibbs", echo);
    if a.depth == 0 {
        return Err(Failure::usage(
            "--depth must be at least 1 for the compatibility check",
        ));
    }
    let rule = gauss_rule(a.nodes)?;
    report.rng_seed = Some(a.rng_seed);
    report.param("depth", a.depth);
    report.param("nodes", a.nodes);
    report.param("tol", a.tol);
    let options = CompatibilityOptions {
        rng_seed: a.rng_seed,
        ..CompatibilityOptions::default()
    };
    match (a.n, &a.xi_table) {
        (Some(n), None) => {
            let (Some(p), Some(k)) = (a.p, a.k) else {
                return Err(Failure::usage("--n needs --p and --k"));
            };
            if a.coupling.is_some() || a.order.is_some() {
                return Err(Failure::usage(
                    "--J and --order apply to --xi-table models only",
                ));
            }
            report.param("n", n);
            report.param("p", p);
            report.param("k", k);
            report.param("beta", a.beta);
            let model = model_from_constructed(n, p, k, a.beta, Arc::clone(&rule))?;
            report.warnings.extend(model.warnings().iter().cloned());
            let config = SolveConfig {
                rng_seed: a.rng_seed,
                ..SolveConfig::for_alpha(k as f64)
            }
            .with_random_seeds(a.random_seeds);
            let count = count_ti_gibbs(n, p, k, rule, &config)?;
            report.datum("count", count.count);
            report.datum("runs", &count.search.runs);
            if model.warnings().is_empty() {
                report.check(Check::at_least(
                    "ti_gibbs_count",
                    count.count as f64,
                    n as f64,
                ));
            }
            let laws: Vec<GridFunction> =
                count.search.solutions.iter().map(|s| s.f.clone()).collect();
            report.solutions = count.search.solutions.iter().map(Solution::from).collect();
            check_laws(&mut report, &model, &laws, a, &options, false)?;
        }
        (None, Some(path)) => {
            let (Some(coupling), Some(order)) = (a.coupling, a.order) else {
                return Err(Failure::usage("--xi-table needs --J and --order"));
            };
            if a.p.is_some() || a.k.is_some() {
                return Err(Failure::usage(
                    "--p and --k apply to constructed models only",
                ));
            }
            report.param("xi_table", path.display().to_string());
            report.param("J", coupling);
            report.param("beta", a.beta);
            report.param("order", order);
            let xi = Table::read(path)?;
            let model = model_from_xi(xi.evaluator(), order, coupling, a.beta, rule)?;
            let config = SolveConfig {
                rng_seed: a.rng_seed,
                ..SolveConfig::for_alpha(order as f64)
            }
            .with_random_seeds(a.random_seeds);
            let search = boundary_laws(&model, &config)?;
            report.datum("count", search.solutions.len());
            report.datum("runs", &search.runs);
            report.check(Check::at_least(
                "boundary_laws",
                search.solutions.len() as f64,
                1.0,
            ));
            let laws: Vec<GridFunction> = search.solutions.iter().map(|s| s.f.clone()).collect();
            report.solutions = search.solutions.iter().map(Solution::from).collect();
            check_laws(&mut report, &model, &laws, a, &options, true)?;
            if order == 2 {
                if let Some(law) = laws.first() {
                    cross_check_partition(&mut report, &model, law, a.depth)?;
                }
            }
        }
        _ => {
            return Err(Failure::usage(
                "give either --n/--p/--k or --xi-table/--J/--order",
            ))
        }
    }
    Ok(report)
}

fn check_laws(
    report: &mut RunReport,
    model: &TreeModel,
    laws: &[GridFunction],
    a: &GibbsArgs,
    options: &CompatibilityOptions,
    as_checks: bool,
) -> std::result::Result<(), Failure> {
    let mut records = Vec::new();
    for (i, law) in laws.iter().enumerate() {
        let residual = boundary_law_residual(model, law)?;
        for depth in 1..=a.depth {
            let compat = compatibility_residual(model, law, depth, options)?;
            if as_checks {
                report.check(
                    Check::at_most(
                        format!("compatibility_law{i}_depth{depth}"),
                        compat.residual,
                        a.tol,
                    )
                    .with_detail(format!(
                        "{} configurations{}",
                        compat.configurations,
                        if compat.exhaustive { "" } else { " sampled" }
                    )),
                );
            }
            records.push(serde_json::json!({
                "law": i,
                "boundary_law_residual": residual,
                "compatibility": compat,
            }));
        }
    }
    report.datum("compatibility", records);
    Ok(())
}

fn cross_check_partition(
    report: &mut RunReport,
    model: &TreeModel,
    law: &GridFunction,
    depth: usize,
) -> std::result::Result<(), Failure> {
    let m = model.rule().len() as f64;
    let vertices = |d: usize| {
        (0..=d)
            .map(|l| shell_size(model.order_k(), l).unwrap_or(usize::MAX) as f64)
            .sum::<f64>()
    };
    let factorized = log_partition_function(model, law, depth)?.exp();
    let (method, oracle) = if m.powf(vertices(depth)) <= BRUTE_FORCE_LIMIT as f64 {
        (
            "brute_force",
            brute_force_partition(model, law, depth, BRUTE_FORCE_LIMIT)?,
        )
    } else if m.powf(vertices(depth - 1)) <= BRUTE_FORCE_LIMIT as f64 {
        (
            "leaf_summed",
            leaf_summed_partition(model, law, depth, BRUTE_FORCE_LIMIT)?,
        )
    } else {
        report
            .warnings
            .push("partition function too large to cross-check by enumeration".into());
        return Ok(());
    };
    let gap = (factorized / oracle - 1.0).abs();
    report.datum(
        "partition_function",
        serde_json::json!({
            "factorized": factorized,
            "oracle": oracle,
            "method": method,
        }),
    );
    report.check(Check::at_most("partition_function_cross_check", gap, 1e-8).with_detail(method));
    Ok(())
}
