//! Damped Picard iteration for positive fixed points of `R_α`, multi-start
//! exploration and fixed-point counting.
//!
//! Fixed points of `H_θ` are searched for in `R`-space: `R_α` is invariant
//! under positive scaling of its argument, so the iteration cannot collapse
//! to zero or blow up the way plain iteration of `H_θ` does for `θ > 1`.
//! Results are mapped back to `H`-space afterwards.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::designed_power;
use crate::operators::{
    apply_r_unchecked, h_fixed_from_r, h_residual, omega, r_fixed_from_h, r_residual,
    require_positive, Kernel,
};
use crate::quadrature::{sup_distance, GridFunction, QuadratureRule};

/// How a starting function is produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SeedSpec {
    Constant(f64),
    /// `1 + ½ Σ_{l≤3} c_l P_l(2t−1)` with `c_l` uniform in `[−1, 1]`, clipped at 0.1.
    Random,
    /// `g_j^α = 1 + (t−1/2)^(2(p+j)−1)` for a constructed kernel.
    Designed {
        j: usize,
        p: usize,
    },
    Values(Vec<f64>),
}

impl SeedSpec {
    pub fn label(&self) -> String {
        match self {
            SeedSpec::Constant(c) => format!("constant({c})"),
            SeedSpec::Random => "random".to_string(),
            SeedSpec::Designed { j, p } => format!("designed(j={j},p={p})"),
            SeedSpec::Values(_) => "values".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub damping: f64,
    pub tol: f64,
    pub max_iter: usize,
    pub dedupe_tol: f64,
    pub seeds: Vec<SeedSpec>,
    pub rng_seed: u64,
    pub keep_trace: bool,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            damping: 0.5,
            tol: 1e-9,
            max_iter: 10_000,
            dedupe_tol: 1e-4,
            seeds: vec![SeedSpec::Constant(1.0)],
            rng_seed: 0,
            keep_trace: false,
        }
    }
}

impl SolveConfig {
    /// Defaults with the residual tolerance relaxed to `1e-6` once `α > 10⁶`.
    pub fn for_alpha(alpha: f64) -> Self {
        let tol = if alpha > 1e6 { 1e-6 } else { 1e-9 };
        Self {
            tol,
            ..Self::default()
        }
    }

    pub fn with_seeds(mut self, seeds: Vec<SeedSpec>) -> Self {
        self.seeds = seeds;
        self
    }

    pub fn with_random_seeds(mut self, count: usize) -> Self {
        self.seeds
            .extend(std::iter::repeat_n(SeedSpec::Random, count));
        self
    }

    pub fn with_designed_seeds(mut self, n: usize, p: usize) -> Self {
        self.seeds
            .extend((1..=n).map(|j| SeedSpec::Designed { j, p }));
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::invalid(format!(
                "damping must lie in (0, 1], got {}",
                self.damping
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::invalid(format!(
                "tolerance must be positive, got {}",
                self.tol
            )));
        }
        if !(self.dedupe_tol > self.tol) {
            return Err(Error::invalid(format!(
                "dedupe tolerance {} must exceed the residual tolerance {}",
                self.dedupe_tol, self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be positive"));
        }
        Ok(())
    }
}

/// One run of the iteration and the fixed point it reached.
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    /// Final iterate in `R`-space.
    pub f: GridFunction,
    /// The matching fixed point of `H_α` (only for `α > 1`).
    pub h: Option<GridFunction>,
    /// `sup |R_α f − f|`, recomputed after the iteration stops.
    pub residual_r: f64,
    /// `sup |H_α h − h|`.
    pub residual_h: Option<f64>,
    /// `ω(f)`.
    pub lambda: f64,
    pub iterations: usize,
    pub converged: bool,
    pub seed_id: usize,
    pub seed_label: String,
    pub trace: Vec<f64>,
}

/// `f ← (1−γ) f + γ R_α f` until `sup |R_α f − f| ≤ tol`.
pub fn picard_r(
    kernel: &Kernel,
    alpha: f64,
    seed: &GridFunction,
    config: &SolveConfig,
) -> Result<FixedPointReport> {
    config.validate()?;
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!(
            "R exponent must be positive, got {alpha}"
        )));
    }
    require_positive(seed, "seed")?;
    let gamma = config.damping;
    let mut f = seed.clone();
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    while iterations < config.max_iter {
        let image = apply_r_unchecked(kernel, alpha, &f);
        let residual = sup_distance(&image, &f)?;
        if config.keep_trace {
            trace.push(residual);
        }
        if !residual.is_finite() || !image.is_positive() {
            return Err(Error::Divergence {
                iteration: iterations,
                reason: format!("R image lost positivity or finiteness (residual {residual})"),
                last_iterate: f.into_values(),
            });
        }
        if residual <= config.tol {
            converged = true;
            break;
        }
        let next: Vec<f64> = f
            .values()
            .iter()
            .zip(image.values())
            .map(|(a, b)| (1.0 - gamma) * a + gamma * b)
            .collect();
        f = GridFunction::new(Arc::clone(f.rule()), next)?;
        iterations += 1;
    }
    let residual_r = r_residual(kernel, alpha, &f)?;
    let converged = converged && residual_r <= config.tol;
    let lambda = omega(kernel, &f)?;
    let (h, residual_h) = if alpha > 1.0 {
        let h = h_fixed_from_r(kernel, alpha, &f)?;
        let res = h_residual(kernel, alpha, &h)?;
        (Some(h), Some(res))
    } else {
        (None, None)
    };
    Ok(FixedPointReport {
        f,
        h,
        residual_r,
        residual_h,
        lambda,
        iterations,
        converged,
        seed_id: 0,
        seed_label: String::new(),
        trace,
    })
}

/// Searches for a fixed point of `H_θ` through `R_θ`, seeded by `seed`.
pub fn picard_h(
    kernel: &Kernel,
    theta: f64,
    seed: &GridFunction,
    config: &SolveConfig,
) -> Result<FixedPointReport> {
    if !(theta > 1.0) {
        return Err(Error::invalid(format!(
            "Hammerstein exponent must exceed 1, got {theta}"
        )));
    }
    require_positive(seed, "seed")?;
    // seed^θ rescaled by its largest value; R is blind to the scale
    let top = seed.max().ln();
    let r_seed = seed.map(|v| (theta * (v.ln() - top)).exp());
    if !r_seed.is_positive() {
        return Err(Error::domain("seed^θ underflows; choose a flatter seed"));
    }
    picard_r(kernel, theta, &r_seed, config)
}

/// Shifted Legendre polynomials `P_1..P_3` on `[0,1]`.
fn shifted_legendre(l: usize, t: f64) -> f64 {
    let x = 2.0 * t - 1.0;
    match l {
        1 => x,
        2 => 0.5 * (3.0 * x * x - 1.0),
        3 => 0.5 * (5.0 * x * x * x - 3.0 * x),
        _ => unreachable!(),
    }
}

pub fn random_seed(rng: &mut impl Rng, rule: Arc<QuadratureRule>) -> GridFunction {
    let coeffs: [f64; 3] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
    GridFunction::sample(rule, |t| {
        let bump: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(l, c)| c * shifted_legendre(l + 1, t))
            .sum();
        (1.0 + 0.5 * bump).max(0.1)
    })
    .expect("finite polynomial")
}

/// Turns seed descriptors into grid functions; random seeds draw from one
/// stream seeded by `rng_seed`, in order.
pub fn materialize_seeds(
    config: &SolveConfig,
    rule: &Arc<QuadratureRule>,
) -> Result<Vec<GridFunction>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    config
        .seeds
        .iter()
        .map(|spec| match spec {
            SeedSpec::Constant(c) => Ok(GridFunction::constant(Arc::clone(rule), *c)),
            SeedSpec::Random => Ok(random_seed(&mut rng, Arc::clone(rule))),
            SeedSpec::Designed { j, p } => designed_power(*j, *p, Arc::clone(rule)),
            SeedSpec::Values(v) => GridFunction::new(Arc::clone(rule), v.clone()),
        })
        .collect()
}

/// Outcome of one seed in a multi-start search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub seed_id: usize,
    pub seed_label: String,
    pub converged: bool,
    pub iterations: usize,
    pub residual_r: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct MultiStart {
    /// Distinct converged fixed points ordered by `λ`, then seed.
    pub solutions: Vec<FixedPointReport>,
    pub runs: Vec<RunSummary>,
}

pub fn multi_start(kernel: &Kernel, alpha: f64, config: &SolveConfig) -> Result<MultiStart> {
    config.validate()?;
    if config.seeds.is_empty() {
        return Err(Error::invalid("multi-start needs at least one seed"));
    }
    let seeds = materialize_seeds(config, kernel.rule())?;
    let outcomes: Vec<Result<FixedPointReport>> = seeds
        .par_iter()
        .map(|seed| picard_r(kernel, alpha, seed, config))
        .collect();

    let mut runs = Vec::with_capacity(outcomes.len());
    let mut kept: Vec<FixedPointReport> = Vec::new();
    for (seed_id, (outcome, spec)) in outcomes.into_iter().zip(&config.seeds).enumerate() {
        let seed_label = spec.label();
        match outcome {
            Ok(mut report) => {
                report.seed_id = seed_id;
                report.seed_label = seed_label.clone();
                runs.push(RunSummary {
                    seed_id,
                    seed_label,
                    converged: report.converged,
                    iterations: report.iterations,
                    residual_r: Some(report.residual_r),
                    error: None,
                });
                if report.converged && is_new(&kept, &report.f, config.dedupe_tol)? {
                    kept.push(report);
                }
            }
            Err(err) => runs.push(RunSummary {
                seed_id,
                seed_label,
                converged: false,
                iterations: 0,
                residual_r: None,
                error: Some(err.to_string()),
            }),
        }
    }
    kept.sort_by(|a, b| {
        a.lambda
            .total_cmp(&b.lambda)
            .then(a.seed_id.cmp(&b.seed_id))
    });
    Ok(MultiStart {
        solutions: kept,
        runs,
    })
}

fn is_new(kept: &[FixedPointReport], f: &GridFunction, dedupe_tol: f64) -> Result<bool> {
    for other in kept {
        if sup_distance(&other.f, f)? < dedupe_tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `α·sup |ln a − ln b|`, the log-distance of `a^α` and `b^α`.
///
/// Distinct `R_α` fixed points give `H_α` fixed points only `O(1/α)` apart in
/// the sup norm, so `H`-side solutions are separated in this metric instead.
pub fn power_distance(a: &GridFunction, b: &GridFunction, alpha: f64) -> Result<f64> {
    if !a.same_rule(b) {
        return Err(Error::invalid("grid functions live on different rules"));
    }
    Ok(a.values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| alpha * (x.ln() - y.ln()).abs())
        .fold(0.0, f64::max))
}

/// Fixed points counted on both sides of the `R_α ↔ H_α` correspondence.
/// Counts are lower bounds: exploration cannot prove exhaustiveness.
#[derive(Debug, Clone)]
pub struct FixedPointCount {
    pub count_r: usize,
    pub count_h: usize,
    /// Each `H` image, mapped back and pushed once through `R_α`, lands within
    /// `dedupe_tol` of its own `R` solution.
    pub matched: bool,
    /// Largest `sup |f − R(H(f))|` over the `R` solutions.
    pub max_round_trip_r: f64,
    /// Largest `sup |h − H(R(h))|` over their `H` images.
    pub max_round_trip_h: f64,
    pub search: MultiStart,
}

pub fn count_fixed_points(
    kernel: &Kernel,
    alpha: f64,
    config: &SolveConfig,
) -> Result<FixedPointCount> {
    if !(alpha > 1.0) {
        return Err(Error::invalid(format!(
            "counting H fixed points needs α > 1, got {alpha}"
        )));
    }
    let search = multi_start(kernel, alpha, config)?;
    let r_side: Vec<&GridFunction> = search.solutions.iter().map(|s| &s.f).collect();

    let mut h_side: Vec<GridFunction> = Vec::new();
    let mut max_round_trip_r: f64 = 0.0;
    let mut max_round_trip_h: f64 = 0.0;
    for f in &r_side {
        let h = h_fixed_from_r(kernel, alpha, f)?;
        let back = r_fixed_from_h(kernel, alpha, &h)?;
        max_round_trip_r = max_round_trip_r.max(sup_distance(&back, f)?);
        let again = h_fixed_from_r(kernel, alpha, &back)?;
        max_round_trip_h = max_round_trip_h.max(sup_distance(&again, &h)?);
        let mut distinct = true;
        for other in &h_side {
            if power_distance(other, &h, alpha)? < config.dedupe_tol {
                distinct = false;
                break;
            }
        }
        if distinct {
            h_side.push(h);
        }
    }

    let mut used = vec![false; r_side.len()];
    let mut matched = h_side.len() == r_side.len();
    for h in &h_side {
        let back = apply_r_unchecked(kernel, alpha, &r_fixed_from_h(kernel, alpha, h)?);
        let hit = r_side
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, f)| sup_distance(&back, f).map(|d| (i, d)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .find(|&(_, d)| d < config.dedupe_tol);
        match hit {
            Some((i, _)) => used[i] = true,
            None => matched = false,
        }
    }

    Ok(FixedPointCount {
        count_r: r_side.len(),
        count_h: h_side.len(),
        matched,
        max_round_trip_r,
        max_round_trip_h,
        search,
    })
}
