//! Cayley-tree models with a continuous spin in `[0, 1]`, translation-invariant
//! boundary laws and finite-volume Gibbs distributions.
//!
//! Spins live on the nodes of a quadrature rule and the a-priori measure is
//! the rule's weights. Along an edge from a parent `x` to a child `y` the
//! weight is `Q(σ(x), σ(y))` with `Q = exp(Jβ ξ)`. Boundary fields enter only
//! through `f(t) = exp(h_t − h_0)`, so a boundary law is a positive grid
//! function and the translation-invariant compatibility condition is
//! `R_k f = f` with the kernel `Q`.
//!
//! At depth 0 the root carries `f^((k+1)/k)`: summing out the `k+1` children
//! of the root gives `(W f)^(k+1)`, which is proportional to `f^((k+1)/k)`
//! exactly when `f` is a boundary law.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::build_kernel;
use crate::operators::{r_residual, require_positive, Evaluator, Kernel};
use crate::quadrature::{GridFunction, QuadratureRule};
use crate::solver::{multi_start, MultiStart, SolveConfig};

/// Spin-node configurations enumerated before switching to sampling.
pub const EXHAUSTIVE_LIMIT: u64 = 1_000_000;

#[derive(Clone)]
pub struct TreeModel {
    order_k: usize,
    coupling: f64,
    beta: f64,
    xi: Evaluator,
    q: Kernel,
    warnings: Vec<String>,
}

impl fmt::Debug for TreeModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TreeModel")
            .field("order_k", &self.order_k)
            .field("coupling", &self.coupling)
            .field("beta", &self.beta)
            .field("q", &self.q)
            .field("warnings", &self.warnings)
            .finish_non_exhaustive()
    }
}

impl TreeModel {
    pub fn order_k(&self) -> usize {
        self.order_k
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn xi(&self, t: f64, u: f64) -> f64 {
        (self.xi)(t, u)
    }

    /// The transfer kernel `Q = exp(Jβ ξ)`.
    pub fn q(&self) -> &Kernel {
        &self.q
    }

    pub fn rule(&self) -> &Arc<QuadratureRule> {
        self.q.rule()
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    fn check_boundary_law(&self, f: &GridFunction) -> Result<()> {
        self.q.check_rule(f)?;
        require_positive(f, "boundary law")
    }
}

fn check_order(order_k: usize) -> Result<()> {
    if order_k == 0 {
        return Err(Error::invalid("tree order must be at least 1"));
    }
    Ok(())
}

pub fn model_from_xi(
    xi: Evaluator,
    order_k: usize,
    coupling: f64,
    beta: f64,
    rule: Arc<QuadratureRule>,
) -> Result<TreeModel> {
    check_order(order_k)?;
    if coupling == 0.0 || !coupling.is_finite() {
        return Err(Error::invalid(format!(
            "coupling J must be finite and nonzero, got {coupling}"
        )));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("β must be positive, got {beta}")));
    }
    let scale = coupling * beta;
    let xi_q = Arc::clone(&xi);
    let q = Kernel::from_fn(move |t, u| (scale * xi_q(t, u)).exp(), rule)?;
    Ok(TreeModel {
        order_k,
        coupling,
        beta,
        xi,
        q,
        warnings: Vec::new(),
    })
}

/// The model whose transfer kernel is `K_(n,p)(·,·;k)` itself, on the tree of
/// order `k`: `ξ = ln K / β` with `J = 1`.
pub fn model_from_constructed(
    n: usize,
    p: usize,
    k: u64,
    beta: f64,
    rule: Arc<QuadratureRule>,
) -> Result<TreeModel> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::invalid(format!("β must be positive, got {beta}")));
    }
    let kernel = build_kernel(n, p, k)?;
    let order_k =
        usize::try_from(k).map_err(|_| Error::invalid(format!("tree order {k} too large")))?;
    let mut warnings = Vec::new();
    if !kernel.meets_positivity_threshold() {
        warnings.push(format!(
            "k = {k} is below ζ₀({n}) = {}; positivity of the kernel is not guaranteed",
            crate::kernel::zeta0(n)
        ));
    }
    let evaluator = kernel.evaluator();
    let q = Kernel::new(Arc::clone(&evaluator), rule).map_err(|err| match err {
        Error::Domain(msg) => Error::domain(format!("ln K_({n},{p}) undefined: {msg}")),
        other => other,
    })?;
    let xi: Evaluator = Arc::new(move |t, u| evaluator(t, u).ln() / beta);
    Ok(TreeModel {
        order_k,
        coupling: 1.0,
        beta,
        xi,
        q,
        warnings,
    })
}

/// `sup |R_k f − f|` with the model's kernel and `k` the tree order.
pub fn boundary_law_residual(model: &TreeModel, f: &GridFunction) -> Result<f64> {
    r_residual(&model.q, model.order_k as f64, f)
}

/// Solves `R_k f = f` for the model from the configured seeds.
pub fn boundary_laws(model: &TreeModel, config: &SolveConfig) -> Result<MultiStart> {
    multi_start(&model.q, model.order_k as f64, config)
}

/// The ball `V_n` of radius `n` around the root, vertices in breadth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteVolume {
    order_k: usize,
    depth: usize,
    parents: Vec<Option<usize>>,
    level_offsets: Vec<usize>,
}

impl FiniteVolume {
    pub const MAX_VERTICES: usize = 10_000_000;

    pub fn new(order_k: usize, depth: usize) -> Result<Self> {
        check_order(order_k)?;
        let mut total: usize = 0;
        for level in 0..=depth {
            total = shell_size(order_k, level)
                .and_then(|s| total.checked_add(s))
                .filter(|&t| t <= Self::MAX_VERTICES)
                .ok_or_else(|| {
                    Error::invalid(format!(
                        "V_{depth} of the order-{order_k} tree exceeds {} vertices",
                        Self::MAX_VERTICES
                    ))
                })?;
        }
        let mut parents = Vec::with_capacity(total);
        let mut level_offsets = vec![0, 1];
        parents.push(None);
        for level in 1..=depth {
            let previous = level_offsets[level - 1]..level_offsets[level];
            let children = if level == 1 { order_k + 1 } else { order_k };
            for parent in previous {
                parents.extend(std::iter::repeat_n(Some(parent), children));
            }
            level_offsets.push(parents.len());
        }
        Ok(Self {
            order_k,
            depth,
            parents,
            level_offsets,
        })
    }

    pub fn order_k(&self) -> usize {
        self.order_k
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn vertex_count(&self) -> usize {
        self.parents.len()
    }

    /// Vertex indices of the sphere `W_level`.
    pub fn level(&self, level: usize) -> Range<usize> {
        self.level_offsets[level]..self.level_offsets[level + 1]
    }

    /// `W_depth`, where the boundary law acts.
    pub fn boundary(&self) -> Range<usize> {
        self.level(self.depth)
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        self.parents[v]
    }

    /// `(parent, child)` pairs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parents
            .iter()
            .enumerate()
            .filter_map(|(v, p)| p.map(|p| (p, v)))
    }
}

/// `|W_level| = (k+1)·k^(level−1)`, and 1 for the root.
pub fn shell_size(order_k: usize, level: usize) -> Option<usize> {
    if level == 0 {
        return Some(1);
    }
    let exp = u32::try_from(level - 1).ok()?;
    order_k.checked_pow(exp)?.checked_mul(order_k + 1)
}

/// Power of `f` carried by a boundary vertex of `V_depth`.
fn boundary_exponent(order_k: usize, depth: usize) -> f64 {
    if depth == 0 {
        (order_k + 1) as f64 / order_k as f64
    } else {
        1.0
    }
}

/// `ln(∏_edges Q(σ(x),σ(y)) · ∏_{x∈W_depth} f(σ(x)))` at node indices `sigma`.
pub fn log_finite_volume_weight(
    model: &TreeModel,
    f: &GridFunction,
    volume: &FiniteVolume,
    sigma: &[usize],
) -> Result<f64> {
    model.check_boundary_law(f)?;
    if volume.order_k() != model.order_k {
        return Err(Error::invalid(format!(
            "volume has order {}, model has order {}",
            volume.order_k(),
            model.order_k
        )));
    }
    let m = model.rule().len();
    if sigma.len() != volume.vertex_count() {
        return Err(Error::invalid(format!(
            "configuration has {} spins for {} vertices",
            sigma.len(),
            volume.vertex_count()
        )));
    }
    if let Some((v, &s)) = sigma.iter().enumerate().find(|(_, &s)| s >= m) {
        return Err(Error::invalid(format!(
            "spin node {s} at vertex {v} outside 0..{m}"
        )));
    }
    let edges: f64 = volume
        .edges()
        .map(|(x, y)| model.q.samples_row(sigma[x])[sigma[y]].ln())
        .sum();
    let power = boundary_exponent(model.order_k, volume.depth());
    let boundary: f64 = volume
        .boundary()
        .map(|v| power * f.values()[sigma[v]].ln())
        .sum();
    Ok(edges + boundary)
}

/// The unnormalized density of `μ^(depth)` at a configuration of spin-node indices.
pub fn finite_volume_unnorm(
    model: &TreeModel,
    f: &GridFunction,
    depth: usize,
    sigma: &[usize],
) -> Result<f64> {
    let volume = FiniteVolume::new(model.order_k, depth)?;
    Ok(log_finite_volume_weight(model, f, &volume, sigma)?.exp())
}

/// `ln Σⱼ wⱼ Q(tᵢ,uⱼ) exp(zⱼ)` for every node `tᵢ`.
fn log_w(q: &Kernel, log_z: &[f64]) -> Vec<f64> {
    let weights = q.rule().weights();
    let shift = log_z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = weights
        .iter()
        .zip(log_z)
        .map(|(w, z)| w * (z - shift).exp())
        .collect();
    (0..weights.len())
        .map(|i| {
            q.samples_row(i)
                .iter()
                .zip(&scaled)
                .map(|(k, v)| k * v)
                .sum::<f64>()
                .ln()
                + shift
        })
        .collect()
}

fn log_sum_weighted(weights: &[f64], log_values: &[f64]) -> f64 {
    let shift = log_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    weights
        .iter()
        .zip(log_values)
        .map(|(w, v)| w * (v - shift).exp())
        .sum::<f64>()
        .ln()
        + shift
}

/// `ln Z_depth` by summing out one generation at a time from the boundary.
pub fn log_partition_function(model: &TreeModel, f: &GridFunction, depth: usize) -> Result<f64> {
    model.check_boundary_law(f)?;
    let k = model.order_k as f64;
    let weights = model.rule().weights();
    let log_f: Vec<f64> = f.values().iter().map(|v| v.ln()).collect();
    if depth == 0 {
        let root: Vec<f64> = log_f
            .iter()
            .map(|v| boundary_exponent(model.order_k, 0) * v)
            .collect();
        return Ok(log_sum_weighted(weights, &root));
    }
    let mut log_z = log_f;
    for _ in 1..depth {
        log_z = log_w(&model.q, &log_z).into_iter().map(|v| k * v).collect();
    }
    let root: Vec<f64> = log_w(&model.q, &log_z)
        .into_iter()
        .map(|v| (k + 1.0) * v)
        .collect();
    Ok(log_sum_weighted(weights, &root))
}

pub fn partition_function(model: &TreeModel, f: &GridFunction, depth: usize) -> Result<f64> {
    Ok(log_partition_function(model, f, depth)?.exp())
}

fn configuration_count(m: usize, vertices: usize) -> Option<u64> {
    (m as u64).checked_pow(u32::try_from(vertices).ok()?)
}

fn decode(mut index: u64, m: usize, sigma: &mut [usize]) {
    for s in sigma.iter_mut() {
        *s = (index % m as u64) as usize;
        index /= m as u64;
    }
}

/// `Z_depth` by enumerating every configuration of `V_depth`, in plain
/// arithmetic. Only for small models.
pub fn brute_force_partition(
    model: &TreeModel,
    f: &GridFunction,
    depth: usize,
    max_configurations: u64,
) -> Result<f64> {
    model.check_boundary_law(f)?;
    let volume = FiniteVolume::new(model.order_k, depth)?;
    let m = model.rule().len();
    let n_vertices = volume.vertex_count();
    let total = configuration_count(m, n_vertices)
        .filter(|&t| t <= max_configurations)
        .ok_or_else(|| {
            Error::invalid(format!(
                "{m}^{n_vertices} configurations exceed {max_configurations}"
            ))
        })?;
    let weights = model.rule().weights();
    let power = boundary_exponent(model.order_k, depth);
    let per_root = total / m as u64;
    // one chunk per root spin, summed in order
    let chunks: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|root| {
            let mut sigma = vec![0; n_vertices];
            let mut acc = 0.0;
            for rest in 0..per_root {
                sigma[0] = root;
                decode(rest, m, &mut sigma[1..]);
                let mut weight = 1.0;
                for &s in &sigma {
                    weight *= weights[s];
                }
                for (x, y) in volume.edges() {
                    weight *= model.q.samples_row(sigma[x])[sigma[y]];
                }
                for v in volume.boundary() {
                    weight *= f.values()[sigma[v]].powf(power);
                }
                acc += weight;
            }
            acc
        })
        .collect();
    Ok(chunks.iter().sum())
}

/// `Z_depth` by enumerating `V_(depth−1)` and integrating each boundary
/// vertex's children by direct quadrature sums.
pub fn leaf_summed_partition(
    model: &TreeModel,
    f: &GridFunction,
    depth: usize,
    max_configurations: u64,
) -> Result<f64> {
    model.check_boundary_law(f)?;
    if depth == 0 {
        return Err(Error::invalid(
            "leaf-summed partition function needs depth ≥ 1",
        ));
    }
    let inner = FiniteVolume::new(model.order_k, depth - 1)?;
    let m = model.rule().len();
    let n_vertices = inner.vertex_count();
    let total = configuration_count(m, n_vertices)
        .filter(|&t| t <= max_configurations)
        .ok_or_else(|| {
            Error::invalid(format!(
                "{m}^{n_vertices} configurations exceed {max_configurations}"
            ))
        })?;
    let weights = model.rule().weights();
    let children = if depth == 1 {
        model.order_k + 1
    } else {
        model.order_k
    } as i32;
    let leaf: Vec<f64> = (0..m)
        .map(|t| {
            let row = model.q.samples_row(t);
            (0..m)
                .map(|u| weights[u] * row[u] * f.values()[u])
                .sum::<f64>()
                .powi(children)
        })
        .collect();
    let per_root = total / m as u64;
    let chunks: Vec<f64> = (0..m)
        .into_par_iter()
        .map(|root| {
            let mut sigma = vec![0; n_vertices];
            let mut acc = 0.0;
            for rest in 0..per_root {
                sigma[0] = root;
                decode(rest, m, &mut sigma[1..]);
                let mut weight = 1.0;
                for &s in &sigma {
                    weight *= weights[s];
                }
                for (x, y) in inner.edges() {
                    weight *= model.q.samples_row(sigma[x])[sigma[y]];
                }
                for v in inner.boundary() {
                    weight *= leaf[sigma[v]];
                }
                acc += weight;
            }
            acc
        })
        .collect();
    Ok(chunks.iter().sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityOptions {
    pub exhaustive_limit: u64,
    pub samples: usize,
    pub rng_seed: u64,
}

impl Default for CompatibilityOptions {
    fn default() -> Self {
        Self {
            exhaustive_limit: EXHAUSTIVE_LIMIT,
            samples: 1000,
            rng_seed: 0,
        }
    }
}

/// Largest mismatch between `∫ μ^(n)(σ ∨ ω) dω` and `μ^(n−1)(σ)` over the
/// configurations `σ` of `V_(n−1)` that were checked, both measures normalized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompatibilityReport {
    pub depth: usize,
    /// `max |∫μ^(n) − μ^(n−1)|` as densities with respect to the product weights.
    pub residual: f64,
    /// `max |∫μ^(n) / μ^(n−1) − 1|`.
    pub relative_residual: f64,
    pub configurations: u64,
    pub exhaustive: bool,
    pub log_z: f64,
    pub log_z_previous: f64,
}

pub fn compatibility_residual(
    model: &TreeModel,
    f: &GridFunction,
    depth: usize,
    options: &CompatibilityOptions,
) -> Result<CompatibilityReport> {
    if depth == 0 {
        return Err(Error::invalid("compatibility needs depth ≥ 1"));
    }
    model.check_boundary_law(f)?;
    let inner = FiniteVolume::new(model.order_k, depth - 1)?;
    let m = model.rule().len();
    let k = model.order_k as f64;
    let log_z = log_partition_function(model, f, depth)?;
    let log_z_previous = log_partition_function(model, f, depth - 1)?;

    let log_f: Vec<f64> = f.values().iter().map(|v| v.ln()).collect();
    let summed = log_w(&model.q, &log_f);
    let children = if depth == 1 { k + 1.0 } else { k };
    let previous_power = boundary_exponent(model.order_k, depth - 1);
    let log_q: Vec<Vec<f64>> = (0..m)
        .map(|i| model.q.samples_row(i).iter().map(|v| v.ln()).collect())
        .collect();

    let mismatch = |sigma: &[usize]| -> (f64, f64) {
        let edges: f64 = inner.edges().map(|(x, y)| log_q[sigma[x]][sigma[y]]).sum();
        let (mut marginal, mut previous) = (edges - log_z, edges - log_z_previous);
        for v in inner.boundary() {
            marginal += children * summed[sigma[v]];
            previous += previous_power * log_f[sigma[v]];
        }
        (
            (marginal.exp() - previous.exp()).abs(),
            (marginal - previous).exp_m1().abs(),
        )
    };

    let n_vertices = inner.vertex_count();
    let total = configuration_count(m, n_vertices).filter(|&t| t <= options.exhaustive_limit);
    let (pairs, configurations, exhaustive): (Vec<(f64, f64)>, u64, bool) = match total {
        Some(total) => {
            let pairs = (0..total)
                .into_par_iter()
                .map_init(
                    || vec![0; n_vertices],
                    |sigma, index| {
                        decode(index, m, sigma);
                        mismatch(sigma)
                    },
                )
                .collect();
            (pairs, total, true)
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(options.rng_seed);
            let samples: Vec<Vec<usize>> = (0..options.samples)
                .map(|_| (0..n_vertices).map(|_| rng.gen_range(0..m)).collect())
                .collect();
            let pairs = samples.par_iter().map(|sigma| mismatch(sigma)).collect();
            (pairs, options.samples as u64, false)
        }
    };
    let residual = pairs.iter().map(|p| p.0).fold(0.0, f64::max);
    let relative_residual = pairs.iter().map(|p| p.1).fold(0.0, f64::max);
    Ok(CompatibilityReport {
        depth,
        residual,
        relative_residual,
        configurations,
        exhaustive,
        log_z,
        log_z_previous,
    })
}

/// Distinct translation-invariant boundary laws of the constructed model.
#[derive(Debug, Clone)]
pub struct GibbsCount {
    pub count: usize,
    pub warnings: Vec<String>,
    pub search: MultiStart,
}

/// Counts positive solutions of `R_k f = f` for the model built on
/// `K_(n,p)(·,·;k)`, with the designed seeds added to `config`'s.
pub fn count_ti_gibbs(
    n: usize,
    p: usize,
    k: u64,
    rule: Arc<QuadratureRule>,
    config: &SolveConfig,
) -> Result<GibbsCount> {
    let model = model_from_constructed(n, p, k, 1.0, rule)?;
    let mut config = config.clone();
    for j in 1..=n {
        let designed = crate::solver::SeedSpec::Designed { j, p };
        if !config.seeds.contains(&designed) {
            config.seeds.push(designed);
        }
    }
    let search = boundary_laws(&model, &config)?;
    Ok(GibbsCount {
        count: search.solutions.len(),
        warnings: model.warnings,
        search,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::designed_boundary_law;
    use crate::solver::picard_r;

    fn rule(m: usize) -> Arc<QuadratureRule> {
        Arc::new(QuadratureRule::gauss_legendre(m).unwrap())
    }

    fn product_model(m: usize) -> TreeModel {
        model_from_xi(Arc::new(|t, u| t * u), 2, 1.0, 1.0, rule(m)).unwrap()
    }

    fn solved_law(model: &TreeModel) -> GridFunction {
        let seed = GridFunction::constant(model.rule().clone(), 1.0);
        let report = picard_r(
            model.q(),
            model.order_k() as f64,
            &seed,
            &SolveConfig::default(),
        )
        .unwrap();
        assert!(report.converged);
        report.f
    }

    #[test]
    fn shells_and_volumes() {
        assert_eq!(shell_size(2, 0), Some(1));
        assert_eq!(shell_size(2, 1), Some(3));
        assert_eq!(shell_size(2, 3), Some(12));
        assert_eq!(shell_size(107, 2), Some(108 * 107));
        let v = FiniteVolume::new(2, 2).unwrap();
        assert_eq!(v.vertex_count(), 10);
        assert_eq!(v.level(1), 1..4);
        assert_eq!(v.boundary(), 4..10);
        assert_eq!(v.edges().count(), 9);
        assert_eq!(v.parent(0), None);
        assert_eq!(v.parent(4), Some(1));
        assert_eq!(v.parent(9), Some(3));
        assert!(FiniteVolume::new(0, 1).is_err());
        assert!(FiniteVolume::new(107, 5).is_err());
    }

    #[test]
    fn xi_models() {
        let r = rule(6);
        let zero = model_from_xi(Arc::new(|_, _| 0.0), 2, 1.0, 1.0, r.clone()).unwrap();
        assert!(zero.q().samples_row(3).iter().all(|&v| v == 1.0));
        let m = product_model(6);
        assert_eq!(m.q().eval(0.5, 0.4), 0.2f64.exp());
        assert!(model_from_xi(Arc::new(|_, _| 0.0), 2, 0.0, 1.0, r.clone()).is_err());
        assert!(model_from_xi(Arc::new(|_, _| 0.0), 2, 1.0, -1.0, r.clone()).is_err());
        assert!(matches!(
            model_from_xi(Arc::new(|_, _| f64::NAN), 2, 1.0, 1.0, r),
            Err(Error::Evaluation { .. })
        ));
    }

    #[test]
    fn constructed_models() {
        let r = rule(16);
        let model = model_from_constructed(1, 1, 107, 1.0, r.clone()).unwrap();
        let kernel = build_kernel(1, 1, 107).unwrap();
        assert!(model.warnings().is_empty());
        assert_eq!(model.order_k(), 107);
        for &(t, u) in &[(0.1, 0.9), (0.6, 0.3)] {
            assert_eq!(model.q().eval(t, u), kernel.eval(t, u));
            assert!((model.xi(t, u).exp() - kernel.eval(t, u)).abs() < 1e-14);
        }
        let hot = model_from_constructed(2, 1, 47040, 2.0, r.clone()).unwrap();
        assert_eq!(
            hot.q().eval(0.2, 0.7),
            build_kernel(2, 1, 47040).unwrap().eval(0.2, 0.7)
        );
        let weak = model_from_constructed(1, 1, 20, 1.0, r.clone()).unwrap();
        assert_eq!(weak.warnings().len(), 1);
        assert!(matches!(
            model_from_constructed(1, 1, 2, 1.0, r),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn boundary_law_residuals() {
        let r = rule(16);
        let trivial = model_from_xi(Arc::new(|_, _| 0.0), 3, 1.0, 1.0, r.clone()).unwrap();
        let one = GridFunction::constant(r.clone(), 1.0);
        assert_eq!(boundary_law_residual(&trivial, &one).unwrap(), 0.0);
        let model = model_from_constructed(1, 1, 107, 1.0, r.clone()).unwrap();
        let law = designed_boundary_law(1, 1, r).unwrap();
        assert!(boundary_law_residual(&model, &law).unwrap() <= 1e-9);
        let bumped = law.map(|v| v + 0.05);
        assert!(boundary_law_residual(&model, &bumped).unwrap() >= 1e-4);
    }

    #[test]
    fn weights_of_small_volumes() {
        let r = rule(6);
        let trivial = model_from_xi(Arc::new(|_, _| 0.0), 2, 1.0, 1.0, r.clone()).unwrap();
        let one = GridFunction::constant(r.clone(), 1.0);
        assert_eq!(finite_volume_unnorm(&trivial, &one, 0, &[2]).unwrap(), 1.0);
        assert_eq!(
            finite_volume_unnorm(&trivial, &one, 1, &[4; 4]).unwrap(),
            1.0
        );
        let model = product_model(6);
        let f = GridFunction::sample(r.clone(), |t| 1.0 + t).unwrap();
        let sigma = [1, 0, 3, 5];
        let nodes = r.nodes();
        let want: f64 = sigma[1..]
            .iter()
            .map(|&c| (nodes[sigma[0]] * nodes[c]).exp() * (1.0 + nodes[c]))
            .product();
        let got = finite_volume_unnorm(&model, &f, 1, &sigma).unwrap();
        assert!((got / want - 1.0).abs() < 1e-14);
        assert!(finite_volume_unnorm(&model, &f, 1, &[0, 0, 0]).is_err());
        assert!(finite_volume_unnorm(&model, &f, 1, &[0, 0, 0, 6]).is_err());
    }

    #[test]
    fn partition_function_against_brute_force() {
        let model = product_model(16);
        let f = GridFunction::sample(model.rule().clone(), |t| 1.0 + 0.5 * t * t).unwrap();
        let z = partition_function(&model, &f, 1).unwrap();
        let brute = brute_force_partition(&model, &f, 1, 1 << 20).unwrap();
        assert!((z / brute - 1.0).abs() < 1e-12, "{z} vs {brute}");
        let z2 = partition_function(&model, &f, 2).unwrap();
        let nested = leaf_summed_partition(&model, &f, 2, 1 << 20).unwrap();
        assert!((z2 / nested - 1.0).abs() < 1e-12);

        let small = product_model(6);
        let g = GridFunction::sample(small.rule().clone(), |t| 2.0 - t).unwrap();
        let z2 = partition_function(&small, &g, 2).unwrap();
        let brute = brute_force_partition(&small, &g, 2, 100_000_000).unwrap();
        assert!((z2 / brute - 1.0).abs() < 1e-10, "{z2} vs {brute}");
        assert!(brute_force_partition(&model, &f, 2, 1 << 20).is_err());
    }

    #[test]
    fn trivial_partition_function() {
        let r = rule(8);
        let trivial = model_from_xi(Arc::new(|_, _| 0.0), 2, 1.0, 1.0, r.clone()).unwrap();
        let one = GridFunction::constant(r, 1.0);
        for depth in 0..4 {
            assert!(log_partition_function(&trivial, &one, depth).unwrap().abs() < 1e-14);
        }
    }

    #[test]
    fn normalized_measure_sums_to_one() {
        let model = product_model(5);
        let f = GridFunction::sample(model.rule().clone(), |t| 1.0 + t).unwrap();
        let volume = FiniteVolume::new(2, 1).unwrap();
        let log_z = log_partition_function(&model, &f, 1).unwrap();
        let w = model.rule().weights();
        let mut total = 0.0;
        let mut sigma = vec![0; 4];
        for index in 0..5u64.pow(4) {
            decode(index, 5, &mut sigma);
            let prior: f64 = sigma.iter().map(|&s| w[s]).product();
            total += prior
                * (log_finite_volume_weight(&model, &f, &volume, &sigma).unwrap() - log_z).exp();
        }
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn compatibility_of_solved_law() {
        let model = product_model(16);
        let f = solved_law(&model);
        assert!(boundary_law_residual(&model, &f).unwrap() <= 1e-9);
        let options = CompatibilityOptions::default();
        let one = compatibility_residual(&model, &f, 1, &options).unwrap();
        assert!(one.exhaustive);
        assert_eq!(one.configurations, 16);
        assert!(one.residual <= 1e-8, "{one:?}");
        let two = compatibility_residual(&model, &f, 2, &options).unwrap();
        assert_eq!(two.configurations, 65536);
        assert!(two.residual <= 1e-7, "{two:?}");
        let bumped = f.map(|v| v + 0.05);
        let bad = compatibility_residual(&model, &bumped, 1, &options).unwrap();
        assert!(bad.residual >= 1e-4, "{bad:?}");
        assert!(compatibility_residual(&model, &f, 0, &options).is_err());
    }

    #[test]
    fn sampled_compatibility_is_reproducible() {
        let model = product_model(16);
        let f = solved_law(&model);
        let options = CompatibilityOptions {
            exhaustive_limit: 100,
            samples: 50,
            rng_seed: 7,
        };
        let a = compatibility_residual(&model, &f, 2, &options).unwrap();
        let b = compatibility_residual(&model, &f, 2, &options).unwrap();
        assert!(!a.exhaustive);
        assert_eq!(a.configurations, 50);
        assert_eq!(a, b);
    }

    #[test]
    fn constructed_counts() {
        let r = rule(16);
        let config = SolveConfig::for_alpha(107.0);
        let single = count_ti_gibbs(1, 1, 107, r.clone(), &config).unwrap();
        assert!(single.count >= 1);
        let config = SolveConfig::for_alpha(47040.0);
        let pair = count_ti_gibbs(2, 1, 47040, rule(24), &config).unwrap();
        assert!(pair.count >= 2);
    }
}
