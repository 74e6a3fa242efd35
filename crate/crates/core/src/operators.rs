//! The Hammerstein operator `H_θ f = ∫ K(·,u) f(u)^θ du`, the normalized
//! operator `R_α f = (W f / ω(f))^α`, and the conversions between their
//! positive fixed points.
//!
//! `W f = ∫ K(·,u) f(u) du` and `ω(f) = (W f)(0)`. Gauss nodes never contain
//! `t = 0`, so the `t = 0` row of the kernel is sampled from the evaluator.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::uniform_grid;
use crate::quadrature::{sup_distance, GridFunction, QuadratureRule};

pub type Evaluator = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A strictly positive kernel sampled on a rule's nodes.
#[derive(Clone)]
pub struct Kernel {
    evaluator: Evaluator,
    rule: Arc<QuadratureRule>,
    /// `samples[i*m + j] = K(tᵢ, uⱼ)`.
    samples: Vec<f64>,
    zero_row: Vec<f64>,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("nodes", &self.rule.len())
            .field("scheme", &self.rule.scheme())
            .finish_non_exhaustive()
    }
}

impl Kernel {
    pub fn new(evaluator: Evaluator, rule: Arc<QuadratureRule>) -> Result<Self> {
        let nodes = rule.nodes();
        let m = nodes.len();
        let mut samples = Vec::with_capacity(m * m);
        for &t in nodes {
            for &u in nodes {
                samples.push(evaluator(t, u));
            }
        }
        let zero_row: Vec<f64> = nodes.iter().map(|&u| evaluator(0.0, u)).collect();
        for (idx, &v) in samples.iter().chain(&zero_row).enumerate() {
            if !v.is_finite() {
                return Err(Error::Evaluation {
                    node: idx,
                    value: v,
                });
            }
            if v <= 0.0 {
                let (t, u) = if idx < m * m {
                    (nodes[idx / m], nodes[idx % m])
                } else {
                    (0.0, nodes[idx - m * m])
                };
                return Err(Error::domain(format!(
                    "kernel value {v} at (t={t}, u={u}) is not strictly positive"
                )));
            }
        }
        Ok(Self {
            evaluator,
            rule,
            samples,
            zero_row,
        })
    }

    pub fn from_fn(
        f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        rule: Arc<QuadratureRule>,
    ) -> Result<Self> {
        Self::new(Arc::new(f), rule)
    }

    pub fn constant(c: f64, rule: Arc<QuadratureRule>) -> Result<Self> {
        Self::from_fn(move |_, _| c, rule)
    }

    pub fn rule(&self) -> &Arc<QuadratureRule> {
        &self.rule
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn eval(&self, t: f64, u: f64) -> f64 {
        (self.evaluator)(t, u)
    }

    pub fn samples_row(&self, i: usize) -> &[f64] {
        let m = self.rule.len();
        &self.samples[i * m..(i + 1) * m]
    }

    pub fn zero_row(&self) -> &[f64] {
        &self.zero_row
    }

    pub(crate) fn check_rule(&self, f: &GridFunction) -> Result<()> {
        if Arc::ptr_eq(&self.rule, f.rule()) || *self.rule == **f.rule() {
            Ok(())
        } else {
            Err(Error::invalid(
                "grid function and kernel use different quadrature rules",
            ))
        }
    }

    /// `Σⱼ wⱼ K(t, uⱼ) vⱼ` for an off-grid `t`.
    pub fn integrate_row_at(&self, t: f64, values: &[f64]) -> f64 {
        self.rule
            .nodes()
            .iter()
            .zip(self.rule.weights())
            .zip(values)
            .map(|((&u, &w), &v)| w * self.eval(t, u) * v)
            .sum()
    }

    fn weighted(&self, values: &[f64]) -> Vec<f64> {
        self.rule
            .weights()
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .collect()
    }

    fn rows_times(&self, weighted: &[f64]) -> Vec<f64> {
        let m = self.rule.len();
        (0..m)
            .map(|i| {
                self.samples_row(i)
                    .iter()
                    .zip(weighted)
                    .map(|(k, v)| k * v)
                    .sum()
            })
            .collect()
    }
}

pub(crate) fn require_positive(f: &GridFunction, what: &str) -> Result<()> {
    if let Some((i, v)) = f
        .values()
        .iter()
        .enumerate()
        .find(|(_, &v)| !(v > crate::POSITIVITY_FLOOR) || !v.is_finite())
    {
        return Err(Error::domain(format!(
            "{what} is not positive: value {v} at node {i}"
        )));
    }
    Ok(())
}

/// `(H_θ f)(tᵢ) = Σⱼ wⱼ K(tᵢ,uⱼ) f(uⱼ)^θ`, with powers taken as `exp(θ ln f)`.
pub fn apply_h(kernel: &Kernel, theta: f64, f: &GridFunction) -> Result<GridFunction> {
    if !(theta > 1.0) {
        return Err(Error::invalid(format!(
            "Hammerstein exponent must exceed 1, got {theta}"
        )));
    }
    kernel.check_rule(f)?;
    require_positive(f, "argument of H")?;
    let powers: Vec<f64> = f.values().iter().map(|&v| (theta * v.ln()).exp()).collect();
    let out = kernel.rows_times(&kernel.weighted(&powers));
    GridFunction::new(Arc::clone(kernel.rule()), out)
}

pub fn apply_w(kernel: &Kernel, f: &GridFunction) -> Result<GridFunction> {
    kernel.check_rule(f)?;
    let out = kernel.rows_times(&kernel.weighted(f.values()));
    GridFunction::new(Arc::clone(kernel.rule()), out)
}

/// `ω(f) = ∫ K(0,u) f(u) du`.
pub fn omega(kernel: &Kernel, f: &GridFunction) -> Result<f64> {
    kernel.check_rule(f)?;
    Ok(omega_values(kernel, f.values()))
}

pub(crate) fn omega_values(kernel: &Kernel, values: &[f64]) -> f64 {
    kernel
        .rule()
        .weights()
        .iter()
        .zip(kernel.zero_row())
        .zip(values)
        .map(|((w, k), v)| w * k * v)
        .sum()
}

/// `(R_α f)(t) = ((W f)(t) / ω(f))^α`, raised as `exp(α(ln Wf − ln ω))`.
pub fn apply_r(kernel: &Kernel, alpha: f64, f: &GridFunction) -> Result<GridFunction> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!(
            "R exponent must be positive, got {alpha}"
        )));
    }
    kernel.check_rule(f)?;
    require_positive(f, "argument of R")?;
    Ok(apply_r_unchecked(kernel, alpha, f))
}

pub(crate) fn apply_r_unchecked(kernel: &Kernel, alpha: f64, f: &GridFunction) -> GridFunction {
    let weighted = kernel.weighted(f.values());
    let ln_omega = kernel
        .zero_row()
        .iter()
        .zip(&weighted)
        .map(|(k, v)| k * v)
        .sum::<f64>()
        .ln();
    let out = kernel
        .rows_times(&weighted)
        .into_iter()
        .map(|wf| (alpha * (wf.ln() - ln_omega)).exp())
        .collect();
    GridFunction::new(Arc::clone(kernel.rule()), out).expect("same rule")
}

/// `(R_α f)(t)` at an arbitrary `t` (Nyström extension).
pub fn r_value_at(kernel: &Kernel, alpha: f64, f: &GridFunction, t: f64) -> f64 {
    let num = kernel.integrate_row_at(t, f.values());
    let den = omega_values(kernel, f.values());
    (alpha * (num.ln() - den.ln())).exp()
}

/// `sup |R_α f − f|` over the nodes.
pub fn r_residual(kernel: &Kernel, alpha: f64, f: &GridFunction) -> Result<f64> {
    sup_distance(&apply_r(kernel, alpha, f)?, f)
}

/// `sup |H_θ f − f|` over the nodes.
pub fn h_residual(kernel: &Kernel, theta: f64, f: &GridFunction) -> Result<f64> {
    sup_distance(&apply_h(kernel, theta, f)?, f)
}

/// A positive eigenfunction of `H_α` with its eigenvalue.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub h: GridFunction,
    pub lambda: f64,
}

impl EigenPair {
    /// `sup |H_α h − λ h|`.
    pub fn residual(&self, kernel: &Kernel, alpha: f64) -> Result<f64> {
        let image = apply_h(kernel, alpha, &self.h)?;
        sup_distance(&image, &self.h.scaled(self.lambda))
    }

    /// `h(0)` through the eigen relation: `(H_α h)(0) / λ = ω(h^α) / λ`.
    pub fn value_at_zero(&self, kernel: &Kernel, alpha: f64) -> f64 {
        let powers: Vec<f64> = self
            .h
            .values()
            .iter()
            .map(|&v| (alpha * v.ln()).exp())
            .collect();
        omega_values(kernel, &powers) / self.lambda
    }

    /// The eigenfunction rescaled so that its eigenvalue becomes `lambda`.
    pub fn rescaled(&self, lambda: f64, alpha: f64) -> Result<EigenPair> {
        Ok(EigenPair {
            h: eigen_rescale(&self.h, self.lambda, lambda, alpha)?,
            lambda,
        })
    }
}

/// `h = f₀^(1/α)`, `λ = ω(f₀)` for a fixed point `f₀` of `R_α`.
///
/// Fails when `f₀`'s own residual under `R_α` exceeds `max_residual`.
pub fn r_fixed_to_eigen(
    kernel: &Kernel,
    alpha: f64,
    f0: &GridFunction,
    max_residual: f64,
) -> Result<EigenPair> {
    let residual = r_residual(kernel, alpha, f0)?;
    if !(residual <= max_residual) {
        return Err(Error::PreconditionViolation {
            residual,
            threshold: max_residual,
        });
    }
    Ok(EigenPair {
        h: f0.map(|v| (v.ln() / alpha).exp()),
        lambda: omega(kernel, f0)?,
    })
}

/// `f₀ = h^α`.
pub fn eigen_to_r_fixed(pair: &EigenPair, alpha: f64) -> Result<GridFunction> {
    if !(alpha > 0.0) {
        return Err(Error::invalid(format!(
            "exponent must be positive, got {alpha}"
        )));
    }
    require_positive(&pair.h, "eigenfunction")?;
    Ok(pair.h.map(|v| (alpha * v.ln()).exp()))
}

/// `(λ/λ₀)^(1/(α−1)) · f₀`.
pub fn eigen_rescale(
    f0: &GridFunction,
    lambda0: f64,
    lambda: f64,
    alpha: f64,
) -> Result<GridFunction> {
    if alpha == 1.0 {
        return Err(Error::invalid("eigen rescaling is undefined for α = 1"));
    }
    if !(alpha > 1.0) {
        return Err(Error::invalid(format!(
            "eigen rescaling needs α > 1, got {alpha}"
        )));
    }
    if !(lambda0 > 0.0 && lambda > 0.0) {
        return Err(Error::invalid(format!(
            "eigenvalues must be positive, got {lambda0} and {lambda}"
        )));
    }
    let c = ((lambda.ln() - lambda0.ln()) / (alpha - 1.0)).exp();
    Ok(f0.scaled(c))
}

/// The fixed point of `H_α` corresponding to a fixed point of `R_α`.
pub fn h_fixed_from_r(kernel: &Kernel, alpha: f64, f: &GridFunction) -> Result<GridFunction> {
    if alpha <= 1.0 {
        return Err(Error::invalid(format!("need α > 1, got {alpha}")));
    }
    require_positive(f, "R fixed point")?;
    let lambda = omega(kernel, f)?;
    let shift = -lambda.ln() / (alpha - 1.0);
    Ok(f.map(|v| (v.ln() / alpha + shift).exp()))
}

/// The fixed point of `R_α` corresponding to a fixed point `h` of `H_α`:
/// `(h / h(0))^α` with `h(0) = (H_α h)(0)`.
pub fn r_fixed_from_h(kernel: &Kernel, alpha: f64, h: &GridFunction) -> Result<GridFunction> {
    kernel.check_rule(h)?;
    require_positive(h, "H fixed point")?;
    let powers: Vec<f64> = h.values().iter().map(|&v| (alpha * v.ln()).exp()).collect();
    let ln_h0 = omega_values(kernel, &powers).ln();
    Ok(h.map(|v| (alpha * (v.ln() - ln_h0)).exp()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelExtrema {
    /// Minimum over the square.
    pub min: f64,
    /// Maximum over the square.
    pub max: f64,
    /// Minimum over the `t = 0` row.
    pub min_zero_row: f64,
    /// Maximum over the `t = 0` row.
    pub max_zero_row: f64,
}

pub fn kernel_extrema(
    kernel: &(dyn Fn(f64, f64) -> f64 + Sync),
    grid_m: usize,
) -> Result<KernelExtrema> {
    if grid_m < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 points, got {grid_m}"
        )));
    }
    let grid = uniform_grid(grid_m);
    let (min, max) = grid
        .par_iter()
        .map(|&t| {
            grid.iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| {
                    let v = kernel(t, u);
                    (lo.min(v), hi.max(v))
                })
        })
        .reduce(
            || (f64::INFINITY, f64::NEG_INFINITY),
            |a, b| (a.0.min(b.0), a.1.max(b.1)),
        );
    let (min_zero_row, max_zero_row) =
        grid.iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| {
                let v = kernel(0.0, u);
                (lo.min(v), hi.max(v))
            });
    Ok(KernelExtrema {
        min,
        max,
        min_zero_row,
        max_zero_row,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum UniquenessVerdict {
    CertifiedUnique,
    /// The sufficient condition failed; says nothing about multiplicity.
    Inconclusive,
}

impl fmt::Display for UniquenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniquenessVerdict::CertifiedUnique => f.write_str("certified-unique"),
            UniquenessVerdict::Inconclusive => f.write_str("inconclusive"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UniquenessCertificate {
    pub extrema: KernelExtrema,
    pub alpha: f64,
    /// `(M/m₀)^α − (m/M₀)^α`.
    pub lhs: f64,
    /// `1/α`.
    pub bound: f64,
    pub verdict: UniquenessVerdict,
}

impl UniquenessCertificate {
    pub fn certified(&self) -> bool {
        self.verdict == UniquenessVerdict::CertifiedUnique
    }
}

/// Checks `(M/m₀)^α − (m/M₀)^α < 1/α` with grid extrema.
pub fn uniqueness_certificate(
    kernel: &(dyn Fn(f64, f64) -> f64 + Sync),
    alpha: f64,
    grid_m: usize,
) -> Result<UniquenessCertificate> {
    if !(alpha > 1.0) {
        return Err(Error::invalid(format!(
            "uniqueness condition needs α > 1, got {alpha}"
        )));
    }
    let e = kernel_extrema(kernel, grid_m)?;
    let lhs = (e.max / e.min_zero_row).powf(alpha) - (e.min / e.max_zero_row).powf(alpha);
    let bound = 1.0 / alpha;
    let verdict = if lhs < bound {
        UniquenessVerdict::CertifiedUnique
    } else {
        UniquenessVerdict::Inconclusive
    };
    Ok(UniquenessCertificate {
        extrema: e,
        alpha,
        lhs,
        bound,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{
        analytic_fixed_point, build_kernel, designed_boundary_law, designed_power,
    };

    fn rule(m: usize) -> Arc<QuadratureRule> {
        Arc::new(QuadratureRule::gauss_legendre(m).unwrap())
    }

    fn constructed(n: usize, p: usize, k: u64, m: usize) -> Kernel {
        Kernel::new(build_kernel(n, p, k).unwrap().evaluator(), rule(m)).unwrap()
    }

    #[test]
    fn non_positive_kernel_rejected() {
        let err = Kernel::from_fn(|t, u| t - u, rule(4)).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        assert!(Kernel::from_fn(|_, _| f64::INFINITY, rule(4)).is_err());
    }

    #[test]
    fn h_on_constant_kernel() {
        let r = rule(5);
        let k = Kernel::constant(1.0, r.clone()).unwrap();
        let one = GridFunction::constant(r.clone(), 1.0);
        assert!(sup_distance(&apply_h(&k, 2.0, &one).unwrap(), &one).unwrap() < 1e-15);
        let c = GridFunction::constant(r.clone(), 3.0);
        let out = apply_h(&k, 2.0, &c).unwrap();
        assert!(out.values().iter().all(|&v| (v - 9.0).abs() < 1e-13));
        assert!(apply_h(&k, 1.0, &one).is_err());
        let zero = GridFunction::constant(r, 0.0);
        assert!(matches!(apply_h(&k, 2.0, &zero), Err(Error::Domain(_))));
    }

    #[test]
    fn h_fixes_designed_single_term() {
        let k = constructed(1, 1, 107, 16);
        let g = analytic_fixed_point(1, 1, 107, k.rule().clone()).unwrap();
        assert!(h_residual(&k, 107.0, &g).unwrap() <= 1e-10);
    }

    #[test]
    fn r_examples() {
        let r = rule(6);
        let f = GridFunction::sample(r.clone(), |u| 1.0 + u * u).unwrap();
        let constant = Kernel::constant(2.5, r.clone()).unwrap();
        let out = apply_r(&constant, 3.0, &f).unwrap();
        assert!(out.values().iter().all(|&v| (v - 1.0).abs() < 1e-14));
        let t_free = Kernel::from_fn(|_, u| 1.0 + u, r.clone()).unwrap();
        let out = apply_r(&t_free, 2.0, &f).unwrap();
        assert!(out.values().iter().all(|&v| (v - 1.0).abs() < 1e-14));
        assert!(apply_r(&constant, 0.0, &f).is_err());
    }

    #[test]
    fn r_fixes_normalized_designed_law() {
        let k = constructed(1, 1, 107, 16);
        let f = designed_boundary_law(1, 1, k.rule().clone()).unwrap();
        assert!(r_residual(&k, 107.0, &f).unwrap() <= 1e-9);
        assert!((r_value_at(&k, 107.0, &f, 0.0) - 1.0).abs() < 1e-12);
        // the unnormalized g^k is mapped onto the normalized law in one step
        let g_pow = designed_power(1, 1, k.rule().clone()).unwrap();
        let image = apply_r(&k, 107.0, &g_pow).unwrap();
        assert!(sup_distance(&image, &f).unwrap() <= 1e-9);
    }

    #[test]
    fn w_and_omega() {
        let r = rule(5);
        let one_k = Kernel::constant(1.0, r.clone()).unwrap();
        let one = GridFunction::constant(r.clone(), 1.0);
        let w = apply_w(&one_k, &one).unwrap();
        assert!(w.values().iter().all(|&v| (v - 1.0).abs() < 1e-15));
        assert!((omega(&one_k, &one).unwrap() - 1.0).abs() < 1e-15);

        let k = Kernel::from_fn(|t, u| 1.0 + t * u + 0.3 * u * u, r.clone()).unwrap();
        let f = GridFunction::sample(r.clone(), |u| 0.5 + u).unwrap();
        let a = 3.7;
        assert!((omega(&k, &f.scaled(a)).unwrap() - a * omega(&k, &f).unwrap()).abs() < 1e-13);
        let w = apply_w(&k, &f).unwrap();
        let om = omega(&k, &f).unwrap();
        let by_def = w.map(|v| (v / om).powf(2.5));
        assert!(sup_distance(&apply_r(&k, 2.5, &f).unwrap(), &by_def).unwrap() < 1e-13);
    }

    #[test]
    fn conversions_on_constant_kernel() {
        let r = rule(5);
        let k = Kernel::constant(1.0, r.clone()).unwrap();
        let one = GridFunction::constant(r.clone(), 1.0);
        let pair = r_fixed_to_eigen(&k, 2.0, &one, 1e-12).unwrap();
        assert!(sup_distance(&pair.h, &one).unwrap() < 1e-15);
        assert!((pair.lambda - 1.0).abs() < 1e-15);
        let pair = EigenPair {
            h: one.clone(),
            lambda: 1.0,
        };
        assert!(sup_distance(&eigen_to_r_fixed(&pair, 3.0).unwrap(), &one).unwrap() < 1e-15);
        let h = GridFunction::sample(r, |u| 1.0 + u).unwrap();
        let pair = EigenPair {
            h: h.clone(),
            lambda: 2.0,
        };
        assert!(sup_distance(&eigen_to_r_fixed(&pair, 1.0).unwrap(), &h).unwrap() < 1e-15);
    }

    #[test]
    fn conversions_on_designed_kernel() {
        let k = constructed(1, 1, 107, 16);
        let f0 = designed_boundary_law(1, 1, k.rule().clone()).unwrap();
        let pair = r_fixed_to_eigen(&k, 107.0, &f0, 1e-9).unwrap();
        // λ = ω(f0) = g(0)^(1−k) = (7/8)^(−106/107)
        let expected = (7.0f64 / 8.0).powf(-106.0 / 107.0);
        assert!((pair.lambda - expected).abs() < 1e-9, "{}", pair.lambda);
        assert!(pair.residual(&k, 107.0).unwrap() <= 1e-9);
        assert!((pair.value_at_zero(&k, 107.0) - 1.0).abs() < 1e-12);
        let back = eigen_to_r_fixed(&pair, 107.0).unwrap();
        assert!(sup_distance(&back, &f0).unwrap() <= 1e-10);
        let bumped = f0.map(|v| v + 0.05);
        assert!(matches!(
            r_fixed_to_eigen(&k, 107.0, &bumped, 1e-9),
            Err(Error::PreconditionViolation { .. })
        ));
    }

    #[test]
    fn rescaling() {
        let r = rule(4);
        let f = GridFunction::sample(r.clone(), |u| 1.0 + u).unwrap();
        assert!(sup_distance(&eigen_rescale(&f, 2.0, 2.0, 5.0).unwrap(), &f).unwrap() < 1e-15);
        let doubled = eigen_rescale(&f, 1.5, 3.0, 2.0).unwrap();
        assert!(sup_distance(&doubled, &f.scaled(2.0)).unwrap() < 1e-14);
        assert!(eigen_rescale(&f, 1.0, 2.0, 1.0).is_err());

        let k = constructed(1, 1, 107, 16);
        let f0 = designed_boundary_law(1, 1, k.rule().clone()).unwrap();
        let pair = r_fixed_to_eigen(&k, 107.0, &f0, 1e-9).unwrap();
        let out = eigen_rescale(&pair.h, pair.lambda, 3.0, 107.0).unwrap();
        let image = apply_h(&k, 107.0, &out).unwrap();
        let rel = sup_distance(&image, &out.scaled(3.0)).unwrap() / image.sup_norm();
        assert!(rel <= 1e-9);
    }

    #[test]
    fn h_and_r_fixed_points_correspond() {
        let k = constructed(1, 1, 107, 16);
        let g = analytic_fixed_point(1, 1, 107, k.rule().clone()).unwrap();
        let f = r_fixed_from_h(&k, 107.0, &g).unwrap();
        let law = designed_boundary_law(1, 1, k.rule().clone()).unwrap();
        assert!(sup_distance(&f, &law).unwrap() < 1e-10);
        let back = h_fixed_from_r(&k, 107.0, &f).unwrap();
        assert!(sup_distance(&back, &g).unwrap() < 1e-13);
    }

    #[test]
    fn extrema_examples() {
        let e = kernel_extrema(&|t, u| 2.0 + t * u, 11).unwrap();
        assert_eq!(
            (e.min, e.max, e.min_zero_row, e.max_zero_row),
            (2.0, 3.0, 2.0, 2.0)
        );
        let e = kernel_extrema(&|_, _| 1.5, 5).unwrap();
        assert_eq!(
            (e.min, e.max, e.min_zero_row, e.max_zero_row),
            (1.5, 1.5, 1.5, 1.5)
        );
        let e = kernel_extrema(&|t, u| 1.0 + 0.01 * (t + u), 11).unwrap();
        assert!((e.min - 1.0).abs() < 1e-15);
        assert!((e.max - 1.02).abs() < 1e-15);
        assert!((e.min_zero_row - 1.0).abs() < 1e-15);
        assert!((e.max_zero_row - 1.01).abs() < 1e-15);
    }

    #[test]
    fn certificate_examples() {
        let c = uniqueness_certificate(&|_, _| 4.0, 2.5, 5).unwrap();
        assert!(c.certified());
        assert_eq!(c.lhs, 0.0);
        let c = uniqueness_certificate(&|t, u| 1.0 + 0.01 * (t + u), 2.0, 11).unwrap();
        assert!(c.certified());
        assert!((c.lhs - (1.02f64.powi(2) - (1.0f64 / 1.01).powi(2))).abs() < 1e-14);
        assert!((c.lhs - 0.0601).abs() < 1e-3);
        let c = uniqueness_certificate(&|t, u| 2.0 + t * u, 2.0, 11).unwrap();
        assert!(!c.certified());
        assert!((c.lhs - 1.25).abs() < 1e-14);
        assert_eq!(c.verdict.to_string(), "inconclusive");
    }
}
