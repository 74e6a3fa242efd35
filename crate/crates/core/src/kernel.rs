//! Kernels `K_(n,p)(t,u;k)` whose Hammerstein operator `H_k` has `n`
//! designed positive fixed points.
//!
//! With `φ_s` the polynomials biorthogonal to `u^(2(p+j)−1)` on `[−1/2, 1/2]`,
//!
//! ```text
//! K_(n,p)(t,u;k) = 1 + Σ_s ((1 + t^(2(p+s)−1))^(1/k) − 1) φ_s(u)
//! ```
//!
//! and the functions `g_j(t) = (1 + (t−1/2)^(2(p+j)−1))^(1/k)` satisfy
//! `H_k g_j = g_j` for the kernel shifted onto `[0, 1]²`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cauchy::{invert_moment_matrix, DenseMatrix};
use crate::error::{Error, Result};
use crate::operators::Evaluator;
use crate::quadrature::{GridFunction, QuadratureRule};

/// `(1+x)^(1/k) − 1` without cancellation.
pub fn root_bracket(x: f64, k: f64) -> f64 {
    (x.ln_1p() / k).exp_m1()
}

/// `(1+x)^(1/k)`.
pub fn root(x: f64, k: f64) -> f64 {
    (x.ln_1p() / k).exp()
}

/// Odd exponent `2(p+s)−1` attached to index `s` (one-based).
pub fn odd_exponent(p: usize, s: usize) -> i32 {
    (2 * (p + s) - 1) as i32
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiPolynomial {
    pub s: usize,
    pub n: usize,
    pub p: usize,
    /// Coefficients of `u^(2p−1), u^(2p+1), …, u^(2(n+p)−3)`.
    pub coeffs: Vec<f64>,
}

impl PhiPolynomial {
    pub fn eval(&self, u: f64) -> f64 {
        let u2 = u * u;
        let even = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * u2 + c);
        even * u.powi((2 * self.p - 1) as i32)
    }
}

/// Row `s` (one-based) of the inverse moment matrix as a polynomial.
pub fn build_phi(s: usize, n: usize, p: usize, inverse: &DenseMatrix) -> Result<PhiPolynomial> {
    if s == 0 || s > n {
        return Err(Error::invalid(format!("phi index {s} outside 1..={n}")));
    }
    if inverse.order() != n {
        return Err(Error::invalid(format!(
            "inverse moment matrix has order {}, expected {n}",
            inverse.order()
        )));
    }
    Ok(PhiPolynomial {
        s,
        n,
        p,
        coeffs: inverse.row(s - 1).to_vec(),
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstructedKernel {
    n: usize,
    p: usize,
    k: f64,
    phis: Vec<PhiPolynomial>,
}

pub fn build_kernel(n: usize, p: usize, k: u64) -> Result<ConstructedKernel> {
    if n == 0 || p == 0 {
        return Err(Error::invalid(format!(
            "need n ≥ 1 and p ≥ 1, got n={n}, p={p}"
        )));
    }
    if k < 2 {
        return Err(Error::invalid(format!("need k ≥ 2, got {k}")));
    }
    let inverse = invert_moment_matrix(n, p)?;
    let phis = (1..=n)
        .map(|s| build_phi(s, n, p, &inverse))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstructedKernel {
        n,
        p,
        k: k as f64,
        phis,
    })
}

impl ConstructedKernel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn phis(&self) -> &[PhiPolynomial] {
        &self.phis
    }

    /// `K_(n,p)(t,u;k)` on the centered square `[−1/2, 1/2]²`.
    pub fn eval_centered(&self, t: f64, u: f64) -> f64 {
        1.0 + self
            .phis
            .iter()
            .map(|phi| root_bracket(t.powi(odd_exponent(self.p, phi.s)), self.k) * phi.eval(u))
            .sum::<f64>()
    }

    /// The kernel on `[0, 1]²`: `K_(n,p)(t−1/2, u−1/2; k)`.
    pub fn eval(&self, t: f64, u: f64) -> f64 {
        self.eval_centered(t - 0.5, u - 0.5)
    }

    pub fn evaluator(&self) -> Evaluator {
        let kernel = self.clone();
        Arc::new(move |t, u| kernel.eval(t, u))
    }

    pub fn meets_positivity_threshold(&self) -> bool {
        self.k >= zeta0(self.n)
    }
}

fn double_factorial_odd(m: u64) -> BigInt {
    (1..=m).step_by(2).map(BigInt::from).product()
}

fn factorial(m: u64) -> BigInt {
    (1..=m).map(BigInt::from).product()
}

/// `ζ₀(n) = (64/9)·(4ⁿ−1)/(4n+1)·((4n+1)!! / ((n−1)!·(2n+1)!!))²` as a rational.
pub fn zeta0_exact(n: usize) -> BigRational {
    assert!(n >= 1, "zeta0 needs n ≥ 1");
    let n = n as u64;
    let prefactor = BigRational::new(
        BigInt::from(64) * ((BigInt::from(1) << (2 * n)) - 1),
        BigInt::from(9 * (4 * n + 1)),
    );
    let ratio = BigRational::new(
        double_factorial_odd(4 * n + 1),
        factorial(n - 1) * double_factorial_odd(2 * n + 1),
    );
    prefactor * &ratio * &ratio
}

/// Floating-point `ζ₀(n)`; switches to a sum of logarithms above `n = 8`.
pub fn zeta0(n: usize) -> f64 {
    assert!(n >= 1, "zeta0 needs n ≥ 1");
    if n <= 8 {
        let n = n as u64;
        let odd = |m: u64| (1..=m).step_by(2).map(|x| x as f64).product::<f64>();
        let fact = (1..n).map(|x| x as f64).product::<f64>();
        let ratio = odd(4 * n + 1) / (fact * odd(2 * n + 1));
        64.0 / 9.0 * (4f64.powi(n as i32) - 1.0) / (4 * n + 1) as f64 * ratio * ratio
    } else {
        let n = n as u64;
        let log_odd = |m: u64| (1..=m).step_by(2).map(|x| (x as f64).ln()).sum::<f64>();
        let log_fact = (1..n).map(|x| (x as f64).ln()).sum::<f64>();
        let log_ratio = log_odd(4 * n + 1) - log_fact - log_odd(2 * n + 1);
        let log_pref =
            (64.0f64 / 9.0).ln() + (4f64.powi(n as i32) - 1.0).ln() - ((4 * n + 1) as f64).ln();
        (log_pref + 2.0 * log_ratio).exp()
    }
}

/// Smallest grid value of a kernel and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub min_value: f64,
    pub argmin: (f64, f64),
    pub grid_m: usize,
}

impl PositivityReport {
    pub fn is_positive(&self) -> bool {
        self.min_value > 0.0
    }
}

/// `grid_m` equally spaced points from 0 to 1.
pub fn uniform_grid(grid_m: usize) -> Vec<f64> {
    (0..grid_m)
        .map(|i| i as f64 / (grid_m - 1) as f64)
        .collect()
}

/// Scans a `grid_m × grid_m` lattice on `[0,1]²` including the boundary.
/// Only reports; deciding what a non-positive minimum means is the caller's job.
pub fn positivity_check(
    kernel: &(dyn Fn(f64, f64) -> f64 + Sync),
    grid_m: usize,
) -> Result<PositivityReport> {
    if grid_m < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 points, got {grid_m}"
        )));
    }
    let grid = uniform_grid(grid_m);
    let rows = grid
        .par_iter()
        .enumerate()
        .map(|(i, &t)| {
            let mut best = (f64::INFINITY, 0.0);
            for (j, &u) in grid.iter().enumerate() {
                let value = kernel(t, u);
                if !value.is_finite() {
                    return Err(Error::Evaluation {
                        node: i * grid_m + j,
                        value,
                    });
                }
                if value < best.0 {
                    best = (value, u);
                }
            }
            Ok((best.0, t, best.1))
        })
        .collect::<Result<Vec<_>>>()?;
    let (min_value, t, u) = rows
        .into_iter()
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .expect("non-empty grid");
    Ok(PositivityReport {
        min_value,
        argmin: (t, u),
        grid_m,
    })
}

/// `g_j(t) = (1 + (t−1/2)^(2(p+j)−1))^(1/k)` evaluated at `t`.
pub fn designed_value(j: usize, p: usize, k: f64, t: f64) -> f64 {
    root((t - 0.5).powi(odd_exponent(p, j)), k)
}

/// The designed fixed point `g_j` of `H_k`, sampled on the rule's nodes.
pub fn analytic_fixed_point(
    j: usize,
    p: usize,
    k: u64,
    rule: Arc<QuadratureRule>,
) -> Result<GridFunction> {
    check_designed(j, p, k)?;
    GridFunction::sample(rule, |t| designed_value(j, p, k as f64, t))
}

/// `g_j^k = 1 + (t−1/2)^(2(p+j)−1)`, computed without powers of `g_j`.
pub fn designed_power(j: usize, p: usize, rule: Arc<QuadratureRule>) -> Result<GridFunction> {
    if j == 0 || p == 0 {
        return Err(Error::invalid("need j ≥ 1 and p ≥ 1"));
    }
    GridFunction::sample(rule, |t| 1.0 + (t - 0.5).powi(odd_exponent(p, j)))
}

/// The fixed point of `R_k` matching `g_j`: `g_j^k / g_j(0)^k`, normalized to
/// one at `t = 0`.
pub fn designed_boundary_law(
    j: usize,
    p: usize,
    rule: Arc<QuadratureRule>,
) -> Result<GridFunction> {
    let q = odd_exponent(p, j);
    let at_zero = 1.0 + (-0.5f64).powi(q);
    Ok(designed_power(j, p, rule)?.map(|v| v / at_zero))
}

fn check_designed(j: usize, p: usize, k: u64) -> Result<()> {
    if j == 0 || p == 0 || k < 2 {
        return Err(Error::invalid(format!(
            "need j ≥ 1, p ≥ 1, k ≥ 2; got j={j}, p={p}, k={k}"
        )));
    }
    Ok(())
}

/// Point-wise comparison `K_(n,p) ≤ K_(n,1)` on a uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub holds: bool,
    /// Largest `K_(n,p) − K_(n,1)` seen; non-positive when the inequality holds.
    pub max_excess: f64,
    pub location: (f64, f64),
    pub violations: usize,
    pub grid_m: usize,
}

pub fn monotonicity_check(n: usize, p: usize, k: u64, grid_m: usize) -> Result<MonotonicityReport> {
    if grid_m < 2 {
        return Err(Error::invalid(format!(
            "grid needs at least 2 points, got {grid_m}"
        )));
    }
    let lhs = build_kernel(n, p, k)?;
    let rhs = build_kernel(n, 1, k)?;
    let grid = uniform_grid(grid_m);
    let slack = 1e-12;
    let mut max_excess = f64::NEG_INFINITY;
    let mut location = (0.0, 0.0);
    let mut violations = 0;
    for &t in &grid {
        for &u in &grid {
            let excess = lhs.eval(t, u) - rhs.eval(t, u);
            if excess > slack {
                violations += 1;
            }
            if excess > max_excess {
                max_excess = excess;
                location = (t, u);
            }
        }
    }
    Ok(MonotonicityReport {
        holds: violations == 0,
        max_excess,
        location,
        violations,
        grid_m,
    })
}
