//! Quadrature rules on `[0, 1]` and functions sampled at their nodes.
//!
//! Every integral in the crate is node-collocated: operators act on
//! [`GridFunction`]s that share one [`QuadratureRule`], so an integral is a
//! weighted sum over the rule's nodes.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    GaussLegendre,
    /// Equally spaced nodes including both endpoints; only used as a
    /// cross-check oracle.
    CompositeSimpson,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::GaussLegendre => f.write_str("gauss_legendre"),
            Scheme::CompositeSimpson => f.write_str("composite_simpson"),
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gauss_legendre" | "gauss-legendre" => Ok(Scheme::GaussLegendre),
            "composite_simpson" | "composite-simpson" | "simpson" => Ok(Scheme::CompositeSimpson),
            other => Err(Error::Parse(format!("unknown quadrature scheme `{other}`"))),
        }
    }
}

/// Nodes and positive weights on `[0, 1]`, weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    scheme: Scheme,
    nodes: Vec<f64>,
    /// `nodes − 1/2`, exactly antisymmetric for symmetric rules.
    centered: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(scheme: Scheme, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::invalid(format!(
                "quadrature needs at least 2 nodes, got {m}"
            )));
        }
        let (nodes, centered, weights) = match scheme {
            Scheme::GaussLegendre => gauss_legendre_unit(m),
            Scheme::CompositeSimpson => {
                if m % 2 == 0 {
                    return Err(Error::invalid(format!(
                        "composite Simpson needs an odd node count, got {m}"
                    )));
                }
                simpson_unit(m)
            }
        };
        Ok(Self {
            scheme,
            nodes,
            centered,
            weights,
        })
    }

    pub fn gauss_legendre(m: usize) -> Result<Self> {
        Self::new(Scheme::GaussLegendre, m)
    }

    pub fn scheme(&self) -> Scheme {
        self.scheme
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Nodes shifted to `[−1/2, 1/2]`.
    pub fn centered_nodes(&self) -> &[f64] {
        &self.centered
    }

    /// `∫_{−1/2}^{1/2} f(u) du` with the rule moved onto the centered interval.
    /// Mirrored nodes are summed in pairs, so odd integrands vanish exactly.
    pub fn integrate_centered(&self, f: impl Fn(f64) -> f64) -> f64 {
        let m = self.len();
        let term = |i: usize| self.weights[i] * f(self.centered[i]);
        let mut total = 0.0;
        for i in 0..m / 2 {
            total += term(i) + term(m - 1 - i);
        }
        if m % 2 == 1 {
            total += term(m / 2);
        }
        total
    }

    /// `Σ wᵢ·valuesᵢ`.
    pub fn integrate(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.len() {
            return Err(Error::invalid(format!(
                "expected {} values, got {}",
                self.len(),
                values.len()
            )));
        }
        Ok(self.dot(values))
    }

    /// Integrates a point evaluator directly.
    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub(crate) fn dot(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Newton iteration on the Legendre recurrence, mapped from `[-1, 1]`.
fn gauss_legendre_unit(m: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut centered = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let half = m.div_ceil(2);
    for i in 0..half {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(m, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 {
                let (_, d) = legendre_with_derivative(m, x);
                dp = d;
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // x is the i-th largest root; store the mirrored pair.
        nodes[i] = 0.5 * (1.0 - x);
        nodes[m - 1 - i] = 0.5 * (1.0 + x);
        centered[i] = -0.5 * x;
        centered[m - 1 - i] = 0.5 * x;
        weights[i] = 0.5 * w;
        weights[m - 1 - i] = 0.5 * w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.5;
        centered[m / 2] = 0.0;
    }
    (nodes, centered, weights)
}

/// Value and derivative of `P_m(x)` by the three-term recurrence.
fn legendre_with_derivative(m: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=m {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = m as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

fn simpson_unit(m: usize) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let intervals = m - 1;
    let h = 1.0 / intervals as f64;
    let nodes: Vec<f64> = (0..m).map(|i| i as f64 * h).collect();
    let centered = (0..m)
        .map(|i| (2 * i) as f64 / (2 * intervals) as f64 - 0.5)
        .collect();
    let weights = (0..m)
        .map(|i| {
            let c = if i == 0 || i == m - 1 {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            c * h / 3.0
        })
        .collect();
    (nodes, centered, weights)
}

/// A real function on `[0, 1]` known through its values at a rule's nodes.
#[derive(Debug, Clone)]
pub struct GridFunction {
    rule: Arc<QuadratureRule>,
    values: Vec<f64>,
}

impl GridFunction {
    pub fn new(rule: Arc<QuadratureRule>, values: Vec<f64>) -> Result<Self> {
        if values.len() != rule.len() {
            return Err(Error::invalid(format!(
                "grid function has {} values for a {}-node rule",
                values.len(),
                rule.len()
            )));
        }
        Ok(Self { rule, values })
    }

    pub fn constant(rule: Arc<QuadratureRule>, c: f64) -> Self {
        let values = vec![c; rule.len()];
        Self { rule, values }
    }

    /// Samples `f` at every node; a non-finite sample is an error naming the node.
    pub fn sample(rule: Arc<QuadratureRule>, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = rule
            .nodes()
            .iter()
            .enumerate()
            .map(|(node, &x)| {
                let value = f(x);
                if value.is_finite() {
                    Ok(value)
                } else {
                    Err(Error::Evaluation { node, value })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rule, values })
    }

    pub fn rule(&self) -> &Arc<QuadratureRule> {
        &self.rule
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn integral(&self) -> f64 {
        self.rule.dot(&self.values)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            rule: Arc::clone(&self.rule),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    /// Accepts the function as positive when every value exceeds `1e-300`.
    pub fn is_positive(&self) -> bool {
        self.values.iter().all(|&v| v > crate::POSITIVITY_FLOOR)
    }

    pub(crate) fn same_rule(&self, other: &GridFunction) -> bool {
        Arc::ptr_eq(&self.rule, &other.rule) || *self.rule == *other.rule
    }
}

/// Largest node-wise absolute difference.
pub fn sup_distance(f: &GridFunction, g: &GridFunction) -> Result<f64> {
    if !f.same_rule(g) {
        return Err(Error::invalid(
            "grid functions live on different quadrature rules",
        ));
    }
    Ok(f.values
        .iter()
        .zip(&g.values)
        .fold(0.0, |acc, (a, b)| acc.max((a - b).abs())))
}
