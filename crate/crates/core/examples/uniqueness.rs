//! Sufficient condition for a unique positive fixed point.

use std::sync::Arc;

use hamlab::operators::uniqueness_certificate;
use hamlab::solver::{multi_start, SolveConfig};
use hamlab::{operators::Kernel, QuadratureRule};

fn main() -> hamlab::Result<()> {
    let alpha = 2.0;
    let kernels: [(&str, fn(f64, f64) -> f64); 2] = [
        ("1 + 0.01(t+u)", |t, u| 1.0 + 0.01 * (t + u)),
        ("2 + t·u", |t, u| 2.0 + t * u),
    ];
    for (name, k) in kernels {
        let cert = uniqueness_certificate(&k, alpha, 1001)?;
        println!(
            "{name:<14} lhs {:.4}  1/α {}  {}",
            cert.lhs, cert.bound, cert.verdict
        );
    }

    let rule = Arc::new(QuadratureRule::gauss_legendre(16)?);
    let kernel = Kernel::from_fn(kernels[0].1, rule)?;
    let config = SolveConfig::default()
        .with_seeds(vec![])
        .with_random_seeds(20);
    let search = multi_start(&kernel, alpha, &config)?;
    println!(
        "20 random starts → {} distinct solution(s)",
        search.solutions.len()
    );
    Ok(())
}
