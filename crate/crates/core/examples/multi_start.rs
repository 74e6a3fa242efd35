//! Multi-start search for fixed points of R_α, with the H-side count.

use std::sync::Arc;

use hamlab::kernel::build_kernel;
use hamlab::operators::Kernel;
use hamlab::solver::{count_fixed_points, SolveConfig};
use hamlab::QuadratureRule;

fn main() -> hamlab::Result<()> {
    let rule = Arc::new(QuadratureRule::gauss_legendre(24)?);
    let kernel = Kernel::new(build_kernel(2, 1, 47040)?.evaluator(), rule)?;
    let alpha = 47040.0;

    let config = SolveConfig::for_alpha(alpha)
        .with_designed_seeds(2, 1)
        .with_random_seeds(6);
    let count = count_fixed_points(&kernel, alpha, &config)?;

    for s in &count.search.solutions {
        println!(
            "{:<14} λ = {:<12.6e} residual {:.1e} after {} iterations",
            s.seed_label, s.lambda, s.residual_r, s.iterations
        );
    }
    println!(
        "R solutions {}, H solutions {}, matched {}",
        count.count_r, count.count_h, count.matched
    );
    Ok(())
}
