//! Boundary laws on the binary Cayley tree and finite-volume compatibility.

use std::sync::Arc;

use hamlab::gibbs::{
    boundary_law_residual, boundary_laws, brute_force_partition, compatibility_residual,
    count_ti_gibbs, model_from_xi, partition_function, CompatibilityOptions,
};
use hamlab::solver::SolveConfig;
use hamlab::QuadratureRule;

fn main() -> hamlab::Result<()> {
    let rule = Arc::new(QuadratureRule::gauss_legendre(16)?);
    let model = model_from_xi(Arc::new(|t, u| t * u), 2, 1.0, 1.0, rule.clone())?;

    let config = SolveConfig {
        tol: 1e-12,
        ..SolveConfig::default()
    };
    let laws = boundary_laws(&model, &config)?;
    let f = &laws.solutions[0].f;
    println!(
        "boundary law residual {:.2e}",
        boundary_law_residual(&model, f)?
    );

    let options = CompatibilityOptions::default();
    for depth in 1..=2 {
        let good = compatibility_residual(&model, f, depth, &options)?;
        let bumped = compatibility_residual(&model, &f.map(|v| v + 0.05), depth, &options)?;
        println!(
            "depth {depth}: compatibility {:.2e}, with f + 0.05 {:.2e}",
            good.residual, bumped.residual
        );
    }

    let z = partition_function(&model, f, 1)?;
    let brute = brute_force_partition(&model, f, 1, 1 << 20)?;
    println!("Z depth 1: factorized {z:.12e}, brute force {brute:.12e}");

    let count = count_ti_gibbs(1, 1, 107, rule, &SolveConfig::for_alpha(107.0))?;
    println!(
        "constructed (1,1,107): {} translation-invariant measures",
        count.count
    );
    Ok(())
}
