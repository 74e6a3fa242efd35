//! The n designed fixed points g_j of H_k for a constructed kernel.

use std::sync::Arc;

use hamlab::kernel::{analytic_fixed_point, build_kernel};
use hamlab::operators::{h_residual, r_fixed_from_h, Kernel};
use hamlab::QuadratureRule;

fn main() -> hamlab::Result<()> {
    let (n, p, k) = (2, 1, 47040);
    let rule = Arc::new(QuadratureRule::gauss_legendre(24)?);
    let kernel = Kernel::new(build_kernel(n, p, k)?.evaluator(), rule.clone())?;
    let alpha = k as f64;

    for j in 1..=n {
        let g = analytic_fixed_point(j, p, k, rule.clone())?;
        let f = r_fixed_from_h(&kernel, alpha, &g)?;
        println!(
            "g_{j}: sup|H g − g| = {:.2e}, g(0) = {:.10}, R-side f(1) = {:.6}",
            h_residual(&kernel, alpha, &g)?,
            g.values()[0],
            f.values()[rule.len() - 1]
        );
    }
    Ok(())
}
