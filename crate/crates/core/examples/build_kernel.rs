//! Builds K_(n,p)(·,·;k), prints its φ polynomials and checks positivity.

use hamlab::kernel::{build_kernel, positivity_check, zeta0, zeta0_exact};

fn main() -> hamlab::Result<()> {
    let (n, p, k) = (2, 1, 47040);
    println!("zeta0({n}) = {} ≈ {:.3}", zeta0_exact(n), zeta0(n));

    let kernel = build_kernel(n, p, k)?;
    for phi in kernel.phis() {
        println!("phi_{} coefficients {:?}", phi.s, phi.coeffs);
    }
    println!("K(0,0) = {:.12}", kernel.eval(0.0, 0.0));
    println!("K(1,1) = {:.12}", kernel.eval(1.0, 1.0));

    let report = positivity_check(&|t, u| kernel.eval(t, u), 201)?;
    println!(
        "min over a 201² grid: {:.6} (positive: {})",
        report.min_value,
        report.is_positive()
    );
    Ok(())
}
