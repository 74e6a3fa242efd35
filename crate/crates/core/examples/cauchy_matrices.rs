//! Closed-form Cauchy determinants and inverses next to plain elimination.

use hamlab::cauchy::{
    cauchy_det, cauchy_inverse, cauchy_matrix, det_relation_check, invert_moment_matrix,
    moment_matrix, CauchyParams, MomentCauchyVariant,
};

fn main() -> hamlab::Result<()> {
    let params = CauchyParams::new(vec![1.0, 2.5, 4.0], vec![0.5, 3.0, 7.0])?;
    let b = cauchy_matrix(&params);
    println!("closed-form det  {:.15e}", cauchy_det(&params));
    println!("LU det           {:.15e}", b.lu_determinant());
    println!(
        "|B·B⁻¹ − I|      {:.2e}",
        b.identity_residual(&cauchy_inverse(&params)?)
    );

    // odd-moment matrices and their inverses
    for (n, p) in [(2, 1), (3, 2)] {
        let a = moment_matrix(n, p)?;
        let inv = invert_moment_matrix(n, p)?;
        let rel = det_relation_check(n, p, MomentCauchyVariant::Scaled)?;
        println!(
            "n={n} p={p}: |A·A⁻¹ − I| {:.2e}, det relation gap {:.2e}",
            a.identity_residual(&inv),
            rel.relative_gap()
        );
    }
    Ok(())
}
