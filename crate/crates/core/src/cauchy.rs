//! Cauchy matrices `1/(aᵢ+bⱼ)`, their closed-form determinants and inverses,
//! and the odd-moment matrices built on top of them.
//!
//! Closed-form products are accumulated in log space with sign tracking.
//! The [`exact`] submodule repeats the computations over big rationals and
//! serves as ground truth for small orders.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Square matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> f64) -> Self {
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                entries.push(f(i, j));
            }
        }
        Self { n, entries }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.n, other.n, "order mismatch");
        Self::from_fn(self.n, |i, j| {
            (0..self.n).map(|l| self.get(i, l) * other.get(l, j)).sum()
        })
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Largest entry-wise deviation of `self · other` from the identity.
    pub fn identity_residual(&self, other: &DenseMatrix) -> f64 {
        let product = self.mul(other);
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((product.get(i, j) - target).abs());
            }
        }
        worst
    }

    /// Determinant by LU with partial pivoting.
    pub fn lu_determinant(&self) -> f64 {
        let n = self.n;
        let mut a = self.entries.clone();
        let mut det = 1.0;
        for c in 0..n {
            let pivot = (c..n)
                .max_by(|&r, &s| a[r * n + c].abs().total_cmp(&a[s * n + c].abs()))
                .unwrap();
            if a[pivot * n + c] == 0.0 {
                return 0.0;
            }
            if pivot != c {
                for j in 0..n {
                    a.swap(c * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[c * n + c];
            det *= p;
            for r in c + 1..n {
                let factor = a[r * n + c] / p;
                for j in c..n {
                    a[r * n + j] -= factor * a[c * n + j];
                }
            }
        }
        det
    }
}

/// A signed product kept as `sign · exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SignedLog {
    pub sign: f64,
    pub log_abs: f64,
}

impl SignedLog {
    pub const ONE: SignedLog = SignedLog {
        sign: 1.0,
        log_abs: 0.0,
    };

    pub fn product(factors: impl IntoIterator<Item = f64>) -> Self {
        factors.into_iter().fold(Self::ONE, |acc, x| acc.times(x))
    }

    pub fn times(self, x: f64) -> Self {
        if x == 0.0 || self.sign == 0.0 {
            return SignedLog {
                sign: 0.0,
                log_abs: f64::NEG_INFINITY,
            };
        }
        SignedLog {
            sign: self.sign * x.signum(),
            log_abs: self.log_abs + x.abs().ln(),
        }
    }

    pub fn over(self, other: SignedLog) -> Self {
        SignedLog {
            sign: self.sign * other.sign,
            log_abs: self.log_abs - other.log_abs,
        }
    }

    pub fn value(self) -> f64 {
        if self.sign == 0.0 {
            0.0
        } else {
            self.sign * self.log_abs.exp()
        }
    }
}

/// Parameters of `B[a₁..aₙ; b₁..bₙ]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CauchyParams {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl CauchyParams {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::invalid(format!(
                "Cauchy parameters need equal nonzero lengths, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if let Some(x) = a.iter().chain(&b).find(|&&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::invalid(format!(
                "Cauchy parameter {x} is not positive"
            )));
        }
        Ok(Self { a, b })
    }

    pub fn order(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    fn is_degenerate(&self) -> bool {
        has_repeat(&self.a) || has_repeat(&self.b)
    }
}

fn has_repeat(xs: &[f64]) -> bool {
    xs.iter().enumerate().any(|(i, x)| xs[..i].contains(x))
}

pub fn cauchy_matrix(params: &CauchyParams) -> DenseMatrix {
    DenseMatrix::from_fn(params.order(), |i, j| 1.0 / (params.a[i] + params.b[j]))
}

fn cauchy_det_log(params: &CauchyParams) -> SignedLog {
    let (a, b) = (&params.a, &params.b);
    let n = a.len();
    let mut num = SignedLog::ONE;
    for i in 0..n {
        for j in i + 1..n {
            num = num.times(a[i] - a[j]).times(b[i] - b[j]);
        }
    }
    let den = SignedLog::product(a.iter().flat_map(|&ai| b.iter().map(move |&bj| ai + bj)));
    num.over(den)
}

/// Closed-form determinant; exactly zero when some `aᵢ` or `bⱼ` repeats.
pub fn cauchy_det(params: &CauchyParams) -> f64 {
    if params.is_degenerate() {
        return 0.0;
    }
    cauchy_det_log(params).value()
}

fn cauchy_inverse_entry_log(params: &CauchyParams, j: usize, i: usize) -> SignedLog {
    let (a, b) = (&params.a, &params.b);
    let n = a.len();
    let num = SignedLog::product(
        (0..n)
            .map(|s| a[s] + b[j])
            .chain((0..n).filter(|&s| s != j).map(|s| a[i] + b[s])),
    );
    let den = SignedLog::product(
        (0..n)
            .filter(|&s| s != j)
            .map(|s| b[j] - b[s])
            .chain((0..n).filter(|&s| s != i).map(|s| a[i] - a[s])),
    );
    num.over(den)
}

/// Entry `(j, i)` (zero-based) of `B⁻¹`, in closed form.
pub fn cauchy_inverse_entry(params: &CauchyParams, j: usize, i: usize) -> Result<f64> {
    let n = params.order();
    if i >= n || j >= n {
        return Err(Error::invalid(format!(
            "index ({j}, {i}) out of range for order {n}"
        )));
    }
    if params.is_degenerate() {
        return Err(Error::SingularMatrix("repeated Cauchy parameter".into()));
    }
    Ok(cauchy_inverse_entry_log(params, j, i).value())
}

pub fn cauchy_inverse(params: &CauchyParams) -> Result<DenseMatrix> {
    if params.is_degenerate() {
        return Err(Error::SingularMatrix("repeated Cauchy parameter".into()));
    }
    Ok(DenseMatrix::from_fn(params.order(), |j, i| {
        cauchy_inverse_entry_log(params, j, i).value()
    }))
}

/// Which index progressions define the Cauchy matrix behind `A_n^(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentCauchyVariant {
    /// `B[4p, 4p+2, …, 4p+2(n−1); 1, 3, …, 2n−1]`, the matrix produced by the
    /// diagonal row/column scaling of `A_n^(p)`.
    #[default]
    Scaled,
    /// `B[4p, 4(p+1), …; 1, 5, …, 4n−3]`, read as step-4 progressions.
    StepFour,
}

fn check_np(n: usize, p: usize) -> Result<()> {
    if n == 0 || p == 0 {
        return Err(Error::invalid(format!(
            "need n ≥ 1 and p ≥ 1, got n={n}, p={p}"
        )));
    }
    Ok(())
}

pub fn moment_cauchy_params(
    n: usize,
    p: usize,
    variant: MomentCauchyVariant,
) -> Result<CauchyParams> {
    check_np(n, p)?;
    let (a, b) = match variant {
        MomentCauchyVariant::Scaled => (
            (0..n).map(|i| (4 * p + 2 * i) as f64).collect(),
            (0..n).map(|j| (2 * j + 1) as f64).collect(),
        ),
        MomentCauchyVariant::StepFour => (
            (0..n).map(|i| (4 * (p + i)) as f64).collect(),
            (0..n).map(|j| (4 * j + 1) as f64).collect(),
        ),
    };
    CauchyParams::new(a, b)
}

/// Exponent `2(2p+i+j−2)` with one-based `i, j`, i.e. `4p+2i+2j` zero-based.
fn moment_exponent(p: usize, i: usize, j: usize) -> i32 {
    (4 * p + 2 * i + 2 * j) as i32
}

/// `A_n^(p)`: entry `(i,j)` is `∫_{−1/2}^{1/2} u^(2p+2i−3) u^(2p+2j−1) du`
/// (one-based), written as `(1/2)^e / (e+1)` with `e = 2(2p+i+j−2)`.
pub fn moment_matrix(n: usize, p: usize) -> Result<DenseMatrix> {
    check_np(n, p)?;
    Ok(DenseMatrix::from_fn(n, |i, j| {
        let e = moment_exponent(p, i, j);
        0.5f64.powi(e) / f64::from(e + 1)
    }))
}

/// `(A_n^(p))⁻¹` through the Cauchy closed form: with the scaled Cauchy
/// inverse `β`, `α_ij = 4^(2p+i+j−2) β_ij` (one-based indices).
pub fn invert_moment_matrix(n: usize, p: usize) -> Result<DenseMatrix> {
    let params = moment_cauchy_params(n, p, MomentCauchyVariant::Scaled)?;
    let ln4 = 4f64.ln();
    Ok(DenseMatrix::from_fn(n, |i, j| {
        let beta = cauchy_inverse_entry_log(&params, i, j);
        let scale = (2 * p + i + j) as f64 * ln4;
        SignedLog {
            sign: beta.sign,
            log_abs: beta.log_abs + scale,
        }
        .value()
    }))
}

/// The inverse entry formula as it is commonly printed, with prefactor
/// `4^(2p+i+j−n+1)` and the product `∏(4p+2s+2j−3)` appearing twice.
/// One-based `i, j`. Kept only to measure its disagreement with the true
/// inverse; see the tests.
pub fn printed_moment_inverse_entry(n: usize, p: usize, j: usize, i: usize) -> f64 {
    let (nf, pf, jf, if_) = (n as i64, p as i64, j as i64, i as i64);
    let exponent = 2 * pf + if_ + jf - nf + 1;
    let mut log = SignedLog {
        sign: 1.0,
        log_abs: exponent as f64 * 4f64.ln(),
    };
    for s in 1..=nf {
        log = log.times((4 * pf + 2 * s + 2 * jf - 3) as f64);
        if s != jf {
            log = log.times((4 * pf + 2 * s + 2 * jf - 3) as f64);
        }
    }
    let mut den = SignedLog::ONE;
    for s in 1..=nf {
        if s != jf {
            den = den.times((jf - s) as f64);
        }
        if s != if_ {
            den = den.times((if_ - s) as f64);
        }
    }
    log.over(den).value()
}

/// Two routes to `det A_n^(p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetRelation {
    /// `(1/2)^(2n(2p+n−1)) · det C_n^(p)` with the Cauchy product formula.
    pub closed_form: f64,
    /// LU determinant of the floating-point moment matrix.
    pub lu: f64,
}

impl DetRelation {
    pub fn relative_gap(&self) -> f64 {
        ((self.closed_form - self.lu) / self.lu).abs()
    }
}

pub fn det_relation_check(n: usize, p: usize, variant: MomentCauchyVariant) -> Result<DetRelation> {
    let params = moment_cauchy_params(n, p, variant)?;
    let det_c = cauchy_det_log(&params);
    let shift = -((2 * n * (2 * p + n - 1)) as f64) * 2f64.ln();
    let closed_form = SignedLog {
        sign: det_c.sign,
        log_abs: det_c.log_abs + shift,
    }
    .value();
    let lu = moment_matrix(n, p)?.lu_determinant();
    Ok(DetRelation { closed_form, lu })
}

/// Big-rational versions of the closed forms.
pub mod exact {
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use num_traits::{One, Signed, ToPrimitive, Zero};

    use crate::error::{Error, Result};

    pub type Matrix = Vec<Vec<BigRational>>;

    pub fn int(x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }

    pub fn to_f64(x: &BigRational) -> f64 {
        x.to_f64().unwrap_or(f64::NAN)
    }

    pub fn cauchy_matrix(a: &[BigRational], b: &[BigRational]) -> Matrix {
        a.iter()
            .map(|ai| b.iter().map(|bj| (ai + bj).recip()).collect())
            .collect()
    }

    pub fn cauchy_det(a: &[BigRational], b: &[BigRational]) -> BigRational {
        let n = a.len();
        let mut num = BigRational::one();
        for i in 0..n {
            for j in i + 1..n {
                num *= (&a[i] - &a[j]) * (&b[i] - &b[j]);
            }
        }
        let mut den = BigRational::one();
        for ai in a {
            for bj in b {
                den *= ai + bj;
            }
        }
        num / den
    }

    pub fn cauchy_inverse(a: &[BigRational], b: &[BigRational]) -> Result<Matrix> {
        let n = a.len();
        let mut out = vec![vec![BigRational::zero(); n]; n];
        for (j, row) in out.iter_mut().enumerate() {
            for (i, entry) in row.iter_mut().enumerate() {
                let mut num = BigRational::one();
                let mut den = BigRational::one();
                for s in 0..n {
                    num *= &a[s] + &b[j];
                    if s != j {
                        num *= &a[i] + &b[s];
                        den *= &b[j] - &b[s];
                    }
                    if s != i {
                        den *= &a[i] - &a[s];
                    }
                }
                if den.is_zero() {
                    return Err(Error::SingularMatrix("repeated Cauchy parameter".into()));
                }
                *entry = num / den;
            }
        }
        Ok(out)
    }

    pub fn moment_matrix(n: usize, p: usize) -> Matrix {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let e = 4 * p + 2 * i + 2 * j;
                        BigRational::new(BigInt::one(), BigInt::from(e + 1) << e)
                    })
                    .collect()
            })
            .collect()
    }

    /// Determinant by fraction-exact Gaussian elimination.
    pub fn determinant(m: &Matrix) -> BigRational {
        let n = m.len();
        let mut a = m.clone();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(pivot) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return BigRational::zero();
            };
            if pivot != c {
                a.swap(pivot, c);
                det = -det;
            }
            let p = a[c][c].clone();
            det *= &p;
            for r in c + 1..n {
                let factor = &a[r][c] / &p;
                for j in c..n {
                    let delta = &factor * &a[c][j];
                    a[r][j] -= delta;
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination.
    pub fn inverse(m: &Matrix) -> Result<Matrix> {
        let n = m.len();
        let mut a: Matrix = m
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                }));
                r
            })
            .collect();
        for c in 0..n {
            let pivot = (c..n)
                .find(|&r| !a[r][c].is_zero())
                .ok_or_else(|| Error::SingularMatrix("zero pivot".into()))?;
            a.swap(pivot, c);
            let p = a[c][c].clone();
            for x in a[c].iter_mut() {
                *x /= &p;
            }
            for r in 0..n {
                if r != c && !a[r][c].is_zero() {
                    let factor = a[r][c].clone();
                    let pivot_row = a[c].clone();
                    for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                        *x -= &factor * y;
                    }
                }
            }
        }
        Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
    }

    pub fn max_abs_diff(m: &Matrix, f: &super::DenseMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                worst = worst.max((to_f64(x) - f.get(i, j)).abs());
            }
        }
        worst
    }

    pub fn max_rel_diff(m: &Matrix, f: &super::DenseMatrix) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, row) in m.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let e = to_f64(x);
                worst = worst.max(((e - f.get(i, j)) / e.abs().max(f64::MIN_POSITIVE)).abs());
            }
        }
        worst
    }

    pub fn is_identity_product(a: &Matrix, b: &Matrix) -> bool {
        let n = a.len();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let s: BigRational = (0..n).map(|l| &a[i][l] * &b[l][j]).sum();
                if i == j {
                    s.is_one()
                } else {
                    s.is_zero()
                }
            })
        })
    }

    pub fn abs_max(m: &Matrix) -> BigRational {
        m.iter()
            .flatten()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    fn params(a: &[f64], b: &[f64]) -> CauchyParams {
        CauchyParams::new(a.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn matrix_entries() {
        let m = cauchy_matrix(&params(&[1.0], &[1.0]));
        assert_eq!(m.get(0, 0), 0.5);
        let m = cauchy_matrix(&params(&[1.0, 2.0], &[1.0, 2.0]));
        assert_eq!(m.row(0), &[0.5, 1.0 / 3.0]);
        assert_eq!(m.row(1), &[1.0 / 3.0, 0.25]);
        let m = cauchy_matrix(&params(&[4.0, 6.0], &[1.0, 3.0]));
        assert_eq!(m.row(0), &[0.2, 1.0 / 7.0]);
        assert_eq!(m.row(1), &[1.0 / 7.0, 1.0 / 9.0]);
    }

    #[test]
    fn non_positive_parameters_rejected() {
        assert!(CauchyParams::new(vec![0.0], vec![1.0]).is_err());
        assert!(CauchyParams::new(vec![1.0], vec![-2.0]).is_err());
        assert!(CauchyParams::new(vec![1.0, 2.0], vec![1.0]).is_err());
    }

    #[test]
    fn determinants() {
        assert!((cauchy_det(&params(&[1.0], &[1.0])) - 0.5).abs() < 1e-16);
        // 1/8 - 1/9
        assert!((cauchy_det(&params(&[1.0, 2.0], &[1.0, 2.0])) - 1.0 / 72.0).abs() < 1e-16);
        let p3 = params(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]);
        let lu = cauchy_matrix(&p3).lu_determinant();
        assert!(((cauchy_det(&p3) - lu) / lu).abs() < 1e-12);
        assert_eq!(cauchy_det(&params(&[1.0, 1.0], &[1.0, 2.0])), 0.0);
    }

    #[test]
    fn inverse_entries() {
        let p1 = params(&[3.0], &[4.5]);
        assert!((cauchy_inverse_entry(&p1, 0, 0).unwrap() - 7.5).abs() < 1e-14);
        let p2 = params(&[1.0, 2.0], &[1.0, 2.0]);
        let inv = cauchy_inverse(&p2).unwrap();
        // exact inverse of [[1/2,1/3],[1/3,1/4]] is [[18,-24],[-24,36]]
        for (i, row) in [[18.0, -24.0], [-24.0, 36.0]].iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                assert!((inv.get(i, j) - v).abs() < 1e-12);
            }
        }
        assert!(cauchy_matrix(&p2).identity_residual(&inv) < 1e-12);
        let p4 = params(&[4.0, 6.0, 8.0, 10.0], &[1.0, 3.0, 5.0, 7.0]);
        let inv = cauchy_inverse(&p4).unwrap();
        assert!(inv.identity_residual(&cauchy_matrix(&p4)) < 1e-9);
        assert!(matches!(
            cauchy_inverse_entry(&params(&[1.0, 1.0], &[1.0, 2.0]), 0, 0),
            Err(Error::SingularMatrix(_))
        ));
        assert!(cauchy_inverse_entry(&p2, 2, 0).is_err());
    }

    #[test]
    fn moment_matrix_entries() {
        let a = moment_matrix(1, 1).unwrap();
        assert!((a.get(0, 0) - 1.0 / 80.0).abs() < 1e-18);
        let a = moment_matrix(2, 1).unwrap();
        assert!((a.get(0, 1) * 448.0 - 1.0).abs() < 1e-15);
        assert!((a.get(1, 1) * 2304.0 - 1.0).abs() < 1e-15);
        assert!(a.is_symmetric());
        assert!(moment_matrix(0, 1).is_err());
    }

    #[test]
    fn moment_inverse() {
        let inv = invert_moment_matrix(1, 1).unwrap();
        assert!((inv.get(0, 0) - 80.0).abs() < 1e-12);
        let a = moment_matrix(2, 1).unwrap();
        assert!(a.identity_residual(&invert_moment_matrix(2, 1).unwrap()) < 1e-9);
        let a = moment_matrix(5, 1).unwrap();
        assert!(a.identity_residual(&invert_moment_matrix(5, 1).unwrap()) < 1e-6);
    }

    #[test]
    fn moment_inverse_matches_exact_gauss_jordan() {
        for n in 1..=6 {
            for p in 1..=3 {
                let exact_inv = exact::inverse(&exact::moment_matrix(n, p)).unwrap();
                let float_inv = invert_moment_matrix(n, p).unwrap();
                let rel = exact::max_rel_diff(&exact_inv, &float_inv);
                assert!(rel < 1e-12, "n={n} p={p}: {rel:e}");
            }
        }
    }

    #[test]
    fn exact_cauchy_inverse_is_exact() {
        let a: Vec<_> = [4, 6, 8, 10].iter().map(|&x| exact::int(x)).collect();
        let b: Vec<_> = [1, 3, 5, 7].iter().map(|&x| exact::int(x)).collect();
        let m = exact::cauchy_matrix(&a, &b);
        let inv = exact::cauchy_inverse(&a, &b).unwrap();
        assert!(exact::is_identity_product(&m, &inv));
        assert_eq!(exact::cauchy_det(&a, &b), exact::determinant(&m));
        let dup = vec![exact::int(1), exact::int(1)];
        assert!(exact::cauchy_inverse(&dup, &b[..2]).is_err());
        assert!(exact::cauchy_det(&dup, &b[..2]).is_zero());
    }

    #[test]
    fn det_relation_scaled_variant() {
        let r = det_relation_check(1, 1, MomentCauchyVariant::Scaled).unwrap();
        assert!((r.closed_form - 1.0 / 80.0).abs() < 1e-17);
        assert!((r.lu - 1.0 / 80.0).abs() < 1e-17);
        assert!(
            det_relation_check(2, 1, MomentCauchyVariant::Scaled)
                .unwrap()
                .relative_gap()
                < 1e-10
        );
        assert!(
            det_relation_check(4, 2, MomentCauchyVariant::Scaled)
                .unwrap()
                .relative_gap()
                < 1e-8
        );
    }

    #[test]
    fn det_relation_exact() {
        // det A = 2^{-2n(2p+n-1)} det B[4p,4p+2,..;1,3,..] holds exactly.
        for n in 1..=5usize {
            for p in 1..=3usize {
                let a: Vec<_> = (0..n).map(|i| exact::int((4 * p + 2 * i) as i64)).collect();
                let b: Vec<_> = (0..n).map(|j| exact::int((2 * j + 1) as i64)).collect();
                let scale = num_rational::BigRational::from_integer(
                    num_bigint::BigInt::one() << (2 * n * (2 * p + n - 1)),
                );
                let rhs = exact::cauchy_det(&a, &b) / scale;
                assert_eq!(exact::determinant(&exact::moment_matrix(n, p)), rhs);
            }
        }
    }

    #[test]
    fn step_four_variant_only_agrees_for_order_one() {
        let r = det_relation_check(1, 2, MomentCauchyVariant::StepFour).unwrap();
        assert!(r.relative_gap() < 1e-12);
        let r = det_relation_check(2, 1, MomentCauchyVariant::StepFour).unwrap();
        assert!(r.relative_gap() > 1e-2, "{r:?}");
    }

    #[test]
    fn printed_inverse_formula_disagrees() {
        // order one: printed form gives 4^4 * 5 = 1280 against the true 80
        assert!((printed_moment_inverse_entry(1, 1, 1, 1) - 1280.0).abs() < 1e-9);
        let true_inv = invert_moment_matrix(2, 1).unwrap();
        let printed = printed_moment_inverse_entry(2, 1, 1, 1);
        assert!((printed / true_inv.get(0, 0) - 1.0).abs() > 1e-3);
    }
}
