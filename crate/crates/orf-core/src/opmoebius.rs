//! Operator-valued Moebius transforms with diagonal parameter matrices.
//!
//! For a diagonal parameter `A` inside the domain, the forward transform maps
//! contractions to contractions (circle) or matrices with nonnegative
//! imaginary part to contractions (line), and its inverse undoes it. The
//! normalization `eta_A` is the diagonal positive square root of
//! `varpi_A(A)`, mirroring the scalar factors.

use crate::error::{OrfError, Result};
use crate::moebius::{eta_of, Domain, PoleSeq, DEFAULT_MARGIN};
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Dense column-major complex matrix used throughout the crate.
pub type DenseMatrix = DMatrix<Complex64>;

/// Condition-estimate limit beyond which linear solves are refused.
pub const COND_LIMIT: f64 = 1e12;

/// Diagonal operator parameter `A = diag(alpha_0, ..., alpha_{n-1})` with its
/// domain. Entries must satisfy the domain's compactness margin; the
/// normalization factors are precomputed at construction.
#[derive(Clone, Debug)]
pub struct DiagParam {
    diag: Vec<Complex64>,
    domain: Domain,
    etas: Vec<f64>,
}

impl DiagParam {
    /// Parameter from explicit diagonal entries, default margin.
    pub fn new(domain: Domain, diag: Vec<Complex64>) -> Result<Self> {
        Self::with_margin(domain, diag, DEFAULT_MARGIN)
    }

    /// Parameter from explicit diagonal entries and margin.
    pub fn with_margin(domain: Domain, diag: Vec<Complex64>, margin: f64) -> Result<Self> {
        if diag.is_empty() {
            return Err(OrfError::Invalid("diagonal parameter must be nonempty".into()));
        }
        for (k, a) in diag.iter().enumerate() {
            match domain {
                Domain::Circle => {
                    if a.norm() > 1.0 - margin {
                        return Err(OrfError::Margin(format!(
                            "diagonal entry {k} has modulus {:.17}, exceeding 1 - {margin:e}",
                            a.norm()
                        )));
                    }
                }
                Domain::Line => {
                    if a.im < margin {
                        return Err(OrfError::Margin(format!(
                            "diagonal entry {k} has imaginary part {:.17}, below margin {margin:e}",
                            a.im
                        )));
                    }
                }
            }
        }
        let etas = diag
            .iter()
            .map(|&a| eta_of(domain, a))
            .collect::<Result<Vec<f64>>>()?;
        Ok(DiagParam { diag, domain, etas })
    }

    /// Truncation parameter `diag(alpha_0, ..., alpha_{n-1})` of a pole
    /// sequence; the first entry is the domain's base point.
    pub fn from_poles(poles: &PoleSeq, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(OrfError::Invalid("truncation order must be at least 1".into()));
        }
        if n - 1 > poles.len() {
            return Err(OrfError::DimensionMismatch(format!(
                "truncation order {n} needs {} poles, sequence has {}",
                n - 1,
                poles.len()
            )));
        }
        let diag: Vec<Complex64> = (0..n).map(|k| poles.alpha(k)).collect();
        Self::with_margin(poles.domain(), diag, poles.margin())
    }

    /// Scalar parameter `alpha I_n`.
    pub fn scalar(domain: Domain, alpha: Complex64, n: usize) -> Result<Self> {
        Self::new(domain, vec![alpha; n])
    }

    /// Domain of the parameter.
    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Diagonal entries.
    pub fn diag(&self) -> &[Complex64] {
        &self.diag
    }

    /// Matrix order.
    pub fn len(&self) -> usize {
        self.diag.len()
    }

    /// True when the parameter is empty (never, by construction).
    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Normalization factors `eta_k`, all positive.
    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    /// Dense diagonal matrix `A`.
    pub fn to_matrix(&self) -> DenseMatrix {
        DenseMatrix::from_fn(self.len(), self.len(), |i, j| {
            if i == j { self.diag[i] } else { Complex64::new(0.0, 0.0) }
        })
    }
}

/// Diagonal normalization matrix `eta_A`.
pub fn op_eta(a: &DiagParam) -> DenseMatrix {
    let n = a.len();
    DenseMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(a.etas()[i], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

fn check_square(a: &DiagParam, t: &DenseMatrix) -> Result<()> {
    if t.nrows() != t.ncols() {
        return Err(OrfError::DimensionMismatch(format!(
            "matrix must be square, got {}x{}",
            t.nrows(),
            t.ncols()
        )));
    }
    if t.nrows() != a.len() {
        return Err(OrfError::DimensionMismatch(format!(
            "parameter has order {}, matrix has order {}",
            a.len(),
            t.nrows()
        )));
    }
    Ok(())
}

/// Maximum absolute column sum.
pub(crate) fn norm_1(m: &DenseMatrix) -> f64 {
    let mut best = 0.0f64;
    for j in 0..m.ncols() {
        let s: f64 = (0..m.nrows()).map(|i| m[(i, j)].norm()).sum();
        best = best.max(s);
    }
    best
}

/// Inverse through LU with partial pivoting, guarded by a 1-norm condition
/// estimate against [`COND_LIMIT`].
pub(crate) fn inverse_with_cond(m: &DenseMatrix) -> Result<DenseMatrix> {
    let nm = norm_1(m);
    let inv = m.clone().lu().try_inverse().ok_or(OrfError::IllConditioned {
        cond: f64::INFINITY,
        limit: COND_LIMIT,
    })?;
    let cond = nm * norm_1(&inv);
    if !cond.is_finite() || cond > COND_LIMIT {
        return Err(OrfError::IllConditioned { cond, limit: COND_LIMIT });
    }
    Ok(inv)
}

// in-place diagonal scalings: rows by d_i, columns by d_j
fn scale_rows(d: &[Complex64], m: &mut DenseMatrix) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            m[(i, j)] *= d[i];
        }
    }
}

fn scale_cols(d: &[Complex64], m: &mut DenseMatrix) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            m[(i, j)] *= d[j];
        }
    }
}

// entrywise eta_i / eta_j scaling, i.e. conjugation by the diagonal eta matrix
fn eta_sandwich(etas: &[f64], m: &mut DenseMatrix, invert: bool) {
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let f = if invert {
                etas[j] / etas[i]
            } else {
                etas[i] / etas[j]
            };
            m[(i, j)] *= Complex64::new(f, 0.0);
        }
    }
}

/// Forward operator Moebius transform.
///
/// Circle: `eta (1 - T A')^{-1} (T - A) eta^{-1}`; line:
/// `eta (T - A')^{-1} (T - A) eta^{-1}`, where `A'` is the adjoint of `A`.
pub fn op_mobius_forward(a: &DiagParam, t: &DenseMatrix) -> Result<DenseMatrix> {
    check_square(a, t)?;
    let n = a.len();
    let conj_diag: Vec<Complex64> = a.diag().iter().map(|v| v.conj()).collect();
    let denom = match a.domain() {
        Domain::Circle => {
            // 1 - T A'
            let mut ta = t.clone();
            scale_cols(&conj_diag, &mut ta);
            DenseMatrix::identity(n, n) - ta
        }
        Domain::Line => {
            // T - A'
            let mut d = t.clone();
            for i in 0..n {
                d[(i, i)] -= conj_diag[i];
            }
            d
        }
    };
    let inv = inverse_with_cond(&denom)?;
    let mut numer = t.clone();
    for i in 0..n {
        numer[(i, i)] -= a.diag()[i];
    }
    let mut out = inv * numer;
    eta_sandwich(a.etas(), &mut out, false);
    Ok(out)
}

/// Inverse operator Moebius transform.
///
/// Circle: `eta^{-1} (S + A)(1 + A' S)^{-1} eta`; line:
/// `eta^{-1} (A - A' S)(1 - S)^{-1} eta`.
pub fn op_mobius_inverse(a: &DiagParam, s: &DenseMatrix) -> Result<DenseMatrix> {
    check_square(a, s)?;
    let n = a.len();
    let conj_diag: Vec<Complex64> = a.diag().iter().map(|v| v.conj()).collect();
    let (numer, denom) = match a.domain() {
        Domain::Circle => {
            let mut num = s.clone();
            for i in 0..n {
                num[(i, i)] += a.diag()[i];
            }
            let mut asd = s.clone();
            scale_rows(&conj_diag, &mut asd);
            (num, DenseMatrix::identity(n, n) + asd)
        }
        Domain::Line => {
            let mut asd = s.clone();
            scale_rows(&conj_diag, &mut asd);
            (a.to_matrix() - asd, DenseMatrix::identity(n, n) - s.clone())
        }
    };
    let inv = inverse_with_cond(&denom)?;
    let mut out = numer * inv;
    eta_sandwich(a.etas(), &mut out, true);
    Ok(out)
}

/// Conjugation `eta^{-1} T eta` by the normalization of `a`.
pub fn conjugate_by_eta(a: &DiagParam, t: &DenseMatrix) -> Result<DenseMatrix> {
    check_square(a, t)?;
    let mut out = t.clone();
    eta_sandwich(a.etas(), &mut out, true);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        DenseMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
    }

    // random strict contraction: scale a random matrix below unit norm
    fn random_contraction(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        let m = random_matrix(rng, n);
        let s = norm_1(&m).max(1.0);
        m * c(0.85 / s, 0.0)
    }

    fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        random_matrix(rng, n).qr().q()
    }

    fn random_circle_param(rng: &mut ChaCha8Rng, n: usize) -> DiagParam {
        let diag: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.0..0.85), rng.gen_range(-3.0..3.0)))
            .collect();
        DiagParam::new(Domain::Circle, diag).unwrap()
    }

    fn fro(m: &DenseMatrix) -> f64 {
        m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    #[test]
    fn eta_matrix_values() {
        let a = DiagParam::new(Domain::Circle, vec![c(0.0, 0.0), c(0.6, 0.0)]).unwrap();
        let e = op_eta(&a);
        assert_abs_diff_eq!(e[(0, 0)].re, 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(e[(1, 1)].re, 0.8, epsilon = 1e-16);
        let a = DiagParam::new(Domain::Line, vec![c(0.0, 1.0), c(3.0, 4.0)]).unwrap();
        let e = op_eta(&a);
        assert_abs_diff_eq!(e[(0, 0)].re, 1.0, epsilon = 0.0);
        assert_abs_diff_eq!(e[(1, 1)].re, 2.0, epsilon = 1e-15);
    }

    #[test]
    fn zero_param_is_identity_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let t = random_contraction(&mut rng, 5);
        let a = DiagParam::scalar(Domain::Circle, c(0.0, 0.0), 5).unwrap();
        let w = op_mobius_forward(&a, &t).unwrap();
        assert_abs_diff_eq!(fro(&(w.clone() - t.clone())), 0.0, epsilon = 1e-14);
        let back = op_mobius_inverse(&a, &w).unwrap();
        assert_abs_diff_eq!(fro(&(back - t)), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn param_maps_to_zero() {
        let a = DiagParam::new(Domain::Circle, vec![c(0.3, 0.2), c(-0.5, 0.1), c(0.0, -0.4)]).unwrap();
        let w = op_mobius_forward(&a, &a.to_matrix()).unwrap();
        assert_abs_diff_eq!(fro(&w), 0.0, epsilon = 1e-15);
    }

    #[test]
    fn roundtrip_both_domains() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for n in [1usize, 2, 5, 9] {
            let a = random_circle_param(&mut rng, n);
            let t = random_contraction(&mut rng, n);
            let s = op_mobius_forward(&a, &t).unwrap();
            let back = op_mobius_inverse(&a, &s).unwrap();
            assert!(fro(&(back - t.clone())) < 1e-12, "circle roundtrip n={n}");

            let diag: Vec<Complex64> = (0..n)
                .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(0.2..2.0)))
                .collect();
            let al = DiagParam::new(Domain::Line, diag).unwrap();
            // self-adjoint argument keeps the line transform well defined
            let m = random_matrix(&mut rng, n);
            let h = (m.clone() + m.adjoint()) * c(0.5, 0.0);
            let s = op_mobius_forward(&al, &h).unwrap();
            let back = op_mobius_inverse(&al, &s).unwrap();
            assert!(fro(&(back - h.clone())) < 1e-10, "line roundtrip n={n}");
        }
    }

    #[test]
    fn unitary_in_unitary_out() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for n in [2usize, 4, 8] {
            let a = random_circle_param(&mut rng, n);
            let u = random_unitary(&mut rng, n);
            let w = op_mobius_forward(&a, &u).unwrap();
            let defect = w.adjoint() * w.clone() - DenseMatrix::identity(n, n);
            assert!(fro(&defect) < 1e-12, "n={n}");
        }
    }

    #[test]
    fn defect_identity() {
        // varpi(T) eta^{-1} (1 - Z Z^dag) eta^{-1} varpi(T)^dag = 1 - T T^dag
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let a = random_circle_param(&mut rng, n);
            let t = random_contraction(&mut rng, n);
            let z = op_mobius_forward(&a, &t).unwrap();
            let conj_diag: Vec<Complex64> = a.diag().iter().map(|v| v.conj()).collect();
            let mut ta = t.clone();
            scale_cols(&conj_diag, &mut ta);
            let varpi_t = DenseMatrix::identity(n, n) - ta;
            // eta^{-1} (1 - Z Z^dag) eta^{-1}: two-sided scaling by 1/(eta_i eta_j)
            let mut mid = DenseMatrix::identity(n, n) - z.clone() * z.adjoint();
            for i in 0..n {
                for j in 0..n {
                    mid[(i, j)] *= Complex64::new(1.0 / (a.etas()[i] * a.etas()[j]), 0.0);
                }
            }
            let lhs = varpi_t.clone() * mid * varpi_t.adjoint();
            let rhs = DenseMatrix::identity(n, n) - t.clone() * t.adjoint();
            assert!(fro(&(lhs - rhs)) < 1e-11);
        }
    }

    #[test]
    fn adjoint_identity() {
        // zeta_A(T)^dag = zeta_{A^dag}(T^dag)
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let a = random_circle_param(&mut rng, n);
            let adag = DiagParam::new(
                Domain::Circle,
                a.diag().iter().map(|v| v.conj()).collect(),
            )
            .unwrap();
            let t = random_contraction(&mut rng, n);
            let lhs = op_mobius_forward(&a, &t).unwrap().adjoint();
            let rhs = op_mobius_forward(&adag, &t.adjoint()).unwrap();
            assert!(fro(&(lhs - rhs)) < 1e-11);
        }
    }

    #[test]
    fn normalized_argument_identity() {
        // zeta_A(eta^{-1} T eta) = varpi_A(T)^{-1} varpi*_A(T)
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let a = random_circle_param(&mut rng, n);
            let t = random_contraction(&mut rng, n);
            let ta = conjugate_by_eta(&a, &t).unwrap();
            let lhs = op_mobius_forward(&a, &ta).unwrap();
            let conj_diag: Vec<Complex64> = a.diag().iter().map(|v| v.conj()).collect();
            let mut taa = t.clone();
            scale_cols(&conj_diag, &mut taa);
            let varpi_t = DenseMatrix::identity(n, n) - taa;
            let mut numer = t.clone();
            for i in 0..n {
                numer[(i, i)] -= a.diag()[i];
            }
            let rhs = inverse_with_cond(&varpi_t).unwrap() * numer;
            assert!(fro(&(lhs - rhs)) < 1e-11);
        }
    }

    #[test]
    fn scalar_shift_identity() {
        // z - T = (varpi(z)/varpi(alpha)) (zeta(z) - zeta(T)) varpi(T), scalar alpha
        use crate::moebius::{mobius_forward, varpi, CPoint};
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let alpha = Complex64::from_polar(rng.gen_range(0.0..0.8), rng.gen_range(-3.0..3.0));
            let a = DiagParam::scalar(Domain::Circle, alpha, n).unwrap();
            let t = random_contraction(&mut rng, n);
            let z = Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(-3.0..3.0));
            let zt = op_mobius_forward(&a, &t).unwrap();
            let zz = mobius_forward(alpha, CPoint::from_complex(z)).expect_finite();
            let scale = varpi(Domain::Circle, alpha, z) / varpi(Domain::Circle, alpha, alpha);
            let conj_a = alpha.conj();
            let varpi_t = DenseMatrix::identity(n, n) - t.clone() * c(conj_a.re, conj_a.im);
            let zmat = DenseMatrix::identity(n, n) * zz;
            let lhs = DenseMatrix::identity(n, n) * z - t.clone();
            let rhs = (zmat - zt) * varpi_t * scale;
            assert!(fro(&(lhs - rhs)) < 1e-11);
        }
    }

    #[test]
    fn singular_denominator_is_rejected() {
        // T = 2, alpha = 1/2 makes 1 - T conj(alpha) exactly singular
        let a = DiagParam::new(Domain::Circle, vec![c(0.5, 0.0)]).unwrap();
        let t = DenseMatrix::from_fn(1, 1, |_, _| c(2.0, 0.0));
        assert!(matches!(
            op_mobius_forward(&a, &t),
            Err(OrfError::IllConditioned { .. })
        ));
    }

    #[test]
    fn dimension_checks() {
        let a = DiagParam::new(Domain::Circle, vec![c(0.0, 0.0); 3]).unwrap();
        let t = DenseMatrix::identity(2, 2);
        assert!(matches!(
            op_mobius_forward(&a, &t),
            Err(OrfError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn from_poles_includes_base_point() {
        let poles = crate::moebius::PoleSeq::circle(vec![c(0.5, 0.0), c(0.0, 0.3)]).unwrap();
        let a = DiagParam::from_poles(&poles, 3).unwrap();
        assert_eq!(a.diag(), &[c(0.0, 0.0), c(0.5, 0.0), c(0.0, 0.3)]);
        let a = DiagParam::from_poles(&poles, 1).unwrap();
        assert_eq!(a.diag(), &[c(0.0, 0.0)]);
        assert!(DiagParam::from_poles(&poles, 4).is_err());
        let lp = crate::moebius::PoleSeq::line(vec![c(2.0, 1.0)]).unwrap();
        let a = DiagParam::from_poles(&lp, 2).unwrap();
        assert_eq!(a.diag()[0], c(0.0, 1.0));
    }
}
