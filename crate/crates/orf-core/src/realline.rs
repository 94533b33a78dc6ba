//! Real-line side of the theory: the Cayley transform, half-plane scalar and
//! operator linear fractional maps, circle/line parameter conversion, and the
//! quadrature, reconstruction, and mass-at-infinity routines for measures on
//! the extended real line.
//!
//! The multiplication operator of a line measure is self-adjoint, so its
//! truncations are obtained from the same five-diagonal matrices through the
//! half-plane operator transform. That transform is undefined exactly when
//! the five-diagonal matrix has eigenvalue 1, which happens precisely when
//! the measure carries mass at infinity; those paths detour through the
//! circle-side unitary representation, where a node at 1 pulls back to the
//! point at infinity.

use crate::error::{OrfError, Result};
use crate::matrices::{cmv_factor_even, cmv_factor_odd, effective_a};
use crate::measures::DiscreteMeasure;
use crate::moebius::{mobius_forward, zeta, zeta_inv, CPoint, Domain, PoleSeq, DEFAULT_MARGIN};
use crate::opmoebius::{op_mobius_forward, op_mobius_inverse, DenseMatrix, DiagParam};
use crate::orfcore::{eval_orf_sequence, porf_u, ParamSeq};
use crate::spectral::{
    porf_quadrature, reconstruct_measure, truncation_node_weights, Eigensolver, Quadrature,
    WEIGHT_DUALITY,
};
use num_complex::Complex64;

/// Spectrum margin below which the inverse operator transform is refused:
/// an eigenvalue this close to 1 signals mass at infinity.
pub const EIGENVALUE_ONE_GUARD: f64 = 1e-10;

/// Distance to the excluded para-orthogonal parameter below which the direct
/// quadrature refuses to run.
pub const EXCLUDED_V_TOL: f64 = 1e-10;

/// Margin within which an eigenvalue of the closed five-diagonal truncation
/// counts as 1, flagging mass at infinity.
pub const MASS_AT_INFINITY_TOL: f64 = 1e-9;

/// Distance from a circle node to 1 below which the pulled-back line node is
/// reported at infinity.
pub const INFINITY_NODE_SNAP: f64 = 1e-8;

/// Largest imaginary part tolerated in a computed real-line node.
pub const REAL_NODE_TOL: f64 = 1e-9;

/// Orientation of a linear fractional map.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Line to circle (half plane to disk).
    Forward,
    /// Circle to line (disk to half plane).
    Inverse,
}

impl std::str::FromStr for Direction {
    type Err = OrfError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "forward" => Ok(Direction::Forward),
            "inverse" => Ok(Direction::Inverse),
            _ => Err(OrfError::Invalid(format!(
                "unknown direction '{s}', expected forward or inverse"
            ))),
        }
    }
}

/// Cayley transform `(z - i)/(z + i)` and its inverse `i(1 + w)/(1 - w)`.
///
/// The forward map sends infinity to 1 and the inverse sends 1 back to
/// infinity; the pair is the half-plane map for the base point `i`.
pub fn cayley(z: CPoint, direction: Direction) -> CPoint {
    rl_mobius(Complex64::new(0.0, 1.0), z, direction)
}

/// Half-plane Moebius map `(z - alpha)/(z - conj(alpha))` and its inverse
/// `(alpha - conj(alpha) w)/(1 - w)`, for `alpha` in the upper half plane.
///
/// The forward map carries the extended real line onto the unit circle and
/// the upper half plane onto the open disk. Like its circle counterpart it
/// never fails: points at the respective poles map to infinity.
pub fn rl_mobius(alpha: Complex64, z: CPoint, direction: Direction) -> CPoint {
    match direction {
        Direction::Forward => zeta(Domain::Line, alpha, z),
        Direction::Inverse => zeta_inv(Domain::Line, alpha, z),
    }
}

// smallest distance from the spectrum to 1
fn distance_to_one(m: &DenseMatrix) -> Result<f64> {
    let values = Eigensolver::default().eigenvalues(m)?;
    Ok(values
        .iter()
        .map(|z| (z - Complex64::new(1.0, 0.0)).norm())
        .fold(f64::INFINITY, f64::min))
}

/// Operator half-plane transform with a diagonal line-domain parameter:
/// forward `eta (T - A')^{-1} (T - A) eta^{-1}` with `A'` the adjoint of `A`,
/// inverse `eta^{-1} (A - A' S)(1 - S)^{-1} eta`.
///
/// The forward map sends self-adjoint matrices to unitary matrices without
/// eigenvalue 1; the inverse undoes it. An inverse argument with an
/// eigenvalue within [`EIGENVALUE_ONE_GUARD`] of 1 is refused with a
/// mass-at-infinity error, since the limit is an unbounded operator.
pub fn rl_op_mobius(a: &DiagParam, t: &DenseMatrix, direction: Direction) -> Result<DenseMatrix> {
    if a.domain() != Domain::Line {
        return Err(OrfError::Invalid(
            "the half-plane operator transform needs a line-domain parameter".into(),
        ));
    }
    match direction {
        Direction::Forward => op_mobius_forward(a, t),
        Direction::Inverse => {
            let margin = distance_to_one(t)?;
            if margin <= EIGENVALUE_ONE_GUARD {
                return Err(OrfError::MassAtInfinity(format!(
                    "inverse transform undefined: an eigenvalue lies within {margin:.3e} of 1, \
                     so the represented measure carries mass at infinity"
                )));
            }
            op_mobius_inverse(a, t)
        }
    }
}

/// Circle-side image of a line setup: Cayley images of the poles, rotated
/// recurrence parameters, and the diagonal unitary factors relating the two
/// five-diagonal representations entrywise.
#[derive(Clone, Debug)]
pub struct LineConversion {
    /// Circle poles `beta_k`, the Cayley images of the line poles.
    pub beta: PoleSeq,
    /// Circle parameters `b_n = xi_0^2 ... xi_{n-1}^2 a_n`; carries the
    /// converted terminal value when the input had one.
    pub b: ParamSeq,
    /// Unimodular factors `xi_k = (1 - beta_k)/|1 - beta_k|` for
    /// `k = 0..=N`, with `xi_0 = 1` from the base point.
    pub xi: Vec<Complex64>,
    /// Diagonal entries of the inner conversion unitary.
    pub gamma: Vec<Complex64>,
    /// Diagonal entries of the outer conversion unitary.
    pub lambda: Vec<Complex64>,
}

impl LineConversion {
    /// Product `xi_0^2 ... xi_{n-1}^2` scaling the slot-`n` parameter (or a
    /// boundary value closing order `n`). `n` may reach the number of
    /// converted poles plus one.
    pub fn parameter_scale(&self, n: usize) -> Complex64 {
        let mut s = Complex64::new(1.0, 0.0);
        for k in 0..n {
            s *= self.xi[k] * self.xi[k];
        }
        s
    }
}

/// Converts a line setup `(a, alpha)` into its circle counterpart
/// `(b, beta)` together with the diagonal unitary conversion factors.
///
/// `beta_k` is the Cayley image of `alpha_k`, so the base point `i` maps to
/// 0; the parameters pick up the accumulated unimodular squares of `xi`.
/// Converting every regular parameter needs one pole fewer than parameters,
/// and a terminal value needs one more pole to scale it.
pub fn circle_line_params(a: &ParamSeq, poles: &PoleSeq) -> Result<LineConversion> {
    if poles.domain() != Domain::Line {
        return Err(OrfError::Invalid(
            "parameter conversion starts from line-domain poles".into(),
        ));
    }
    let needed = if a.terminal().is_some() {
        a.len()
    } else {
        a.len().saturating_sub(1)
    };
    if poles.len() < needed {
        return Err(OrfError::DimensionMismatch(format!(
            "converting {} parameters{} needs {needed} poles, sequence has {}",
            a.len(),
            if a.terminal().is_some() { " and a terminal value" } else { "" },
            poles.len()
        )));
    }
    let k_max = poles.len();
    let mut betas = Vec::with_capacity(k_max);
    for k in 1..=k_max {
        let b = cayley(CPoint::from_complex(poles.alpha(k)), Direction::Forward).expect_finite();
        betas.push(b);
    }
    let worst = betas.iter().map(|b| b.norm()).fold(0.0f64, f64::max);
    let margin_b = (0.5 * (1.0 - worst)).min(DEFAULT_MARGIN);
    let beta = PoleSeq::with_margin(Domain::Circle, betas.clone(), margin_b)?;

    let one = Complex64::new(1.0, 0.0);
    let mut xi = Vec::with_capacity(k_max + 1);
    xi.push(one);
    for b in &betas {
        let d = one - b;
        xi.push(d / Complex64::new(d.norm(), 0.0));
    }
    // gamma alternates conjugated even-index and plain odd-index squares
    let mut gamma = vec![one];
    for n in 1..=k_max {
        let mut g = one;
        let mut k = if n % 2 == 1 { 0 } else { 1 };
        while k <= n - 1 {
            let f = xi[k] * xi[k];
            g *= if n % 2 == 1 { f.conj() } else { f };
            k += 2;
        }
        gamma.push(g);
    }
    let mut lambda = vec![one];
    for n in 1..=k_max {
        let tail = if n % 2 == 1 { xi[n] } else { xi[n].conj() };
        lambda.push(gamma[n - 1] * tail);
    }

    let mut scale = one;
    let mut b_vals = Vec::with_capacity(a.len());
    for n in 1..=a.len() {
        scale *= xi[n - 1] * xi[n - 1];
        b_vals.push(scale * a.a(n));
    }
    let b = match a.terminal() {
        Some(u) => {
            scale *= xi[a.len()] * xi[a.len()];
            ParamSeq::with_terminal(b_vals, scale * u)?
        }
        None => ParamSeq::new(b_vals)?,
    };
    Ok(LineConversion { beta, b, xi, gamma, lambda })
}

// five-diagonal matrix of an effective parameter list
fn cmv_of(av: &[Complex64]) -> DenseMatrix {
    cmv_factor_odd(av) * cmv_factor_even(av)
}

// confirms a computed node sits on the real axis and drops the residue
fn snap_real(z: Complex64, j: usize) -> Result<CPoint> {
    if z.im.abs() > REAL_NODE_TOL {
        return Err(OrfError::Inconsistent(format!(
            "node {j} lies {:.3e} off the real axis",
            z.im.abs()
        )));
    }
    Ok(CPoint::new(z.re, 0.0))
}

// normalized line measure from node/weight pairs: finite nodes ascending,
// the point at infinity last
fn line_measure_from(mut entries: Vec<(CPoint, f64)>) -> Result<DiscreteMeasure> {
    let total: f64 = entries.iter().map(|e| e.1).sum();
    if total <= 0.0 {
        return Err(OrfError::Inconsistent("eigenvector weights sum to zero".into()));
    }
    entries.sort_by(|a, b| match (a.0.at_infinity, b.0.at_infinity) {
        (true, true) => std::cmp::Ordering::Equal,
        (true, false) => std::cmp::Ordering::Greater,
        (false, true) => std::cmp::Ordering::Less,
        (false, false) => a.0.re.total_cmp(&b.0.re),
    });
    let points: Vec<CPoint> = entries.iter().map(|e| e.0).collect();
    let weights: Vec<f64> = entries.iter().map(|e| e.1 / total).collect();
    DiscreteMeasure::new(Domain::Line, points, weights)
}

// pulls a circle measure back through the inverse Cayley map; a node within
// INFINITY_NODE_SNAP of 1 becomes the point at infinity
fn pull_back_circle_measure(mu: &DiscreteMeasure) -> Result<DiscreteMeasure> {
    let mut entries = Vec::with_capacity(mu.len());
    for (j, (&p, &w)) in mu.points().iter().zip(mu.weights()).enumerate() {
        let wc = p.expect_finite();
        if (wc - Complex64::new(1.0, 0.0)).norm() <= INFINITY_NODE_SNAP {
            entries.push((CPoint::infinity(), w));
        } else {
            let lam = cayley(p, Direction::Inverse).expect_finite();
            entries.push((snap_real(lam, j)?, w));
        }
    }
    line_measure_from(entries)
}

fn check_line_quadrature(a: &ParamSeq, poles: &PoleSeq, n: usize) -> Result<()> {
    if poles.domain() != Domain::Line {
        return Err(OrfError::Invalid(
            "real-line quadrature needs line-domain poles".into(),
        ));
    }
    if n == 0 {
        return Err(OrfError::Invalid("quadrature order must be at least 1".into()));
    }
    if a.len() < n {
        return Err(OrfError::DimensionMismatch(format!(
            "order {n} needs parameter a_{n}, got only {}",
            a.len()
        )));
    }
    if poles.len() + 1 < n {
        return Err(OrfError::DimensionMismatch(format!(
            "order {n} needs {} poles, sequence has {}",
            n - 1,
            poles.len()
        )));
    }
    Ok(())
}

/// The para-orthogonal parameter `v = -phi_n(inf)/phi_n*(inf)` that places a
/// zero of `phi_n + v phi_n*` at infinity. Evaluating the order-`n`
/// functions at infinity needs `n` poles.
pub fn rl_excluded_v(a: &ParamSeq, poles: &PoleSeq, n: usize) -> Result<Complex64> {
    check_line_quadrature(a, poles, n)?;
    if poles.len() < n {
        return Err(OrfError::DimensionMismatch(format!(
            "the excluded parameter at order {n} needs {n} poles, sequence has {}",
            poles.len()
        )));
    }
    let vals = eval_orf_sequence(a, poles, n, CPoint::infinity())?;
    let tail = &vals[n];
    if tail.phi_star.norm() == 0.0 {
        return Err(OrfError::Inconsistent(
            "the order-n function vanishes at infinity, which contradicts its zeros \
             lying in the open upper half plane"
                .into(),
        ));
    }
    Ok(-(tail.phi / tail.phi_star))
}

/// Quadrature rule of order `n` on the real line from the para-orthogonal
/// combination with parameter `v` (`|v| = 1`): nodes are the eigenvalues of
/// the self-adjoint closed truncation, weights the squared moduli of the
/// first eigenvector components, cross-checked against the kernel sums
/// `(sum_{k<n} |phi_k(node)|^2)^{-1}` to [`WEIGHT_DUALITY`].
///
/// Values of `v` within [`EXCLUDED_V_TOL`] of the excluded parameter place a
/// node at infinity and are refused; [`rl_quadrature_via_circle`] handles
/// that case through the circle-side unitary.
pub fn rl_quadrature(a: &ParamSeq, poles: &PoleSeq, n: usize, v: Complex64) -> Result<Quadrature> {
    check_line_quadrature(a, poles, n)?;
    let u = porf_u(a.a(n), v)?;
    if poles.len() >= n {
        let excluded = rl_excluded_v(a, poles, n)?;
        let dist = (v - excluded).norm();
        if dist <= EXCLUDED_V_TOL {
            return Err(OrfError::MassAtInfinity(format!(
                "v lies within {dist:.3e} of the excluded value placing a node at infinity; \
                 rl_quadrature_via_circle handles that case"
            )));
        }
    }
    let av = effective_a(a, n, Some(u))?;
    let diag = DiagParam::from_poles(poles, n)?;
    let m = match rl_op_mobius(&diag, &cmv_of(&av), Direction::Inverse) {
        Ok(m) => m,
        Err(OrfError::MassAtInfinity(msg)) => {
            return Err(OrfError::MassAtInfinity(format!(
                "{msg}; rl_quadrature_via_circle handles a node at infinity"
            )))
        }
        Err(e) => return Err(e),
    };
    let (nodes, weights) = truncation_node_weights(&m)?;
    let mut entries = Vec::with_capacity(n);
    for (j, (&node, &w)) in nodes.iter().zip(weights.iter()).enumerate() {
        let vals = eval_orf_sequence(a, poles, n - 1, CPoint::from_complex(node))?;
        let kernel: f64 = vals.iter().map(|t| t.phi.norm_sqr()).sum();
        let dual = 1.0 / kernel;
        if (w - dual).abs() > WEIGHT_DUALITY {
            return Err(OrfError::Inconsistent(format!(
                "quadrature weight routes disagree at node {j}: eigenvector {:.17e}, \
                 kernel sum {:.17e}",
                w, dual
            )));
        }
        entries.push((snap_real(node, j)?, w));
    }
    let measure = line_measure_from(entries)?;
    Ok(Quadrature { measure, n, v, u })
}

/// Quadrature rule of order `n` on the real line computed through the
/// circle-side unitary truncation of the converted parameters and pulled
/// back through the inverse Cayley map.
///
/// Unlike [`rl_quadrature`] this route covers every unimodular `v`: at the
/// excluded value the circle rule places a node at 1, which pulls back to a
/// node at infinity. The reported `v` and `u` refer to the line-side inputs.
pub fn rl_quadrature_via_circle(
    a: &ParamSeq,
    poles: &PoleSeq,
    n: usize,
    v: Complex64,
) -> Result<Quadrature> {
    check_line_quadrature(a, poles, n)?;
    let u = porf_u(a.a(n), v)?;
    let head = ParamSeq::new(a.values()[..n].to_vec())?;
    let conv = circle_line_params(&head, poles)?;
    let u_b = conv.parameter_scale(n) * u;
    let v_b = mobius_forward(conv.b.a(n), CPoint::from_complex(u_b))
        .to_complex()
        .ok_or_else(|| {
            OrfError::Margin("boundary value collides with the reflected parameter pole".into())
        })?;
    let circle = porf_quadrature(&conv.b, &conv.beta, n, v_b)?;
    let measure = pull_back_circle_measure(&circle.measure)?;
    Ok(Quadrature { measure, n, v, u })
}

/// Discrete line measure represented by a parameter sequence with a terminal
/// boundary value, reconstructed through the circle-side unitary truncation
/// of order `len + 1` so that a support point at infinity is recovered as
/// the pullback of a circle node at 1.
pub fn rl_reconstruct_measure(a: &ParamSeq, poles: &PoleSeq) -> Result<DiscreteMeasure> {
    if poles.domain() != Domain::Line {
        return Err(OrfError::Invalid(
            "real-line reconstruction needs line-domain poles".into(),
        ));
    }
    if a.terminal().is_none() {
        return Err(OrfError::Invalid(
            "measure reconstruction needs a terminal boundary value".into(),
        ));
    }
    let conv = circle_line_params(a, poles)?;
    let circle_mu = reconstruct_measure(&conv.b, &conv.beta)?;
    pull_back_circle_measure(&circle_mu)
}

/// Outcome of the mass-at-infinity test on a closed truncation.
#[derive(Clone, Copy, Debug)]
pub struct MassAtInfinityReport {
    /// True when an eigenvalue lies within [`MASS_AT_INFINITY_TOL`] of 1.
    pub present: bool,
    /// Distance of the nearest eigenvalue to 1.
    pub margin: f64,
}

impl MassAtInfinityReport {
    /// JSON rendering of the flag and margin.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "present": self.present,
            "margin": self.margin,
        })
        .to_string()
    }
}

/// Tests whether the line measure represented by `a` carries mass at
/// infinity: the closed five-diagonal truncation of order `n` (terminal
/// value in the last slot) has an eigenvalue within
/// [`MASS_AT_INFINITY_TOL`] of 1 exactly in that case. The margin is
/// reported so callers can apply a tighter threshold.
pub fn mass_at_infinity_check(a: &ParamSeq, n: usize) -> Result<MassAtInfinityReport> {
    let u = a.terminal().ok_or_else(|| {
        OrfError::Invalid("the mass-at-infinity test needs a terminal boundary value".into())
    })?;
    let av = effective_a(a, n, Some(u))?;
    let margin = distance_to_one(&cmv_of(&av))?;
    Ok(MassAtInfinityReport { present: margin <= MASS_AT_INFINITY_TOL, margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrices::{build_matrix, truncated_rep, Family, RepKind, RepSpec};
    use crate::measures::{inner_product, orf_from_measure};
    use crate::moebius::blaschke;
    use crate::moebius::BlaschkeVariant;
    use crate::opmoebius::inverse_with_cond;
    use crate::spectral::{zeros_orf, ZeroRoute};
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fro(m: &DenseMatrix) -> f64 {
        m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    fn random_line_poles(rng: &mut ChaCha8Rng, n: usize) -> PoleSeq {
        let alphas: Vec<Complex64> = (0..n)
            .map(|_| c(rng.gen_range(-1.5..1.5), rng.gen_range(0.4..2.0)))
            .collect();
        PoleSeq::line(alphas).unwrap()
    }

    fn random_params(rng: &mut ChaCha8Rng, n: usize) -> ParamSeq {
        let a: Vec<Complex64> = (0..n)
            .map(|_| Complex64::from_polar(rng.gen_range(0.05..0.8), rng.gen_range(-3.0..3.0)))
            .collect();
        ParamSeq::new(a).unwrap()
    }

    fn random_self_adjoint(rng: &mut ChaCha8Rng, n: usize) -> DenseMatrix {
        let m = DenseMatrix::from_fn(n, n, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        (m.clone() + m.adjoint()) * c(0.5, 0.0)
    }

    fn random_line_diag(rng: &mut ChaCha8Rng, n: usize) -> DiagParam {
        let diag: Vec<Complex64> = (0..n)
            .map(|_| c(rng.gen_range(-2.0..2.0), rng.gen_range(0.3..2.5)))
            .collect();
        DiagParam::new(Domain::Line, diag).unwrap()
    }

    fn diag_matrix(entries: &[Complex64]) -> DenseMatrix {
        let n = entries.len();
        DenseMatrix::from_fn(n, n, |i, j| if i == j { entries[i] } else { c(0.0, 0.0) })
    }

    #[test]
    fn scalar_maps_closed_forms() {
        assert_eq!(cayley(CPoint::new(0.0, 0.0), Direction::Forward), CPoint::new(-1.0, 0.0));
        assert_eq!(cayley(CPoint::infinity(), Direction::Forward), CPoint::new(1.0, 0.0));
        let w = cayley(CPoint::new(1.0, 0.0), Direction::Forward).expect_finite();
        assert_abs_diff_eq!(w.re, 0.0, epsilon = 1e-16);
        assert_abs_diff_eq!(w.im, -1.0, epsilon = 1e-16);
        let z0 = cayley(CPoint::new(0.0, 1.0), Direction::Forward).expect_finite();
        assert_abs_diff_eq!(z0.norm(), 0.0, epsilon = 1e-16);

        assert_eq!(cayley(CPoint::new(-1.0, 0.0), Direction::Inverse), CPoint::new(0.0, 0.0));
        assert!(cayley(CPoint::new(1.0, 0.0), Direction::Inverse).at_infinity);
        let back = cayley(CPoint::new(0.0, -1.0), Direction::Inverse).expect_finite();
        assert_abs_diff_eq!((back - c(1.0, 0.0)).norm(), 0.0, epsilon = 1e-15);

        // base-point reduction and the pole normalization
        let alpha = c(2.0, 3.0);
        let there = rl_mobius(alpha, CPoint::from_complex(alpha), Direction::Forward);
        assert_abs_diff_eq!(there.expect_finite().norm(), 0.0, epsilon = 1e-16);
        let m = rl_mobius(c(0.0, 2.0), CPoint::new(0.0, 0.0), Direction::Forward).expect_finite();
        assert_abs_diff_eq!((m - c(-1.0, 0.0)).norm(), 0.0, epsilon = 1e-16);
        assert_eq!(rl_mobius(alpha, CPoint::infinity(), Direction::Forward), CPoint::new(1.0, 0.0));

        let mut rng = ChaCha8Rng::seed_from_u64(80);
        for _ in 0..50 {
            let alpha = c(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0));
            let x = rng.gen_range(-1e6..1e6);
            let w = rl_mobius(alpha, CPoint::new(x, 0.0), Direction::Forward).expect_finite();
            assert!((w.norm() - 1.0).abs() <= 1e-13, "unimodularity at x={x}");
            let z = c(rng.gen_range(-2.0..2.0), rng.gen_range(0.1..2.0));
            let cz = cayley(CPoint::from_complex(z), Direction::Forward);
            assert_eq!(rl_mobius(c(0.0, 1.0), CPoint::from_complex(z), Direction::Forward), cz);
            let back = rl_mobius(alpha, rl_mobius(alpha, CPoint::from_complex(z), Direction::Forward), Direction::Inverse);
            assert!((back.expect_finite() - z).norm() < 1e-12);
        }
    }

    #[test]
    fn operator_cayley_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(81);
        for n in [1usize, 2, 5, 8] {
            let a = random_line_diag(&mut rng, n);
            let t = random_self_adjoint(&mut rng, n);
            let z = rl_op_mobius(&a, &t, Direction::Forward).unwrap();

            let defect = z.adjoint() * z.clone() - DenseMatrix::identity(n, n);
            assert!(fro(&defect) < 1e-11, "unitarity n={n}");

            // composition through the matrix Cayley map of the normalized part
            let etas: Vec<Complex64> = a.etas().iter().map(|&e| c(e, 0.0)).collect();
            let re_a: Vec<Complex64> = a.diag().iter().map(|v| c(v.re, 0.0)).collect();
            let mut mid = t.clone() - diag_matrix(&re_a);
            for i in 0..n {
                for j in 0..n {
                    mid[(i, j)] /= etas[i] * etas[j];
                }
            }
            let base = DiagParam::scalar(Domain::Line, c(0.0, 1.0), n).unwrap();
            let composed = rl_op_mobius(&base, &mid, Direction::Forward).unwrap();
            assert!(fro(&(composed - z.clone())) < 1e-11, "Cayley composition n={n}");

            let back = rl_op_mobius(&a, &z, Direction::Inverse).unwrap();
            assert!(fro(&(back - t.clone())) < 1e-10, "roundtrip n={n}");

            assert!(distance_to_one(&z).unwrap() > 1e-10, "no eigenvalue 1, n={n}");

            // scalar base parameter reduces to the plain matrix Cayley transform
            let id = DenseMatrix::identity(n, n);
            let cay = inverse_with_cond(&(t.clone() + id.clone() * c(0.0, 1.0))).unwrap()
                * (t.clone() - id * c(0.0, 1.0));
            let plain = rl_op_mobius(&base, &t, Direction::Forward).unwrap();
            assert!(fro(&(plain - cay)) < 1e-12, "base reduction n={n}");
        }

        let a2 = DiagParam::new(Domain::Line, vec![c(0.5, 1.0), c(-0.2, 0.7)]).unwrap();
        let bad = diag_matrix(&[c(1.0, 0.0), c(0.0, 1.0)]);
        assert!(matches!(
            rl_op_mobius(&a2, &bad, Direction::Inverse),
            Err(OrfError::MassAtInfinity(_))
        ));
        let fine = diag_matrix(&[c(-1.0, 0.0), c(0.0, 1.0)]);
        assert!(rl_op_mobius(&a2, &fine, Direction::Inverse).is_ok());
        let circle = DiagParam::new(Domain::Circle, vec![c(0.3, 0.0)]).unwrap();
        assert!(matches!(
            rl_op_mobius(&circle, &diag_matrix(&[c(0.0, 0.0)]), Direction::Forward),
            Err(OrfError::Invalid(_))
        ));
    }

    #[test]
    fn conversion_factors_and_identities() {
        // base poles leave everything untouched
        let poles = PoleSeq::line(vec![c(0.0, 1.0); 3]).unwrap();
        let a = ParamSeq::new(vec![c(0.3, 0.1), c(-0.2, 0.4), c(0.5, 0.0)]).unwrap();
        let conv = circle_line_params(&a, &poles).unwrap();
        for k in 0..=3 {
            assert!((conv.xi[k] - c(1.0, 0.0)).norm() < 1e-15);
            assert!((conv.gamma[k] - c(1.0, 0.0)).norm() < 1e-15);
            assert!((conv.lambda[k] - c(1.0, 0.0)).norm() < 1e-15);
        }
        for (b, av) in conv.b.values().iter().zip(a.values()) {
            assert!((b - av).norm() < 1e-15);
        }
        assert!(conv.beta.alphas().iter().all(|b| b.norm() < 1e-15));

        // beta = 1/2 comes from alpha = 3i and gives a real positive xi
        let poles = PoleSeq::line(vec![c(0.0, 3.0)]).unwrap();
        let a1 = ParamSeq::new(vec![c(0.4, 0.0)]).unwrap();
        let conv = circle_line_params(&a1, &poles).unwrap();
        assert_abs_diff_eq!(conv.beta.alpha(1).re, 0.5, epsilon = 1e-15);
        assert_abs_diff_eq!(conv.beta.alpha(1).im, 0.0, epsilon = 1e-15);
        assert!((conv.xi[1] - c(1.0, 0.0)).norm() < 1e-15);

        let mut rng = ChaCha8Rng::seed_from_u64(82);
        let poles = random_line_poles(&mut rng, 6);
        let a_open = random_params(&mut rng, 6);
        let u = Complex64::from_polar(1.0, 0.9);
        let a_closed =
            ParamSeq::with_terminal(a_open.values()[..5].to_vec(), u).unwrap();
        let conv = circle_line_params(&a_open, &poles).unwrap();
        let conv_closed = circle_line_params(&a_closed, &poles).unwrap();
        for k in 0..=6 {
            assert_abs_diff_eq!(conv.xi[k].norm(), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(conv.gamma[k].norm(), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(conv.lambda[k].norm(), 1.0, epsilon = 1e-14);
            // the factors depend on the poles alone
            assert!((conv.xi[k] - conv_closed.xi[k]).norm() < 1e-15);
        }
        for k in 1..=6 {
            let img = cayley(CPoint::from_complex(poles.alpha(k)), Direction::Forward)
                .expect_finite();
            assert!((conv.beta.alpha(k) - img).norm() < 1e-15, "beta_{k}");
        }
        for n in 1..=6 {
            assert_abs_diff_eq!(conv.b.a(n).norm(), a_open.a(n).norm(), epsilon = 1e-14);
        }
        assert!((conv.b.a(1) - a_open.a(1)).norm() < 1e-15);
        let u_b = conv_closed.b.terminal().unwrap();
        assert_abs_diff_eq!(u_b.norm(), 1.0, epsilon = 1e-14);
        assert!((u_b - conv_closed.parameter_scale(6) * u).norm() < 1e-14);

        // entrywise factor identities between the two representations; the
        // boundary value sits in the odd factor at odd n, the even at even n,
        // and the other factor is built from the open sequence it agrees with
        for (n, boundary) in [(5usize, false), (6, false), (6, true)] {
            let xi_m = diag_matrix(&conv.xi[..n]);
            let gamma_m = diag_matrix(&conv.gamma[..n]);
            let lambda_m = diag_matrix(&conv.lambda[..n]);

            let factor = |kind: RepKind, carries_u: bool| {
                let (sa, sb, ua, ub) = if carries_u {
                    (&a_closed, &conv_closed.b, Some(u), Some(u_b))
                } else {
                    (&a_open, &conv.b, None, None)
                };
                let ma = build_matrix(sa, &conv.beta, &RepSpec { kind, n, boundary: ua }).unwrap();
                let mb = build_matrix(sb, &conv.beta, &RepSpec { kind, n, boundary: ub }).unwrap();
                (ma, mb)
            };
            let (co_a, co_b) = factor(RepKind::CmvOdd, boundary && n % 2 == 1);
            let (ce_a, ce_b) = factor(RepKind::CmvEven, boundary && n % 2 == 0);
            let co_expect = lambda_m.adjoint() * xi_m.clone() * co_a.clone() * gamma_m.clone();
            let ce_expect = gamma_m.adjoint() * ce_a.clone() * xi_m.clone() * lambda_m.clone();
            assert!(fro(&(co_b.clone() - co_expect)) < 1e-12, "odd factor n={n} closed={boundary}");
            assert!(fro(&(ce_b.clone() - ce_expect)) < 1e-12, "even factor n={n} closed={boundary}");

            let (full_a, full_b) = factor(RepKind::Cmv, boundary);
            let expect = lambda_m.adjoint() * xi_m.clone() * full_a * xi_m * lambda_m;
            assert!(fro(&(full_b - expect)) < 1e-12, "full matrix n={n} closed={boundary}");
        }
    }

    #[test]
    fn circle_image_of_line_truncation() {
        let mut rng = ChaCha8Rng::seed_from_u64(83);
        let n = 8usize;
        let poles = random_line_poles(&mut rng, 7);
        let a = random_params(&mut rng, n);
        let conv = circle_line_params(&a, &poles).unwrap();
        let diag = DiagParam::from_poles(&poles, n).unwrap();
        let base = DiagParam::scalar(Domain::Line, c(0.0, 1.0), n).unwrap();
        let lambda_m = diag_matrix(&conv.lambda[..n]);

        // open truncation: eigenvalues inside the disk keep the inverse defined
        let av = a.values()[..n].to_vec();
        let ur = rl_op_mobius(&diag, &cmv_of(&av), Direction::Inverse).unwrap();
        let lhs = rl_op_mobius(&base, &ur, Direction::Forward).unwrap();
        let ut = truncated_rep(&conv.b, &conv.beta, n, Family::U, None).unwrap();
        let rhs = lambda_m.clone() * ut * lambda_m.adjoint();
        let scale = fro(&rhs).max(1.0);
        assert!(fro(&(lhs - rhs)) < 1e-9 * scale, "open truncation");

        // closed truncation: the line matrix is self-adjoint and the images match
        let u = Complex64::from_polar(1.0, -1.3);
        let avu = effective_a(&a, n, Some(u)).unwrap();
        let ur = rl_op_mobius(&diag, &cmv_of(&avu), Direction::Inverse).unwrap();
        assert!(fro(&(ur.clone() - ur.adjoint())) < 1e-9, "self-adjoint closed truncation");
        let lhs = rl_op_mobius(&base, &ur, Direction::Forward).unwrap();
        let u_b = conv.parameter_scale(n) * u;
        let ut = truncated_rep(&conv.b, &conv.beta, n, Family::U, Some(u_b)).unwrap();
        let rhs = lambda_m.clone() * ut * lambda_m.adjoint();
        let scale = fro(&rhs).max(1.0);
        assert!(fro(&(lhs - rhs)) < 1e-9 * scale, "closed truncation");
    }

    #[test]
    fn line_zeros_stay_in_upper_half_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(84);
        for n in [2usize, 5, 9] {
            let poles = random_line_poles(&mut rng, n);
            let a = random_params(&mut rng, n);
            let zu = zeros_orf(&a, &poles, n, ZeroRoute::U).unwrap();
            let zv = zeros_orf(&a, &poles, n, ZeroRoute::V).unwrap();
            let zp = zeros_orf(&a, &poles, n, ZeroRoute::Pair).unwrap();
            for z in &zu {
                assert!(z.im > 0.0, "zero {z} below the real axis");
            }
            assert!(crate::spectral::matched_distance(&zu, &zv) < 1e-8);
            assert!(crate::spectral::matched_distance(&zu, &zp) < 1e-8);
        }
    }

    #[test]
    fn quadrature_direct_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(85);
        // generating measure with six real support points
        let points: Vec<CPoint> = (0..6)
            .map(|j| CPoint::new(-2.2 + j as f64 * 0.9 + rng.gen_range(0.0..0.3), 0.0))
            .collect();
        let mut weights: Vec<f64> = (0..6).map(|_| rng.gen_range(0.2..1.0)).collect();
        let total: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= total;
        }
        let mu = DiscreteMeasure::new(Domain::Line, points, weights).unwrap();
        let poles = random_line_poles(&mut rng, 4);
        let res = orf_from_measure(&mu, &poles, 4).unwrap();

        for n in [3usize, 4] {
            let v = Complex64::from_polar(1.0, 0.7 + n as f64);
            let quad = rl_quadrature(&res.a, &poles, n, v).unwrap();
            assert_eq!(quad.measure.len(), n);
            for p in quad.measure.points() {
                assert!(!p.at_infinity);
                assert_eq!(p.im, 0.0);
            }
            let wsum: f64 = quad.measure.weights().iter().sum();
            assert_abs_diff_eq!(wsum, 1.0, epsilon = 1e-12);

            // the rule integrates products of the first n basis functions exactly
            for p in 0..n {
                for q in 0..n {
                    let against = |m: &DiscreteMeasure| -> Complex64 {
                        let f: Vec<Complex64> = m
                            .points()
                            .iter()
                            .map(|&z| blaschke(&poles, p, z, BlaschkeVariant::Full).unwrap())
                            .collect();
                        let g: Vec<Complex64> = m
                            .points()
                            .iter()
                            .map(|&z| blaschke(&poles, q, z, BlaschkeVariant::Full).unwrap())
                            .collect();
                        inner_product(m, &f, &g).unwrap()
                    };
                    let lhs = against(&quad.measure);
                    let rhs = against(&mu);
                    assert!((lhs - rhs).norm() < 1e-8, "moment p={p} q={q} n={n}");
                }
            }
        }

        // one-point closed form
        let a1 = ParamSeq::new(vec![c(0.0, 0.0)]).unwrap();
        let p1 = PoleSeq::line(vec![c(0.0, 1.0)]).unwrap();
        let v = Complex64::from_polar(1.0, 1.1);
        let quad = rl_quadrature(&a1, &p1, 1, v).unwrap();
        let node = quad.measure.points()[0].expect_finite();
        let expect = cayley(CPoint::from_complex(-v), Direction::Inverse).expect_finite();
        assert!((node - expect).norm() < 1e-12);
        assert_abs_diff_eq!(quad.measure.weights()[0], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn quadrature_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(86);
        for n in [2usize, 4, 7] {
            let poles = random_line_poles(&mut rng, n);
            let a = random_params(&mut rng, n);
            let v = Complex64::from_polar(1.0, rng.gen_range(-3.0..3.0));
            let direct = rl_quadrature(&a, &poles, n, v).unwrap();
            let circled = rl_quadrature_via_circle(&a, &poles, n, v).unwrap();
            assert_eq!(direct.measure.len(), circled.measure.len());
            for j in 0..n {
                let pd = direct.measure.points()[j];
                let pc = circled.measure.points()[j];
                assert!(!pd.at_infinity && !pc.at_infinity);
                assert!((pd.re - pc.re).abs() < 1e-9, "node {j} order {n}");
                assert!(
                    (direct.measure.weights()[j] - circled.measure.weights()[j]).abs() < 1e-9,
                    "weight {j} order {n}"
                );
            }
        }
    }

    #[test]
    fn excluded_value_orientation() {
        let mut rng = ChaCha8Rng::seed_from_u64(87);
        let n = 4usize;
        let poles = random_line_poles(&mut rng, n);
        let a = random_params(&mut rng, n);
        let vals = eval_orf_sequence(&a, &poles, n, CPoint::infinity()).unwrap();
        let (phi, phi_star) = (vals[n].phi, vals[n].phi_star);
        // at the boundary point infinity the starred value is the conjugate
        assert_abs_diff_eq!(phi_star.norm(), phi.norm(), epsilon = 1e-12);
        assert!((phi_star - phi.conj()).norm() < 1e-12);

        let v_exc = rl_excluded_v(&a, &poles, n).unwrap();
        assert!((v_exc + phi / phi_star).norm() < 1e-15);
        assert_abs_diff_eq!(v_exc.norm(), 1.0, epsilon = 1e-12);
        // the seed produces a genuinely complex excluded value, separating
        // the two candidate orientations
        assert!(v_exc.im.abs() > 0.01);

        // the closed truncation at the excluded value has eigenvalue 1 ...
        let u_exc = porf_u(a.a(n), v_exc).unwrap();
        let av = effective_a(&a, n, Some(u_exc)).unwrap();
        let margin = distance_to_one(&cmv_of(&av)).unwrap();
        assert!(margin < 1e-9, "excluded value margin {margin:.3e}");

        // ... while the conjugated orientation stays well away from it
        let u_conj = porf_u(a.a(n), v_exc.conj()).unwrap();
        let av = effective_a(&a, n, Some(u_conj)).unwrap();
        let other = distance_to_one(&cmv_of(&av)).unwrap();
        assert!(other > 1e-3, "conjugate orientation margin {other:.3e}");

        assert!(matches!(
            rl_quadrature(&a, &poles, n, v_exc),
            Err(OrfError::MassAtInfinity(_))
        ));

        // the circle-side route returns n-1 real nodes plus infinity
        let quad = rl_quadrature_via_circle(&a, &poles, n, v_exc).unwrap();
        assert_eq!(quad.measure.len(), n);
        let infinities = quad.measure.points().iter().filter(|p| p.at_infinity).count();
        assert_eq!(infinities, 1);
        assert!(quad.measure.points()[n - 1].at_infinity);
        let wsum: f64 = quad.measure.weights().iter().sum();
        assert_abs_diff_eq!(wsum, 1.0, epsilon = 1e-12);

        // a terminal sequence built from the excluded boundary flags the mass
        let closed = ParamSeq::with_terminal(a.values()[..n - 1].to_vec(), u_exc).unwrap();
        let report = mass_at_infinity_check(&closed, n).unwrap();
        assert!(report.present);
        assert!(report.margin < 1e-9);
    }

    #[test]
    fn mass_at_infinity_closed_forms() {
        let hit = ParamSeq::with_terminal(Vec::new(), c(-1.0, 0.0)).unwrap();
        let report = mass_at_infinity_check(&hit, 1).unwrap();
        assert!(report.present);
        assert_abs_diff_eq!(report.margin, 0.0, epsilon = 1e-14);

        let miss = ParamSeq::with_terminal(Vec::new(), c(1.0, 0.0)).unwrap();
        let report = mass_at_infinity_check(&miss, 1).unwrap();
        assert!(!report.present);
        assert_abs_diff_eq!(report.margin, 2.0, epsilon = 1e-14);

        let open = ParamSeq::new(vec![c(0.5, 0.0)]).unwrap();
        assert!(matches!(mass_at_infinity_check(&open, 1), Err(OrfError::Invalid(_))));

        let v = serde_json::from_str::<serde_json::Value>(&report.to_json()).unwrap();
        assert_eq!(v["present"], false);
        assert_abs_diff_eq!(v["margin"].as_f64().unwrap(), 2.0, epsilon = 1e-14);
    }

    #[test]
    fn reconstruction_roundtrips_through_infinity() {
        let poles = PoleSeq::line(vec![c(0.5, 1.0), c(-0.3, 0.7), c(1.0, 1.5)]).unwrap();

        // support containing the point at infinity
        let mu = DiscreteMeasure::new(
            Domain::Line,
            vec![CPoint::new(-1.3, 0.0), CPoint::new(0.4, 0.0), CPoint::infinity()],
            vec![0.35, 0.4, 0.25],
        )
        .unwrap();
        let res = orf_from_measure(&mu, &poles, 3).unwrap();
        assert!(res.terminal.is_some());
        let report = mass_at_infinity_check(&res.a, 3).unwrap();
        assert!(report.present, "margin {:.3e}", report.margin);

        let rec = rl_reconstruct_measure(&res.a, &poles).unwrap();
        assert_eq!(rec.len(), 3);
        assert!(rec.points()[2].at_infinity);
        for j in 0..2 {
            assert!((rec.points()[j].re - mu.points()[j].re).abs() < 1e-9, "node {j}");
        }
        for j in 0..3 {
            assert!((rec.weights()[j] - mu.weights()[j]).abs() < 1e-9, "weight {j}");
        }

        // bounded support stays clear of the flag and also roundtrips
        let mu = DiscreteMeasure::new(
            Domain::Line,
            vec![CPoint::new(-1.3, 0.0), CPoint::new(0.4, 0.0), CPoint::new(2.1, 0.0)],
            vec![0.35, 0.4, 0.25],
        )
        .unwrap();
        let res = orf_from_measure(&mu, &poles, 3).unwrap();
        let report = mass_at_infinity_check(&res.a, 3).unwrap();
        assert!(!report.present);
        assert!(report.margin > 1e-6);
        let rec = rl_reconstruct_measure(&res.a, &poles).unwrap();
        for j in 0..3 {
            assert!((rec.points()[j].re - mu.points()[j].re).abs() < 1e-9, "node {j}");
            assert!((rec.weights()[j] - mu.weights()[j]).abs() < 1e-9, "weight {j}");
        }
    }

    #[test]
    fn validation_errors() {
        let circle_poles = PoleSeq::circle(vec![c(0.3, 0.0)]).unwrap();
        let a = ParamSeq::new(vec![c(0.2, 0.0)]).unwrap();
        let v = c(1.0, 0.0);
        assert!(matches!(
            rl_quadrature(&a, &circle_poles, 1, v),
            Err(OrfError::Invalid(_))
        ));
        let line_poles = PoleSeq::line(vec![c(0.0, 1.0)]).unwrap();
        assert!(matches!(
            rl_quadrature(&a, &line_poles, 0, v),
            Err(OrfError::Invalid(_))
        ));
        assert!(matches!(
            rl_quadrature(&a, &line_poles, 2, v),
            Err(OrfError::DimensionMismatch(_))
        ));
        assert!(matches!(
            rl_reconstruct_measure(&a, &line_poles),
            Err(OrfError::Invalid(_))
        ));
        assert!(matches!(
            circle_line_params(&a, &circle_poles),
            Err(OrfError::Invalid(_))
        ));
        let long = ParamSeq::new(vec![c(0.2, 0.0); 4]).unwrap();
        assert!(matches!(
            circle_line_params(&long, &line_poles),
            Err(OrfError::DimensionMismatch(_))
        ));
        assert!("sideways".parse::<Direction>().is_err());
        assert_eq!("Forward".parse::<Direction>().unwrap(), Direction::Forward);
    }
}
