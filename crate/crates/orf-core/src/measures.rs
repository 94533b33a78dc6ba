//! Discrete measures, the induced inner product, and the Gram-Schmidt route
//! from a measure to its orthonormal rational functions and recurrence
//! parameters.
//!
//! The extraction reproduces the unique recurrence normalization: modified
//! Gram-Schmidt only determines each function up to a unimodular phase, and
//! the phase is resolved recursively by evaluating the conjugate recurrence
//! row at the previous pole, where the Blaschke factor vanishes.

use crate::error::{OrfError, Result};
use crate::moebius::{blaschke, eta_of, hat_point, varpi, zeta, BlaschkeVariant, CPoint, Domain, PoleSeq};
use crate::opmoebius::DenseMatrix;
use crate::orfcore::{OrfValue, ParamSeq, POLE_GUARD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Separation below which two support points count as colliding.
pub const NODE_SEPARATION: f64 = 1e-10;

// Gram pivot ratio below which orthogonalization declares a breakdown
const BREAKDOWN_RATIO: f64 = 1e-13;

/// Finitely supported probability measure on the unit circle or the extended
/// real line. One support point may sit at infinity (line domain only).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    domain: Domain,
    points: Vec<CPoint>,
    weights: Vec<f64>,
}

impl DiscreteMeasure {
    /// Validates and wraps support points and weights.
    pub fn new(domain: Domain, points: Vec<CPoint>, weights: Vec<f64>) -> Result<Self> {
        let m = Self { domain, points, weights };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if self.points.is_empty() {
            return Err(OrfError::Invalid("measure needs at least one support point".into()));
        }
        if self.points.len() != self.weights.len() {
            return Err(OrfError::DimensionMismatch(format!(
                "{} points but {} weights",
                self.points.len(),
                self.weights.len()
            )));
        }
        let mut infinities = 0usize;
        for (j, p) in self.points.iter().enumerate() {
            if p.at_infinity {
                infinities += 1;
                if self.domain == Domain::Circle {
                    return Err(OrfError::Invalid(
                        "circle measures cannot have a point at infinity".into(),
                    ));
                }
            } else {
                let z = p.expect_finite();
                match self.domain {
                    Domain::Circle => {
                        if (z.norm() - 1.0).abs() >= 1e-12 {
                            return Err(OrfError::Invalid(format!(
                                "support point {j} has modulus {:.17}, must lie on the unit circle",
                                z.norm()
                            )));
                        }
                    }
                    Domain::Line => {
                        if z.im.abs() >= 1e-12 {
                            return Err(OrfError::Invalid(format!(
                                "support point {j} has imaginary part {:.3e}, must be real",
                                z.im
                            )));
                        }
                    }
                }
            }
        }
        if infinities > 1 {
            return Err(OrfError::Invalid("at most one support point may be at infinity".into()));
        }
        for (j, &w) in self.weights.iter().enumerate() {
            if !(w > 0.0) {
                return Err(OrfError::Invalid(format!("weight {j} is {w}, must be positive")));
            }
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(OrfError::Invalid(format!(
                "weights sum to {total:.17}, must be 1",
            )));
        }
        for i in 0..self.points.len() {
            for j in (i + 1)..self.points.len() {
                let dist = match (self.points[i].to_complex(), self.points[j].to_complex()) {
                    (Some(a), Some(b)) => (a - b).norm(),
                    (None, None) => 0.0,
                    _ => continue,
                };
                if dist <= NODE_SEPARATION {
                    return Err(OrfError::NodeCollision { i, j, dist });
                }
            }
        }
        Ok(())
    }

    /// Domain the measure lives on.
    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Support points.
    pub fn points(&self) -> &[CPoint] {
        &self.points
    }

    /// Weights, aligned with the support points.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Number of support points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True when the measure has no support points (never after validation).
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Parses and validates a measure from its JSON form.
    pub fn from_json(text: &str) -> Result<Self> {
        let m: DiscreteMeasure = serde_json::from_str(text)
            .map_err(|e| OrfError::Invalid(format!("measure JSON: {e}")))?;
        m.validate()?;
        Ok(m)
    }

    /// Serializes the measure to JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("measure serialization cannot fail")
    }
}

/// Weighted inner product `sum_j w_j conj(f_j) g_j` of two functions given by
/// their values on the support.
pub fn inner_product(mu: &DiscreteMeasure, f: &[Complex64], g: &[Complex64]) -> Result<Complex64> {
    if f.len() != mu.len() || g.len() != mu.len() {
        return Err(OrfError::DimensionMismatch(format!(
            "value lists of lengths {} and {} for a {}-point measure",
            f.len(),
            g.len(),
            mu.len()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..mu.len() {
        acc += mu.weights()[j] * f[j].conj() * g[j];
    }
    Ok(acc)
}

/// Output of [`orf_from_measure`]: function values on the support and the
/// recurrence parameters they determine.
#[derive(Clone, Debug)]
pub struct GramSchmidtResult {
    /// Row `k` holds the values of the `k`-th orthonormal function at all
    /// support points.
    pub orf_values: DenseMatrix,
    /// Extracted parameters; carries the terminal value when present.
    pub a: ParamSeq,
    /// Boundary value extracted when the requested order exhausts the
    /// support.
    pub terminal: Option<Complex64>,
}

// evaluates sum_i conj(c_i) prod_{t=i+1..n} zeta_t(alpha): the conjugate
// form of a coefficient vector against the Blaschke basis, organized so
// vanishing factors never divide
fn eval_star_at(domain: Domain, poles: &PoleSeq, coeffs: &[Complex64], alpha: Complex64) -> Complex64 {
    let n = coeffs.len() - 1;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut ratio = Complex64::new(1.0, 0.0);
    // walk i = n down to 0, extending the tail product one factor at a time
    for i in (0..=n).rev() {
        acc += coeffs[i].conj() * ratio;
        if i > 0 {
            ratio *= zeta(domain, poles.alpha(i), CPoint::from_complex(alpha)).expect_finite();
        }
    }
    acc
}

fn eval_coeffs_at(poles: &PoleSeq, coeffs: &[Complex64], z: CPoint) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &ci) in coeffs.iter().enumerate() {
        acc += ci * blaschke(poles, i, z, BlaschkeVariant::Full)?;
    }
    Ok(acc)
}

/// Orthonormalizes the Blaschke basis against the measure and extracts the
/// recurrence parameters `a_1..a_order`. When `order` equals the number of
/// support points the final parameter is the boundary value that closes the
/// finite measure, returned in `terminal` (and inside `a`).
pub fn orf_from_measure(mu: &DiscreteMeasure, poles: &PoleSeq, order: usize) -> Result<GramSchmidtResult> {
    let p = mu.len();
    let domain = mu.domain();
    if domain != poles.domain() {
        return Err(OrfError::Invalid("measure and poles live on different domains".into()));
    }
    if order > p {
        return Err(OrfError::Invalid(format!(
            "order {order} exceeds the {p}-point support"
        )));
    }
    let terminal_step = order == p;
    // highest basis index that gets orthonormalized
    let kmax = if terminal_step { order - 1 } else { order };
    if poles.len() < kmax {
        return Err(OrfError::DimensionMismatch(format!(
            "order {order} needs {kmax} poles, sequence has {}",
            poles.len()
        )));
    }
    // the basis blows up at the reflected poles; refuse supports touching them
    for k in 1..=kmax {
        let hat = hat_point(domain, poles.alpha(k));
        for (j, pt) in mu.points().iter().enumerate() {
            let clash = match (hat.to_complex(), pt.to_complex()) {
                (Some(h), Some(z)) => (h - z).norm() <= POLE_GUARD,
                (None, None) => true,
                _ => false,
            };
            if clash {
                return Err(OrfError::PoleHit(format!(
                    "support point {j} lies at the reflection of pole {k}"
                )));
            }
        }
    }

    let w = mu.weights();
    let dot = |f: &[Complex64], g: &[Complex64]| -> Complex64 {
        (0..p).map(|j| w[j] * f[j].conj() * g[j]).sum()
    };

    let mut values: Vec<Vec<Complex64>> = Vec::with_capacity(kmax + 1);
    let mut coeffs: Vec<Vec<Complex64>> = Vec::with_capacity(kmax + 1);
    let mut a_out: Vec<Complex64> = Vec::with_capacity(order);

    for k in 0..=kmax {
        let mut v: Vec<Complex64> = mu
            .points()
            .iter()
            .map(|&z| blaschke(poles, k, z, BlaschkeVariant::Full))
            .collect::<Result<_>>()?;
        let bnorm = dot(&v, &v).re.sqrt();
        let mut c = vec![Complex64::new(0.0, 0.0); k + 1];
        c[k] = Complex64::new(1.0, 0.0);
        // modified Gram-Schmidt with one reorthogonalization pass
        for _ in 0..2 {
            for i in 0..k {
                let h = dot(&values[i], &v);
                for j in 0..p {
                    v[j] -= h * values[i][j];
                }
                for (cj, pj) in c.iter_mut().zip(coeffs[i].iter()) {
                    *cj -= h * pj;
                }
            }
        }
        let norm = dot(&v, &v).re.max(0.0).sqrt();
        if norm < BREAKDOWN_RATIO * bnorm {
            return Err(OrfError::Breakdown { index: k, ratio: norm / bnorm });
        }
        let inv = Complex64::new(1.0 / norm, 0.0);
        for x in v.iter_mut() {
            *x *= inv;
        }
        for x in c.iter_mut() {
            *x *= inv;
        }

        if k > 0 {
            // phase fix: the hatted function equals c_phase * phi_k; resolve
            // c_phase through the conjugate recurrence row at alpha_{k-1}
            let aprev = poles.alpha(k - 1);
            let hat_at = eval_coeffs_at(poles, &c, CPoint::from_complex(aprev))?;
            let hat_star_at = eval_star_at(domain, poles, &c, aprev);
            let r = hat_at / hat_star_at;
            if r.norm() >= 1.0 {
                return Err(OrfError::Breakdown { index: k, ratio: r.norm() });
            }
            let rho = (1.0 - r.norm_sqr()).sqrt();
            let e = eta_of(domain, poles.alpha(k))? / (eta_of(domain, aprev)? * rho);
            let prev_star_at = eval_star_at(domain, poles, &coeffs[k - 1], aprev);
            let true_star_at = e * (varpi(domain, aprev, aprev) / varpi(domain, poles.alpha(k), aprev))
                * prev_star_at;
            let mut cbar = hat_star_at / true_star_at;
            cbar /= Complex64::new(cbar.norm(), 0.0);
            a_out.push(r * cbar * cbar);
            for x in v.iter_mut() {
                *x *= cbar;
            }
            for x in c.iter_mut() {
                *x *= cbar;
            }
        }
        values.push(v);
        coeffs.push(c);
    }

    let mut terminal = None;
    if terminal_step {
        // the next function must vanish on the whole support, pinning a
        // unimodular parameter; average the per-point values by weight
        let last = kmax;
        let mut u = Complex64::new(0.0, 0.0);
        for (j, &pt) in mu.points().iter().enumerate() {
            let b = blaschke(poles, last, pt, BlaschkeVariant::Full)?;
            let phi = values[last][j];
            let phi_star = b * phi.conj();
            if phi_star.norm() < 1e-13 {
                return Err(OrfError::Breakdown { index: order, ratio: phi_star.norm() });
            }
            let zfac = zeta(domain, poles.alpha(last), pt).expect_finite();
            u += w[j] * (-(zfac * phi) / phi_star);
        }
        terminal = Some(u);
    }

    let a = match terminal {
        Some(u) => ParamSeq::with_terminal(a_out, u)?,
        None => ParamSeq::new(a_out)?,
    };
    let mut orf_values = DenseMatrix::zeros(values.len(), p);
    for (k, row) in values.iter().enumerate() {
        for j in 0..p {
            orf_values[(k, j)] = row[j];
        }
    }
    Ok(GramSchmidtResult { orf_values, a, terminal })
}

/// Closed-form orthonormal functions of the Lebesgue measure on the circle:
/// `phi_n = eta_n (z / varpi_n) B_{n-1}` with all recurrence parameters zero.
pub fn lebesgue_orf(poles: &PoleSeq, n: usize, z: CPoint) -> Result<OrfValue> {
    if poles.domain() != Domain::Circle {
        return Err(OrfError::Invalid(
            "the Lebesgue closed form applies to the circle domain".into(),
        ));
    }
    let zc = z
        .to_complex()
        .ok_or_else(|| OrfError::Invalid("circle-domain evaluation at infinity is not supported".into()))?;
    if n == 0 {
        return Ok(OrfValue { n, z, phi: Complex64::new(1.0, 0.0), phi_star: Complex64::new(1.0, 0.0) });
    }
    if poles.len() < n {
        return Err(OrfError::DimensionMismatch(format!(
            "order {n} needs {n} poles, sequence has {}",
            poles.len()
        )));
    }
    let alpha = poles.alpha(n);
    let hat = hat_point(Domain::Circle, alpha);
    if let Some(h) = hat.to_complex() {
        if (zc - h).norm() <= POLE_GUARD {
            return Err(OrfError::PoleHit(format!(
                "evaluation point lies at the reflection of pole {n}"
            )));
        }
    }
    let eta_n = eta_of(Domain::Circle, alpha)?;
    let b = blaschke(poles, n - 1, z, BlaschkeVariant::Full)?;
    let w = varpi(Domain::Circle, alpha, zc);
    Ok(OrfValue {
        n,
        z,
        phi: eta_n * zc / w * b,
        phi_star: Complex64::new(eta_n, 0.0) / w,
    })
}

/// Uniform grid discretization of a density on the circle: `m` equispaced
/// points with weights proportional to the density values, normalized to a
/// probability measure.
pub fn circle_grid_measure<F: Fn(f64) -> f64>(m: usize, density: F) -> Result<DiscreteMeasure> {
    if m == 0 {
        return Err(OrfError::Invalid("grid needs at least one point".into()));
    }
    let mut points = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for j in 0..m {
        let theta = 2.0 * std::f64::consts::PI * (j as f64) / (m as f64);
        let d = density(theta);
        if !(d > 0.0) || !d.is_finite() {
            return Err(OrfError::Invalid(format!(
                "density at grid point {j} is {d}, must be positive and finite"
            )));
        }
        points.push(CPoint::from_complex(Complex64::from_polar(1.0, theta)));
        weights.push(d);
    }
    let total: f64 = weights.iter().sum();
    for w in weights.iter_mut() {
        *w /= total;
    }
    DiscreteMeasure::new(Domain::Circle, points, weights)
}
