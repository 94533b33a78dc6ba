//! Recurrence-based evaluation of the orthonormal rational functions, their
//! star conjugates, the rebased family used by the five-diagonal
//! representation, and para-orthogonal combinations.
//!
//! The recurrence advances the pair `(phi_k, phi_k*)` with a positive
//! coefficient `e_k` and a Schur-type parameter `a_k` in the open unit disk:
//!
//! ```text
//! phi_k  = e_k (varpi_{k-1}/varpi_k) (zeta_{k-1} phi_{k-1} + a_k phi*_{k-1})
//! phi_k* = e_k (varpi_{k-1}/varpi_k) (conj(a_k) zeta_{k-1} phi_{k-1} + phi*_{k-1})
//! ```
//!
//! starting from `phi_0 = phi_0* = 1`.

use crate::error::{OrfError, Result};
use crate::moebius::{describe_point, eta_of, hat_point, varpi, zeta, CPoint, Domain, PoleSeq};
use num_complex::Complex64;

/// Distance below which an evaluation point counts as sitting on a pole.
pub const POLE_GUARD: f64 = 1e-10;

/// Recurrence parameters `a_1..a_N`, optionally closed by a boundary value.
///
/// The terminal value `u` has modulus 1 and stands in for the parameter of
/// index `len + 1` (or replaces `a_n` when a boundary construction of order
/// `n <= len` is requested explicitly).
#[derive(Clone, Debug)]
pub struct ParamSeq {
    a: Vec<Complex64>,
    terminal: Option<Complex64>,
}

impl ParamSeq {
    /// Parameter sequence without a terminal value.
    pub fn new(a: Vec<Complex64>) -> Result<Self> {
        Self::build(a, None)
    }

    /// Parameter sequence closed by a boundary value of modulus 1.
    pub fn with_terminal(a: Vec<Complex64>, u: Complex64) -> Result<Self> {
        Self::build(a, Some(u))
    }

    fn build(a: Vec<Complex64>, terminal: Option<Complex64>) -> Result<Self> {
        for (k, v) in a.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() || v.norm() >= 1.0 {
                return Err(OrfError::Invalid(format!(
                    "parameter {} has modulus {:.17}, must be strictly below 1",
                    k + 1,
                    v.norm()
                )));
            }
        }
        if let Some(u) = terminal {
            if (u.norm() - 1.0).abs() > 1e-8 {
                return Err(OrfError::Invalid(format!(
                    "terminal value has modulus {:.17}, must be 1",
                    u.norm()
                )));
            }
        }
        Ok(ParamSeq { a, terminal })
    }

    /// `a_k`, 1-based. Panics out of range; operations validate lengths first.
    pub fn a(&self, k: usize) -> Complex64 {
        self.a[k - 1]
    }

    /// All regular parameters.
    pub fn values(&self) -> &[Complex64] {
        &self.a
    }

    /// Number of regular parameters.
    pub fn len(&self) -> usize {
        self.a.len()
    }

    /// True when the sequence holds no regular parameters.
    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Optional boundary value.
    pub fn terminal(&self) -> Option<Complex64> {
        self.terminal
    }
}

/// Quantities derived from `(a, poles)`: `rho_k = sqrt(1 - |a_k|^2)`, the
/// skewed variants `rho_k^+ = (eta_{k-1}/eta_k) rho_k` and
/// `rho_k^- = (eta_k/eta_{k-1}) rho_k`, and the recurrence coefficient
/// `e_k = eta_k / (eta_{k-1} rho_k)`.
#[derive(Clone, Debug)]
pub struct DerivedParams {
    rho: Vec<f64>,
    rho_plus: Vec<f64>,
    rho_minus: Vec<f64>,
    e: Vec<f64>,
}

impl DerivedParams {
    /// `rho_k`, 1-based.
    pub fn rho(&self, k: usize) -> f64 {
        self.rho[k - 1]
    }

    /// `rho_k^+`, 1-based.
    pub fn rho_plus(&self, k: usize) -> f64 {
        self.rho_plus[k - 1]
    }

    /// `rho_k^-`, 1-based.
    pub fn rho_minus(&self, k: usize) -> f64 {
        self.rho_minus[k - 1]
    }

    /// `e_k`, 1-based.
    pub fn e(&self, k: usize) -> f64 {
        self.e[k - 1]
    }

    /// Number of indices covered.
    pub fn len(&self) -> usize {
        self.rho.len()
    }

    /// True when no indices are covered.
    pub fn is_empty(&self) -> bool {
        self.rho.is_empty()
    }
}

/// Paired evaluation of one of the function families at a point.
///
/// For [`eval_orf`] the pair is `(phi_n, phi_n*)`; for [`eval_chi`] it is
/// `(chi_n, chi_{n*})`. On the boundary of the domain the two components have
/// equal modulus.
#[derive(Clone, Copy, Debug)]
pub struct OrfValue {
    /// Order of the function.
    pub n: usize,
    /// Evaluation point.
    pub z: CPoint,
    /// Value of the function.
    pub phi: Complex64,
    /// Value of its star conjugate.
    pub phi_star: Complex64,
}

/// Derived parameter lists for `a_1..a_N` against `poles`.
pub fn derived_params(a: &ParamSeq, poles: &PoleSeq) -> Result<DerivedParams> {
    if a.len() > poles.len() {
        return Err(OrfError::DimensionMismatch(format!(
            "{} parameters need at least as many poles, got {}",
            a.len(),
            poles.len()
        )));
    }
    let n = a.len();
    let mut rho = Vec::with_capacity(n);
    let mut rho_plus = Vec::with_capacity(n);
    let mut rho_minus = Vec::with_capacity(n);
    let mut e = Vec::with_capacity(n);
    for k in 1..=n {
        let ak = a.a(k);
        let r = (1.0 - ak.norm_sqr()).sqrt();
        if !(r > 0.0) {
            return Err(OrfError::Invalid(format!(
                "parameter {k} has modulus {:.17}, must be strictly below 1",
                ak.norm()
            )));
        }
        let eta_prev = eta_of(poles.domain(), poles.alpha(k - 1))?;
        let eta_cur = eta_of(poles.domain(), poles.alpha(k))?;
        rho.push(r);
        rho_plus.push(eta_prev / eta_cur * r);
        rho_minus.push(eta_cur / eta_prev * r);
        e.push(eta_cur / (eta_prev * r));
    }
    Ok(DerivedParams { rho, rho_plus, rho_minus, e })
}

fn check_orders(a: &ParamSeq, poles: &PoleSeq, n: usize) -> Result<()> {
    if n > a.len() {
        return Err(OrfError::DimensionMismatch(format!(
            "order {n} needs {n} parameters, sequence has {}",
            a.len()
        )));
    }
    if n > poles.len() {
        return Err(OrfError::DimensionMismatch(format!(
            "order {n} needs {n} poles, sequence has {}",
            poles.len()
        )));
    }
    Ok(())
}

// reject z sitting on (or within POLE_GUARD of) a pole reflection hat(alpha_k)
fn guard_poles(poles: &PoleSeq, n: usize, z: CPoint) -> Result<()> {
    for k in 0..=n {
        let hat = hat_point(poles.domain(), poles.alpha(k));
        match (z.to_complex(), hat.to_complex()) {
            (Some(zc), Some(hc)) => {
                if (zc - hc).norm() <= POLE_GUARD {
                    return Err(OrfError::PoleHit(format!(
                        "evaluation point is within {POLE_GUARD:e} of the pole {} (pole index {k})",
                        describe_point(hat)
                    )));
                }
            }
            (None, None) => {
                return Err(OrfError::PoleHit(format!(
                    "evaluation at infinity hits the pole of factor {k} (pole index {k})"
                )));
            }
            _ => {}
        }
    }
    Ok(())
}

/// Values `(phi_k, phi_k*)` for all orders `k = 0..=n` at one point.
pub fn eval_orf_sequence(a: &ParamSeq, poles: &PoleSeq, n: usize, z: CPoint) -> Result<Vec<OrfValue>> {
    check_orders(a, poles, n)?;
    if z.at_infinity && poles.domain() == Domain::Circle {
        return Err(OrfError::Invalid(
            "circle-domain evaluation at infinity is not supported".into(),
        ));
    }
    guard_poles(poles, n, z)?;
    let derived = derived_params(a, poles)?;
    let mut out = Vec::with_capacity(n + 1);
    let one = Complex64::new(1.0, 0.0);
    let mut phi = one;
    let mut phi_star = one;
    out.push(OrfValue { n: 0, z, phi, phi_star });
    if z.at_infinity {
        // line domain at infinity: varpi ratios and zeta factors all tend to 1
        for k in 1..=n {
            let ek = Complex64::new(derived.e(k), 0.0);
            let ak = a.a(k);
            let new_phi = ek * (phi + ak * phi_star);
            let new_star = ek * (ak.conj() * phi + phi_star);
            phi = new_phi;
            phi_star = new_star;
            out.push(OrfValue { n: k, z, phi, phi_star });
        }
        return Ok(out);
    }
    let zc = z.expect_finite();
    let mut prev_varpi = varpi(poles.domain(), poles.alpha(0), zc);
    for k in 1..=n {
        let cur_varpi = varpi(poles.domain(), poles.alpha(k), zc);
        let ratio = prev_varpi / cur_varpi;
        let zf = zeta(poles.domain(), poles.alpha(k - 1), z)
            .to_complex()
            .expect("pole proximity excluded by guard");
        let ek = Complex64::new(derived.e(k), 0.0);
        let ak = a.a(k);
        let new_phi = ek * ratio * (zf * phi + ak * phi_star);
        let new_star = ek * ratio * (ak.conj() * zf * phi + phi_star);
        phi = new_phi;
        phi_star = new_star;
        prev_varpi = cur_varpi;
        out.push(OrfValue { n: k, z, phi, phi_star });
    }
    Ok(out)
}

/// Value `(phi_n(z), phi_n*(z))` by iterating the recurrence from order 0.
pub fn eval_orf(a: &ParamSeq, poles: &PoleSeq, n: usize, z: CPoint) -> Result<OrfValue> {
    Ok(eval_orf_sequence(a, poles, n, z)?
        .pop()
        .expect("sequence holds n + 1 values"))
}

/// Values `(chi_k, chi_{k*})` for all orders `k = 0..=n` at one point.
///
/// The rebased family divides even orders by the even pole subproduct and odd
/// orders keep it: `chi_{2m} = phi_{2m}* / B^e_m`, `chi_{2m+1} = phi_{2m+1} / B^e_m`,
/// with the star family using the odd subproduct instead. Unlike `phi_n`,
/// these functions have genuine poles at the even-indexed (respectively
/// odd-indexed) poles inside the domain, which are guarded like the
/// reflected ones.
pub fn eval_chi_sequence(a: &ParamSeq, poles: &PoleSeq, n: usize, z: CPoint) -> Result<Vec<OrfValue>> {
    // interior poles of the rebased family
    if let Some(zc) = z.to_complex() {
        for k in 1..=n {
            if (zc - poles.alpha(k)).norm() <= POLE_GUARD {
                return Err(OrfError::PoleHit(format!(
                    "rebased evaluation point is within {POLE_GUARD:e} of pole alpha_{k} = {}",
                    describe_point(CPoint::from_complex(poles.alpha(k)))
                )));
            }
        }
    }
    let phis = eval_orf_sequence(a, poles, n, z)?;
    let one = Complex64::new(1.0, 0.0);
    let mut be = one; // even subproduct B^e_m
    let mut bo = one; // odd subproduct B^o_m
    let mut out = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k > 0 {
            let f = zeta(poles.domain(), poles.alpha(k), z)
                .to_complex()
                .expect("pole proximity excluded by guard");
            if k % 2 == 0 {
                be *= f;
            } else {
                bo *= f;
            }
        }
        let (chi, chi_star) = if k % 2 == 0 {
            (phis[k].phi_star / be, phis[k].phi / bo)
        } else {
            (phis[k].phi / be, phis[k].phi_star / bo)
        };
        out.push(OrfValue { n: k, z, phi: chi, phi_star: chi_star });
    }
    Ok(out)
}

/// Value `(chi_n(z), chi_{n*}(z))` of the rebased family.
pub fn eval_chi(a: &ParamSeq, poles: &PoleSeq, n: usize, z: CPoint) -> Result<OrfValue> {
    Ok(eval_chi_sequence(a, poles, n, z)?
        .pop()
        .expect("sequence holds n + 1 values"))
}

fn check_unimodular(v: Complex64, what: &str) -> Result<()> {
    if (v.norm() - 1.0).abs() > 1e-8 {
        return Err(OrfError::Invalid(format!(
            "{what} has modulus {:.17}, must be 1",
            v.norm()
        )));
    }
    Ok(())
}

/// Para-orthogonal combination `Q_n^v(z) = phi_n(z) + v phi_n*(z)`, `|v| = 1`.
pub fn eval_porf(
    a: &ParamSeq,
    poles: &PoleSeq,
    n: usize,
    v: Complex64,
    z: CPoint,
) -> Result<Complex64> {
    check_unimodular(v, "para-orthogonal parameter v")?;
    let val = eval_orf(a, poles, n, z)?;
    Ok(val.phi + v * val.phi_star)
}

/// Boundary parameter `u = (v + a_n)/(1 + conj(a_n) v)` attached to the
/// para-orthogonal combination of parameter `v`.
pub fn porf_u(a_n: Complex64, v: Complex64) -> Result<Complex64> {
    check_unimodular(v, "para-orthogonal parameter v")?;
    if a_n.norm() >= 1.0 {
        return Err(OrfError::Invalid(format!(
            "parameter has modulus {:.17}, must be strictly below 1",
            a_n.norm()
        )));
    }
    Ok((v + a_n) / (Complex64::new(1.0, 0.0) + a_n.conj() * v))
}

/// Rotation to the standard normalization: returns `b` with
/// `b_n = z_1 z_2 ... z_n a_n` and the factors `z_n = -|alpha_n|/alpha_n`
/// (1 when `alpha_n = 0`). A terminal value converts with the chain extended
/// by one factor, which requires one extra pole.
pub fn normalize_standard(a: &ParamSeq, poles: &PoleSeq) -> Result<(ParamSeq, Vec<Complex64>)> {
    if a.len() > poles.len() {
        return Err(OrfError::DimensionMismatch(format!(
            "{} parameters need at least as many poles, got {}",
            a.len(),
            poles.len()
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let zfactor = |al: Complex64| -> Complex64 {
        if al.norm_sqr() == 0.0 {
            one
        } else {
            -Complex64::new(al.norm(), 0.0) / al
        }
    };
    let mut zf = Vec::with_capacity(a.len());
    let mut chain = one;
    let mut b = Vec::with_capacity(a.len());
    for k in 1..=a.len() {
        let z = zfactor(poles.alpha(k));
        chain *= z;
        zf.push(z);
        b.push(chain * a.a(k));
    }
    let bseq = match a.terminal() {
        None => ParamSeq::new(b)?,
        Some(u) => {
            let idx = a.len() + 1;
            if idx > poles.len() {
                return Err(OrfError::DimensionMismatch(format!(
                    "terminal value converts at index {idx}, which needs pole alpha_{idx}"
                )));
            }
            ParamSeq::with_terminal(b, chain * zfactor(poles.alpha(idx)) * u)?
        }
    };
    Ok((bseq, zf))
}
