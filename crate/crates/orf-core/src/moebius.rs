//! Scalar Moebius building blocks: points of the extended plane, pole
//! sequences, the elementary factors attached to each pole, and finite
//! Blaschke-type products.
//!
//! Two domains are supported. On the circle the poles live in the open unit
//! disk and the elementary factor is `(z - a) / (1 - conj(a) z)`; on the line
//! they live in the open upper half plane and the factor is
//! `(z - a) / (z - conj(a))`. Both factors are unimodular on the boundary of
//! their domain.

use crate::error::{OrfError, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Points closer than this to a pole of a map are sent to infinity.
pub const POLE_SNAP: f64 = 1e-12;

/// Default compactness margin for pole sequences.
pub const DEFAULT_MARGIN: f64 = 1e-8;

/// A point of the extended complex plane.
///
/// `re` and `im` are ignored when `at_infinity` is set; constructors zero them.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CPoint {
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
    /// Marks the point at infinity.
    #[serde(rename = "infinity", default)]
    pub at_infinity: bool,
}

impl CPoint {
    /// Finite point from coordinates.
    pub fn new(re: f64, im: f64) -> Self {
        CPoint { re, im, at_infinity: false }
    }

    /// The point at infinity.
    pub fn infinity() -> Self {
        CPoint { re: 0.0, im: 0.0, at_infinity: true }
    }

    /// Finite point from a complex value.
    pub fn from_complex(z: Complex64) -> Self {
        CPoint { re: z.re, im: z.im, at_infinity: false }
    }

    /// Complex value, or `None` at infinity.
    pub fn to_complex(self) -> Option<Complex64> {
        if self.at_infinity {
            None
        } else {
            Some(Complex64::new(self.re, self.im))
        }
    }

    /// Complex value; panics at infinity. For call sites that already
    /// excluded the infinite case.
    pub fn expect_finite(self) -> Complex64 {
        self.to_complex().expect("finite point required")
    }
}

impl PartialEq for CPoint {
    fn eq(&self, other: &Self) -> bool {
        if self.at_infinity || other.at_infinity {
            self.at_infinity == other.at_infinity
        } else {
            self.re == other.re && self.im == other.im
        }
    }
}

impl From<Complex64> for CPoint {
    fn from(z: Complex64) -> Self {
        CPoint::from_complex(z)
    }
}

/// Domain of the spectral problem: unit circle or extended real line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// Boundary is the unit circle; poles live in the open unit disk.
    Circle,
    /// Boundary is the extended real line; poles live in the upper half plane.
    Line,
}

impl Domain {
    /// Distinguished base point `alpha_0`: 0 on the circle, `i` on the line.
    pub fn alpha0(self) -> Complex64 {
        match self {
            Domain::Circle => Complex64::new(0.0, 0.0),
            Domain::Line => Complex64::new(0.0, 1.0),
        }
    }
}

/// A validated sequence of poles `alpha_1..alpha_N` together with its domain.
///
/// Index 0 always refers to the fixed base point of the domain, so
/// [`PoleSeq::alpha`] accepts `0..=N`.
#[derive(Clone, Debug)]
pub struct PoleSeq {
    alphas: Vec<Complex64>,
    domain: Domain,
    margin: f64,
}

impl PoleSeq {
    /// Circle-domain sequence with the default compactness margin.
    pub fn circle(alphas: Vec<Complex64>) -> Result<Self> {
        Self::with_margin(Domain::Circle, alphas, DEFAULT_MARGIN)
    }

    /// Line-domain sequence with the default compactness margin.
    pub fn line(alphas: Vec<Complex64>) -> Result<Self> {
        Self::with_margin(Domain::Line, alphas, DEFAULT_MARGIN)
    }

    /// Sequence with an explicit compactness margin.
    ///
    /// Circle poles must satisfy `|alpha| <= 1 - margin`, line poles
    /// `Im alpha >= margin`.
    pub fn with_margin(domain: Domain, alphas: Vec<Complex64>, margin: f64) -> Result<Self> {
        if !(margin > 0.0 && margin < 1.0) {
            return Err(OrfError::Invalid(format!(
                "compactness margin must lie in (0, 1), got {margin:e}"
            )));
        }
        for (k, a) in alphas.iter().enumerate() {
            if !a.re.is_finite() || !a.im.is_finite() {
                return Err(OrfError::Invalid(format!(
                    "pole {} is not finite",
                    k + 1
                )));
            }
            match domain {
                Domain::Circle => {
                    if a.norm() > 1.0 - margin {
                        return Err(OrfError::Margin(format!(
                            "circle pole {} has modulus {:.17}, exceeding 1 - {margin:e}",
                            k + 1,
                            a.norm()
                        )));
                    }
                }
                Domain::Line => {
                    if a.im < margin {
                        return Err(OrfError::Margin(format!(
                            "line pole {} has imaginary part {:.17}, below margin {margin:e}",
                            k + 1,
                            a.im
                        )));
                    }
                }
            }
        }
        Ok(PoleSeq { alphas, domain, margin })
    }

    /// Domain of the sequence.
    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Number of poles (excluding the fixed base point).
    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    /// True when the sequence holds no poles.
    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    /// Compactness margin of the sequence.
    pub fn margin(&self) -> f64 {
        self.margin
    }

    /// Poles `alpha_1..alpha_N` without the base point.
    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    /// `alpha_k` with the convention `alpha_0 = ` base point of the domain.
    ///
    /// Panics when `k` exceeds the sequence length; public operations
    /// validate lengths before indexing.
    pub fn alpha(&self, k: usize) -> Complex64 {
        if k == 0 {
            self.domain.alpha0()
        } else {
            self.alphas[k - 1]
        }
    }
}

/// Normalization factor attached to a circle pole: `sqrt(1 - |alpha|^2)`.
///
/// Errors when `|alpha| >= 1`.
pub fn eta(alpha: Complex64) -> Result<f64> {
    let n2 = alpha.norm_sqr();
    if n2 >= 1.0 {
        return Err(OrfError::Margin(format!(
            "eta undefined: |alpha| = {:.17} is not below 1",
            alpha.norm()
        )));
    }
    Ok((1.0 - n2).sqrt())
}

/// Domain-aware normalization factor: `sqrt(1 - |alpha|^2)` on the circle,
/// `sqrt(Im alpha)` on the line. The base point of either domain gives 1.
pub(crate) fn eta_of(domain: Domain, alpha: Complex64) -> Result<f64> {
    match domain {
        Domain::Circle => eta(alpha),
        Domain::Line => {
            if alpha.im <= 0.0 {
                return Err(OrfError::Margin(format!(
                    "eta undefined: Im alpha = {:.17} is not positive",
                    alpha.im
                )));
            }
            Ok(alpha.im.sqrt())
        }
    }
}

/// Pole of the elementary factor for `alpha`: `1/conj(alpha)` on the circle
/// (infinity when `alpha = 0`), `conj(alpha)` on the line.
pub fn hat_point(domain: Domain, alpha: Complex64) -> CPoint {
    match domain {
        Domain::Circle => {
            if alpha.norm_sqr() == 0.0 {
                CPoint::infinity()
            } else {
                CPoint::from_complex(alpha.conj().inv())
            }
        }
        Domain::Line => CPoint::from_complex(alpha.conj()),
    }
}

/// Denominator factor `varpi`: `1 - conj(alpha) z` on the circle,
/// `z - conj(alpha)` on the line.
pub(crate) fn varpi(domain: Domain, alpha: Complex64, z: Complex64) -> Complex64 {
    match domain {
        Domain::Circle => Complex64::new(1.0, 0.0) - alpha.conj() * z,
        Domain::Line => z - alpha.conj(),
    }
}

/// Numerator factor `varpi*`: `z - alpha` in both domains.
pub(crate) fn varpi_star(_domain: Domain, alpha: Complex64, z: Complex64) -> Complex64 {
    z - alpha
}

/// Elementary factor `zeta_alpha(z) = varpi*(z) / varpi(z)` on the extended
/// plane. Points within [`POLE_SNAP`] of the factor's pole map to infinity.
pub(crate) fn zeta(domain: Domain, alpha: Complex64, z: CPoint) -> CPoint {
    match domain {
        Domain::Circle => {
            if z.at_infinity {
                // limit of (z - a)/(1 - conj(a) z) as z grows
                return if alpha.norm_sqr() == 0.0 {
                    CPoint::infinity()
                } else {
                    CPoint::from_complex(-alpha.conj().inv())
                };
            }
            let zc = z.expect_finite();
            if alpha.norm_sqr() > 0.0 {
                let pole = alpha.conj().inv();
                if (zc - pole).norm() <= POLE_SNAP {
                    return CPoint::infinity();
                }
            }
            CPoint::from_complex((zc - alpha) / (Complex64::new(1.0, 0.0) - alpha.conj() * zc))
        }
        Domain::Line => {
            if z.at_infinity {
                return CPoint::new(1.0, 0.0);
            }
            let zc = z.expect_finite();
            if (zc - alpha.conj()).norm() <= POLE_SNAP {
                return CPoint::infinity();
            }
            CPoint::from_complex((zc - alpha) / (zc - alpha.conj()))
        }
    }
}

/// Inverse of the elementary factor. On the circle this is the factor for
/// `-alpha`; on the line it is `(alpha - conj(alpha) w) / (1 - w)`.
pub(crate) fn zeta_inv(domain: Domain, alpha: Complex64, w: CPoint) -> CPoint {
    match domain {
        Domain::Circle => zeta(domain, -alpha, w),
        Domain::Line => {
            if w.at_infinity {
                return CPoint::from_complex(alpha.conj());
            }
            let wc = w.expect_finite();
            if (wc - Complex64::new(1.0, 0.0)).norm() <= POLE_SNAP {
                return CPoint::infinity();
            }
            CPoint::from_complex((alpha - alpha.conj() * wc) / (Complex64::new(1.0, 0.0) - wc))
        }
    }
}

/// Circle-domain Moebius map `(z - alpha)/(1 - conj(alpha) z)`.
///
/// Never fails: arguments at (or within [`POLE_SNAP`] of) the pole
/// `1/conj(alpha)` return the point at infinity.
pub fn mobius_forward(alpha: Complex64, z: CPoint) -> CPoint {
    zeta(Domain::Circle, alpha, z)
}

/// Inverse of [`mobius_forward`]: the circle map for `-alpha`.
pub fn mobius_inverse(alpha: Complex64, w: CPoint) -> CPoint {
    zeta_inv(Domain::Circle, alpha, w)
}

/// Selects which subsequence of poles a Blaschke-type product runs over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlaschkeVariant {
    /// Factors for `alpha_1..alpha_n`.
    Full,
    /// Factors for the odd-indexed poles `alpha_1, alpha_3, ..., alpha_{2n-1}`.
    Odd,
    /// Factors for the even-indexed poles `alpha_2, alpha_4, ..., alpha_{2n}`.
    Even,
}

/// Finite Blaschke-type product of `n` elementary factors over `poles`.
///
/// `n = 0` gives 1 in every variant. Errors when the requested indices
/// exceed the sequence, or when `z` sits at a pole of one of the factors.
pub fn blaschke(poles: &PoleSeq, n: usize, z: CPoint, variant: BlaschkeVariant) -> Result<Complex64> {
    let indices: Vec<usize> = match variant {
        BlaschkeVariant::Full => (1..=n).collect(),
        BlaschkeVariant::Odd => (1..=n).map(|k| 2 * k - 1).collect(),
        BlaschkeVariant::Even => (1..=n).map(|k| 2 * k).collect(),
    };
    if let Some(&max) = indices.last() {
        if max > poles.len() {
            return Err(OrfError::Invalid(format!(
                "Blaschke product needs pole index {max} but the sequence has {}",
                poles.len()
            )));
        }
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for k in indices {
        let f = zeta(poles.domain(), poles.alpha(k), z);
        match f.to_complex() {
            Some(v) => prod *= v,
            None => {
                let pole = hat_point(poles.domain(), poles.alpha(k));
                return Err(OrfError::PoleHit(format!(
                    "Blaschke factor {k} evaluated at its pole ({})",
                    describe_point(pole)
                )));
            }
        }
    }
    Ok(prod)
}

/// Human-readable rendering of an extended-plane point for error messages.
pub(crate) fn describe_point(p: CPoint) -> String {
    if p.at_infinity {
        "infinity".to_string()
    } else {
        format!("{:.17e} + {:.17e}i", p.re, p.im)
    }
}
