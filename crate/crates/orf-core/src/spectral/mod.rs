//! Spectral operations: the dense eigensolver contract, zeros of orthogonal
//! rational functions along three matrix routes, para-orthogonal quadrature,
//! measure reconstruction from parameters, mass-point weights, generalized
//! pencil spectra, and the limit-point diagnostics.

pub mod assign;
pub mod eig;

pub use assign::{match_eigenvalues, matched_distance, min_cost_assignment};
pub use eig::Eigensolver;

use crate::error::{OrfError, Result};
use crate::matrices::{pair_rep, truncated_rep, Family};
use crate::measures::{DiscreteMeasure, NODE_SEPARATION};
use crate::moebius::{varpi, varpi_star, zeta, zeta_inv, CPoint, Domain, PoleSeq};
use crate::opmoebius::{inverse_with_cond, DenseMatrix};
use crate::orfcore::{derived_params, eval_orf_sequence, porf_u, ParamSeq};
use num_complex::Complex64;

/// Tolerance for the agreement of eigenvector-derived and kernel-sum
/// quadrature weights.
pub const WEIGHT_DUALITY: f64 = 1e-9;

/// Cluster radius used by the limit-point reporting convenience.
pub const CLUSTER_TOL: f64 = 1e-3;

// reversed-pencil eigenvalues below this relative size count as infinite
const PENCIL_ZERO: f64 = 1e-12;

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Eigendecomposition result. `values` are sorted by ascending argument,
/// then modulus, then real and imaginary part, with any points at infinity
/// last. Column `j` of `right_vectors` is a unit vector `x_j` with
/// `M x_j = lambda_j x_j`; column `j` of `left_vectors` is a unit vector
/// `y_j` with `y_j' M = lambda_j y_j'` (prime denoting the conjugate
/// transpose).
///
/// `residuals[j]` bounds the relative eigenpair defect: with vectors
/// requested it is the measured `max(|M x - lambda x|, |M' y - conj(lambda) y|)`
/// divided by the Frobenius norm of `M`; without vectors it is an a priori
/// backward-error estimate from the deflation tolerance.
#[derive(Clone, Debug)]
pub struct EigenResult {
    /// Eigenvalues in canonical order.
    pub values: Vec<CPoint>,
    /// Right eigenvectors as columns, when requested.
    pub right_vectors: Option<DenseMatrix>,
    /// Left eigenvectors as columns, when requested.
    pub left_vectors: Option<DenseMatrix>,
    /// Relative residual per eigenpair.
    pub residuals: Vec<f64>,
}

impl EigenResult {
    /// Eigenvalues and residuals as a JSON object.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "n": self.values.len(),
            "values": self.values,
            "residuals": self.residuals,
        })
        .to_string()
    }

    /// Finite eigenvalues in order, erroring on any point at infinity.
    fn finite_values(&self) -> Result<Vec<Complex64>> {
        self.values
            .iter()
            .map(|p| {
                p.to_complex().ok_or_else(|| {
                    OrfError::Inconsistent("unexpected eigenvalue at infinity".into())
                })
            })
            .collect()
    }
}

// sort order: finite by (argument, modulus, re, im), infinity last
fn canonical_indices(values: &[CPoint]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&i, &j| {
        let a = values[i];
        let b = values[j];
        match (a.at_infinity, b.at_infinity) {
            (true, true) => std::cmp::Ordering::Equal,
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            (false, false) => {
                let za = c64(a.re, a.im);
                let zb = c64(b.re, b.im);
                za.arg()
                    .total_cmp(&zb.arg())
                    .then(za.norm().total_cmp(&zb.norm()))
                    .then(a.re.total_cmp(&b.re))
                    .then(a.im.total_cmp(&b.im))
            }
        }
    });
    idx
}

/// Dense eigendecomposition with a default-configured [`Eigensolver`].
///
/// Each call owns its scratch state, so concurrent calls on distinct
/// matrices are safe; a single result is not meant to be mutated from two
/// threads.
pub fn eigensolve(m: &DenseMatrix, want_left: bool, want_right: bool) -> Result<EigenResult> {
    let solver = Eigensolver::default();
    let raw = solver.eigenvalues(m)?;
    let n = raw.len();
    let points: Vec<CPoint> = raw.iter().map(|&z| CPoint::from_complex(z)).collect();
    let order = canonical_indices(&points);
    let values: Vec<CPoint> = order.iter().map(|&i| points[i]).collect();
    let scale = eig::frobenius(m).max(f64::MIN_POSITIVE);
    let mut right = if want_right { Some(DenseMatrix::zeros(n, n)) } else { None };
    let mut left = if want_left { Some(DenseMatrix::zeros(n, n)) } else { None };
    let estimate = (solver.deflation_tol + 100.0 * f64::EPSILON) * n as f64;
    let mut residuals = vec![estimate; n];
    if want_left || want_right {
        for (col, &i) in order.iter().enumerate() {
            let lam = raw[i];
            let mut defect = 0.0f64;
            if let Some(mat) = right.as_mut() {
                let x = solver.right_vector(m, lam, col)?;
                defect = defect.max((m * &x - &x * lam).norm() / scale);
                mat.set_column(col, &x);
            }
            if let Some(mat) = left.as_mut() {
                let y = solver.left_vector(m, lam, col)?;
                defect = defect.max((m.adjoint() * &y - &y * lam.conj()).norm() / scale);
                mat.set_column(col, &y);
            }
            residuals[col] = defect;
        }
    }
    Ok(EigenResult { values, right_vectors: right, left_vectors: left, residuals })
}

/// Matrix route along which ORF zeros are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroRoute {
    /// Eigenvalues of the truncated Hessenberg-family representation.
    V,
    /// Eigenvalues of the truncated five-diagonal representation.
    U,
    /// Generalized eigenvalues of the five-diagonal linear pencil.
    Pair,
}

impl std::str::FromStr for ZeroRoute {
    type Err = OrfError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "v" => Ok(ZeroRoute::V),
            "u" => Ok(ZeroRoute::U),
            "pair" => Ok(ZeroRoute::Pair),
            other => Err(OrfError::Invalid(format!(
                "unknown zero route '{other}' (expected V, U, or PAIR)"
            ))),
        }
    }
}

/// Zeros of `phi_n`, computed as a matrix spectrum along the chosen route.
/// On the circle the zeros lie in the open unit disk; on the line in the
/// open upper half plane. All three routes agree on the same values.
pub fn zeros_orf(a: &ParamSeq, poles: &PoleSeq, n: usize, via: ZeroRoute) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(OrfError::Invalid("zeros are defined for order at least 1".into()));
    }
    if a.len() < n {
        return Err(OrfError::DimensionMismatch(format!(
            "order {n} needs {n} parameters, got {}",
            a.len()
        )));
    }
    let result = match via {
        ZeroRoute::V => {
            let m = truncated_rep(a, poles, n, Family::V, None)?;
            eigensolve(&m, false, false)?
        }
        ZeroRoute::U => {
            let m = truncated_rep(a, poles, n, Family::U, None)?;
            eigensolve(&m, false, false)?
        }
        ZeroRoute::Pair => {
            let (t, s) = pair_rep(a, poles, n, Family::U, None)?;
            pair_spectrum(&t, &s)?
        }
    };
    result.finite_values()
}

/// An `n`-point quadrature rule on the circle generated by a para-orthogonal
/// combination: the discrete measure plus the generating order, parameter
/// `v`, and boundary value `u`.
#[derive(Clone, Debug)]
pub struct Quadrature {
    /// Nodes and weights as a probability measure.
    pub measure: DiscreteMeasure,
    /// Order of the rule.
    pub n: usize,
    /// Para-orthogonal parameter.
    pub v: Complex64,
    /// Boundary value substituted into the truncation.
    pub u: Complex64,
}

impl Quadrature {
    /// CSV rendering with columns `node_re,node_im,weight`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("node_re,node_im,weight\n");
        for (p, w) in self.measure.points().iter().zip(self.measure.weights()) {
            out.push_str(&format!("{:?},{:?},{:?}\n", p.re, p.im, w));
        }
        out
    }

    /// JSON rendering embedding the measure.
    pub fn to_json(&self) -> String {
        serde_json::json!({
            "n": self.n,
            "v": { "re": self.v.re, "im": self.v.im },
            "u": { "re": self.u.re, "im": self.u.im },
            "measure": serde_json::from_str::<serde_json::Value>(&self.measure.to_json())
                .expect("measure serializes to valid JSON"),
        })
        .to_string()
    }
}

// eigenvalues and first-component weights of a closed truncation
pub(crate) fn truncation_node_weights(m: &DenseMatrix) -> Result<(Vec<Complex64>, Vec<f64>)> {
    let eig = eigensolve(m, false, true)?;
    let nodes = eig.finite_values()?;
    for i in 0..nodes.len() {
        for j in (i + 1)..nodes.len() {
            let dist = (nodes[i] - nodes[j]).norm();
            if dist < NODE_SEPARATION {
                return Err(OrfError::NodeCollision { i, j, dist });
            }
        }
    }
    let vectors = eig.right_vectors.expect("requested right vectors");
    let weights: Vec<f64> = (0..nodes.len()).map(|j| vectors[(0, j)].norm_sqr()).collect();
    Ok((nodes, weights))
}

// snap near-unimodular nodes onto the circle and renormalize the weights
fn circle_measure_from(nodes: &[Complex64], weights: &[f64]) -> Result<DiscreteMeasure> {
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(OrfError::Inconsistent("eigenvector weights sum to zero".into()));
    }
    let points: Vec<CPoint> = nodes
        .iter()
        .map(|&z| {
            let r = z.norm();
            CPoint::from_complex(if r > 0.0 { z / r } else { z })
        })
        .collect();
    let w: Vec<f64> = weights.iter().map(|&x| x / total).collect();
    DiscreteMeasure::new(Domain::Circle, points, w)
}

/// Quadrature rule of order `n` from the para-orthogonal combination with
/// parameter `v` (`|v| = 1`): nodes are the eigenvalues of the
/// boundary-closed five-diagonal truncation with `u = (v + a_n)/(1 + conj(a_n) v)`,
/// weights the squared moduli of the first eigenvector components. The
/// weights are cross-checked against the kernel sums
/// `(sum_{k<n} |phi_k(node)|^2)^{-1}` and must agree to [`WEIGHT_DUALITY`].
pub fn porf_quadrature(a: &ParamSeq, poles: &PoleSeq, n: usize, v: Complex64) -> Result<Quadrature> {
    if poles.domain() != Domain::Circle {
        return Err(OrfError::Invalid(
            "para-orthogonal quadrature is defined on the circle; use the real-line entry points"
                .into(),
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
    let u = porf_u(a.a(n), v)?;
    let m = truncated_rep(a, poles, n, Family::U, Some(u))?;
    let (nodes, weights) = truncation_node_weights(&m)?;
    for (j, &node) in nodes.iter().enumerate() {
        let vals = eval_orf_sequence(a, poles, n - 1, CPoint::from_complex(node))?;
        let kernel: f64 = vals.iter().map(|t| t.phi.norm_sqr()).sum();
        let dual = 1.0 / kernel;
        if (weights[j] - dual).abs() > WEIGHT_DUALITY {
            return Err(OrfError::Inconsistent(format!(
                "quadrature weight routes disagree at node {j}: eigenvector {:.17e}, kernel sum {:.17e}",
                weights[j], dual
            )));
        }
    }
    let measure = circle_measure_from(&nodes, &weights)?;
    Ok(Quadrature { measure, n, v, u })
}

/// Discrete measure represented by a parameter sequence with a terminal
/// boundary value: support and weights of the unitary truncation of order
/// `len + 1` closed with the terminal value.
pub fn reconstruct_measure(a: &ParamSeq, poles: &PoleSeq) -> Result<DiscreteMeasure> {
    if poles.domain() != Domain::Circle {
        return Err(OrfError::Invalid(
            "measure reconstruction works on the circle; use the real-line entry points".into(),
        ));
    }
    let u = a.terminal().ok_or_else(|| {
        OrfError::Invalid("measure reconstruction needs a terminal boundary value".into())
    })?;
    let n = a.len() + 1;
    let m = truncated_rep(a, poles, n, Family::U, Some(u))?;
    let (nodes, weights) = truncation_node_weights(&m)?;
    circle_measure_from(&nodes, &weights)
}

/// Order-`n` approximation to the mass of the point `lambda` on the circle:
/// the inverse kernel sum `(sum_{k<n} |phi_k(lambda)|^2)^{-1}`. Non-increasing
/// in `n`; equals the exact mass once `n` reaches the support size of a
/// discrete measure.
pub fn mass_point_weight(a: &ParamSeq, poles: &PoleSeq, lambda: CPoint, n: usize) -> Result<f64> {
    if poles.domain() != Domain::Circle {
        return Err(OrfError::Invalid(
            "mass-point weights are defined on the circle; use the real-line entry points".into(),
        ));
    }
    if n == 0 {
        return Err(OrfError::Invalid("mass-point weight needs order at least 1".into()));
    }
    let z = lambda
        .to_complex()
        .ok_or_else(|| OrfError::Invalid("mass-point weight needs a finite point".into()))?;
    if (z.norm() - 1.0).abs() > 1e-8 {
        return Err(OrfError::Invalid(format!(
            "mass points lie on the unit circle, got modulus {:.17}",
            z.norm()
        )));
    }
    let vals = eval_orf_sequence(a, poles, n - 1, lambda)?;
    let kernel: f64 = vals.iter().map(|t| t.phi.norm_sqr()).sum();
    Ok(1.0 / kernel)
}

/// Spectrum of the linear pencil `T - lambda S`.
///
/// Solves `S^{-1} T` when `S` is well conditioned. Otherwise the reversed
/// pencil `T^{-1} S` is solved and eigenvalues are inverted, reporting
/// numerically zero ones as points at infinity; when both matrices are
/// too ill-conditioned the pencil is rejected as indefinite. Right
/// eigenvectors carry over to the pencil unchanged; residuals refer to the
/// standard problem solved internally.
pub fn pair_spectrum(t: &DenseMatrix, s: &DenseMatrix) -> Result<EigenResult> {
    if t.nrows() != t.ncols() || s.nrows() != s.ncols() || t.nrows() != s.nrows() {
        return Err(OrfError::DimensionMismatch(format!(
            "pencil needs two square matrices of equal order, got {}x{} and {}x{}",
            t.nrows(),
            t.ncols(),
            s.nrows(),
            s.ncols()
        )));
    }
    match inverse_with_cond(s) {
        Ok(s_inv) => eigensolve(&(s_inv * t), false, true),
        Err(OrfError::IllConditioned { .. }) => {
            let t_inv = match inverse_with_cond(t) {
                Ok(inv) => inv,
                Err(OrfError::IllConditioned { .. }) => return Err(OrfError::IndefinitePencil),
                Err(e) => return Err(e),
            };
            let rev_m = t_inv * s;
            let reversed = eigensolve(&rev_m, false, true)?;
            let mu = reversed.finite_values()?;
            let scale = eig::frobenius(&rev_m).max(1.0);
            let points: Vec<CPoint> = mu
                .iter()
                .map(|&m| {
                    if m.norm() <= PENCIL_ZERO * scale {
                        CPoint::infinity()
                    } else {
                        CPoint::from_complex(m.inv())
                    }
                })
                .collect();
            let order = canonical_indices(&points);
            let values = order.iter().map(|&i| points[i]).collect();
            let residuals = order.iter().map(|&i| reversed.residuals[i]).collect();
            let old = reversed.right_vectors.expect("requested right vectors");
            let mut vectors = DenseMatrix::zeros(old.nrows(), old.ncols());
            for (col, &i) in order.iter().enumerate() {
                vectors.set_column(col, &old.column(i).into_owned());
            }
            Ok(EigenResult {
                values,
                right_vectors: Some(vectors),
                left_vectors: None,
                residuals,
            })
        }
        Err(e) => Err(e),
    }
}

/// The limit-point witness sequence `w_n = zeta-tilde_{alpha_n}(-conj(a_n) a_{n+1})`
/// for `n = 1 .. len-1`. Accumulation points of the support of the measure
/// are the accumulation points of this sequence; callers cluster it.
pub fn limit_point_sequence(a: &ParamSeq, poles: &PoleSeq) -> Result<Vec<Complex64>> {
    let n = a.len();
    if n < 2 {
        return Err(OrfError::DimensionMismatch(
            "the limit-point sequence needs at least two parameters".into(),
        ));
    }
    if poles.len() < n - 1 {
        return Err(OrfError::DimensionMismatch(format!(
            "{} parameters need {} poles, got {}",
            n,
            n - 1,
            poles.len()
        )));
    }
    let mut out = Vec::with_capacity(n - 1);
    for k in 1..n {
        let arg = -a.a(k).conj() * a.a(k + 1);
        let w = zeta_inv(poles.domain(), poles.alpha(k), CPoint::from_complex(arg));
        out.push(w.expect_finite());
    }
    Ok(out)
}

/// Clusters of the trailing fifth of a limit-point sequence, radius
/// [`CLUSTER_TOL`], largest first. A reporting convenience, not a guarantee:
/// the sequence only characterizes accumulation points in the limit.
pub fn cluster_limit_points(w: &[Complex64]) -> Vec<(Complex64, usize)> {
    if w.is_empty() {
        return Vec::new();
    }
    let count = (w.len() / 5).max(1);
    let tail = &w[w.len() - count..];
    let mut sums: Vec<(Complex64, usize)> = Vec::new();
    for &p in tail {
        let mut placed = false;
        for (sum, k) in sums.iter_mut() {
            let centroid = *sum / c64(*k as f64, 0.0);
            if (p - centroid).norm() <= CLUSTER_TOL {
                *sum += p;
                *k += 1;
                placed = true;
                break;
            }
        }
        if !placed {
            sums.push((p, 1));
        }
    }
    let mut clusters: Vec<(Complex64, usize)> =
        sums.into_iter().map(|(sum, k)| (sum / c64(k as f64, 0.0), k)).collect();
    clusters.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.arg().total_cmp(&b.0.arg())));
    clusters
}

/// The three two-point vanishing sequences diagnosing whether the support
/// accumulates only at a fixed pair of circle points. Entry `i` of each
/// sequence corresponds to parameter index `n = i + 2`: the expressions
/// involve `a_{n-1} .. a_{n+1}`, so the first usable index is 2.
#[derive(Clone, Debug)]
pub struct KreinSequences {
    /// `rho_n rho_{n+1}`.
    pub rho_products: Vec<f64>,
    /// Modulus of the mixed expression coupling `k_n` at one point with
    /// `k_{n-1}` at the other.
    pub mixed: Vec<f64>,
    /// Modulus of the kernel cross-term expression, symmetric in the two
    /// points.
    pub kernel: Vec<f64>,
}

// k_n(z) = a_n varpi*_n(z) + a_{n+1} varpi_n(z)
pub(crate) fn krein_k(a: &ParamSeq, poles: &PoleSeq, n: usize, z: Complex64) -> Complex64 {
    let dom = poles.domain();
    a.a(n) * varpi_star(dom, poles.alpha(n), z) + a.a(n + 1) * varpi(dom, poles.alpha(n), z)
}

/// Evaluates the three vanishing sequences at the circle points `lambda1`,
/// `lambda2` for `n = 2 .. len-1`. All three tending to zero diagnoses that
/// the support accumulates only inside `{lambda1, lambda2}`. The first and
/// third sequences are symmetric under swapping the two points.
pub fn krein_two_point(
    a: &ParamSeq,
    poles: &PoleSeq,
    lambda1: Complex64,
    lambda2: Complex64,
) -> Result<KreinSequences> {
    if poles.domain() != Domain::Circle {
        return Err(OrfError::Invalid("the two-point diagnostics run on the circle".into()));
    }
    for (name, lam) in [("lambda1", lambda1), ("lambda2", lambda2)] {
        if (lam.norm() - 1.0).abs() > 1e-8 {
            return Err(OrfError::Invalid(format!(
                "{name} has modulus {:.17}, must lie on the unit circle",
                lam.norm()
            )));
        }
    }
    let len = a.len();
    if len < 2 {
        return Err(OrfError::DimensionMismatch(
            "the two-point diagnostics need at least two parameters".into(),
        ));
    }
    if poles.len() < len {
        return Err(OrfError::DimensionMismatch(format!(
            "{len} parameters need {len} poles, got {}",
            poles.len()
        )));
    }
    let d = derived_params(a, poles)?;
    let dom = poles.domain();
    let mut rho_products = Vec::new();
    let mut mixed = Vec::new();
    let mut kernel = Vec::new();
    for n in 2..len {
        rho_products.push(d.rho(n) * d.rho(n + 1));
        let an = poles.alpha(n);
        let am = poles.alpha(n - 1);
        let mixed_val = varpi(dom, an, lambda1) / varpi(dom, an, an) * krein_k(a, poles, n, lambda2)
            - varpi_star(dom, am, lambda2) / varpi(dom, am, am) * krein_k(a, poles, n - 1, lambda1);
        mixed.push(d.rho(n) * mixed_val.norm());
        let ap = poles.alpha(n + 1);
        let kernel_val = krein_k(a, poles, n, lambda1).conj() * krein_k(a, poles, n, lambda2)
            + c64(d.rho_minus(n).powi(2), 0.0)
                * varpi_star(dom, am, lambda1).conj()
                * varpi_star(dom, am, lambda2)
            + c64(d.rho_plus(n + 1).powi(2), 0.0)
                * varpi(dom, ap, lambda1).conj()
                * varpi(dom, ap, lambda2);
        kernel.push(kernel_val.norm());
    }
    Ok(KreinSequences { rho_products, mixed, kernel })
}

/// Predicted accumulation set for constant-modulus parameters: the circle
/// minus the open arc image `zeta-tilde_alpha({lam e^{i theta}: |theta| < 2 asin a})`.
#[derive(Clone, Copy, Debug)]
pub struct LopezArc {
    /// Pole parameter of the transform.
    pub alpha: Complex64,
    /// Center direction of the excluded arc.
    pub lam: Complex64,
    /// Modulus limit of the recurrence parameters.
    pub a: f64,
    /// Half-opening `2 asin a` of the excluded arc before transformation.
    pub half_angle: f64,
    /// Transformed arc endpoints (equal when the arc is empty).
    pub endpoints: (Complex64, Complex64),
}

impl LopezArc {
    /// True when the circle point `w` belongs to the predicted accumulation
    /// set (the closed complement of the transformed open arc).
    pub fn predicted_contains(&self, w: Complex64) -> Result<bool> {
        if (w.norm() - 1.0).abs() > 1e-8 {
            return Err(OrfError::Invalid(format!(
                "membership is defined on the unit circle, got modulus {:.17}",
                w.norm()
            )));
        }
        if self.half_angle == 0.0 {
            return Ok(true);
        }
        let pulled = zeta(Domain::Circle, self.alpha, CPoint::from_complex(w)).expect_finite();
        Ok((pulled * self.lam.conj()).arg().abs() >= self.half_angle)
    }
}

/// Arc descriptor for the accumulation set predicted from `|a_n| -> a` and
/// poles converging to `alpha`, with `lam` the limit direction of the
/// witness sequence.
pub fn lopez_arc(alpha: Complex64, a: f64, lam: Complex64) -> Result<LopezArc> {
    if !(0.0..=1.0).contains(&a) {
        return Err(OrfError::Invalid(format!("modulus limit must lie in [0, 1], got {a}")));
    }
    if alpha.norm() >= 1.0 {
        return Err(OrfError::Margin(format!(
            "arc parameter has modulus {:.17}, must be inside the disk",
            alpha.norm()
        )));
    }
    if (lam.norm() - 1.0).abs() > 1e-8 {
        return Err(OrfError::Invalid(format!(
            "arc center has modulus {:.17}, must lie on the unit circle",
            lam.norm()
        )));
    }
    let half_angle = 2.0 * a.asin();
    let end = |theta: f64| {
        zeta_inv(
            Domain::Circle,
            alpha,
            CPoint::from_complex(lam * Complex64::from_polar(1.0, theta)),
        )
        .expect_finite()
    };
    Ok(LopezArc { alpha, lam, a, half_angle, endpoints: (end(-half_angle), end(half_angle)) })
}

fn hausdorff(xs: &[Complex64], ys: &[Complex64]) -> f64 {
    let directed = |from: &[Complex64], to: &[Complex64]| {
        from.iter()
            .map(|&p| to.iter().map(|&q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    directed(xs, ys).max(directed(ys, xs))
}

/// Hausdorff distance between the spectra of the two boundary-closed
/// five-diagonal truncations of order `n`, both closed with boundary value 1.
/// A desk-scale surrogate for comparing accumulation sets of two parameter
/// sequences.
pub fn compare_truncated_spectra(
    a: &ParamSeq,
    poles_a: &PoleSeq,
    b: &ParamSeq,
    poles_b: &PoleSeq,
    n: usize,
) -> Result<f64> {
    let one = c64(1.0, 0.0);
    let ma = truncated_rep(a, poles_a, n, Family::U, Some(one))?;
    let mb = truncated_rep(b, poles_b, n, Family::U, Some(one))?;
    let ea = eigensolve(&ma, false, false)?.finite_values()?;
    let eb = eigensolve(&mb, false, false)?.finite_values()?;
    Ok(hausdorff(&ea, &eb))
}
