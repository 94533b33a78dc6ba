//! Banded matrix representations of the multiplication operator: the
//! Hessenberg form attached to the plain family and the five-diagonal form
//! attached to the rebased family, together with their factorizations into
//! 2x2 unitary blocks, the eta-conjugated ("hat") variants, Moebius
//! truncations, and linear pencils.
//!
//! Every boundary construction substitutes a unimodular value for the last
//! parameter inside the block factorization itself, never by patching
//! entries, so the resulting matrices are exactly products of unitary
//! factors.

use crate::error::{OrfError, Result};
use crate::moebius::{eta_of, PoleSeq};
use crate::opmoebius::{op_mobius_inverse, DenseMatrix, DiagParam};
use crate::orfcore::ParamSeq;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Which representation a truncation is based on: `V` for the Hessenberg
/// route, `U` for the five-diagonal route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Family {
    /// Hessenberg representation.
    V,
    /// Five-diagonal representation.
    U,
}

impl std::str::FromStr for Family {
    type Err = OrfError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "V" => Ok(Family::V),
            "U" => Ok(Family::U),
            _ => Err(OrfError::Invalid(format!("unknown family '{s}', expected V or U"))),
        }
    }
}

/// The matrix kinds that [`build_matrix`] can produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RepKind {
    /// Hessenberg truncation.
    Hessenberg,
    /// Five-diagonal truncation.
    Cmv,
    /// Truncated odd block factor.
    CmvOdd,
    /// Truncated even block factor.
    CmvEven,
    /// Eta-conjugated Hessenberg truncation.
    HatHessenberg,
    /// Eta-conjugated five-diagonal truncation.
    HatCmv,
    /// Moebius image of the Hessenberg truncation.
    VTrunc,
    /// Moebius image of the five-diagonal truncation.
    UTrunc,
}

impl RepKind {
    /// Canonical name used in serialized output.
    pub fn as_str(self) -> &'static str {
        match self {
            RepKind::Hessenberg => "HESSENBERG",
            RepKind::Cmv => "CMV",
            RepKind::CmvOdd => "CMV_ODD",
            RepKind::CmvEven => "CMV_EVEN",
            RepKind::HatHessenberg => "HAT_HESSENBERG",
            RepKind::HatCmv => "HAT_CMV",
            RepKind::VTrunc => "V_TRUNC",
            RepKind::UTrunc => "U_TRUNC",
        }
    }
}

impl std::str::FromStr for RepKind {
    type Err = OrfError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "HESSENBERG" => Ok(RepKind::Hessenberg),
            "CMV" => Ok(RepKind::Cmv),
            "CMV_ODD" => Ok(RepKind::CmvOdd),
            "CMV_EVEN" => Ok(RepKind::CmvEven),
            "HAT_HESSENBERG" => Ok(RepKind::HatHessenberg),
            "HAT_CMV" => Ok(RepKind::HatCmv),
            "V_TRUNC" => Ok(RepKind::VTrunc),
            "U_TRUNC" => Ok(RepKind::UTrunc),
            _ => Err(OrfError::Invalid(format!("unknown matrix kind '{s}'"))),
        }
    }
}

/// Request for one matrix of order `n`, optionally closed by a boundary value.
#[derive(Clone, Copy, Debug)]
pub struct RepSpec {
    /// Matrix kind.
    pub kind: RepKind,
    /// Truncation order.
    pub n: usize,
    /// Optional unimodular boundary value replacing the last parameter.
    pub boundary: Option<Complex64>,
}

// sqrt(1 - |a|^2) clamped at 0 so boundary values of modulus 1 are exact
fn rho_of(a: Complex64) -> f64 {
    (1.0 - a.norm_sqr()).max(0.0).sqrt()
}

/// Elementary 2x2 unitary block `[[-a, rho], [rho, conj(a)]]` with
/// `rho = sqrt(1 - |a|^2)`. Accepts `|a| <= 1`.
pub fn theta_block(a: Complex64) -> Result<DenseMatrix> {
    if a.norm() > 1.0 + 1e-9 {
        return Err(OrfError::Invalid(format!(
            "block parameter has modulus {:.17}, must be at most 1",
            a.norm()
        )));
    }
    let r = Complex64::new(rho_of(a), 0.0);
    Ok(DenseMatrix::from_row_slice(2, 2, &[-a, r, r, a.conj()]))
}

/// Effective parameters `a_1..a_n` for a construction of order `n`; a
/// boundary value stands in for `a_n`.
pub(crate) fn effective_a(a: &ParamSeq, n: usize, boundary: Option<Complex64>) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(OrfError::Invalid("matrix order must be at least 1".into()));
    }
    match boundary {
        None => {
            if a.len() < n {
                return Err(OrfError::DimensionMismatch(format!(
                    "order {n} needs {n} parameters, sequence has {}",
                    a.len()
                )));
            }
            Ok(a.values()[..n].to_vec())
        }
        Some(u) => {
            if (u.norm() - 1.0).abs() > 1e-8 {
                return Err(OrfError::Invalid(format!(
                    "boundary value has modulus {:.17}, must be 1",
                    u.norm()
                )));
            }
            if a.len() < n - 1 {
                return Err(OrfError::DimensionMismatch(format!(
                    "boundary construction of order {n} needs {} parameters, sequence has {}",
                    n - 1,
                    a.len()
                )));
            }
            let mut av = a.values()[..n - 1].to_vec();
            av.push(u);
            Ok(av)
        }
    }
}

// odd block factor: theta blocks for a_1, a_3, ... at rows 0-1, 2-3, ...;
// a block straddling the cut degenerates to the scalar -a_n
pub(crate) fn cmv_factor_odd(av: &[Complex64]) -> DenseMatrix {
    let n = av.len();
    let mut m = DenseMatrix::zeros(n, n);
    let mut j = 1usize;
    while j <= n {
        let r = j - 1;
        if r + 1 < n {
            let a = av[j - 1];
            let rho = Complex64::new(rho_of(a), 0.0);
            m[(r, r)] = -a;
            m[(r, r + 1)] = rho;
            m[(r + 1, r)] = rho;
            m[(r + 1, r + 1)] = a.conj();
        } else {
            m[(r, r)] = -av[j - 1];
        }
        j += 2;
    }
    m
}

// even block factor: scalar 1 at (0,0), theta blocks for a_2, a_4, ... at
// rows 1-2, 3-4, ...; a straddling block degenerates to the scalar -a_n
pub(crate) fn cmv_factor_even(av: &[Complex64]) -> DenseMatrix {
    let n = av.len();
    let mut m = DenseMatrix::zeros(n, n);
    m[(0, 0)] = Complex64::new(1.0, 0.0);
    let mut j = 2usize;
    while j <= n {
        let r = j - 1;
        if r + 1 < n {
            let a = av[j - 1];
            let rho = Complex64::new(rho_of(a), 0.0);
            m[(r, r)] = -a;
            m[(r, r + 1)] = rho;
            m[(r + 1, r)] = rho;
            m[(r + 1, r + 1)] = a.conj();
        } else {
            m[(r, r)] = -av[j - 1];
        }
        j += 2;
    }
    m
}

// Hessenberg truncation as the product of its block factors
// (theta_1 + I) (1 + theta_2 + I) ... (I + theta_{n-1}) diag(I, -a_n),
// applied as row operations in decreasing factor order
fn hessenberg_product(av: &[Complex64]) -> DenseMatrix {
    let n = av.len();
    let mut m = DenseMatrix::identity(n, n);
    m[(n - 1, n - 1)] = -av[n - 1];
    for k in (1..n).rev() {
        let a = av[k - 1];
        let rho = Complex64::new(rho_of(a), 0.0);
        // rows k-1 and k pick up the theta block for a_k
        for j in 0..n {
            let top = m[(k - 1, j)];
            let bot = m[(k, j)];
            m[(k - 1, j)] = -a * top + rho * bot;
            m[(k, j)] = rho * top + a.conj() * bot;
        }
    }
    m
}

// rho lists for entry formulas; for plain matrices both skewed lists equal rho
struct RhoLists {
    plus: Vec<f64>,
    minus: Vec<f64>,
}

#[cfg(test)]
fn plain_rhos(av: &[Complex64]) -> RhoLists {
    let r: Vec<f64> = av.iter().map(|&a| rho_of(a)).collect();
    RhoLists { plus: r.clone(), minus: r }
}

fn hat_rhos(av: &[Complex64], poles: &PoleSeq, n: usize) -> Result<RhoLists> {
    if poles.len() < n.saturating_sub(1) {
        return Err(OrfError::DimensionMismatch(format!(
            "order {n} needs {} poles, sequence has {}",
            n - 1,
            poles.len()
        )));
    }
    let etas: Vec<f64> = (0..n)
        .map(|k| eta_of(poles.domain(), poles.alpha(k)))
        .collect::<Result<Vec<f64>>>()?;
    // skewed factors are needed only up to index n-1
    let mut plus = Vec::with_capacity(n);
    let mut minus = Vec::with_capacity(n);
    for k in 1..=n {
        let r = rho_of(av[k - 1]);
        if k < n {
            plus.push(etas[k - 1] / etas[k] * r);
            minus.push(etas[k] / etas[k - 1] * r);
        } else {
            plus.push(r);
            minus.push(r);
        }
    }
    Ok(RhoLists { plus, minus })
}

// Hessenberg entries: H[i][j] = -conj(a_i) rho-_{i+1} ... rho-_j a_{j+1} for
// i <= j (conj(a_0) = 1), H[j+1][j] = rho+_{j+1}; plain matrices use rho for
// both skewed lists
fn hessenberg_from_entries(av: &[Complex64], rhos: &RhoLists) -> DenseMatrix {
    let n = av.len();
    let abar = |i: usize| -> Complex64 {
        if i == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            av[i - 1].conj()
        }
    };
    let mut m = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let mut prod = Complex64::new(1.0, 0.0);
            for t in (i + 1)..=j {
                prod *= Complex64::new(rhos.minus[t - 1], 0.0);
            }
            m[(i, j)] = -abar(i) * prod * av[j];
        }
        if i + 1 < n {
            m[(i + 1, i)] = Complex64::new(rhos.plus[i], 0.0);
        }
    }
    m
}

// five-diagonal entries by row pairs (2k, 2k+1); conj(a_0) = 1; skewed rho
// factors follow the hat pattern (minus above the diagonal, plus below)
fn cmv_from_entries(av: &[Complex64], rhos: &RhoLists) -> DenseMatrix {
    let n = av.len();
    let a = |k: usize| av[k - 1];
    let abar = |k: usize| -> Complex64 {
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            av[k - 1].conj()
        }
    };
    let rp = |k: usize| Complex64::new(rhos.plus[k - 1], 0.0);
    let rm = |k: usize| Complex64::new(rhos.minus[k - 1], 0.0);
    let mut m = DenseMatrix::zeros(n, n);
    let mut set = |i: usize, j: usize, v: Complex64| {
        if i < n && j < n {
            m[(i, j)] = v;
        }
    };
    let mut k = 0usize;
    loop {
        let i = 2 * k;
        if i >= n {
            break;
        }
        // even row
        if 2 * k + 1 <= n {
            if k > 0 {
                set(i, 2 * k - 1, -rp(2 * k) * a(2 * k + 1));
            }
            set(i, 2 * k, -abar(2 * k) * a(2 * k + 1));
        }
        if 2 * k + 2 <= n {
            set(i, 2 * k + 1, -rm(2 * k + 1) * a(2 * k + 2));
            set(i, 2 * k + 2, rm(2 * k + 1) * rm(2 * k + 2));
        }
        // odd row
        let i = 2 * k + 1;
        if i < n {
            if k > 0 {
                set(i, 2 * k - 1, rp(2 * k) * rp(2 * k + 1));
            }
            set(i, 2 * k, abar(2 * k) * rp(2 * k + 1));
            if 2 * k + 2 <= n {
                set(i, 2 * k + 1, -abar(2 * k + 1) * a(2 * k + 2));
                set(i, 2 * k + 2, abar(2 * k + 1) * rm(2 * k + 2));
            }
        }
        k += 1;
    }
    m
}

/// Builds the requested matrix representation.
pub fn build_matrix(a: &ParamSeq, poles: &PoleSeq, spec: &RepSpec) -> Result<DenseMatrix> {
    let n = spec.n;
    match spec.kind {
        RepKind::Hessenberg => {
            let av = effective_a(a, n, spec.boundary)?;
            Ok(hessenberg_product(&av))
        }
        RepKind::Cmv => {
            let av = effective_a(a, n, spec.boundary)?;
            Ok(cmv_factor_odd(&av) * cmv_factor_even(&av))
        }
        RepKind::CmvOdd => {
            if spec.boundary.is_some() && n % 2 == 0 {
                return Err(OrfError::Invalid(format!(
                    "a boundary value does not enter the odd factor at even order {n}"
                )));
            }
            let av = effective_a(a, n, spec.boundary)?;
            Ok(cmv_factor_odd(&av))
        }
        RepKind::CmvEven => {
            if spec.boundary.is_some() && n % 2 == 1 {
                return Err(OrfError::Invalid(format!(
                    "a boundary value does not enter the even factor at odd order {n}"
                )));
            }
            let av = effective_a(a, n, spec.boundary)?;
            Ok(cmv_factor_even(&av))
        }
        RepKind::HatHessenberg => {
            let av = effective_a(a, n, spec.boundary)?;
            let rhos = hat_rhos(&av, poles, n)?;
            Ok(hessenberg_from_entries(&av, &rhos))
        }
        RepKind::HatCmv => {
            let av = effective_a(a, n, spec.boundary)?;
            let rhos = hat_rhos(&av, poles, n)?;
            Ok(cmv_from_entries(&av, &rhos))
        }
        RepKind::VTrunc => truncated_rep(a, poles, n, Family::V, spec.boundary),
        RepKind::UTrunc => truncated_rep(a, poles, n, Family::U, spec.boundary),
    }
}

/// Moebius image of a truncated representation: the inverse transform with
/// diagonal parameter `(alpha_0, ..., alpha_{n-1})` applied to the Hessenberg
/// (`V`) or five-diagonal (`U`) truncation. Without a boundary value the
/// result has norm 1; with one it is unitary.
pub fn truncated_rep(
    a: &ParamSeq,
    poles: &PoleSeq,
    n: usize,
    family: Family,
    boundary: Option<Complex64>,
) -> Result<DenseMatrix> {
    let kind = match family {
        Family::V => RepKind::Hessenberg,
        Family::U => RepKind::Cmv,
    };
    let m = build_matrix(a, poles, &RepSpec { kind, n, boundary })?;
    let diag = DiagParam::from_poles(poles, n)?;
    op_mobius_inverse(&diag, &m)
}

/// Linear pencil `(varpi*_A(M), varpi_A(M))` of the truncated representation:
/// circle `(M + A, 1 + A' M)`, line `(A - A' M, 1 - M)` with `A'` the adjoint
/// of the diagonal truncation parameter. The generalized eigenvalues of the
/// pair coincide with the eigenvalues of the Moebius image without any
/// matrix inversion.
pub fn pair_rep(
    a: &ParamSeq,
    poles: &PoleSeq,
    n: usize,
    family: Family,
    boundary: Option<Complex64>,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let kind = match family {
        Family::V => RepKind::Hessenberg,
        Family::U => RepKind::Cmv,
    };
    let m = build_matrix(a, poles, &RepSpec { kind, n, boundary })?;
    let diag = DiagParam::from_poles(poles, n)?;
    Ok(pencil_of(&diag, &m))
}

// (varpi*_A(M), varpi_A(M)) for a diagonal parameter
pub(crate) fn pencil_of(diag: &DiagParam, m: &DenseMatrix) -> (DenseMatrix, DenseMatrix) {
    let n = diag.len();
    let id = DenseMatrix::identity(n, n);
    match diag.domain() {
        crate::moebius::Domain::Circle => {
            let mut t = m.clone();
            for i in 0..n {
                t[(i, i)] += diag.diag()[i];
            }
            let mut s = m.clone();
            for i in 0..n {
                for j in 0..n {
                    s[(i, j)] *= diag.diag()[i].conj();
                }
            }
            (t, id + s)
        }
        crate::moebius::Domain::Line => {
            let mut adag_m = m.clone();
            for i in 0..n {
                for j in 0..n {
                    adag_m[(i, j)] *= diag.diag()[i].conj();
                }
            }
            let mut t = -adag_m;
            for i in 0..n {
                t[(i, i)] += diag.diag()[i];
            }
            (t, id - m)
        }
    }
}

/// Tridiagonal pencil equivalent to the five-diagonal pair, built from the
/// block factors: odd order `(Co + A Ce', Ce' + A' Co)`, even order
/// `(Ce + A Co', Co' + A' Ce)`, where the primes are adjoints. Both members
/// are tridiagonal and share their generalized eigenvalues with the
/// five-diagonal truncation.
pub fn tridiagonal_pair(
    a: &ParamSeq,
    poles: &PoleSeq,
    n: usize,
    boundary: Option<Complex64>,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let av = effective_a(a, n, boundary)?;
    let diag = DiagParam::from_poles(poles, n)?;
    let co = cmv_factor_odd(&av);
    let ce = cmv_factor_even(&av);
    let amat = diag.to_matrix();
    let adag = amat.adjoint();
    if n % 2 == 1 {
        let t = co.clone() + amat * ce.adjoint();
        let s = ce.adjoint() + adag * co;
        Ok((t, s))
    } else {
        let t = ce.clone() + amat * co.adjoint();
        let s = co.adjoint() + adag * ce;
        Ok((t, s))
    }
}

/// Rows of the matrix as CSV: each row is one line of flattened
/// `re,im` pairs in column order.
pub fn matrix_to_csv(m: &DenseMatrix) -> String {
    let mut out = String::new();
    for i in 0..m.nrows() {
        let mut fields = Vec::with_capacity(2 * m.ncols());
        for j in 0..m.ncols() {
            fields.push(format!("{:?}", m[(i, j)].re));
            fields.push(format!("{:?}", m[(i, j)].im));
        }
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}

/// Matrix as a JSON object `{"n", "kind", "entries"}` with the entries
/// flattened row-major as `[re, im]` pairs.
pub fn matrix_to_json(m: &DenseMatrix, kind: &str) -> String {
    let entries: Vec<[f64; 2]> = (0..m.nrows())
        .flat_map(|i| (0..m.ncols()).map(move |j| [m[(i, j)].re, m[(i, j)].im]))
        .collect();
    serde_json::json!({
        "n": m.nrows(),
        "kind": kind,
        "entries": entries,
    })
    .to_string()
}
