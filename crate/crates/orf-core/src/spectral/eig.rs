//! Dense complex eigensolver: Householder reduction to upper Hessenberg form
//! followed by shifted QR iteration with deflation, plus inverse iteration
//! for eigenvectors. Backward stable; any matrix this crate produces is
//! handled without balancing.

use crate::error::{OrfError, Result};
use crate::opmoebius::DenseMatrix;
use nalgebra::DVector;
use num_complex::Complex64;

/// QR eigensolver with owned configuration. One instance must not be shared
/// across threads; distinct instances are independent.
#[derive(Clone, Debug)]
pub struct Eigensolver {
    /// Sweep budget per matrix order: iteration fails after `factor * n`.
    pub max_sweeps_factor: usize,
    /// Subdiagonal entries below `tol * ||M||_F` deflate to zero.
    pub deflation_tol: f64,
    /// Largest accepted matrix order.
    pub cap: usize,
}

impl Default for Eigensolver {
    fn default() -> Self {
        Eigensolver { max_sweeps_factor: 30, deflation_tol: 1e-12, cap: 512 }
    }
}

pub(crate) fn frobenius(m: &DenseMatrix) -> f64 {
    m.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

// in-place Householder reduction to upper Hessenberg form
fn hessenberg_reduce(h: &mut DenseMatrix) {
    let n = h.nrows();
    for k in 0..n.saturating_sub(2) {
        let mut xnorm = 0.0f64;
        for i in (k + 1)..n {
            xnorm += h[(i, k)].norm_sqr();
        }
        let xnorm = xnorm.sqrt();
        if xnorm <= f64::MIN_POSITIVE {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { Complex64::new(1.0, 0.0) } else { x0 / x0.norm() };
        // v = x + phase * |x| e_1, reflector P = I - 2 v v^* / (v^* v)
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] += phase * xnorm;
        let vnorm_sqr: f64 = v.iter().map(|c| c.norm_sqr()).sum();
        if vnorm_sqr <= f64::MIN_POSITIVE {
            continue;
        }
        let beta = 2.0 / vnorm_sqr;
        // left: rows k+1..n of all columns k..n
        for j in k..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for i in (k + 1)..n {
                dot += v[i - k - 1].conj() * h[(i, j)];
            }
            let dot = dot * beta;
            for i in (k + 1)..n {
                let delta = v[i - k - 1] * dot;
                h[(i, j)] -= delta;
            }
        }
        // right: columns k+1..n of all rows
        for i in 0..n {
            let mut dot = Complex64::new(0.0, 0.0);
            for j in (k + 1)..n {
                dot += h[(i, j)] * v[j - k - 1];
            }
            let dot = dot * beta;
            for j in (k + 1)..n {
                let delta = dot * v[j - k - 1].conj();
                h[(i, j)] -= delta;
            }
        }
        for i in (k + 2)..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
}

// Givens pair with real c: [[c, s], [-conj(s), c]] maps (f, g) to (r, 0)
fn givens(f: Complex64, g: Complex64) -> (f64, Complex64) {
    let fn_ = f.norm();
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if fn_ == 0.0 {
        return (0.0, g.conj() / gn);
    }
    let h = (fn_ * fn_ + gn * gn).sqrt();
    (fn_ / h, (f / fn_) * g.conj() / h)
}

// eigenvalues of the trailing 2x2, returning the one closer to d
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let m = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (m * m - det).sqrt();
    let e1 = m + disc;
    let e2 = m - disc;
    if (e1 - d).norm() <= (e2 - d).norm() {
        e1
    } else {
        e2
    }
}

impl Eigensolver {
    /// Eigenvalues of a square matrix, unordered.
    pub fn eigenvalues(&self, m: &DenseMatrix) -> Result<Vec<Complex64>> {
        let n = m.nrows();
        if n != m.ncols() {
            return Err(OrfError::DimensionMismatch(format!(
                "eigensolver needs a square matrix, got {}x{}",
                n,
                m.ncols()
            )));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        if n > self.cap {
            return Err(OrfError::Invalid(format!(
                "matrix order {n} exceeds the eigensolver cap {}",
                self.cap
            )));
        }
        if m.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(OrfError::Invalid("matrix has non-finite entries".into()));
        }
        let scale = frobenius(m);
        if scale == 0.0 {
            return Ok(vec![Complex64::new(0.0, 0.0); n]);
        }
        let tol = self.deflation_tol * scale;
        let mut h = m.clone();
        hessenberg_reduce(&mut h);

        let budget = self.max_sweeps_factor * n;
        let mut sweeps = 0usize;
        let mut stagnant = 0usize;
        let mut hi = n - 1;
        loop {
            // deflate converged 1x1 tail blocks
            while hi > 0 && h[(hi, hi - 1)].norm() <= tol {
                h[(hi, hi - 1)] = Complex64::new(0.0, 0.0);
                hi -= 1;
                stagnant = 0;
            }
            if hi == 0 {
                break;
            }
            // active window [lo, hi]
            let mut lo = hi;
            while lo > 0 && h[(lo, lo - 1)].norm() > tol {
                lo -= 1;
            }
            if lo > 0 {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
            }
            if sweeps >= budget {
                return Err(OrfError::NoConvergence { n, sweeps });
            }
            let sigma = if stagnant > 0 && stagnant % 10 == 0 {
                // exceptional shift breaks rare shift cycles
                h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
            } else {
                wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
            };
            self.qr_step(&mut h, lo, hi, sigma);
            sweeps += 1;
            stagnant += 1;
        }
        Ok((0..n).map(|i| h[(i, i)]).collect())
    }

    // one explicit shifted QR sweep on the window [lo, hi]
    fn qr_step(&self, h: &mut DenseMatrix, lo: usize, hi: usize, sigma: Complex64) {
        for i in lo..=hi {
            h[(i, i)] -= sigma;
        }
        let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(hi - lo);
        for i in lo..hi {
            let (c, s) = givens(h[(i, i)], h[(i + 1, i)]);
            rots.push((c, s));
            for j in i..=hi {
                let top = h[(i, j)];
                let bot = h[(i + 1, j)];
                h[(i, j)] = c * top + s * bot;
                h[(i + 1, j)] = -s.conj() * top + c * bot;
            }
        }
        for (idx, &(c, s)) in rots.iter().enumerate() {
            let i = lo + idx;
            let rmax = (i + 1).min(hi);
            for r in lo..=rmax {
                let left = h[(r, i)];
                let right = h[(r, i + 1)];
                h[(r, i)] = c * left + s.conj() * right;
                h[(r, i + 1)] = -s * left + c * right;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += sigma;
        }
    }

    /// Right eigenvector for a computed eigenvalue, by inverse iteration on
    /// the original matrix. Returns a unit vector.
    pub fn right_vector(&self, m: &DenseMatrix, lambda: Complex64, seed: usize) -> Result<DVector<Complex64>> {
        self.inverse_iterate(m, lambda, seed)
    }

    /// Left eigenvector (as the row `y` with `y M = lambda y`), returned as
    /// the column of conjugates so callers can take `v.adjoint() * M`.
    pub fn left_vector(&self, m: &DenseMatrix, lambda: Complex64, seed: usize) -> Result<DVector<Complex64>> {
        self.inverse_iterate(&m.adjoint(), lambda.conj(), seed)
    }

    fn inverse_iterate(&self, m: &DenseMatrix, lambda: Complex64, seed: usize) -> Result<DVector<Complex64>> {
        let n = m.nrows();
        let scale = frobenius(m).max(f64::MIN_POSITIVE);
        // deterministic start with spread phases; no alignment with the
        // matrix structure expected
        let mut x = DVector::from_fn(n, |i, _| {
            Complex64::from_polar(1.0, 0.9 * (i as f64) + 1.7 * (seed as f64 + 1.0))
        });
        x /= Complex64::new(x.norm(), 0.0);
        let mut shift_bump = 0.0f64;
        for attempt in 0..5 {
            let mut shifted = m.clone();
            let mu = lambda + Complex64::new(shift_bump, 0.5 * shift_bump);
            for i in 0..n {
                shifted[(i, i)] -= mu;
            }
            let lu = shifted.lu();
            let mut ok = true;
            for _ in 0..3 {
                match lu.solve(&x) {
                    Some(y) => {
                        let ynorm = y.norm();
                        if !ynorm.is_finite() || ynorm == 0.0 {
                            ok = false;
                            break;
                        }
                        x = y / Complex64::new(ynorm, 0.0);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return Ok(x);
            }
            // exactly singular shift: nudge it off the eigenvalue
            shift_bump = 1e-13 * scale * (attempt + 1) as f64;
        }
        Err(OrfError::NoConvergence { n, sweeps: 5 })
    }
}
