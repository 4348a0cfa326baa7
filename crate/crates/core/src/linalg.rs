//! Dense helpers: scale-tracked matrices, compound matrices and spectral data.
//!
//! Products of many group elements overflow quickly, so long products are
//! carried as a unit-Frobenius-norm matrix together with the logarithm of the
//! discarded scale. Every projective quantity is scale invariant, and
//! logarithmic quantities pick the scale back up.

use nalgebra::{Complex, DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative eigen-gap below which a dominant eigenvalue is treated as tied.
pub const PROXIMAL_GAP: f64 = 1e-10;

/// Matrix `mat * exp(log_scale)` with `mat` normalized to unit Frobenius norm.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledMatrix {
    pub mat: DMatrix<f64>,
    pub log_scale: f64,
}

impl ScaledMatrix {
    pub fn new(mat: DMatrix<f64>) -> Result<Self> {
        Self::with_scale(mat, 0.0)
    }

    pub fn with_scale(mat: DMatrix<f64>, log_scale: f64) -> Result<Self> {
        let amax = mat.amax();
        if !amax.is_finite() || amax == 0.0 {
            return Err(Error::NumericalFailure(format!(
                "matrix with largest entry {amax} cannot be renormalized"
            )));
        }
        let mat = mat / amax;
        let norm = mat.norm();
        Ok(Self {
            mat: mat / norm,
            log_scale: log_scale + amax.ln() + norm.ln(),
        })
    }

    pub fn identity(dim: usize) -> Self {
        let mat = DMatrix::identity(dim, dim);
        let norm = (dim as f64).sqrt();
        Self {
            mat: mat / norm,
            log_scale: norm.ln(),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mul(&self, rhs: &ScaledMatrix) -> Result<ScaledMatrix> {
        Self::with_scale(&self.mat * &rhs.mat, self.log_scale + rhs.log_scale)
    }

    /// Power by repeated squaring, renormalizing after every product.
    pub fn pow(&self, exponent: u64) -> Result<ScaledMatrix> {
        let mut acc = ScaledMatrix::identity(self.dim());
        let mut base = self.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Logarithm of the spectral norm.
    pub fn log_norm(&self) -> Result<f64> {
        let s = singular_values(&self.mat)?;
        Ok(s[0].ln() + self.log_scale)
    }

    /// Logarithm of the largest eigenvalue modulus.
    pub fn log_spectral_radius(&self) -> Result<f64> {
        let ev = sorted_eigenvalues(&self.mat)?;
        let top = ev[0].norm();
        if top == 0.0 {
            return Err(Error::NumericalFailure(
                "nilpotent product has no spectral radius".into(),
            ));
        }
        Ok(top.ln() + self.log_scale)
    }

    /// Materialize the matrix; fails if the scale overflows.
    pub fn to_matrix(&self) -> Result<DMatrix<f64>> {
        let factor = self.log_scale.exp();
        let out = &self.mat * factor;
        if out.iter().all(|x| x.is_finite()) {
            Ok(out)
        } else {
            Err(Error::NumericalFailure("matrix entries overflow".into()))
        }
    }
}

/// All k-subsets of `0..n` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == i - 1 + n - k {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// k-th compound matrix: the (I, J) entry is the minor on rows I, columns J.
pub fn compound(m: &DMatrix<f64>, k: usize) -> DMatrix<f64> {
    let n = m.nrows();
    if k == 1 {
        return m.clone();
    }
    let subsets = k_subsets(n, k);
    let dim = subsets.len();
    let mut out = DMatrix::zeros(dim, dim);
    let mut sub = DMatrix::zeros(k, k);
    for (a, rows) in subsets.iter().enumerate() {
        for (b, cols) in subsets.iter().enumerate() {
            for (i, &r) in rows.iter().enumerate() {
                for (j, &c) in cols.iter().enumerate() {
                    sub[(i, j)] = m[(r, c)];
                }
            }
            out[(a, b)] = sub.clone().determinant();
        }
    }
    out
}

/// Singular values, sorted nonincreasing.
pub fn singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let svd = nalgebra::linalg::SVD::try_new(m.clone(), false, false, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
    let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Eigenvalues sorted by nonincreasing modulus.
pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    if m.iter().any(|x| !x.is_finite()) {
        return Err(Error::NumericalFailure("non-finite matrix entry".into()));
    }
    let norm = m.norm();
    if norm == 0.0 {
        return Ok(vec![Complex::new(0.0, 0.0); m.nrows()]);
    }
    let scaled = m / norm;
    let schur = nalgebra::linalg::Schur::try_new(scaled, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
    let mut ev: Vec<Complex<f64>> = schur
        .complex_eigenvalues()
        .iter()
        .map(|z| z * norm)
        .collect();
    ev.sort_by(|a, b| b.norm().total_cmp(&a.norm()));
    Ok(ev)
}

/// Dominant eigen-structure of a proximal matrix.
#[derive(Debug, Clone)]
pub struct TopEigen {
    /// Dominant (real) eigenvalue of the normalized matrix.
    pub value: f64,
    /// Modulus of the second eigenvalue of the normalized matrix.
    pub second_modulus: f64,
    /// Unit right eigenvector.
    pub right: DVector<f64>,
    /// Unit left eigenvector; its kernel is the invariant complement.
    pub left: DVector<f64>,
}

/// Dominant eigenvalue, eigenline and invariant hyperplane of `m`, which is
/// first rescaled to unit Frobenius norm (returned values refer to that
/// normalized matrix).
pub fn top_eigen(m: &DMatrix<f64>) -> Result<TopEigen> {
    let n = m.nrows();
    let norm = m.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::NumericalFailure("matrix cannot be normalized".into()));
    }
    let a = m / norm;
    let ev = sorted_eigenvalues(&a)?;
    let top = ev[0];
    let second = if n > 1 { ev[1].norm() } else { 0.0 };
    let top_mod = top.norm();
    if top_mod == 0.0 {
        return Err(Error::NotProximal {
            element: None,
            degree: None,
            reason: "matrix is nilpotent".into(),
        });
    }
    if top.im.abs() > 1e-12 * top_mod {
        return Err(Error::NotProximal {
            element: None,
            degree: None,
            reason: "dominant eigenvalues form a complex pair".into(),
        });
    }
    if (top_mod - second) < PROXIMAL_GAP * top_mod {
        return Err(Error::NotProximal {
            element: None,
            degree: None,
            reason: format!(
                "dominant modulus is not simple (relative gap {:.3e})",
                (top_mod - second) / top_mod
            ),
        });
    }
    let alpha = top.re;
    let shifted = &a - DMatrix::identity(n, n) * alpha;
    let svd = nalgebra::linalg::SVD::try_new(shifted, true, true, f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("SVD did not converge".into()))?;
    let (imin, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty spectrum");
    let u = svd.u.as_ref().expect("requested U");
    let vt = svd.v_t.as_ref().expect("requested V^T");
    let mut right: DVector<f64> = vt.row(imin).transpose();
    let mut left: DVector<f64> = u.column(imin).into_owned();
    right = refine_eigenvector(&a, alpha, right);
    left = refine_eigenvector(&a.transpose(), alpha, left);
    let residual = (&a * &right - &right * alpha).norm();
    if !(residual <= 1e-8) {
        return Err(Error::NumericalFailure(format!(
            "eigenvector residual {residual:.3e} too large"
        )));
    }
    Ok(TopEigen {
        value: alpha,
        second_modulus: second,
        right,
        left,
    })
}

// One step of inverse iteration, kept only if it lowers the residual.
fn refine_eigenvector(a: &DMatrix<f64>, alpha: f64, v: DVector<f64>) -> DVector<f64> {
    let n = a.nrows();
    let residual = |x: &DVector<f64>| (a * x - x * alpha).norm();
    let before = residual(&v);
    let shift = alpha * (1.0 + 4.0 * f64::EPSILON) + f64::EPSILON;
    let shifted = a - DMatrix::identity(n, n) * shift;
    match shifted.lu().solve(&v) {
        Some(w) if w.iter().all(|x| x.is_finite()) && w.norm() > 0.0 => {
            let w = w.normalize();
            if residual(&w) < before {
                w
            } else {
                v
            }
        }
        _ => v,
    }
}

/// Orthonormal basis of the zero-sum hyperplane of R^n, as columns of an
/// n × (n−1) matrix.
pub fn zero_sum_basis(n: usize) -> DMatrix<f64> {
    let mut b = DMatrix::zeros(n, n - 1);
    for j in 1..n {
        let norm = ((j * (j + 1)) as f64).sqrt();
        for i in 0..j {
            b[(i, j - 1)] = 1.0 / norm;
        }
        b[(j, j - 1)] = -(j as f64) / norm;
    }
    b
}

/// Angle in radians between two nonzero vectors, accurate for small angles.
pub fn angle_between(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let ua = a / a.norm();
    let ub = b / b.norm();
    2.0 * (&ua - &ub).norm().atan2((&ua + &ub).norm())
}

/// Orthonormal basis of the orthogonal complement of the unit vector `phi`.
pub fn complement_basis(phi: &DVector<f64>) -> Vec<DVector<f64>> {
    let n = phi.len();
    let mut basis: Vec<DVector<f64>> = Vec::with_capacity(n - 1);
    // Gram-Schmidt against phi over the standard basis, skipping the most
    // aligned coordinate vector.
    let skip = phi
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.abs().total_cmp(&y.1.abs()))
        .map(|(i, _)| i)
        .unwrap_or(0);
    for i in 0..n {
        if i == skip {
            continue;
        }
        let mut v = DVector::zeros(n);
        v[i] = 1.0;
        for _ in 0..2 {
            let c = phi.dot(&v);
            v -= phi * c;
            for b in &basis {
                let c = b.dot(&v);
                v -= b * c;
            }
        }
        basis.push(v.normalize());
    }
    basis
}
