//! Group elements of SL(n, R), exterior powers, and projective geometry.
//!
//! Distances use the Euclidean norm: the distance between two lines is the
//! smallest chordal distance between unit representatives, and the gap of a
//! point to a hyperplane is the absolute pairing of unit representatives.
//! The gap is within a factor √2 of the infimum distance from the point to
//! the hyperplane.

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ScaledMatrix};

/// Tolerance on |det − 1| for SL(n) membership.
pub const DET_TOLERANCE: f64 = 1e-9;
/// Inputs whose determinant is this close to 1 are rescaled onto SL(n).
pub const DET_RENORMALIZE: f64 = 1e-6;

/// Orthogonal-diagonal-orthogonal factorization `left · diag(exp(log_diag)) · right`.
///
/// Elements built from factors keep exact exterior powers and inverses even
/// when their singular values span far more than double precision can hold
/// in the plain entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Factors {
    pub left: DMatrix<f64>,
    pub log_diag: Vec<f64>,
    pub right: DMatrix<f64>,
}

/// An element g of SL(n, R).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct GroupElement {
    matrix: DMatrix<f64>,
    factors: Option<Factors>,
}

impl GroupElement {
    /// Validate `matrix` as an element of SL(n, R) with n ≥ 2.
    ///
    /// A determinant within [`DET_RENORMALIZE`] of 1 is corrected by scaling
    /// with det^(−1/n); anything further away is rejected.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}×{}, expected square",
                n,
                matrix.ncols()
            )));
        }
        if n < 2 {
            return Err(Error::DimensionMismatch("dimension must be at least 2".into()));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let det = matrix.clone().determinant();
        if (det - 1.0).abs() <= DET_TOLERANCE {
            return Ok(Self {
                matrix,
                factors: None,
            });
        }
        if (det - 1.0).abs() <= DET_RENORMALIZE {
            let matrix = matrix * det.powf(-1.0 / n as f64);
            return Ok(Self {
                matrix,
                factors: None,
            });
        }
        Err(Error::NotSpecialLinear(format!("determinant {det}")))
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("rows of unequal length".into()));
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::new(DMatrix::from_row_slice(n, n, &flat))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(entries)))
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(DMatrix::identity(n, n))
    }

    /// Rotation of the plane by `theta`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            matrix: DMatrix::from_row_slice(2, 2, &[c, -s, s, c]),
            factors: None,
        }
    }

    /// Build `left · diag(exp(log_diag)) · right` from orthogonal factors.
    pub fn from_factors(left: DMatrix<f64>, log_diag: Vec<f64>, right: DMatrix<f64>) -> Result<Self> {
        let n = log_diag.len();
        if n < 2 || left.shape() != (n, n) || right.shape() != (n, n) {
            return Err(Error::DimensionMismatch("factor shapes disagree".into()));
        }
        for (name, q) in [("left", &left), ("right", &right)] {
            let err = (q.transpose() * q - DMatrix::identity(n, n)).norm();
            if !(err <= 1e-10) {
                return Err(Error::InvalidInput(format!(
                    "{name} factor is not orthogonal (defect {err:.3e})"
                )));
            }
        }
        let total: f64 = log_diag.iter().sum();
        let spread = log_diag.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if total.abs() > DET_TOLERANCE * spread {
            return Err(Error::NotSpecialLinear(format!("log-diagonal sums to {total}")));
        }
        let mean = total / n as f64;
        let log_diag: Vec<f64> = log_diag.iter().map(|x| x - mean).collect();
        let sign = left.clone().determinant() * right.clone().determinant();
        if sign < 0.0 {
            return Err(Error::NotSpecialLinear("orthogonal factors have determinant −1".into()));
        }
        let d = DMatrix::from_diagonal(&DVector::from_iterator(n, log_diag.iter().map(|x| x.exp())));
        let matrix = &left * d * &right;
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::NumericalFailure("factored element overflows".into()));
        }
        Ok(Self {
            matrix,
            factors: Some(Factors {
                left,
                log_diag,
                right,
            }),
        })
    }

    /// `k · diag(exp(log_diag)) · kᵀ` for an orthogonal `k`.
    pub fn conjugated_diagonal(k: &DMatrix<f64>, log_diag: Vec<f64>) -> Result<Self> {
        Self::from_factors(k.clone(), log_diag, k.transpose())
    }

    // Algebraic closure guarantees SL membership; the determinant of a
    // product of large matrices is not numerically checkable.
    pub(crate) fn from_trusted(matrix: DMatrix<f64>) -> Self {
        Self {
            matrix,
            factors: None,
        }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn factors(&self) -> Option<&Factors> {
        self.factors.as_ref()
    }

    pub fn inverse(&self) -> Result<Self> {
        if let Some(f) = &self.factors {
            return Self::from_factors(
                f.right.transpose(),
                f.log_diag.iter().map(|x| -x).collect(),
                f.left.transpose(),
            );
        }
        let inv = self
            .matrix
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::NumericalFailure("matrix is singular".into()))?;
        Ok(Self::from_trusted(inv))
    }

    pub fn mul(&self, rhs: &GroupElement) -> Result<Self> {
        if self.n() != rhs.n() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.n(), rhs.n())));
        }
        let m = &self.matrix * &rhs.matrix;
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::NumericalFailure("product overflows".into()));
        }
        Ok(Self::from_trusted(m))
    }

    pub fn pow(&self, exponent: u32) -> Result<Self> {
        if let Some(f) = &self.factors {
            // Only conjugated diagonals power cleanly in factored form.
            if (&f.right * &f.left - DMatrix::identity(self.n(), self.n())).norm() < 1e-12 {
                let e = exponent as f64;
                return Self::from_factors(
                    f.left.clone(),
                    f.log_diag.iter().map(|x| x * e).collect(),
                    f.right.clone(),
                );
            }
        }
        let mut acc = Self::from_trusted(DMatrix::identity(self.n(), self.n()));
        for _ in 0..exponent {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// k-th exterior power as a scale-tracked matrix.
    pub fn exterior(&self, k: usize) -> Result<ScaledMatrix> {
        let n = self.n();
        if k == 0 || k >= n {
            return Err(Error::DimensionMismatch(format!(
                "exterior degree {k} outside 1..={}",
                n - 1
            )));
        }
        match &self.factors {
            Some(f) => {
                let subsets = linalg::k_subsets(n, k);
                let logs: Vec<f64> = subsets
                    .iter()
                    .map(|s| s.iter().map(|&i| f.log_diag[i]).sum())
                    .collect();
                let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                let d = DVector::from_iterator(logs.len(), logs.iter().map(|x| (x - top).exp()));
                let m = linalg::compound(&f.left, k) * DMatrix::from_diagonal(&d) * linalg::compound(&f.right, k);
                ScaledMatrix::with_scale(m, top)
            }
            None => ScaledMatrix::new(linalg::compound(&self.matrix, k)),
        }
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n() {
            let row: Vec<String> = (0..self.n()).map(|j| format!("{:.6e}", self.matrix[(i, j)])).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// k-th compound Λ^k g: entry (I, J) is the minor of g on rows I and columns
/// J, with I and J ranging over k-subsets in lexicographic order.
pub fn exterior_power(g: &GroupElement, k: usize) -> Result<DMatrix<f64>> {
    g.exterior(k)?.to_matrix()
}

/// The representation Λ^k of SL(n, R) on R^C(n,k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Representation {
    pub n: usize,
    pub k: usize,
    pub dim: usize,
}

impl Representation {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k == 0 || k >= n {
            return Err(Error::DimensionMismatch(format!(
                "exterior degree {k} invalid for n = {n}"
            )));
        }
        Ok(Self {
            n,
            k,
            dim: linalg::binomial(n, k),
        })
    }

    /// Lexicographic index of the basis line e_{1} ∧ … ∧ e_{k}.
    pub fn first_index(&self) -> usize {
        0
    }

    /// Lexicographic index of the basis line e_{n−k+1} ∧ … ∧ e_{n}.
    pub fn last_index(&self) -> usize {
        self.dim - 1
    }
}

fn canonical_unit(v: DVector<f64>) -> Result<DVector<f64>> {
    let norm = v.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::InvalidInput("projective representative must be a nonzero finite vector".into()));
    }
    let mut u = v / norm;
    let lead = u
        .iter()
        .enumerate()
        .fold((0usize, 0.0f64), |best, (i, x)| if x.abs() > best.1.abs() + 1e-14 { (i, *x) } else { best });
    if lead.1 < 0.0 {
        u.neg_mut();
    }
    Ok(u)
}

/// A point of P(R^m) stored as a unit representative with a canonical sign.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    rep: DVector<f64>,
}

impl ProjectivePoint {
    pub fn new(v: DVector<f64>) -> Result<Self> {
        Ok(Self { rep: canonical_unit(v)? })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(v))
    }

    /// The line spanned by the i-th standard basis vector of R^m.
    pub fn basis(m: usize, i: usize) -> Self {
        let mut v = DVector::zeros(m);
        v[i] = 1.0;
        Self { rep: v }
    }

    pub fn rep(&self) -> &DVector<f64> {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    /// Image under a linear map (projective action).
    pub fn image(&self, m: &DMatrix<f64>) -> Result<Self> {
        Self::new(m * &self.rep)
    }
}

/// A hyperplane of P(R^m), the kernel of a unit covector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveHyperplane {
    covector: DVector<f64>,
}

impl ProjectiveHyperplane {
    pub fn new(covector: DVector<f64>) -> Result<Self> {
        Ok(Self {
            covector: canonical_unit(covector)?,
        })
    }

    pub fn from_slice(v: &[f64]) -> Result<Self> {
        Self::new(DVector::from_column_slice(v))
    }

    /// Kernel of the i-th coordinate covector.
    pub fn coordinate(m: usize, i: usize) -> Self {
        let mut v = DVector::zeros(m);
        v[i] = 1.0;
        Self { covector: v }
    }

    pub fn covector(&self) -> &DVector<f64> {
        &self.covector
    }

    pub fn dim(&self) -> usize {
        self.covector.len()
    }

    pub fn contains(&self, x: &ProjectivePoint, tol: f64) -> bool {
        self.covector.dot(x.rep()).abs() <= tol
    }
}

/// Chordal distance min over signs of ‖v1 ∓ v2‖ between unit representatives.
pub fn proj_distance(x1: &ProjectivePoint, x2: &ProjectivePoint) -> Result<f64> {
    if x1.dim() != x2.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", x1.dim(), x2.dim())));
    }
    Ok(chordal(x1.rep(), x2.rep()))
}

// Evaluating sqrt(2 − 2|<v1, v2>|) loses half the digits near zero, so both
// differences are formed explicitly.
pub(crate) fn chordal(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    let mut minus = 0.0;
    let mut plus = 0.0;
    for (x, y) in a.iter().zip(b.iter()) {
        minus += (x - y) * (x - y);
        plus += (x + y) * (x + y);
    }
    minus.min(plus).sqrt()
}

/// Gap |<φ, v>| between a point and a hyperplane; zero iff x lies on H.
pub fn gap(x: &ProjectivePoint, h: &ProjectiveHyperplane) -> Result<f64> {
    if x.dim() != h.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", x.dim(), h.dim())));
    }
    Ok(h.covector().dot(x.rep()).abs().min(1.0))
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff_distance(p: &[ProjectivePoint], q: &[ProjectivePoint]) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(Error::EmptyInput("Hausdorff distance needs two nonempty sets".into()));
    }
    let dim = p[0].dim();
    if p.iter().chain(q.iter()).any(|x| x.dim() != dim) {
        return Err(Error::DimensionMismatch("point sets live in different spaces".into()));
    }
    let directed = |a: &[ProjectivePoint], b: &[ProjectivePoint]| {
        a.iter()
            .map(|x| b.iter().map(|y| chordal(x.rep(), y.rep())).fold(f64::INFINITY, f64::min))
            .fold(0.0f64, f64::max)
    };
    Ok(directed(p, q).max(directed(q, p)))
}

/// The pairing Λ^k × Λ^(n−k) → Λ^n ≅ R, `a ∧ b` in lexicographic coordinates.
pub fn wedge_pairing(n: usize, a: &DVector<f64>, b: &DVector<f64>) -> Result<f64> {
    let k = (1..n)
        .find(|&k| linalg::binomial(n, k) == a.len() && linalg::binomial(n, n - k) == b.len())
        .ok_or_else(|| Error::DimensionMismatch("vectors are not complementary exterior powers".into()))?;
    let left = linalg::k_subsets(n, k);
    let right = linalg::k_subsets(n, n - k);
    let mut total = 0.0;
    for (i, subset) in left.iter().enumerate() {
        let complement: Vec<usize> = (0..n).filter(|x| !subset.contains(x)).collect();
        let j = right
            .iter()
            .position(|s| *s == complement)
            .expect("complement is a subset");
        let inversions: usize = subset.iter().enumerate().map(|(p, &e)| e - p).sum();
        let sign = if inversions.is_multiple_of(2) { 1.0 } else { -1.0 };
        total += sign * a[i] * b[j];
    }
    Ok(total)
}

/// JSON document `{"n": int, "entries": [[row-major reals]]}`; elements with
/// known factors also carry them so exact exterior powers survive a round trip.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub n: usize,
    pub entries: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factors: Option<FactorsDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FactorsDoc {
    pub left: Vec<Vec<f64>>,
    pub log_diag: Vec<f64>,
    pub right: Vec<Vec<f64>>,
}

fn rows_of(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect()
}

fn matrix_of(n: usize, rows: &[Vec<f64>]) -> Result<DMatrix<f64>> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch(format!("entries are not {n}×{n}")));
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(n, n, &flat))
}

impl From<GroupElement> for MatrixDoc {
    fn from(g: GroupElement) -> Self {
        MatrixDoc {
            n: g.n(),
            entries: rows_of(&g.matrix),
            factors: g.factors.as_ref().map(|f| FactorsDoc {
                left: rows_of(&f.left),
                log_diag: f.log_diag.clone(),
                right: rows_of(&f.right),
            }),
        }
    }
}

impl TryFrom<MatrixDoc> for GroupElement {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        let entries = matrix_of(doc.n, &doc.entries)?;
        match doc.factors {
            None => GroupElement::new(entries),
            Some(f) => {
                let g = GroupElement::from_factors(
                    matrix_of(doc.n, &f.left)?,
                    f.log_diag,
                    matrix_of(doc.n, &f.right)?,
                )?;
                let defect = (&g.matrix - &entries).norm() / g.matrix.norm();
                if !(defect <= 1e-9) {
                    return Err(Error::InvalidInput(format!(
                        "factors disagree with entries (relative defect {defect:.3e})"
                    )));
                }
                Ok(g)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: &[f64]) -> ProjectivePoint {
        ProjectivePoint::from_slice(v).unwrap()
    }

    #[test]
    fn degree_one_is_identity() {
        let g = GroupElement::from_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!(exterior_power(&g, 1).unwrap(), g.matrix().clone());
    }

    #[test]
    fn diagonal_compound() {
        let g = GroupElement::diagonal(&[4.0, 2.0, 0.125]).unwrap();
        let m = exterior_power(&g, 2).unwrap();
        let expect = DMatrix::from_diagonal(&DVector::from_vec(vec![8.0, 0.5, 0.25]));
        assert!((m - expect).norm() < 1e-14);
    }

    #[test]
    fn top_power_is_determinant() {
        let m = DMatrix::from_row_slice(2, 2, &[3.0, 1.0, 5.0, 2.0]);
        assert_eq!(linalg::compound(&m, 2)[(0, 0)], 1.0);
    }

    #[test]
    fn degree_out_of_range() {
        let g = GroupElement::identity(3).unwrap();
        assert!(matches!(exterior_power(&g, 0), Err(Error::DimensionMismatch(_))));
        assert!(matches!(exterior_power(&g, 3), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn determinant_handling() {
        assert!(GroupElement::diagonal(&[2.0, 0.5]).is_ok());
        let nearly = GroupElement::diagonal(&[2.0, 0.5 * (1.0 + 5e-7)]).unwrap();
        assert!((nearly.matrix().clone().determinant() - 1.0).abs() < 1e-12);
        assert!(matches!(
            GroupElement::diagonal(&[2.0, 1.0]),
            Err(Error::NotSpecialLinear(_))
        ));
        assert!(GroupElement::diagonal(&[1.0]).is_err());
    }

    #[test]
    fn distance_examples() {
        let e1 = pt(&[1.0, 0.0]);
        let e2 = pt(&[0.0, 1.0]);
        assert!((proj_distance(&e1, &e2).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(proj_distance(&e1, &e1).unwrap(), 0.0);
        // Oracle: minimize ‖v1 ∓ v2‖ over both signs directly.
        let a = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt()];
        let b = [1.0, 0.0];
        let dm = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt();
        let dp = ((a[0] + b[0]).powi(2) + (a[1] + b[1]).powi(2)).sqrt();
        let d = proj_distance(&pt(&[1.0, 1.0]), &e1).unwrap();
        assert!((d - dm.min(dp)).abs() < 1e-15);
        assert!((d - 0.76537).abs() < 1e-5);
        assert!(proj_distance(&e1, &pt(&[1.0, 0.0, 0.0])).is_err());
    }

    #[test]
    fn gap_examples() {
        let h = ProjectiveHyperplane::coordinate(2, 0);
        assert_eq!(gap(&pt(&[1.0, 0.0]), &h).unwrap(), 1.0);
        assert_eq!(gap(&pt(&[0.0, 3.0]), &h).unwrap(), 0.0);
        let g = gap(&pt(&[1.0, 1.0]), &h).unwrap();
        assert!((g - 1.0 / 2f64.sqrt()).abs() < 1e-15);
        assert!((g - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn gap_is_within_sqrt2_of_distance_to_hyperplane() {
        // For a point at angle a from H, the chordal distance to H is
        // 2 sin(a / 2) and the gap is sin a.
        for i in 1..50 {
            let a = i as f64 * std::f64::consts::FRAC_PI_2 / 50.0;
            let x = pt(&[a.sin(), a.cos()]);
            let h = ProjectiveHyperplane::coordinate(2, 0);
            let g = gap(&x, &h).unwrap();
            let d = proj_distance(&x, &pt(&[0.0, 1.0])).unwrap();
            assert!(g <= d + 1e-15 && d <= 2f64.sqrt() * g + 1e-15);
        }
    }

    #[test]
    fn hausdorff_examples() {
        let e1 = pt(&[1.0, 0.0]);
        let e2 = pt(&[0.0, 1.0]);
        let p = vec![e1.clone(), pt(&[1.0, 1.0])];
        assert_eq!(hausdorff_distance(&p, &p).unwrap(), 0.0);
        assert!((hausdorff_distance(&[e1.clone()], &[e2.clone()]).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let h = hausdorff_distance(&[e1.clone(), e2.clone()], &[e1.clone()]).unwrap();
        // Oracle: sup-min by hand; e2 is √2 away from the only point e1.
        assert!((h - 2f64.sqrt()).abs() < 1e-15);
        assert!(matches!(hausdorff_distance(&[], &[e1]), Err(Error::EmptyInput(_))));
    }

    #[test]
    fn wedge_pairing_of_basis() {
        // e1 ∧ (e2 ∧ e3) = +vol, e2 ∧ (e1 ∧ e3) = −vol.
        let e = |i: usize, m: usize| {
            let mut v = DVector::zeros(m);
            v[i] = 1.0;
            v
        };
        assert_eq!(wedge_pairing(3, &e(0, 3), &e(2, 3)).unwrap(), 1.0);
        assert_eq!(wedge_pairing(3, &e(1, 3), &e(1, 3)).unwrap(), -1.0);
        assert_eq!(wedge_pairing(3, &e(2, 3), &e(0, 3)).unwrap(), 1.0);
    }

    #[test]
    fn json_round_trip_keeps_factors() {
        let theta: f64 = 0.3;
        let k = DMatrix::from_row_slice(2, 2, &[theta.cos(), -theta.sin(), theta.sin(), theta.cos()]);
        let g = GroupElement::conjugated_diagonal(&k, vec![30.0, -30.0]).unwrap();
        let text = serde_json::to_string(&g).unwrap();
        let back: GroupElement = serde_json::from_str(&text).unwrap();
        assert!(back.factors().is_some());
        let plain: GroupElement = serde_json::from_str(r#"{"n": 2, "entries": [[2, 0], [0, 0.5]]}"#).unwrap();
        assert!(plain.factors().is_none());
        assert!(serde_json::from_str::<GroupElement>(r#"{"n": 2, "entries": [[2, 0], [0, 1]]}"#).is_err());
    }
}
