//! Cartan projection μ, Jordan projection λ and the opposition involution ι
//! for SL(n, R).
//!
//! Both projections are read off exterior powers: the top singular value of
//! Λ^k g is σ₁⋯σ_k and its spectral radius is |λ₁⋯λ_k|, so coordinate k is a
//! difference of two well-conditioned logarithms. This keeps the small
//! coordinates accurate where a direct decomposition would lose them to
//! cancellation.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ScaledMatrix;
use crate::projgeom::GroupElement;

const ZERO_SUM_TOLERANCE: f64 = 1e-8;

/// A point of the closed Weyl chamber: sorted nonincreasing, zero-sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ChamberVector {
    coords: Vec<f64>,
}

impl ChamberVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::DimensionMismatch("chamber vectors need n ≥ 2".into()));
        }
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite chamber coordinate".into()));
        }
        if coords.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidInput("chamber coordinates must be nonincreasing".into()));
        }
        let sum: f64 = coords.iter().sum();
        let scale = coords.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if sum.abs() > ZERO_SUM_TOLERANCE * scale {
            return Err(Error::InvalidInput(format!("chamber coordinates sum to {sum:e}")));
        }
        Ok(Self { coords })
    }

    /// Sort `coords` nonincreasing and remove the mean.
    pub fn from_unsorted(mut coords: Vec<f64>) -> Result<Self> {
        coords.sort_by(|a, b| b.total_cmp(a));
        let mean = coords.iter().sum::<f64>() / coords.len().max(1) as f64;
        coords.iter_mut().for_each(|x| *x -= mean);
        Self::new(coords)
    }

    /// Build the chamber vector whose partial sums x₁ + … + x_k are the
    /// given logarithms for k = 1..n−1 (the last partial sum is zero).
    pub fn from_partial_sums(partial: &[f64]) -> Result<Self> {
        let n = partial.len() + 1;
        let mut coords = Vec::with_capacity(n);
        let mut prev = 0.0;
        for &p in partial {
            coords.push(p - prev);
            prev = p;
        }
        coords.push(-prev);
        Self::from_unsorted(coords)
    }

    pub fn zero(n: usize) -> Self {
        Self { coords: vec![0.0; n] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.coords)
    }

    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Unit direction, or `None` for the origin.
    pub fn direction(&self) -> Option<DVector<f64>> {
        let norm = self.norm();
        (norm > 0.0).then(|| self.to_dvector() / norm)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if factor >= 0.0 {
            Self::new(self.coords.iter().map(|x| x * factor).collect())
        } else {
            Self::from_unsorted(self.coords.iter().map(|x| x * factor).collect())
        }
    }

    pub fn sup_distance(&self, other: &ChamberVector) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// μ(g): logarithms of singular values, sorted nonincreasing.
pub fn cartan_projection(g: &GroupElement) -> Result<ChamberVector> {
    if let Some(f) = g.factors() {
        return ChamberVector::from_unsorted(f.log_diag.clone());
    }
    let partial = (1..g.n())
        .map(|k| g.exterior(k)?.log_norm())
        .collect::<Result<Vec<_>>>()?;
    ChamberVector::from_partial_sums(&partial)
}

/// λ(g): logarithms of eigenvalue moduli, sorted nonincreasing.
pub fn jordan_projection(g: &GroupElement) -> Result<ChamberVector> {
    let partial = (1..g.n())
        .map(|k| g.exterior(k)?.log_spectral_radius())
        .collect::<Result<Vec<_>>>()?;
    ChamberVector::from_partial_sums(&partial)
}

/// ι(x₁, …, x_n) = (−x_n, …, −x₁).
pub fn opposition_involution(v: &ChamberVector) -> ChamberVector {
    ChamberVector {
        coords: v.coords.iter().rev().map(|x| -x).collect(),
    }
}

/// (1/steps)·μ(g^steps), with each exterior power accumulated as a
/// renormalized product so nothing overflows.
pub fn iterated_cartan(g: &GroupElement, steps: u64) -> Result<ChamberVector> {
    if steps == 0 {
        return Err(Error::InvalidInput("steps must be positive".into()));
    }
    let partial = (1..g.n())
        .map(|k| {
            let power: ScaledMatrix = g.exterior(k)?.pow(steps)?;
            Ok(power.log_norm()? / steps as f64)
        })
        .collect::<Result<Vec<_>>>()?;
    ChamberVector::from_partial_sums(&partial)
}

/// λ_i(g) − λ_{i+1}(g) for i = 1..n−1; all positive iff g is R-regular.
pub fn regularity_gaps(g: &GroupElement) -> Result<Vec<f64>> {
    Ok(gaps_of(&jordan_projection(g)?))
}

pub(crate) fn gaps_of(v: &ChamberVector) -> Vec<f64> {
    v.coords.windows(2).map(|w| (w[0] - w[1]).max(0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    fn upper() -> GroupElement {
        GroupElement::from_rows(&[&[2.0, 1.0], &[0.0, 0.5]]).unwrap()
    }

    fn close(a: &ChamberVector, b: &[f64], tol: f64) -> bool {
        a.coords().iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    fn sl3(entries: Vec<f64>) -> Option<GroupElement> {
        let m = DMatrix::from_row_slice(3, 3, &entries);
        let det = m.clone().determinant();
        if det.abs() < 0.05 {
            return None;
        }
        let mut m = m * det.abs().powf(-1.0 / 3.0);
        if det < 0.0 {
            m.row_mut(0).neg_mut();
        }
        GroupElement::new(m).ok()
    }

    fn sl3_strategy() -> impl Strategy<Value = GroupElement> {
        proptest::collection::vec(-2.0f64..2.0, 9).prop_filter_map("near-singular", sl3)
    }

    #[test]
    fn cartan_examples() {
        let d = GroupElement::diagonal(&[4.0, 2.0, 0.125]).unwrap();
        let mu = cartan_projection(&d).unwrap();
        assert!(close(&mu, &[4f64.ln(), 2f64.ln(), -8f64.ln()], 1e-12));
        assert!(close(&cartan_projection(&GroupElement::rotation(0.7)).unwrap(), &[0.0, 0.0], 1e-12));
        // Oracle: eigenvalues of gᵀg = [[4,2],[2,1.25]] by the quadratic formula.
        let (tr, det) = (5.25f64, 1.0f64);
        let top = (tr + (tr * tr - 4.0 * det).sqrt()) / 2.0;
        let mu = cartan_projection(&upper()).unwrap();
        assert!(close(&mu, &[top.ln() / 2.0, -top.ln() / 2.0], 1e-12));
        assert!((mu.coords()[0] - 0.80990).abs() < 1e-5);
    }

    #[test]
    fn jordan_examples() {
        assert!(close(&jordan_projection(&upper()).unwrap(), &[2f64.ln(), -2f64.ln()], 1e-12));
        assert!(close(&jordan_projection(&GroupElement::rotation(1.1)).unwrap(), &[0.0, 0.0], 1e-12));
        let g = GroupElement::from_rows(&[&[50.5, 49.5], &[0.495, 0.505]]).unwrap();
        // Oracle: quadratic formula on trace 51.005, determinant 1.
        let t: f64 = 51.005;
        let top = (t + (t * t - 4.0).sqrt()) / 2.0;
        let lam = jordan_projection(&g).unwrap();
        assert!(close(&lam, &[top.ln(), -top.ln()], 1e-10));
        assert!((lam.coords()[0] - 3.93154).abs() < 1e-5);
    }

    #[test]
    fn involution_examples() {
        let v = ChamberVector::new(vec![4f64.ln(), 2f64.ln(), -8f64.ln()]).unwrap();
        let w = opposition_involution(&v);
        assert!(close(&w, &[8f64.ln(), -2f64.ln(), -4f64.ln()], 1e-15));
        assert_eq!(opposition_involution(&w), v);
        let s = ChamberVector::new(vec![0.3, -0.3]).unwrap();
        assert_eq!(opposition_involution(&s), s);
    }

    #[test]
    fn iterated_cartan_examples() {
        let d = GroupElement::diagonal(&[4.0, 2.0, 0.125]).unwrap();
        for steps in [1, 7, 100] {
            assert!(close(&iterated_cartan(&d, steps).unwrap(), &[4f64.ln(), 2f64.ln(), -8f64.ln()], 1e-12));
        }
        assert!(close(&iterated_cartan(&GroupElement::rotation(0.4), 1000).unwrap(), &[0.0, 0.0], 1e-12));
        let it = iterated_cartan(&upper(), 64).unwrap();
        assert!(it.sup_distance(&jordan_projection(&upper()).unwrap()) <= 0.05);
        assert!(matches!(iterated_cartan(&upper(), 0), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn iterated_cartan_matches_direct_power() {
        let m: DMatrix<f64> = DMatrix::from_row_slice(3, 3, &[1.2, 0.3, -0.4, 0.1, 0.9, 0.2, 0.3, -0.2, 1.0]);
        let g = GroupElement::new(&m * m.clone().determinant().powf(-1.0 / 3.0)).unwrap();
        for steps in [1u32, 5, 16] {
            let direct = cartan_projection(&g.pow(steps).unwrap()).unwrap().scaled(1.0 / steps as f64).unwrap();
            assert!(iterated_cartan(&g, steps as u64).unwrap().sup_distance(&direct) < 1e-6);
        }
    }

    #[test]
    fn iterated_cartan_survives_large_steps() {
        let g = GroupElement::diagonal(&[1000.0, 1.0, 0.001]).unwrap();
        let it = iterated_cartan(&g, 10_000).unwrap();
        assert!((it.coords()[0] - 1000f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn regularity_gap_examples() {
        let d = GroupElement::diagonal(&[4.0, 2.0, 0.125]).unwrap();
        let gaps = regularity_gaps(&d).unwrap();
        assert!((gaps[0] - 2f64.ln()).abs() < 1e-12 && (gaps[1] - 16f64.ln()).abs() < 1e-12);
        assert!(regularity_gaps(&GroupElement::rotation(0.3)).unwrap()[0] < 1e-12);
        assert!((regularity_gaps(&upper()).unwrap()[0] - 4f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn chamber_rejects_unsorted_or_unbalanced() {
        assert!(ChamberVector::new(vec![-1.0, 1.0]).is_err());
        assert!(ChamberVector::new(vec![1.0, 0.0]).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn projections_live_in_the_chamber(g in sl3_strategy()) {
            for v in [cartan_projection(&g).unwrap(), jordan_projection(&g).unwrap()] {
                prop_assert!(v.coords().windows(2).all(|w| w[0] >= w[1]));
                prop_assert!(v.coords().iter().sum::<f64>().abs() < 1e-8);
            }
        }

        #[test]
        fn inverse_is_opposition(g in sl3_strategy()) {
            let inv = g.inverse().unwrap();
            let mu = cartan_projection(&g).unwrap();
            let lam = jordan_projection(&g).unwrap();
            prop_assert!(cartan_projection(&inv).unwrap().sup_distance(&opposition_involution(&mu)) < 1e-8);
            prop_assert!(jordan_projection(&inv).unwrap().sup_distance(&opposition_involution(&lam)) < 1e-8);
        }

        #[test]
        fn jordan_is_homogeneous(g in sl3_strategy(), m in 1u32..=8) {
            let lam = jordan_projection(&g).unwrap().scaled(m as f64).unwrap();
            let pow = jordan_projection(&g.pow(m).unwrap()).unwrap();
            prop_assert!(pow.sup_distance(&lam) < 1e-6);
        }

        #[test]
        fn jordan_is_conjugation_invariant(g in sl3_strategy(), h in sl3_strategy()) {
            let sv = crate::linalg::singular_values(h.matrix()).unwrap();
            prop_assume!(sv[0] / sv[2] <= 1e3);
            let c = h.mul(&g).unwrap().mul(&h.inverse().unwrap()).unwrap();
            prop_assert!(jordan_projection(&c).unwrap().sup_distance(&jordan_projection(&g).unwrap()) < 1e-6);
        }

        #[test]
        fn compounds_recover_partial_sums(g in sl3_strategy()) {
            let lam = jordan_projection(&g).unwrap();
            let mu = cartan_projection(&g).unwrap();
            let c = GroupElement::from_trusted(crate::projgeom::exterior_power(&g, 2).unwrap());
            let top_lam = jordan_projection(&c).unwrap().coords()[0];
            let top_mu = cartan_projection(&c).unwrap().coords()[0];
            // Λ²g is 3×3 with determinant 1, so its own top coordinate is the
            // log of its dominant modulus.
            prop_assert!((top_lam - (lam.coords()[0] + lam.coords()[1])).abs() < 1e-6);
            prop_assert!((top_mu - (mu.coords()[0] + mu.coords()[1])).abs() < 1e-6);
        }

        #[test]
        fn multiplicativity_of_compounds(g in sl3_strategy(), h in sl3_strategy()) {
            let lhs = crate::projgeom::exterior_power(&g.mul(&h).unwrap(), 2).unwrap();
            let a = crate::projgeom::exterior_power(&g, 2).unwrap();
            let b = crate::projgeom::exterior_power(&h, 2).unwrap();
            prop_assert!((&lhs - &a * &b).norm() <= 1e-8 * a.norm() * b.norm());
            prop_assert!((a.determinant() - 1.0).abs() < 1e-8);
        }
    }
}
