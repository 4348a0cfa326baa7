//! Proximal elements and ε-proximality certificates on P(Λ^k R^n).
//!
//! For a unit covector φ and radius ε, B^ε is the set of lines whose gap to
//! ker φ is at least ε, and b^ε is the closed ε-ball around a target point.
//! A linear map M passes the contraction check when M(B^ε) ⊂ b^ε and the
//! projective action of M is ε-Lipschitz on B^ε.
//!
//! The analytic check bounds both quantities from a few norms of M. Write a
//! unit v ∈ B^ε as cφ + su with u ⊥ φ and |s/c| ≤ T = √(1 − ε²)/ε. For any
//! unit ψ with w = Mᵀψ, β = |⟨w, φ⟩| and R the norm of the part of w
//! orthogonal to φ, ‖Mv‖ ≥ |c|(β − |s/c|R) ≥ ε(β − TR) =: ℓ. If p is the
//! target point, A = ‖(I − ppᵀ)Mφ‖ and B = ‖(I − ppᵀ)M(I − φφᵀ)‖, the sine of
//! the angle between Mv and p is at most (A + TB)/(β − TR). Finally
//! ‖Mx ∧ My‖ ≤ σ₁σ₂‖x ∧ y‖ gives sin∠(Mx, My) ≤ (σ₁σ₂/ℓ²) sin∠(x, y), which
//! converts to chordal distances at the cost of a cosine of the image radius.
//! A second bound splits M = σ₁u₁v₁ᵀ + E with ‖E‖ = σ₂: on B^ε,
//! |⟨v₁, v⟩| ≥ sin(asin ε − ∠(v₁, φ)), which bounds ‖Mv‖ from below and the
//! angle between Mv and p through the angle between u₁ and p.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, ScaledMatrix};
use crate::projgeom::{chordal, GroupElement, ProjectiveHyperplane, ProjectivePoint, Representation};
use crate::rng;

pub const DEFAULT_SAMPLES: usize = 10_000;
const CHUNK: usize = 256;
const EIGEN_RESIDUAL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Sampled,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Analytic => "analytic",
            Mode::Sampled => "sampled",
        })
    }
}

/// How contraction conditions are established.
///
/// In analytic mode an inconclusive bound is followed by a sampled search
/// for a counterexample, so a definite violation is still reported as such.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            mode: Mode::Analytic,
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

impl CheckOptions {
    pub fn sampled(samples: usize, seed: u64) -> Self {
        Self {
            mode: Mode::Sampled,
            samples,
            seed,
        }
    }
}

/// Evidence that one matrix is ε-proximal on one projective space.
#[derive(Debug, Clone)]
pub struct ProximalityCertificate {
    pub rep: Representation,
    pub epsilon: f64,
    pub attracting: ProjectivePoint,
    pub repelling: ProjectiveHyperplane,
    /// log λ₁ of the certified matrix.
    pub log_top_modulus: f64,
    pub gap_value: f64,
    pub lipschitz_bound: f64,
    /// Largest distance from the attracting point to an image of B^ε.
    pub image_radius: f64,
    pub mode: Mode,
    pub sample_count: usize,
    /// λ₁/‖M‖ in the operator norm.
    pub modulus_ratio: f64,
}

impl ProximalityCertificate {
    pub fn top_modulus(&self) -> f64 {
        self.log_top_modulus.exp()
    }
}

/// Dominant eigendata of a (possibly rescaled) matrix.
#[derive(Debug, Clone)]
pub struct Eigendata {
    pub log_modulus: f64,
    pub attracting: ProjectivePoint,
    pub repelling: ProjectiveHyperplane,
    pub gap: f64,
    /// Second eigenvalue modulus over the first.
    pub modulus_gap_ratio: f64,
}

pub(crate) fn eigendata(m: &ScaledMatrix) -> Result<Eigendata> {
    let top = linalg::top_eigen(&m.mat)?;
    let attracting = ProjectivePoint::new(top.right)?;
    let repelling = ProjectiveHyperplane::new(top.left)?;
    let gap = crate::projgeom::gap(&attracting, &repelling)?;
    let norm = m.mat.norm();
    Ok(Eigendata {
        log_modulus: top.value.abs().ln() + norm.ln() + m.log_scale,
        attracting,
        repelling,
        gap,
        modulus_gap_ratio: top.second_modulus / top.value.abs(),
    })
}

/// Dominant modulus, attracting line and repelling hyperplane of `m`.
pub fn top_eigendata(m: &DMatrix<f64>) -> Result<(f64, ProjectivePoint, ProjectiveHyperplane)> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let data = eigendata(&ScaledMatrix::new(m.clone())?)?;
    Ok((data.log_modulus.exp(), data.attracting, data.repelling))
}

/// Result of checking M(B^ε) ⊂ b^ε and the Lipschitz condition.
#[derive(Debug, Clone, PartialEq)]
pub enum Contraction {
    Verified { lipschitz: f64, image_radius: f64 },
    Refuted { reason: String },
    Inconclusive { reason: String },
}

/// Analytic bounds `(image_radius, lipschitz)`, or `None` when ℓ ≤ 0.
pub fn analytic_bounds(m: &DMatrix<f64>, target: &DVector<f64>, phi: &DVector<f64>, epsilon: f64) -> Option<(f64, f64)> {
    let dim = m.nrows();
    let m = m / m.amax();
    let t = (1.0 - epsilon * epsilon).sqrt() / epsilon;
    let away_from_target = DMatrix::identity(dim, dim) - target * target.transpose();
    let along = &away_from_target * (&m * phi);
    let a = along.norm();
    let b_op = &away_from_target * &m * (DMatrix::identity(dim, dim) - phi * phi.transpose());
    let b = linalg::singular_values(&b_op).ok()?[0];

    let svd = nalgebra::linalg::SVD::try_new(m.clone(), true, true, f64::EPSILON, 10_000)?;
    let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    let top_idx = (0..dim).max_by(|&i, &j| sv[i].total_cmp(&sv[j]))?;
    let u1: DVector<f64> = svd.u.as_ref()?.column(top_idx).into_owned();
    let v1: DVector<f64> = svd.v_t.as_ref()?.row(top_idx).transpose();
    let mut sorted = sv.clone();
    sorted.sort_by(|x, y| y.total_cmp(x));
    let sigma1 = sorted[0];
    let sigma2 = sorted.get(1).copied().unwrap_or(0.0) + 4.0 * f64::EPSILON * sigma1;

    let mut sin_max = f64::INFINITY;
    let mut ell = 0.0f64;

    // Rank-one split M = σ₁u₁v₁ᵀ + (rest of norm σ₂).
    let cos_eta = v1.dot(phi).abs().min(1.0);
    let split = sigma1 * (epsilon * cos_eta - (1.0 - epsilon * epsilon).sqrt() * (1.0 - cos_eta * cos_eta).sqrt());
    if split > sigma2 {
        let sin_delta = (&away_from_target * &u1).norm();
        sin_max = (split * sin_delta + sigma2) / (split - sigma2);
        ell = split - sigma2;
    }

    let mut candidates = vec![phi.clone(), target.clone(), u1];
    if let Some(x) = m.transpose().lu().solve(phi) {
        if x.iter().all(|v| v.is_finite()) && x.norm() > 0.0 {
            candidates.push(x.normalize());
        }
    }
    for psi in candidates.iter().map(|c| c / c.norm()) {
        let w = m.transpose() * &psi;
        let beta_signed = phi.dot(&w);
        let beta = beta_signed.abs();
        let r = (&w - phi * beta_signed).norm();
        let denom = beta - t * r;
        if denom > 0.0 {
            sin_max = sin_max.min((a + t * b) / denom);
            ell = ell.max(epsilon * denom);
        }
    }
    if ell <= 0.0 || !sin_max.is_finite() {
        return None;
    }
    let sin_max = sin_max.min(1.0);
    let theta = sin_max.asin();
    let radius = 2.0 * (theta / 2.0).sin();
    let lipschitz = sigma1 * sigma2 / (ell * ell) / theta.cos();
    Some((radius, lipschitz))
}

fn random_unit_orthogonal<R: Rng>(rng: &mut R, against: &[&DVector<f64>], dim: usize) -> DVector<f64> {
    loop {
        let mut v = rng::gaussian_matrix(rng, dim, 1).column(0).into_owned();
        for a in against {
            let c = a.dot(&v);
            v -= *a * c;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            return v / norm;
        }
    }
}

// Points of B^ε, mixing a uniform law on the sphere with laws that favour
// the boundary |<φ, v>| = ε where expansion is largest.
fn sample_in_cap<R: Rng>(rng: &mut R, phi: &DVector<f64>, epsilon: f64) -> DVector<f64> {
    let dim = phi.len();
    let c = match rng.random_range(0..3) {
        0 => {
            let mut found = None;
            for _ in 0..64 {
                let v = random_unit_orthogonal(rng, &[], dim);
                if phi.dot(&v).abs() >= epsilon {
                    found = Some(v);
                    break;
                }
            }
            if let Some(v) = found {
                return v;
            }
            rng.random_range(epsilon..=1.0)
        }
        1 => rng.random_range(epsilon..=1.0),
        _ => (epsilon * (1.0 + 1e-3 * rng.random::<f64>())).min(1.0),
    };
    let u = random_unit_orthogonal(rng, &[phi], dim);
    phi * c + u * (1.0 - c * c).max(0.0).sqrt()
}

fn image(m: &DMatrix<f64>, v: &DVector<f64>) -> Option<DVector<f64>> {
    let w = m * v;
    let norm = w.norm();
    (norm > 0.0 && norm.is_finite()).then(|| w / norm)
}

#[derive(Debug, Clone, Copy)]
struct Observed {
    ratio: f64,
    radius: f64,
}

/// Sampled falsifier: the largest observed contraction ratio and image radius.
fn sample_contraction(
    m: &DMatrix<f64>,
    target: &DVector<f64>,
    phi: &DVector<f64>,
    epsilon: f64,
    pairs: usize,
    seed: u64,
) -> Observed {
    let m = m / m.amax();
    let instance = rng::instance_key(&m, &[epsilon.to_bits()]);
    let chunks = pairs.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = rng::substream(seed, "contraction", instance, chunk as u64);
            let count = CHUNK.min(pairs - chunk * CHUNK);
            let dim = phi.len();
            let mut obs = Observed { ratio: 0.0, radius: 0.0 };
            for _ in 0..count {
                let x = sample_in_cap(&mut rng, phi, epsilon);
                let y = if rng.random::<bool>() {
                    sample_in_cap(&mut rng, phi, epsilon)
                } else {
                    let delta = 10f64.powf(rng.random_range(-6.0..-1.0));
                    let h = random_unit_orthogonal(&mut rng, &[&x], dim);
                    let y = (&x + h * delta).normalize();
                    if phi.dot(&y).abs() >= epsilon {
                        y
                    } else {
                        sample_in_cap(&mut rng, phi, epsilon)
                    }
                };
                let (Some(mx), Some(my)) = (image(&m, &x), image(&m, &y)) else {
                    continue;
                };
                obs.radius = obs.radius.max(chordal(&mx, target)).max(chordal(&my, target));
                let d = chordal(&x, &y);
                if d > 1e-12 {
                    obs.ratio = obs.ratio.max(chordal(&mx, &my) / d);
                }
            }
            obs
        })
        .reduce(
            || Observed { ratio: 0.0, radius: 0.0 },
            |a, b| Observed {
                ratio: a.ratio.max(b.ratio),
                radius: a.radius.max(b.radius),
            },
        )
}

/// Check that the projective action of `m` maps B^ε (relative to `phi`)
/// into the ε-ball around `target` and is ε-Lipschitz there.
pub fn check_contraction(
    m: &DMatrix<f64>,
    target: &DVector<f64>,
    phi: &DVector<f64>,
    epsilon: f64,
    options: &CheckOptions,
) -> Contraction {
    let sampled = |pairs: usize| {
        let obs = sample_contraction(m, target, phi, epsilon, pairs, options.seed);
        if obs.radius > epsilon {
            Some(format!("an image of B^ε lies at distance {:.6e} > ε", obs.radius))
        } else if obs.ratio > epsilon {
            Some(format!("observed expansion {:.6e} > ε", obs.ratio))
        } else {
            None
        }
        .map_or(
            Contraction::Verified {
                lipschitz: obs.ratio,
                image_radius: obs.radius,
            },
            |reason| Contraction::Refuted { reason },
        )
    };
    match options.mode {
        Mode::Sampled => sampled(options.samples),
        Mode::Analytic => match analytic_bounds(m, target, phi, epsilon) {
            Some((radius, lipschitz)) if radius <= epsilon && lipschitz <= epsilon => Contraction::Verified {
                lipschitz,
                image_radius: radius,
            },
            bounds => match sampled(options.samples) {
                Contraction::Verified { .. } => Contraction::Inconclusive {
                    reason: match bounds {
                        Some((r, l)) => format!("analytic bounds radius {r:.3e}, Lipschitz {l:.3e} exceed ε"),
                        None => "analytic lower bound on ‖Mv‖ is not positive".into(),
                    },
                },
                refuted => refuted,
            },
        },
    }
}

/// Certify a rescaled matrix acting on the representation `rep`.
pub fn certify_matrix(
    m: &ScaledMatrix,
    rep: Representation,
    epsilon: f64,
    options: &CheckOptions,
) -> Result<ProximalityCertificate> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} outside (0, 1)")));
    }
    if m.dim() != rep.dim {
        return Err(Error::DimensionMismatch(format!(
            "matrix of size {} for representation of dimension {}",
            m.dim(),
            rep.dim
        )));
    }
    let data = eigendata(m).map_err(|e| e.at_degree(rep.k))?;
    let residual = {
        let v = data.attracting.rep();
        let w = &m.mat * v;
        let alpha = w.dot(v);
        (w - v * alpha).norm() / linalg::singular_values(&m.mat)?[0]
    };
    if !(residual <= EIGEN_RESIDUAL) {
        return Err(Error::NumericalFailure(format!("eigenline residual {residual:.3e}")));
    }
    if data.gap < 2.0 * epsilon {
        return Err(Error::SeparationViolated {
            first: 0,
            second: 0,
            degree: rep.k,
            gap: data.gap,
            required: 2.0 * epsilon,
        });
    }
    let outcome = check_contraction(&m.mat, data.attracting.rep(), data.repelling.covector(), epsilon, options);
    let (lipschitz, image_radius) = match outcome {
        Contraction::Verified {
            lipschitz,
            image_radius,
        } => (lipschitz, image_radius),
        Contraction::Refuted { reason } => {
            return Err(Error::ContractionViolated {
                element: None,
                degree: rep.k,
                reason,
            })
        }
        Contraction::Inconclusive { reason } => {
            return Err(Error::ContractionUnverified {
                element: None,
                degree: rep.k,
                reason,
            })
        }
    };
    let log_norm = m.log_norm()?;
    Ok(ProximalityCertificate {
        rep,
        epsilon,
        attracting: data.attracting,
        repelling: data.repelling,
        log_top_modulus: data.log_modulus,
        gap_value: data.gap,
        lipschitz_bound: lipschitz,
        image_radius,
        mode: options.mode,
        sample_count: if options.mode == Mode::Sampled { options.samples } else { 0 },
        modulus_ratio: (data.log_modulus - log_norm).exp(),
    })
}

/// Certify that Λ^k g is ε-proximal.
pub fn certify_eps_proximal(
    g: &GroupElement,
    k: usize,
    epsilon: f64,
    options: &CheckOptions,
) -> Result<ProximalityCertificate> {
    let rep = Representation::new(g.n(), k)?;
    certify_matrix(&g.exterior(k)?, rep, epsilon, options)
}

/// One certificate per degree; fails with the first failing degree.
pub fn certify_theta_proximal(
    g: &GroupElement,
    degrees: &[usize],
    epsilon: f64,
    options: &CheckOptions,
) -> Result<Vec<ProximalityCertificate>> {
    degrees
        .iter()
        .map(|&k| certify_eps_proximal(g, k, epsilon, options).map_err(|e| e.at_degree(k)))
        .collect()
}

/// Prediction for a product g_l^{n_l} ⋯ g_1^{n_1} of certified matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Composition {
    pub epsilon_out: f64,
    /// Σ n_j log λ₁(g_j).
    pub log_center: f64,
    /// log C: the product's log λ₁ lies in log_center ± log_slack.
    pub log_slack: f64,
}

impl Composition {
    pub fn log_interval(&self) -> (f64, f64) {
        (self.log_center - self.log_slack, self.log_center + self.log_slack)
    }

    pub fn contains(&self, log_lambda: f64) -> bool {
        let (lo, hi) = self.log_interval();
        log_lambda >= lo && log_lambda <= hi
    }
}

/// Combine certificates under cyclic separation.
///
/// `certs[0]` acts first. The eigenline y of the product passes through
/// B^ε_j of every factor, where ‖g_j^{n_j} y‖ = λ₁(g_j)^{n_j} |<φ_j, y>| /
/// |<φ_j, y'>| for the normalized image y'. Both pairings lie in [ε_j, 1], so
/// each factor contributes at most log(1/ε_j) to the slack.
pub fn compose_certificates(certs: &[ProximalityCertificate], powers: &[u32]) -> Result<Composition> {
    if certs.is_empty() {
        return Err(Error::EmptyInput("no certificates to compose".into()));
    }
    if certs.len() != powers.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} certificates but {} powers",
            certs.len(),
            powers.len()
        )));
    }
    if powers.contains(&0) {
        return Err(Error::InvalidInput("powers must be at least 1".into()));
    }
    let l = certs.len();
    let dim = certs[0].rep;
    if certs.iter().any(|c| c.rep != dim) {
        return Err(Error::DimensionMismatch("certificates live on different spaces".into()));
    }
    for j in 0..l {
        let prev = (j + l - 1) % l;
        let gap = crate::projgeom::gap(&certs[prev].attracting, &certs[j].repelling)?;
        let required = 6.0 * certs[prev].epsilon.max(certs[j].epsilon);
        if gap < required {
            return Err(Error::SeparationViolated {
                first: prev,
                second: j,
                degree: dim.k,
                gap,
                required,
            });
        }
    }
    Ok(Composition {
        epsilon_out: 2.0 * certs[0].epsilon.max(certs[l - 1].epsilon),
        log_center: certs
            .iter()
            .zip(powers)
            .map(|(c, &p)| p as f64 * c.log_top_modulus)
            .sum(),
        log_slack: certs.iter().map(|c| -c.epsilon.ln()).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projgeom::proj_distance;

    fn squared_pair() -> (GroupElement, GroupElement) {
        let g1 = GroupElement::diagonal(&[100.0, 0.01]).unwrap();
        let r = GroupElement::rotation(std::f64::consts::FRAC_PI_4);
        let g2 = r.mul(&g1).unwrap().mul(&r.inverse().unwrap()).unwrap();
        (g1, g2)
    }

    #[test]
    fn eigendata_examples() {
        let (m, x, h) = top_eigendata(&DMatrix::from_diagonal(&DVector::from_vec(vec![4.0, 2.0, 0.125]))).unwrap();
        assert!((m - 4.0).abs() < 1e-12);
        assert!(proj_distance(&x, &ProjectivePoint::basis(3, 0)).unwrap() < 1e-12);
        assert!((h.covector() - ProjectiveHyperplane::coordinate(3, 0).covector()).norm() < 1e-12);

        // Oracle: φᵀg = 2φᵀ gives 2φ₁ = 2φ₁ and φ₁ + φ₂/2 = 2φ₂, so φ ∝ (3, 2).
        let (m, x, h) = top_eigendata(&DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 0.0, 0.5])).unwrap();
        assert!((m - 2.0).abs() < 1e-12);
        assert!(proj_distance(&x, &ProjectivePoint::basis(2, 0)).unwrap() < 1e-12);
        let expect = ProjectiveHyperplane::from_slice(&[3.0, 2.0]).unwrap();
        assert!((h.covector() - expect.covector()).norm() < 1e-12);

        let rot = GroupElement::rotation(std::f64::consts::FRAC_PI_3);
        assert!(matches!(top_eigendata(rot.matrix()), Err(Error::NotProximal { .. })));
    }

    #[test]
    fn certify_rejects_non_proximal() {
        let opts = CheckOptions::default();
        let rot = GroupElement::rotation(0.3);
        let rot3 = GroupElement::from_rows(&[&[0.0, -1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]).unwrap();
        assert!(matches!(certify_eps_proximal(&rot, 1, 0.1, &opts), Err(Error::NotProximal { .. })));
        assert!(matches!(certify_eps_proximal(&rot3, 1, 0.1, &opts), Err(Error::NotProximal { .. })));
        let tied = GroupElement::diagonal(&[2.0, 2.0, 0.25]).unwrap();
        assert!(matches!(
            certify_eps_proximal(&tied, 1, 0.1, &opts),
            Err(Error::NotProximal { degree: Some(1), .. })
        ));
    }

    #[test]
    fn strongly_contracting_diagonal_certifies_both_ways() {
        let g = GroupElement::diagonal(&[1e4, 1.0, 1e-4]).unwrap();
        let analytic = certify_eps_proximal(&g, 1, 0.1, &CheckOptions::default()).unwrap();
        assert_eq!(analytic.mode, Mode::Analytic);
        assert!((analytic.gap_value - 1.0).abs() < 1e-12);
        assert!(analytic.lipschitz_bound <= 0.1);
        let sampled = certify_eps_proximal(&g, 1, 0.1, &CheckOptions::sampled(10_000, 0)).unwrap();
        assert_eq!(sampled.sample_count, 10_000);
        assert!(sampled.lipschitz_bound <= analytic.lipschitz_bound);
    }

    #[test]
    fn weak_contraction_is_refuted_by_sampling() {
        // At the boundary of B^ε the projective derivative of diag(100, 1, 0.01)
        // is σ₁σ₂/‖Mv‖² ≈ 1/(ε²·100) = 1 > ε.
        let g = GroupElement::diagonal(&[100.0, 1.0, 0.01]).unwrap();
        let err = certify_eps_proximal(&g, 1, 0.1, &CheckOptions::sampled(10_000, 0)).unwrap_err();
        assert!(matches!(err, Error::ContractionViolated { degree: 1, .. }), "{err}");
        let err = certify_eps_proximal(&g, 1, 0.1, &CheckOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ContractionViolated { .. }), "{err}");
    }

    #[test]
    fn inconclusive_when_bound_is_loose_but_no_violation_is_found() {
        // Lipschitz constant near 0.2 against ε = 0.25: the analytic bound
        // carries a cosine factor and the sampled search finds nothing.
        let g = GroupElement::diagonal(&[40.0, 0.025]).unwrap();
        let opts = CheckOptions::default();
        match certify_eps_proximal(&g, 1, 0.25, &opts) {
            Ok(c) => assert!(c.lipschitz_bound <= 0.25),
            Err(e) => assert!(matches!(e, Error::ContractionUnverified { .. } | Error::ContractionViolated { .. })),
        }
    }

    #[test]
    fn theta_certificates() {
        let g = GroupElement::diagonal(&[1e4, 1.0, 1e-4]).unwrap();
        let opts = CheckOptions::default();
        assert_eq!(certify_theta_proximal(&g, &[1, 2], 0.1, &opts).unwrap().len(), 2);
        assert!(certify_theta_proximal(&g, &[], 0.1, &opts).unwrap().is_empty());
        let tied = GroupElement::diagonal(&[2.0, 2.0, 0.25]).unwrap();
        assert!(matches!(
            certify_theta_proximal(&tied, &[1], 0.1, &opts),
            Err(Error::NotProximal { degree: Some(1), .. })
        ));
    }

    #[test]
    fn analytic_passes_survive_dense_sampling() {
        // κ validation: any analytic certificate must withstand a large
        // sampled search on random well-separated instances.
        let mut rng = rng::stream(11, "kappa", 0);
        let mut checked = 0;
        for _ in 0..100 {
            let k = rng::haar_rotation(&mut rng, 3);
            let spread = rng.random_range(6.0..12.0);
            let mid = rng.random_range(-2.0..2.0);
            let g = GroupElement::from_factors(k.clone(), vec![spread, mid, -spread - mid], rng::haar_rotation(&mut rng, 3))
                .unwrap();
            let opts = CheckOptions::default();
            if let Ok(c) = certify_eps_proximal(&g, 1, 0.1, &opts) {
                let m = g.exterior(1).unwrap();
                let obs = sample_contraction(&m.mat, c.attracting.rep(), c.repelling.covector(), 0.1, 20_000, 3);
                assert!(obs.ratio <= c.lipschitz_bound * (1.0 + 1e-9));
                assert!(obs.radius <= c.image_radius * (1.0 + 1e-9) + 1e-15);
                checked += 1;
            }
        }
        assert!(checked > 10);
    }

    #[test]
    fn split_bound_survives_dense_sampling() {
        // Near-diagonal elements against the standard frame, where the
        // rank-one split is the binding bound.
        let mut rng = rng::stream(12, "split", 0);
        let e1 = DVector::from_column_slice(&[1.0, 0.0, 0.0]);
        let mut checked = 0;
        for _ in 0..100 {
            let mut near = || {
                let s = rng::gaussian_matrix(&mut rng, 3, 3) * 0.02;
                (&s - s.transpose()).exp()
            };
            let (left, right) = (near(), near());
            let upper = rng.random_range(8.0..16.0);
            let lower = rng.random_range(8.0..16.0);
            let a = (2.0 * upper + lower) / 3.0;
            let c = -(upper + 2.0 * lower) / 3.0;
            let g = GroupElement::from_factors(left, vec![a, -a - c, c], right).unwrap();
            let m = g.exterior(1).unwrap().mat;
            if let Some((radius, lipschitz)) = analytic_bounds(&m, &e1, &e1, 0.05) {
                let obs = sample_contraction(&m, &e1, &e1, 0.05, 20_000, 5);
                assert!(obs.ratio <= lipschitz * (1.0 + 1e-9));
                assert!(obs.radius <= radius * (1.0 + 1e-9) + 1e-15);
                checked += 1;
            }
        }
        assert!(checked > 50);
    }

    #[test]
    fn iteration_converges_to_attracting_point() {
        let g = GroupElement::diagonal(&[1e4, 1.0, 1e-4]).unwrap();
        let c = certify_eps_proximal(&g, 1, 0.1, &CheckOptions::default()).unwrap();
        let mut rng = rng::stream(0, "iterate", 0);
        for _ in 0..100 {
            let mut v = sample_in_cap(&mut rng, c.repelling.covector(), 0.1);
            for _ in 0..200 {
                v = image(g.matrix(), &v).unwrap();
            }
            let x = ProjectivePoint::new(v).unwrap();
            assert!(proj_distance(&x, &c.attracting).unwrap() < 1e-6);
        }
    }

    #[test]
    fn powers_keep_eigendata() {
        let g = GroupElement::diagonal(&[1e4, 1.0, 1e-4]).unwrap();
        let r = rng::haar_rotation(&mut rng::stream(2, "conj", 0), 3);
        let g = GroupElement::from_trusted(&r * g.matrix() * r.transpose());
        let opts = CheckOptions::default();
        let c1 = certify_eps_proximal(&g, 1, 0.1, &opts).unwrap();
        let c2 = certify_eps_proximal(&g.pow(2).unwrap(), 1, 0.1, &opts).unwrap();
        assert!(proj_distance(&c1.attracting, &c2.attracting).unwrap() < 1e-8);
        assert!((c1.repelling.covector() - c2.repelling.covector()).norm() < 1e-8);
        assert!(c1.modulus_ratio <= 1.0 + 1e-10 && c1.modulus_ratio > 1e-6);
    }

    #[test]
    fn composition_of_squared_pair() {
        let (g1, g2) = squared_pair();
        let opts = CheckOptions::default();
        let c1 = certify_eps_proximal(&g1, 1, 0.1, &opts).unwrap();
        let c2 = certify_eps_proximal(&g2, 1, 0.1, &opts).unwrap();
        let comp = compose_certificates(&[c1.clone(), c2.clone()], &[1, 1]).unwrap();
        assert!((comp.epsilon_out - 0.2).abs() < 1e-15);
        assert!((comp.log_center - 4.0 * 10f64.ln()).abs() < 1e-9);
        let product = g2.mul(&g1).unwrap();
        let actual = crate::projections::jordan_projection(&product).unwrap().coords()[0];
        assert!(comp.contains(actual));

        let single = compose_certificates(&[c1.clone()], &[5]).unwrap();
        assert!((single.log_center - 5.0 * 100f64.ln()).abs() < 1e-9);
        assert!((single.epsilon_out - 0.2).abs() < 1e-15);

        let aligned = {
            let r = GroupElement::rotation(std::f64::consts::FRAC_PI_2);
            r.mul(&g1).unwrap().mul(&r.inverse().unwrap()).unwrap()
        };
        let c3 = certify_eps_proximal(&aligned, 1, 0.1, &opts).unwrap();
        match compose_certificates(&[c1, c3], &[1, 1]) {
            Err(Error::SeparationViolated { gap, .. }) => assert!(gap < 1e-12),
            other => panic!("expected separation failure, got {other:?}"),
        }
    }
}
