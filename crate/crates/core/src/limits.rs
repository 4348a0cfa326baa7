//! Sampled estimates of the limit cone, the limit set and its facets.

use std::fmt;

use nalgebra::DVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull;
use crate::linalg;
use crate::projections::{gaps_of, ChamberVector};
use crate::projgeom::{hausdorff_distance, proj_distance, wedge_pairing, ProjectivePoint};
use crate::rng;
use crate::words::{Kind, LetterSet, WordProduct, WordSampler};

pub const DEFAULT_FILTER: f64 = 1e-6;
/// Points within this projective distance are merged.
pub const MERGE_DISTANCE: f64 = 1e-9;

/// Sampled Jordan directions and the cone they span.
#[derive(Debug, Clone)]
pub struct ConeEstimate {
    /// Unit λ(w)/‖λ(w)‖ for every sampled word with λ(w) ≠ 0.
    pub directions: Vec<ChamberVector>,
    pub hull_rays: Vec<ChamberVector>,
    pub hull_dim: usize,
    /// (word length, ‖μ(w) − λ(w)‖∞) for every sampled word.
    pub mu_lambda_gaps: Vec<(u64, f64)>,
}

impl ConeEstimate {
    fn ray_coords(&self) -> Vec<DVector<f64>> {
        self.hull_rays.iter().map(|r| hull::to_coords(&r.to_dvector())).collect()
    }

    /// Angle in degrees from `v` to the sampled hull.
    pub fn angle_to_hull_deg(&self, v: &ChamberVector) -> f64 {
        hull::angle_to_cone(&self.ray_coords(), &hull::to_coords(&v.to_dvector())).to_degrees()
    }

    pub fn contains(&self, v: &ChamberVector, tolerance: f64) -> bool {
        hull::in_cone(&self.ray_coords(), &hull::to_coords(&v.to_dvector()), tolerance)
    }

    pub fn max_mu_lambda_gap(&self) -> f64 {
        self.mu_lambda_gaps.iter().fold(0.0, |m, &(_, g)| m.max(g))
    }
}

fn direction_of(lambda: &ChamberVector, length: u64) -> Option<ChamberVector> {
    let norm = lambda.norm();
    if norm <= 1e-12 * (length.max(1) as f64) {
        return None;
    }
    ChamberVector::new(lambda.coords().iter().map(|x| x / norm).collect()).ok()
}

/// Directions of λ over the sampled words and their convex cone.
pub fn estimate_cone(sampler: &WordSampler) -> Result<ConeEstimate> {
    let words = sampler.enumerate()?;
    let mut directions = Vec::new();
    let mut mu_lambda_gaps = Vec::with_capacity(words.len());
    for w in &words {
        let lambda = w.lambda()?;
        mu_lambda_gaps.push((w.length, w.mu()?.sup_distance(&lambda)));
        if let Some(d) = direction_of(&lambda, w.length) {
            directions.push(d);
        }
    }
    if directions.is_empty() {
        return Err(Error::DegenerateSample("every sampled word has λ = 0".into()));
    }
    let coords: Vec<DVector<f64>> = directions.iter().map(|d| hull::to_coords(&d.to_dvector())).collect();
    let hull_rays: Vec<ChamberVector> = hull::extreme_rays(&coords)
        .into_iter()
        .map(|i| directions[i].clone())
        .collect();
    let hull_dim = hull::numerical_rank(&hull_rays.iter().map(|r| hull::to_coords(&r.to_dvector())).collect::<Vec<_>>());
    Ok(ConeEstimate {
        directions,
        hull_rays,
        hull_dim,
        mu_lambda_gaps,
    })
}

pub const CONVEXITY_POWERS: [u64; 4] = [1, 2, 4, 8];

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityTrial {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
    /// Angle in degrees between λ(w₁^m w₂^m) and λ(w₁) + λ(w₂), per power.
    pub errors_deg: Vec<f64>,
    /// Largest angle in degrees from a new direction to the hull.
    pub hull_slack_deg: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub trials: Vec<ConvexityTrial>,
    pub monotone: bool,
    pub max_final_error_deg: f64,
    pub max_hull_slack_deg: f64,
}

impl ConvexityReport {
    /// Final error within `final_tolerance_deg` and hull slack within
    /// `slack_tolerance_deg`, with monotone errors.
    pub fn passes(&self, final_tolerance_deg: f64, slack_tolerance_deg: f64) -> bool {
        self.monotone && self.max_final_error_deg <= final_tolerance_deg && self.max_hull_slack_deg <= slack_tolerance_deg
    }
}

fn angle_deg(a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    if a.norm() == 0.0 && b.norm() == 0.0 {
        return 0.0;
    }
    linalg::angle_between(a, b).to_degrees()
}

/// Random pairs of sampled words checked for midpoint convergence of
/// λ(w₁^m w₂^m)/(2m) and for staying inside the sampled hull.
pub fn check_convexity(estimate: &ConeEstimate, sampler: &WordSampler, trials: usize, seed: u64) -> Result<ConvexityReport> {
    let words: Vec<WordProduct> = sampler
        .enumerate()?
        .into_iter()
        .filter(|w| w.lambda().map(|l| direction_of(&l, w.length).is_some()).unwrap_or(false))
        .collect();
    if words.is_empty() {
        return Err(Error::DegenerateSample("no word with λ ≠ 0".into()));
    }
    let mut rng = rng::stream(seed, "convexity", words.len() as u64);
    let mut report = ConvexityReport {
        trials: Vec::with_capacity(trials),
        monotone: true,
        max_final_error_deg: 0.0,
        max_hull_slack_deg: 0.0,
    };
    for _ in 0..trials {
        let w1 = &words[rng.random_range(0..words.len())];
        let w2 = &words[rng.random_range(0..words.len())];
        let target = w1.lambda()?.to_dvector() + w2.lambda()?.to_dvector();
        let mut errors_deg = Vec::with_capacity(CONVEXITY_POWERS.len());
        let mut hull_slack_deg = 0.0f64;
        for &m in &CONVEXITY_POWERS {
            let assembled = w1.pow(m)?.mul(&w2.pow(m)?)?;
            let lambda = assembled.lambda()?;
            errors_deg.push(angle_deg(&lambda.to_dvector(), &target));
            if let Some(d) = direction_of(&lambda, assembled.length) {
                hull_slack_deg = hull_slack_deg.max(estimate.angle_to_hull_deg(&d));
            }
        }
        report.monotone &= errors_deg.windows(2).all(|e| e[1] <= e[0] + 1e-9);
        report.max_final_error_deg = report.max_final_error_deg.max(*errors_deg.last().expect("four powers"));
        report.max_hull_slack_deg = report.max_hull_slack_deg.max(hull_slack_deg);
        report.trials.push(ConvexityTrial {
            first: w1.word.clone(),
            second: w2.word.clone(),
            errors_deg,
            hull_slack_deg,
        });
    }
    Ok(report)
}

/// Per word length, the largest ‖μ(w) − λ(w)‖∞ among sampled words.
pub fn compare_mu_lambda(sampler: &WordSampler) -> Result<Vec<(u64, f64)>> {
    let mut by_length: std::collections::BTreeMap<u64, f64> = Default::default();
    for w in sampler.enumerate()? {
        let gap = w.mu()?.sup_distance(&w.lambda()?);
        let slot = by_length.entry(w.length).or_insert(0.0);
        *slot = slot.max(gap);
    }
    Ok(by_length.into_iter().collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
pub enum Side {
    #[serde(rename = "fwd")]
    #[value(name = "fwd")]
    Forward,
    #[serde(rename = "bwd")]
    #[value(name = "bwd")]
    Backward,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Forward => "fwd",
            Side::Backward => "bwd",
        })
    }
}

/// Attracting points of sampled proximal words, one cloud per degree.
#[derive(Debug, Clone)]
pub struct LimitSetSample {
    pub side: Side,
    pub depth: usize,
    /// Clouds indexed by degree − 1.
    pub points: Vec<Vec<ProjectivePoint>>,
}

impl LimitSetSample {
    pub fn degree(&self, k: usize) -> &[ProjectivePoint] {
        &self.points[k - 1]
    }
}

fn proximal_everywhere(w: &WordProduct, filter: f64) -> Result<Option<Vec<ProjectivePoint>>> {
    let lambda = w.lambda()?;
    if gaps_of(&lambda).iter().any(|&g| g <= filter) {
        return Ok(None);
    }
    let mut points = Vec::with_capacity(w.n() - 1);
    for k in 1..w.n() {
        match w.eigendata(k) {
            Ok(e) => points.push(e.attracting),
            Err(Error::NotProximal { .. }) => return Ok(None),
            Err(e) => return Err(e),
        }
    }
    Ok(Some(points))
}

/// Keep the first of every group of points within `MERGE_DISTANCE`.
pub fn merge_points(points: Vec<ProjectivePoint>) -> Result<Vec<ProjectivePoint>> {
    let mut kept: Vec<ProjectivePoint> = Vec::new();
    for p in points {
        let mut duplicate = false;
        for q in &kept {
            if proj_distance(&p, q)? <= MERGE_DISTANCE {
                duplicate = true;
                break;
            }
        }
        if !duplicate {
            kept.push(p);
        }
    }
    Ok(kept)
}

/// Forward side samples Λ_Γ; the backward side samples Λ_{Γ⁻¹} through the
/// inverted alphabet.
pub fn estimate_limit_set(sampler: &WordSampler, side: Side, filter: f64) -> Result<LimitSetSample> {
    let sampler = match side {
        Side::Forward => sampler.clone(),
        Side::Backward => WordSampler {
            letters: sampler.letters.inverted()?,
            ..sampler.clone()
        },
    };
    let n = sampler.letters.n();
    let mut clouds: Vec<Vec<ProjectivePoint>> = vec![Vec::new(); n - 1];
    for w in sampler.enumerate()? {
        if let Some(points) = proximal_everywhere(&w, filter)? {
            for (cloud, p) in clouds.iter_mut().zip(points) {
                cloud.push(p);
            }
        }
    }
    if clouds[0].is_empty() {
        return Err(Error::DegenerateSample("no sampled word passes the proximality filter".into()));
    }
    let points = clouds.into_iter().map(merge_points).collect::<Result<Vec<_>>>()?;
    Ok(LimitSetSample {
        side,
        depth: sampler.max_length,
        points,
    })
}

/// Images of a degree-k cloud under each letter.
pub fn letter_images(letters: &LetterSet, cloud: &[ProjectivePoint], k: usize) -> Result<Vec<ProjectivePoint>> {
    let mut out = Vec::with_capacity(cloud.len() * letters.len());
    for a in 0..letters.len() {
        let m = letters.element(a).exterior(k)?;
        for p in cloud {
            out.push(p.image(&m.mat)?);
        }
    }
    Ok(out)
}

/// Largest Hausdorff distance, over degrees, between the letter images of
/// `sample` and `reference`.
pub fn invariance_defect(letters: &LetterSet, sample: &LimitSetSample, reference: &LimitSetSample) -> Result<f64> {
    let mut worst = 0.0f64;
    for k in 1..letters.n() {
        let images = letter_images(letters, sample.degree(k), k)?;
        worst = worst.max(hausdorff_distance(&images, reference.degree(k))?);
    }
    Ok(worst)
}

/// Largest per-degree Hausdorff distance between two samples.
pub fn sample_distance(a: &LimitSetSample, b: &LimitSetSample) -> Result<f64> {
    if a.points.len() != b.points.len() {
        return Err(Error::DimensionMismatch("samples of different rank".into()));
    }
    let mut worst = 0.0f64;
    for (p, q) in a.points.iter().zip(&b.points) {
        worst = worst.max(hausdorff_distance(p, q)?);
    }
    Ok(worst)
}

/// Attracting flags of w (forward) and of w⁻¹ (backward), as the points
/// x⁺ of Λ^k w and Λ^k w⁻¹.
#[derive(Debug, Clone)]
pub struct FacetPair {
    pub word: Vec<usize>,
    pub forward: Vec<ProjectivePoint>,
    pub backward: Vec<ProjectivePoint>,
    pub general_position: bool,
}

/// Whether the flags are transverse: x⁺_k(forward) ∧ x⁺_{n−k}(backward)
/// exceeds `tolerance` in absolute value for every k.
pub fn general_position(forward: &[ProjectivePoint], backward: &[ProjectivePoint], tolerance: f64) -> Result<bool> {
    let n = forward.len() + 1;
    if backward.len() != forward.len() {
        return Err(Error::DimensionMismatch("flags of different length".into()));
    }
    for k in 1..n {
        let pairing = wedge_pairing(n, forward[k - 1].rep(), backward[n - k - 1].rep())?;
        if pairing.abs() <= tolerance {
            return Ok(false);
        }
    }
    Ok(true)
}

fn facet_of(letters: &LetterSet, w: &WordProduct, filter: f64) -> Result<Option<FacetPair>> {
    let Some(forward) = proximal_everywhere(w, filter)? else {
        return Ok(None);
    };
    let inverse = letters.inverse_product(&w.word)?;
    let Some(backward) = proximal_everywhere(&inverse, filter)? else {
        return Ok(None);
    };
    let general_position = general_position(&forward, &backward, filter)?;
    Ok(Some(FacetPair {
        word: w.word.clone(),
        forward,
        backward,
        general_position,
    }))
}

/// One facet pair per sampled word proximal in every degree, as is its
/// inverse.
pub fn estimate_facets(sampler: &WordSampler, filter: f64) -> Result<Vec<FacetPair>> {
    let mut out = Vec::new();
    for w in sampler.enumerate()? {
        if let Some(f) = facet_of(&sampler.letters, &w, filter)? {
            out.push(f);
        }
    }
    if out.is_empty() {
        return Err(Error::DegenerateSample("no sampled word passes the proximality filter".into()));
    }
    Ok(out)
}

fn flag_distance(a: &[ProjectivePoint], b: &[ProjectivePoint]) -> Result<f64> {
    let mut worst = 0.0f64;
    for (p, q) in a.iter().zip(b) {
        worst = worst.max(proj_distance(p, q)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct DensityWitness {
    pub power: u64,
    pub letter: usize,
    pub distance: f64,
}

/// Searches w₁^r h w₂^r for r ≤ `max_power` and letters h for a facet within
/// `tolerance` of (forward flag of w₁, backward flag of w₂). `None` means no
/// witness at this depth, not a refutation.
pub fn density_witness(
    letters: &LetterSet,
    first: &[usize],
    second: &[usize],
    max_power: u64,
    tolerance: f64,
    filter: f64,
) -> Result<Option<DensityWitness>> {
    let Some(target_forward) = proximal_everywhere(&letters.product(first)?, filter)? else {
        return Ok(None);
    };
    let Some(target_backward) = proximal_everywhere(&letters.inverse_product(second)?, filter)? else {
        return Ok(None);
    };
    let mut best: Option<DensityWitness> = None;
    for r in 1..=max_power {
        for h in 0..letters.len() {
            if letters.kind() == Kind::Group
                && (letters.inverse(*first.last().expect("nonempty")) == Some(h) || letters.inverse(h) == Some(second[0]))
            {
                continue;
            }
            let mut word = first.repeat(r as usize);
            word.push(h);
            word.extend(second.repeat(r as usize));
            let candidate = letters.product(&word)?;
            let Some(facet) = facet_of(letters, &candidate, filter)? else {
                continue;
            };
            let distance = flag_distance(&facet.forward, &target_forward)?.max(flag_distance(&facet.backward, &target_backward)?);
            if best.as_ref().is_none_or(|b| distance < b.distance) {
                best = Some(DensityWitness { power: r, letter: h, distance });
            }
            if distance <= tolerance {
                return Ok(best);
            }
        }
    }
    Ok(None)
}
