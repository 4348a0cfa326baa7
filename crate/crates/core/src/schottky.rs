//! Schottky systems: verification, the word Lyapunov estimate, the open
//! semigroups attached to a facet frame, and forging systems with a
//! prescribed limit cone.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull;
use crate::linalg::{self, ScaledMatrix};
use crate::projections::{jordan_projection, opposition_involution, ChamberVector};
use crate::projgeom::{gap, proj_distance, GroupElement, ProjectivePoint, Representation};
use crate::proximality::{certify_matrix, check_contraction, eigendata, CheckOptions, Contraction, ProximalityCertificate};
use crate::rng;
use crate::words::{Kind, LetterSet, Reduction, WordSampler};

/// Separation constant between attracting points and repelling hyperplanes.
pub const SEPARATION_FACTOR: f64 = 6.0;
pub const DEFAULT_MAX_POWER: u64 = 1 << 20;
const ROTATION_ATTEMPTS: usize = 100;
const FRAME_CONDITION_LIMIT: f64 = 1e6;

/// JSON layout of a generating set: `{generators: [matrix], kind, epsilons}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemDoc {
    pub generators: Vec<GroupElement>,
    pub kind: Kind,
    pub epsilons: Vec<f64>,
}

/// gap(x⁺_g, X^<_h) for all letters g, h, one matrix per degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Separation {
    pub by_degree: Vec<DMatrix<f64>>,
}

impl Separation {
    pub fn min_over_degrees(&self, g: usize, h: usize) -> (usize, f64) {
        self.by_degree
            .iter()
            .enumerate()
            .map(|(i, m)| (i + 1, m[(g, h)]))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best })
    }
}

/// Separation data of a letter set; available whenever every letter is
/// proximal in every degree, certified or not.
pub fn separation_matrix(letters: &LetterSet) -> Result<Separation> {
    let n = letters.n();
    let count = letters.len();
    let mut points: Vec<Vec<crate::proximality::Eigendata>> = Vec::with_capacity(count);
    for a in 0..count {
        let data = (1..n)
            .map(|k| {
                letters
                    .element(a)
                    .exterior(k)
                    .and_then(|m| eigendata(&m))
                    .map_err(|e| e.at_degree(k).at_element(a))
            })
            .collect::<Result<Vec<_>>>()?;
        points.push(data);
    }
    let by_degree = (0..n - 1)
        .map(|d| {
            let mut m = DMatrix::zeros(count, count);
            for g in 0..count {
                for h in 0..count {
                    m[(g, h)] = gap(&points[g][d].attracting, &points[h][d].repelling)?;
                }
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Separation { by_degree })
}

/// A certified Schottky system.
#[derive(Debug, Clone)]
pub struct SchottkySystem {
    letters: LetterSet,
    epsilons: Vec<f64>,
    certificates: Vec<Vec<ProximalityCertificate>>,
    separation: Separation,
}

impl SchottkySystem {
    pub fn letters(&self) -> &LetterSet {
        &self.letters
    }

    pub fn kind(&self) -> Kind {
        self.letters.kind()
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.letters.generators()
    }

    /// ε per letter; an inverse shares the value of its generator.
    pub fn epsilons(&self) -> &[f64] {
        &self.epsilons
    }

    /// Certificates indexed by letter, then degree − 1.
    pub fn certificates(&self) -> &[Vec<ProximalityCertificate>] {
        &self.certificates
    }

    pub fn separation(&self) -> &Separation {
        &self.separation
    }

    pub fn to_doc(&self) -> SystemDoc {
        SystemDoc {
            generators: self.generators(),
            kind: self.kind(),
            epsilons: self.epsilons[..self.letters.generator_count()].to_vec(),
        }
    }
}

impl AsRef<LetterSet> for SchottkySystem {
    fn as_ref(&self) -> &LetterSet {
        &self.letters
    }
}

/// Certify that the generators form a Schottky system: every letter is
/// ε-proximal in every degree and every pair of letters other than (g, g⁻¹)
/// meets the separation bound. Eigendata and separation are checked before
/// contraction, so a misaligned system is reported as such.
pub fn verify_schottky(
    generators: &[GroupElement],
    kind: Kind,
    epsilons: &[f64],
    options: &CheckOptions,
) -> Result<SchottkySystem> {
    if generators.len() < 2 {
        return Err(Error::TooFewGenerators(generators.len()));
    }
    if epsilons.len() != generators.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} epsilons for {} generators",
            epsilons.len(),
            generators.len()
        )));
    }
    if let Some(e) = epsilons.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        return Err(Error::InvalidInput(format!("epsilon {e} outside (0, 1)")));
    }
    let letters = LetterSet::new(generators, kind)?;
    let epsilons: Vec<f64> = (0..letters.len()).map(|a| epsilons[a % generators.len()]).collect();
    let separation = separation_matrix(&letters)?;
    for g in 0..letters.len() {
        for h in 0..letters.len() {
            if letters.inverse(g) == Some(h) {
                continue;
            }
            let (degree, value) = separation.min_over_degrees(g, h);
            let required = SEPARATION_FACTOR * epsilons[g].max(epsilons[h]);
            if value < required {
                return Err(Error::SeparationViolated {
                    first: g,
                    second: h,
                    degree,
                    gap: value,
                    required,
                });
            }
        }
    }
    let n = letters.n();
    let certificates = (0..letters.len())
        .map(|a| {
            (1..n)
                .map(|k| {
                    let rep = Representation::new(n, k)?;
                    certify_matrix(&letters.element(a).exterior(k)?, rep, epsilons[a], options)
                        .map_err(|e| e.at_degree(k).at_element(a))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SchottkySystem {
        letters,
        epsilons,
        certificates,
        separation,
    })
}

/// λ of a word and its deviation from the sum of its letters' λ.
#[derive(Debug, Clone, PartialEq)]
pub struct WordEstimate {
    pub lambda: ChamberVector,
    pub discrepancy: Vec<f64>,
    pub length: u64,
}

impl WordEstimate {
    pub fn sup_discrepancy(&self) -> f64 {
        self.discrepancy.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn per_letter(&self) -> f64 {
        self.sup_discrepancy() / self.length as f64
    }
}

/// λ(w) − Σ n_j λ(g_j) for w = g_{a₁}^{n₁} ⋯ g_{a_l}^{n_l}; group words must
/// be very reduced.
pub fn word_lyapunov_estimate(system: impl AsRef<LetterSet>, word: &[(usize, u64)]) -> Result<WordEstimate> {
    let letters = system.as_ref();
    if word.is_empty() {
        return Err(Error::EmptyInput("empty word".into()));
    }
    if word.iter().any(|&(_, m)| m == 0) {
        return Err(Error::InvalidInput("exponents must be positive".into()));
    }
    let syllables: Vec<usize> = word.iter().map(|&(a, _)| a).collect();
    if syllables.iter().any(|&a| a >= letters.len()) {
        return Err(Error::InvalidInput("letter outside the alphabet".into()));
    }
    if let Some(position) = letters.reduction_defect(&syllables, Reduction::VeryReduced) {
        return Err(Error::NotReduced { position });
    }
    let product = letters.syllable_product(word)?;
    let lambda = product.lambda()?;
    let mut expected = vec![0.0; letters.n()];
    for &(a, m) in word {
        for (e, x) in expected.iter_mut().zip(letters.lambda(a).coords()) {
            *e += m as f64 * x;
        }
    }
    let discrepancy = lambda.coords().iter().zip(&expected).map(|(l, e)| l - e).collect();
    Ok(WordEstimate {
        lambda,
        discrepancy,
        length: product.length,
    })
}

/// A reference flag h·(standard flag), with the point x⁺_k = Λ^k h e_{1…k}
/// and the hyperplane Λ^k h (span of the other basis vectors) per degree.
#[derive(Debug, Clone)]
pub struct FacetFrame {
    frame: DMatrix<f64>,
    points: Vec<DVector<f64>>,
    covectors: Vec<DVector<f64>>,
    gaps: Vec<f64>,
}

impl FacetFrame {
    pub fn new(frame: DMatrix<f64>) -> Result<Self> {
        let n = frame.nrows();
        if n < 2 || frame.ncols() != n {
            return Err(Error::DimensionMismatch("frame must be square with n ≥ 2".into()));
        }
        let sv = linalg::singular_values(&frame)?;
        let condition = sv[0] / sv[n - 1];
        if !(condition <= FRAME_CONDITION_LIMIT) {
            return Err(Error::InvalidInput(format!("frame condition number {condition:.3e} exceeds 1e6")));
        }
        let mut points = Vec::new();
        let mut covectors = Vec::new();
        let mut gaps = Vec::new();
        for k in 1..n {
            let c = linalg::compound(&frame, k);
            let x = c.column(0).normalize();
            let mut e = DVector::zeros(c.nrows());
            e[0] = 1.0;
            let phi = c
                .transpose()
                .lu()
                .solve(&e)
                .ok_or_else(|| Error::NumericalFailure("frame compound is singular".into()))?
                .normalize();
            gaps.push(phi.dot(&x).abs());
            points.push(x);
            covectors.push(phi);
        }
        Ok(Self {
            frame,
            points,
            covectors,
            gaps,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity frame is valid")
    }

    pub fn frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    pub fn n(&self) -> usize {
        self.frame.nrows()
    }

    pub fn point(&self, k: usize) -> &DVector<f64> {
        &self.points[k - 1]
    }

    pub fn covector(&self, k: usize) -> &DVector<f64> {
        &self.covectors[k - 1]
    }

    /// ε_f: a tenth of the smallest point–hyperplane gap.
    pub fn epsilon_limit(&self) -> f64 {
        0.1 * self.gaps.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Per-degree evidence for membership in G^ε_f.
#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub accepted: bool,
    pub per_degree: Vec<Contraction>,
}

/// Whether every Λ^k g maps B^ε_{k,f} into b^ε_{k,f} and is ε-Lipschitz there.
pub fn in_open_semigroup(g: &GroupElement, f: &FacetFrame, epsilon: f64, options: &CheckOptions) -> Result<Membership> {
    let limit = f.epsilon_limit();
    if g.n() != f.n() {
        return Err(Error::DimensionMismatch(format!("element of size {} for frame of size {}", g.n(), f.n())));
    }
    if !(epsilon > 0.0 && epsilon < limit) {
        return Err(Error::EpsilonTooLarge { epsilon, limit });
    }
    let per_degree = (1..g.n())
        .map(|k| {
            let m = g.exterior(k)?;
            Ok(check_contraction(&m.mat, f.point(k), f.covector(k), epsilon, options))
        })
        .collect::<Result<Vec<_>>>()?;
    if per_degree.iter().any(|c| matches!(c, Contraction::Refuted { .. })) {
        return Ok(Membership {
            accepted: false,
            per_degree,
        });
    }
    if let Some((i, Contraction::Inconclusive { reason })) = per_degree
        .iter()
        .enumerate()
        .find(|(_, c)| matches!(c, Contraction::Inconclusive { .. }))
    {
        return Err(Error::ContractionUnverified {
            element: None,
            degree: i + 1,
            reason: reason.clone(),
        });
    }
    Ok(Membership {
        accepted: true,
        per_degree,
    })
}

/// A polyhedral cone Ω ⊂ 𝔞⁺ given by unit rays, with the shrink parameter
/// defining Ω_margin = {v : v + B(0, margin·‖v‖) ⊂ Ω}.
#[derive(Debug, Clone)]
pub struct TargetCone {
    rays: Vec<ChamberVector>,
    coords: Vec<DVector<f64>>,
    facets: Option<Vec<DVector<f64>>>,
    pub margin: f64,
}

impl TargetCone {
    pub fn new(rays: Vec<Vec<f64>>, margin: f64) -> Result<Self> {
        if rays.is_empty() {
            return Err(Error::EmptyInput("cone needs at least one ray".into()));
        }
        if !(0.0..1.0).contains(&margin) {
            return Err(Error::InvalidInput(format!("margin {margin} outside [0, 1)")));
        }
        let mut units = Vec::with_capacity(rays.len());
        for (i, r) in rays.into_iter().enumerate() {
            let norm = r.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) {
                return Err(Error::RayNotInChamber(i));
            }
            let unit = ChamberVector::new(r.iter().map(|x| x / norm).collect()).map_err(|_| Error::RayNotInChamber(i))?;
            if unit.n() != units.first().map_or(unit.n(), |u: &ChamberVector| u.n()) {
                return Err(Error::DimensionMismatch("rays of different lengths".into()));
            }
            let duplicate = units.iter().any(|u: &ChamberVector| {
                linalg::angle_between(&u.to_dvector(), &unit.to_dvector()) < hull::DUPLICATE_ANGLE
            });
            if duplicate {
                return Err(Error::InvalidInput(format!("ray {i} repeats an earlier direction")));
            }
            units.push(unit);
        }
        let coords: Vec<DVector<f64>> = units.iter().map(|u| hull::to_coords(&u.to_dvector())).collect();
        let facets = hull::cone_facets(&coords);
        Ok(Self {
            rays: units,
            coords,
            facets,
            margin,
        })
    }

    pub fn rays(&self) -> &[ChamberVector] {
        &self.rays
    }

    pub fn n(&self) -> usize {
        self.rays[0].n()
    }

    /// Angle in radians from `v` to Ω.
    pub fn angle_to(&self, v: &ChamberVector) -> f64 {
        hull::angle_to_cone(&self.coords, &hull::to_coords(&v.to_dvector()))
    }

    pub fn contains(&self, v: &ChamberVector, tolerance: f64) -> bool {
        hull::in_cone(&self.coords, &hull::to_coords(&v.to_dvector()), tolerance)
    }

    /// Signed relative depth min_i <a_i, v>/‖v‖ over unit inward facet
    /// normals; `None` if Ω has empty interior.
    pub fn depth(&self, v: &ChamberVector) -> Option<f64> {
        let c = hull::to_coords(&v.to_dvector());
        let norm = c.norm();
        let facets = self.facets.as_ref()?;
        if norm == 0.0 {
            return Some(0.0);
        }
        Some(facets.iter().map(|a| a.dot(&c) / norm).fold(f64::INFINITY, f64::min))
    }

    pub fn contains_with_margin(&self, v: &ChamberVector) -> bool {
        if self.margin == 0.0 {
            return self.contains(v, 1e-9);
        }
        self.depth(v).is_some_and(|d| d >= self.margin)
    }

    /// Index of the first ray whose image under ι leaves the cone.
    pub fn involution_defect(&self, tolerance: f64) -> Option<usize> {
        self.rays
            .iter()
            .position(|r| !self.contains(&opposition_involution(r), tolerance))
    }
}

/// `in_open_semigroup` together with λ(g) ∈ Ω_margin.
pub fn in_cone_semigroup(
    g: &GroupElement,
    f: &FacetFrame,
    epsilon: f64,
    cone: &TargetCone,
    options: &CheckOptions,
) -> Result<bool> {
    if !in_open_semigroup(g, f, epsilon, options)?.accepted {
        return Ok(false);
    }
    Ok(cone.contains_with_margin(&jordan_projection(g)?))
}

/// Checkable stand-ins for Zariski density.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DensityProxies {
    pub regular: bool,
    pub non_commuting: bool,
    pub distinct_flags: bool,
}

#[derive(Debug, Clone)]
pub struct ForgeReport {
    pub system: SchottkySystem,
    /// Exponent m_j applied to each base generator.
    pub powers: Vec<u64>,
    /// Largest angle (degrees) by which a sampled word direction leaves the
    /// target cone; zero when all lie inside.
    pub direction_slack_deg: f64,
    /// Smallest relative facet depth of a sampled direction, if Ω is full.
    pub direction_margin: Option<f64>,
    pub proxies: DensityProxies,
}

#[derive(Debug, Clone, Copy)]
pub struct ForgeOptions {
    pub epsilon: f64,
    pub seed: u64,
    pub max_power: u64,
    pub check: CheckOptions,
    /// Word length used to sample directions for the report.
    pub sample_depth: usize,
}

impl ForgeOptions {
    pub fn new(epsilon: f64, seed: u64) -> Self {
        Self {
            epsilon,
            seed,
            max_power: DEFAULT_MAX_POWER,
            check: CheckOptions {
                seed,
                ..CheckOptions::default()
            },
            sample_depth: 6,
        }
    }
}

/// Build γ_j = k_j · exp(m_j τ_j u_j) · k_j⁻¹ on the rays of `cone`.
pub fn forge_semigroup(n: usize, cone: &TargetCone, options: &ForgeOptions) -> Result<ForgeReport> {
    forge(n, cone, options, Kind::Semigroup)
}

/// As `forge_semigroup`, producing a group; Ω must be ι-stable.
pub fn forge_group(n: usize, cone: &TargetCone, options: &ForgeOptions) -> Result<ForgeReport> {
    if let Some(ray) = cone.involution_defect(1e-9) {
        return Err(Error::ConeNotInvolutionStable { ray });
    }
    forge(n, cone, options, Kind::Group)
}

fn forge(n: usize, cone: &TargetCone, options: &ForgeOptions, kind: Kind) -> Result<ForgeReport> {
    if cone.n() != n {
        return Err(Error::DimensionMismatch(format!("rays of length {} for n = {n}", cone.n())));
    }
    let epsilon = options.epsilon;
    if !(epsilon > 0.0 && epsilon < 1.0 / SEPARATION_FACTOR) {
        return Err(Error::InvalidInput(format!("epsilon {epsilon} outside (0, 1/6)")));
    }
    let mut rays: Vec<ChamberVector> = cone.rays().to_vec();
    for (i, r) in rays.iter().enumerate() {
        if crate::projections::gaps_of(r).iter().any(|&g| g <= 1e-9) {
            return Err(Error::RayNotInChamber(i));
        }
    }
    if rays.len() == 1 {
        rays.push(perturbed(&rays[0], options.seed)?);
    }
    // τ_j normalizes every ray so that its smallest root value is 1.
    let scales: Vec<f64> = rays
        .iter()
        .map(|r| 1.0 / crate::projections::gaps_of(r).into_iter().fold(f64::INFINITY, f64::min))
        .collect();
    let rotations = general_position_rotations(n, &rays, &scales, kind, epsilon, options.seed)?;
    let build = |j: usize, m: u64| -> Result<GroupElement> {
        let logs: Vec<f64> = rays[j].coords().iter().map(|x| x * scales[j] * m as f64).collect();
        GroupElement::conjugated_diagonal(&rotations[j], logs)
    };
    let mut powers = vec![1u64; rays.len()];
    for j in 0..rays.len() {
        loop {
            let g = build(j, powers[j]);
            let certified = match &g {
                Ok(g) => certifies(g, kind, epsilon, &options.check)?,
                Err(Error::NumericalFailure(_)) => false,
                Err(e) => return Err(e.clone()),
            };
            if certified {
                break;
            }
            if g.is_err() || powers[j] >= options.max_power {
                return Err(Error::MaxPowerExceeded {
                    generator: j,
                    max_power: options.max_power,
                });
            }
            powers[j] = (powers[j] * 2).min(options.max_power);
        }
    }
    let generators = (0..rays.len()).map(|j| build(j, powers[j])).collect::<Result<Vec<_>>>()?;
    let system = verify_schottky(&generators, kind, &vec![epsilon; generators.len()], &options.check)?;
    let (direction_slack_deg, direction_margin) = direction_report(&system, cone, options.sample_depth)?;
    let proxies = density_proxies(&system)?;
    Ok(ForgeReport {
        system,
        powers,
        direction_slack_deg,
        direction_margin,
        proxies,
    })
}

fn perturbed(ray: &ChamberVector, seed: u64) -> Result<ChamberVector> {
    let mut rng = rng::stream(seed, "perturb", 0);
    let basis = linalg::zero_sum_basis(ray.n());
    for _ in 0..100 {
        let noise = &basis * rng::gaussian_matrix(&mut rng, ray.n() - 1, 1).column(0);
        let candidate = ray.to_dvector() + noise * 1e-3;
        let sorted = candidate.iter().copied().collect::<Vec<_>>();
        if sorted.windows(2).all(|w| w[0] > w[1]) {
            return ChamberVector::new(sorted.iter().map(|x| x / candidate.norm()).collect());
        }
    }
    Ok(ray.clone())
}

fn certifies(g: &GroupElement, kind: Kind, epsilon: f64, options: &CheckOptions) -> Result<bool> {
    let mut elements = vec![g.clone()];
    if kind == Kind::Group {
        elements.push(g.inverse()?);
    }
    for e in &elements {
        for k in 1..g.n() {
            let rep = Representation::new(g.n(), k)?;
            match certify_matrix(&e.exterior(k)?, rep, epsilon, options) {
                Ok(_) => {}
                Err(Error::ContractionUnverified { .. } | Error::ContractionViolated { .. }) => return Ok(false),
                Err(Error::SeparationViolated { .. } | Error::NotProximal { .. }) => return Ok(false),
                Err(other) => return Err(other),
            }
        }
    }
    Ok(true)
}

// Attracting points and repelling hyperplanes of k·exp(D)·k⁻¹ do not depend
// on the power, so general position is decided once on the rotations.
fn general_position_rotations(
    n: usize,
    rays: &[ChamberVector],
    scales: &[f64],
    kind: Kind,
    epsilon: f64,
    seed: u64,
) -> Result<Vec<DMatrix<f64>>> {
    let mut rng = rng::stream(seed, "rotations", n as u64);
    for _ in 0..ROTATION_ATTEMPTS {
        let rotations: Vec<DMatrix<f64>> = rays.iter().map(|_| rng::haar_rotation(&mut rng, n)).collect();
        let generators = rotations
            .iter()
            .zip(rays.iter().zip(scales))
            .map(|(k, (r, s))| GroupElement::conjugated_diagonal(k, r.coords().iter().map(|x| x * s).collect()))
            .collect::<Result<Vec<_>>>()?;
        let letters = LetterSet::new(&generators, kind)?;
        let separation = separation_matrix(&letters)?;
        let ok = (0..letters.len()).all(|g| {
            (0..letters.len()).all(|h| {
                letters.inverse(g) == Some(h) || separation.min_over_degrees(g, h).1 >= SEPARATION_FACTOR * epsilon
            })
        });
        if ok {
            return Ok(rotations);
        }
    }
    Err(Error::SeparationUnachievable {
        attempts: ROTATION_ATTEMPTS,
    })
}

fn direction_report(system: &SchottkySystem, cone: &TargetCone, depth: usize) -> Result<(f64, Option<f64>)> {
    let words = WordSampler::exhaustive(system.letters().clone(), depth).enumerate()?;
    let mut slack = 0.0f64;
    let mut margin: Option<f64> = None;
    for w in &words {
        let lambda = w.lambda()?;
        if lambda.norm() == 0.0 {
            continue;
        }
        slack = slack.max(cone.angle_to(&lambda).to_degrees());
        if let Some(d) = cone.depth(&lambda) {
            margin = Some(margin.map_or(d, |m| m.min(d)));
        }
    }
    Ok((slack, margin))
}

fn density_proxies(system: &SchottkySystem) -> Result<DensityProxies> {
    let letters = system.letters();
    let t = letters.generator_count();
    let regular = (0..t).all(|a| crate::projections::gaps_of(letters.lambda(a)).iter().all(|&g| g > 0.0));
    let mut non_commuting = true;
    for i in 0..t {
        for j in (i + 1)..t {
            let a: ScaledMatrix = letters.element(i).exterior(1)?;
            let b: ScaledMatrix = letters.element(j).exterior(1)?;
            let commutator = (&a.mat * &b.mat - &b.mat * &a.mat).norm();
            non_commuting &= commutator > 1e-6;
        }
    }
    let certs = system.certificates();
    let mut distinct_flags = true;
    for i in 0..letters.len() {
        for j in (i + 1)..letters.len() {
            let far = certs[i]
                .iter()
                .zip(&certs[j])
                .map(|(a, b)| proj_distance(&a.attracting, &b.attracting))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            distinct_flags &= far > 1e-6;
        }
    }
    Ok(DensityProxies {
        regular,
        non_commuting,
        distinct_flags,
    })
}

/// The attracting point of a certified letter at degree k.
pub fn attracting_point(system: &SchottkySystem, letter: usize, k: usize) -> &ProjectivePoint {
    &system.certificates()[letter][k - 1].attracting
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn conjugate(g: &GroupElement, theta: f64) -> GroupElement {
        let r = GroupElement::rotation(theta);
        r.mul(g).unwrap().mul(&r.inverse().unwrap()).unwrap()
    }

    fn squared_pair() -> Vec<GroupElement> {
        let g1 = GroupElement::diagonal(&[100.0, 0.01]).unwrap();
        vec![g1.clone(), conjugate(&g1, FRAC_PI_4)]
    }

    #[test]
    fn squared_pair_certifies() {
        let sys = verify_schottky(&squared_pair(), Kind::Semigroup, &[0.1, 0.1], &CheckOptions::default()).unwrap();
        // Oracle: x⁺ of γ₂ is (1, 1)/√2 and X^< of γ₁ is ker e₁*, so the gap is 1/√2.
        let s = &sys.separation().by_degree[0];
        assert!((s[(1, 0)] - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((s[(0, 1)] - 0.5f64.sqrt()).abs() < 1e-12);
        assert!((s[(0, 0)] - 1.0).abs() < 1e-12);
        assert_eq!(sys.certificates().len(), 2);
    }

    #[test]
    fn aligned_pair_has_zero_gap() {
        let g1 = GroupElement::diagonal(&[10.0, 0.1]).unwrap();
        let gens = vec![g1.clone(), conjugate(&g1, FRAC_PI_2)];
        match verify_schottky(&gens, Kind::Semigroup, &[0.1, 0.1], &CheckOptions::default()) {
            Err(Error::SeparationViolated { gap, .. }) => assert!(gap < 1e-12),
            other => panic!("expected separation failure, got {other:?}"),
        }
        assert!(matches!(
            verify_schottky(&gens[..1], Kind::Semigroup, &[0.1], &CheckOptions::default()),
            Err(Error::TooFewGenerators(1))
        ));
    }

    #[test]
    fn group_exempts_only_inverse_pairs() {
        let sys = verify_schottky(&squared_pair(), Kind::Group, &[0.1, 0.1], &CheckOptions::default()).unwrap();
        let letters = sys.letters();
        assert_eq!(letters.len(), 4);
        let s = &sys.separation().by_degree[0];
        for g in 0..4 {
            let h = letters.inverse(g).unwrap();
            assert_eq!(letters.inverse(h), Some(g));
            // x⁺_g lies on X^<_{g⁻¹} for a diagonalizable g.
            assert!(s[(g, h)] < 1e-12);
        }
    }

    #[test]
    fn word_estimates() {
        let g1 = GroupElement::diagonal(&[10.0, 0.1]).unwrap();
        let letters = LetterSet::new(&[g1.clone(), conjugate(&g1, FRAC_PI_4)], Kind::Semigroup).unwrap();
        let single = word_lyapunov_estimate(&letters, &[(0, 5)]).unwrap();
        assert!(single.sup_discrepancy() < 1e-6);
        let pair = word_lyapunov_estimate(&letters, &[(0, 1), (1, 1)]).unwrap();
        // Oracle: λ₁(γ₁γ₂) from trace 51.005, against 2 log 10.
        let t: f64 = 51.005;
        let expect = ((t + (t * t - 4.0).sqrt()) / 2.0).ln() - 2.0 * 10f64.ln();
        assert!((pair.discrepancy[0] - expect).abs() < 1e-10);
        assert!((pair.discrepancy[0] + 0.67363).abs() < 1e-5);
        let squares = word_lyapunov_estimate(&letters, &[(0, 2), (1, 2)]).unwrap();
        assert!(squares.sup_discrepancy() <= 2.0 * pair.sup_discrepancy());

        let group = LetterSet::new(&letters.generators(), Kind::Group).unwrap();
        assert!(matches!(
            word_lyapunov_estimate(&group, &[(0, 1), (2, 1)]),
            Err(Error::NotReduced { position: 1 })
        ));
        assert!(matches!(
            word_lyapunov_estimate(&group, &[(0, 1), (1, 1), (2, 1)]),
            Err(Error::NotReduced { position: 3 })
        ));
    }

    #[test]
    fn facet_frames() {
        let f = FacetFrame::identity(3);
        assert!((f.epsilon_limit() - 0.1).abs() < 1e-15);
        assert!(FacetFrame::new(DMatrix::from_diagonal(&DVector::from_vec(vec![1e4, 1.0, 1e-4]))).is_err());
        let rot = crate::rng::haar_rotation(&mut crate::rng::stream(1, "frame", 0), 3);
        let f = FacetFrame::new(rot.clone()).unwrap();
        assert!((f.point(1) - rot.column(0)).norm() < 1e-12 || (f.point(1) + rot.column(0)).norm() < 1e-12);
    }

    #[test]
    fn open_semigroup_membership() {
        let f = FacetFrame::identity(3);
        let opts = CheckOptions::default();
        let strong = GroupElement::diagonal(&[1e4, 1.0, 1e-4]).unwrap();
        assert!(in_open_semigroup(&strong, &f, 0.05, &opts).unwrap().accepted);
        let rot = GroupElement::from_rows(&[&[0.0, -1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]).unwrap();
        assert!(!in_open_semigroup(&rot, &f, 0.05, &opts).unwrap().accepted);
        assert!(matches!(
            in_open_semigroup(&strong, &f, 0.1, &opts),
            Err(Error::EpsilonTooLarge { .. })
        ));
        let product = strong.mul(&strong).unwrap();
        assert!(in_open_semigroup(&product, &f, 0.05, &opts).unwrap().accepted);
    }

    #[test]
    fn cone_membership_with_margin() {
        let u1 = vec![2.0, -0.5, -1.5];
        let u2 = vec![1.5, 0.5, -2.0];
        let cone = TargetCone::new(vec![u1.clone(), u2.clone()], 0.05).unwrap();
        let inside = ChamberVector::new(vec![3.5, 0.0, -3.5]).unwrap();
        let outside = ChamberVector::new(vec![2.0, 1.0, -3.0]).unwrap();
        assert!(cone.contains_with_margin(&inside));
        assert!(!cone.contains_with_margin(&outside));
        assert!(!cone.contains_with_margin(&ChamberVector::new(u1.clone()).unwrap()));
        assert!(matches!(
            TargetCone::new(vec![vec![0.0, 0.0, 0.0]], 0.0),
            Err(Error::RayNotInChamber(0))
        ));
        let f = FacetFrame::identity(3);
        let g = GroupElement::diagonal(&[(10.0f64).exp(), 1.0, (-10.0f64).exp()]).unwrap();
        let opts = CheckOptions::default();
        assert!(in_cone_semigroup(&g, &f, 0.05, &cone, &opts).unwrap());
        let h = GroupElement::diagonal(&[(20.0f64).exp(), (10.0f64).exp(), (-30.0f64).exp()]).unwrap();
        assert!(in_open_semigroup(&h, &f, 0.05, &opts).unwrap().accepted);
        assert!(!in_cone_semigroup(&h, &f, 0.05, &cone, &opts).unwrap());
        assert!(in_cone_semigroup(&g.mul(&g).unwrap(), &f, 0.05, &cone, &opts).unwrap());
    }

    #[test]
    fn involution_stability() {
        let u = vec![2.0, -0.5, -1.5];
        let symmetric = TargetCone::new(vec![u.clone(), vec![1.5, 0.5, -2.0]], 0.0).unwrap();
        assert_eq!(symmetric.involution_defect(1e-9), None);
        let single = TargetCone::new(vec![u], 0.0).unwrap();
        let err = forge_group(3, &single, &ForgeOptions::new(0.05, 0)).unwrap_err();
        assert!(matches!(err, Error::ConeNotInvolutionStable { ray: 0 }));
    }

    #[test]
    fn forged_semigroup_follows_its_rays() {
        let cone = TargetCone::new(vec![vec![2.0, -0.5, -1.5], vec![1.5, 0.5, -2.0]], 0.0).unwrap();
        let report = forge_semigroup(3, &cone, &ForgeOptions::new(0.05, 7)).unwrap();
        for (j, ray) in cone.rays().iter().enumerate() {
            let lambda = report.system.letters().lambda(j);
            let dir = lambda.direction().unwrap();
            assert!((dir - ray.to_dvector()).amax() < 1e-12);
        }
        assert!(report.proxies.regular && report.proxies.non_commuting && report.proxies.distinct_flags);
        assert!(report.direction_slack_deg <= 2.0);
    }

    #[test]
    fn forge_rejects_wall_rays() {
        let cone = TargetCone::new(vec![vec![1.0, 1.0, -2.0], vec![2.0, -1.0, -1.0]], 0.0).unwrap();
        assert!(matches!(
            forge_semigroup(3, &cone, &ForgeOptions::new(0.05, 0)),
            Err(Error::RayNotInChamber(0))
        ));
    }

    #[test]
    fn forged_sl2_group() {
        let cone = TargetCone::new(vec![vec![1.0, -1.0]], 0.0).unwrap();
        let report = forge_group(2, &cone, &ForgeOptions::new(0.05, 3)).unwrap();
        assert_eq!(report.system.letters().len(), 4);
        assert_eq!(report.direction_slack_deg, 0.0);
    }
}
