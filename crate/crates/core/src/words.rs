//! Words in a finite generating set and their renormalized products.
//!
//! Letters are numbered generators first, then (for groups) their inverses:
//! with t generators, letter a < t is γ_a and letter t + a is γ_a⁻¹. A word
//! (a₁, …, a_l) denotes the product g_{a₁} g_{a₂} ⋯ g_{a_l}. Every product
//! carries one renormalized exterior power per degree, so λ and μ stay
//! available long after the plain entries would overflow.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::ScaledMatrix;
use crate::projections::ChamberVector;
use crate::projgeom::{GroupElement, Representation};
use crate::proximality::{eigendata, Eigendata};
use crate::rng;

/// Maximum number of products one enumeration may form.
pub const WORD_BUDGET: u128 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Semigroup,
    Group,
}

/// Which group words are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reduction {
    /// No letter is followed by its inverse.
    Reduced,
    /// Reduced, and additionally the last letter is not the inverse of the first.
    #[default]
    VeryReduced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Exhaustive,
    Random { count: usize },
}

#[derive(Debug, Clone)]
struct Letter {
    element: GroupElement,
    compounds: Vec<ScaledMatrix>,
    inverse_compounds: Vec<ScaledMatrix>,
    lambda: ChamberVector,
}

/// The letters E_Γ of a generating set, with exterior powers precomputed.
#[derive(Debug, Clone)]
pub struct LetterSet {
    n: usize,
    kind: Kind,
    generators: usize,
    letters: Vec<Letter>,
}

impl LetterSet {
    pub fn new(generators: &[GroupElement], kind: Kind) -> Result<Self> {
        let first = generators
            .first()
            .ok_or_else(|| Error::EmptyInput("no generators".into()))?;
        let n = first.n();
        if generators.iter().any(|g| g.n() != n) {
            return Err(Error::DimensionMismatch("generators of different sizes".into()));
        }
        let mut elements: Vec<GroupElement> = generators.to_vec();
        if kind == Kind::Group {
            for g in generators {
                elements.push(g.inverse()?);
            }
        }
        let letters = elements
            .into_iter()
            .map(|element| {
                let compounds = (1..n).map(|k| element.exterior(k)).collect::<Result<Vec<_>>>()?;
                let inverse = element.inverse()?;
                let inverse_compounds = (1..n).map(|k| inverse.exterior(k)).collect::<Result<Vec<_>>>()?;
                let lambda = crate::projections::jordan_projection(&element)?;
                Ok(Letter {
                    element,
                    compounds,
                    inverse_compounds,
                    lambda,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            kind,
            generators: generators.len(),
            letters,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn element(&self, letter: usize) -> &GroupElement {
        &self.letters[letter].element
    }

    pub fn lambda(&self, letter: usize) -> &ChamberVector {
        &self.letters[letter].lambda
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        self.letters[..self.generators].iter().map(|l| l.element.clone()).collect()
    }

    /// The letter inverse to `letter`, if it belongs to the alphabet.
    pub fn inverse(&self, letter: usize) -> Option<usize> {
        match self.kind {
            Kind::Semigroup => None,
            Kind::Group => Some((letter + self.generators) % (2 * self.generators)),
        }
    }

    /// Alphabet generating the inverse semigroup (or the same group).
    pub fn inverted(&self) -> Result<Self> {
        let inverses = self.letters[..self.generators]
            .iter()
            .map(|l| l.element.inverse())
            .collect::<Result<Vec<_>>>()?;
        Self::new(&inverses, self.kind)
    }

    fn check_letter(&self, letter: usize) -> Result<()> {
        if letter >= self.len() {
            return Err(Error::InvalidInput(format!(
                "letter {letter} outside an alphabet of {}",
                self.len()
            )));
        }
        Ok(())
    }

    /// Position of the first reduction defect, if any. Position l means the
    /// cyclic pair (last, first).
    pub fn reduction_defect(&self, word: &[usize], reduction: Reduction) -> Option<usize> {
        self.kind.eq(&Kind::Group).then_some(())?;
        for i in 1..word.len() {
            if self.inverse(word[i - 1]) == Some(word[i]) {
                return Some(i);
            }
        }
        if reduction == Reduction::VeryReduced && word.len() >= 2 && self.inverse(word[word.len() - 1]) == Some(word[0])
        {
            return Some(word.len());
        }
        None
    }

    pub fn product(&self, word: &[usize]) -> Result<WordProduct> {
        let syllables: Vec<(usize, u64)> = word.iter().map(|&a| (a, 1)).collect();
        self.syllable_product(&syllables)
    }

    /// Product g_{a₁}^{m₁} ⋯ g_{a_l}^{m_l}.
    pub fn syllable_product(&self, syllables: &[(usize, u64)]) -> Result<WordProduct> {
        if syllables.is_empty() {
            return Err(Error::EmptyInput("empty word".into()));
        }
        let mut compounds: Vec<ScaledMatrix> = (1..self.n)
            .map(|k| ScaledMatrix::identity(crate::linalg::binomial(self.n, k)))
            .collect();
        for &(a, m) in syllables {
            self.check_letter(a)?;
            for (acc, c) in compounds.iter_mut().zip(&self.letters[a].compounds) {
                *acc = acc.mul(&c.pow(m)?)?;
            }
        }
        Ok(WordProduct {
            word: syllables.iter().map(|&(a, _)| a).collect(),
            length: syllables.iter().map(|&(_, m)| m).sum(),
            compounds,
        })
    }

    /// Product of the word's inverse, a_l⁻¹ ⋯ a₁⁻¹, assembled from the
    /// inverse letters directly.
    pub fn inverse_product(&self, word: &[usize]) -> Result<WordProduct> {
        if word.is_empty() {
            return Err(Error::EmptyInput("empty word".into()));
        }
        let mut compounds: Vec<ScaledMatrix> = (1..self.n)
            .map(|k| ScaledMatrix::identity(crate::linalg::binomial(self.n, k)))
            .collect();
        for &a in word.iter().rev() {
            self.check_letter(a)?;
            for (acc, c) in compounds.iter_mut().zip(&self.letters[a].inverse_compounds) {
                *acc = acc.mul(c)?;
            }
        }
        Ok(WordProduct {
            word: word.to_vec(),
            length: word.len() as u64,
            compounds,
        })
    }

    fn extend(&self, prefix: &WordProduct, letter: usize) -> Result<WordProduct> {
        let compounds = prefix
            .compounds
            .iter()
            .zip(&self.letters[letter].compounds)
            .map(|(p, c)| p.mul(c))
            .collect::<Result<Vec<_>>>()?;
        let mut word = prefix.word.clone();
        word.push(letter);
        Ok(WordProduct {
            word,
            length: prefix.length + 1,
            compounds,
        })
    }

    fn single(&self, letter: usize) -> WordProduct {
        WordProduct {
            word: vec![letter],
            length: 1,
            compounds: self.letters[letter].compounds.clone(),
        }
    }
}

impl AsRef<LetterSet> for LetterSet {
    fn as_ref(&self) -> &LetterSet {
        self
    }
}

/// A word together with its renormalized exterior powers.
#[derive(Debug, Clone)]
pub struct WordProduct {
    /// Letters, or syllable letters for products built from powers.
    pub word: Vec<usize>,
    /// Total number of letters, counting exponents.
    pub length: u64,
    compounds: Vec<ScaledMatrix>,
}

impl WordProduct {
    pub fn n(&self) -> usize {
        self.compounds.len() + 1
    }

    /// Λ^k of the product.
    pub fn degree(&self, k: usize) -> &ScaledMatrix {
        &self.compounds[k - 1]
    }

    pub fn lambda(&self) -> Result<ChamberVector> {
        let partial = self
            .compounds
            .iter()
            .map(|c| c.log_spectral_radius())
            .collect::<Result<Vec<_>>>()?;
        ChamberVector::from_partial_sums(&partial)
    }

    pub fn mu(&self) -> Result<ChamberVector> {
        let partial = self.compounds.iter().map(|c| c.log_norm()).collect::<Result<Vec<_>>>()?;
        ChamberVector::from_partial_sums(&partial)
    }

    pub fn eigendata(&self, k: usize) -> Result<Eigendata> {
        eigendata(self.degree(k)).map_err(|e| e.at_degree(k))
    }

    pub fn representation(&self, k: usize) -> Result<Representation> {
        Representation::new(self.n(), k)
    }

    /// The product as a plain matrix; fails once entries overflow.
    pub fn element(&self) -> Result<GroupElement> {
        Ok(GroupElement::from_trusted(self.compounds[0].to_matrix()?))
    }

    pub fn mul(&self, rhs: &WordProduct) -> Result<WordProduct> {
        let compounds = self
            .compounds
            .iter()
            .zip(&rhs.compounds)
            .map(|(a, b)| a.mul(b))
            .collect::<Result<Vec<_>>>()?;
        let mut word = self.word.clone();
        word.extend(&rhs.word);
        Ok(WordProduct {
            word,
            length: self.length + rhs.length,
            compounds,
        })
    }

    pub fn pow(&self, m: u64) -> Result<WordProduct> {
        let compounds = self.compounds.iter().map(|c| c.pow(m)).collect::<Result<Vec<_>>>()?;
        Ok(WordProduct {
            word: self.word.clone(),
            length: self.length * m,
            compounds,
        })
    }
}

/// Enumeration or sampling of words in a generating set.
#[derive(Debug, Clone)]
pub struct WordSampler {
    pub letters: LetterSet,
    pub max_length: usize,
    pub strategy: Strategy,
    pub seed: u64,
    pub reduction: Reduction,
}

impl WordSampler {
    pub fn exhaustive(letters: LetterSet, max_length: usize) -> Self {
        Self {
            letters,
            max_length,
            strategy: Strategy::Exhaustive,
            seed: 0,
            reduction: Reduction::default(),
        }
    }

    pub fn random(letters: LetterSet, max_length: usize, count: usize, seed: u64) -> Self {
        Self {
            letters,
            max_length,
            strategy: Strategy::Random { count },
            seed,
            reduction: Reduction::default(),
        }
    }

    pub fn with_reduction(mut self, reduction: Reduction) -> Self {
        self.reduction = reduction;
        self
    }

    pub fn with_max_length(&self, max_length: usize) -> Self {
        Self {
            max_length,
            ..self.clone()
        }
    }

    /// Number of products an exhaustive run forms (one per reduced prefix).
    pub fn exhaustive_cost(&self) -> u128 {
        let t = self.letters.len() as u128;
        let branch = match self.letters.kind() {
            Kind::Semigroup => t,
            Kind::Group => t - 1,
        };
        let mut level = t;
        let mut total = 0u128;
        for _ in 0..self.max_length {
            total = total.saturating_add(level);
            if total > WORD_BUDGET {
                return total;
            }
            level = level.saturating_mul(branch);
        }
        total
    }

    /// Words with their products: length-then-lex order when exhaustive,
    /// generation order when random.
    pub fn enumerate(&self) -> Result<Vec<WordProduct>> {
        if self.max_length == 0 {
            return Err(Error::InvalidInput("max_length must be positive".into()));
        }
        match self.strategy {
            Strategy::Exhaustive => self.enumerate_exhaustive(),
            Strategy::Random { count } => self.enumerate_random(count),
        }
    }

    fn enumerate_exhaustive(&self) -> Result<Vec<WordProduct>> {
        let cost = self.exhaustive_cost();
        if cost > WORD_BUDGET {
            return Err(Error::BudgetExceeded {
                requested: cost,
                budget: WORD_BUDGET,
            });
        }
        let letters = &self.letters;
        let mut level: Vec<WordProduct> = (0..letters.len()).map(|a| letters.single(a)).collect();
        let mut out = Vec::new();
        for length in 1..=self.max_length {
            out.extend(
                level
                    .iter()
                    .filter(|w| letters.reduction_defect(&w.word, self.reduction).is_none())
                    .cloned(),
            );
            if length == self.max_length {
                break;
            }
            level = level
                .par_iter()
                .map(|prefix| {
                    let last = *prefix.word.last().expect("nonempty prefix");
                    (0..letters.len())
                        .filter(|&a| letters.inverse(last) != Some(a))
                        .map(|a| letters.extend(prefix, a))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
        }
        Ok(out)
    }

    fn enumerate_random(&self, count: usize) -> Result<Vec<WordProduct>> {
        let requested = count as u128 * self.max_length as u128;
        if requested > WORD_BUDGET {
            return Err(Error::BudgetExceeded {
                requested,
                budget: WORD_BUDGET,
            });
        }
        let letters = &self.letters;
        let mut rng = rng::stream(self.seed, "words", letters.len() as u64);
        let mut words = Vec::with_capacity(count);
        while words.len() < count {
            let length = rng.random_range(1..=self.max_length);
            let mut word: Vec<usize> = Vec::with_capacity(length);
            for i in 0..length {
                let allowed: Vec<usize> = (0..letters.len())
                    .filter(|&a| i == 0 || letters.inverse(word[i - 1]) != Some(a))
                    .filter(|&a| {
                        !(i + 1 == length
                            && i > 0
                            && self.reduction == Reduction::VeryReduced
                            && letters.inverse(a) == Some(word[0]))
                    })
                    .collect();
                word.push(allowed[rng.random_range(0..allowed.len())]);
            }
            words.push(word);
        }
        words.par_iter().map(|w| letters.product(w)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projections::jordan_projection;

    fn pair() -> Vec<GroupElement> {
        let g1 = GroupElement::diagonal(&[10.0, 0.1]).unwrap();
        let r = GroupElement::rotation(std::f64::consts::FRAC_PI_4);
        let g2 = r.mul(&g1).unwrap().mul(&r.inverse().unwrap()).unwrap();
        vec![g1, g2]
    }

    #[test]
    fn semigroup_counts() {
        let letters = LetterSet::new(&pair(), Kind::Semigroup).unwrap();
        let words = WordSampler::exhaustive(letters, 3).enumerate().unwrap();
        assert_eq!(words.len(), 2 + 4 + 8);
        let seq: Vec<Vec<usize>> = words.iter().take(6).map(|w| w.word.clone()).collect();
        assert_eq!(seq, vec![vec![0], vec![1], vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn group_counts() {
        let letters = LetterSet::new(&pair(), Kind::Group).unwrap();
        let sampler = WordSampler::exhaustive(letters, 2).with_reduction(Reduction::Reduced);
        assert_eq!(sampler.enumerate().unwrap().len(), 4 + 12);
        // Reduced words of length 3 number 4·3·3 = 36. Those with a₃ = a₁⁻¹
        // need a₂ ∉ {a₁, a₁⁻¹}, giving 4·2 = 8, so 28 are very reduced.
        let very = WordSampler::exhaustive(sampler.letters.clone(), 3).enumerate().unwrap();
        assert_eq!(very.iter().filter(|w| w.word.len() == 3).count(), 28);
        for w in &very {
            assert!(sampler.letters.reduction_defect(&w.word, Reduction::VeryReduced).is_none());
        }
    }

    #[test]
    fn random_words_are_reproducible() {
        let letters = LetterSet::new(&pair(), Kind::Group).unwrap();
        let a = WordSampler::random(letters.clone(), 6, 100, 5).enumerate().unwrap();
        let b = WordSampler::random(letters.clone(), 6, 100, 5).enumerate().unwrap();
        let c = WordSampler::random(letters, 6, 100, 6).enumerate().unwrap();
        assert_eq!(a.len(), 100);
        let words = |v: &[WordProduct]| v.iter().map(|w| w.word.clone()).collect::<Vec<_>>();
        assert_eq!(words(&a), words(&b));
        assert_ne!(words(&a), words(&c));
    }

    #[test]
    fn budget_is_enforced() {
        let letters = LetterSet::new(&pair(), Kind::Semigroup).unwrap();
        assert!(matches!(
            WordSampler::exhaustive(letters.clone(), 20).enumerate(),
            Err(Error::BudgetExceeded { .. })
        ));
        assert!(matches!(
            WordSampler::random(letters, 100, 20_000, 0).enumerate(),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn products_match_direct_multiplication() {
        let gens = pair();
        let letters = LetterSet::new(&gens, Kind::Group).unwrap();
        let w = letters.product(&[0, 1, 3, 1]).unwrap();
        let direct = gens[0]
            .mul(&gens[1])
            .unwrap()
            .mul(&gens[1].inverse().unwrap())
            .unwrap()
            .mul(&gens[1])
            .unwrap();
        let lam = jordan_projection(&direct).unwrap();
        assert!(w.lambda().unwrap().sup_distance(&lam) < 1e-9);
        let inv = letters.inverse_product(&[0, 1]).unwrap();
        let direct_inv = gens[0].mul(&gens[1]).unwrap().inverse().unwrap();
        assert!((inv.element().unwrap().matrix() - direct_inv.matrix()).norm() < 1e-9);
        assert_eq!(letters.reduction_defect(&[0, 2], Reduction::Reduced), Some(1));
        assert_eq!(letters.reduction_defect(&[0, 1, 2], Reduction::VeryReduced), Some(3));
        assert_eq!(letters.reduction_defect(&[0, 1, 2], Reduction::Reduced), None);
    }

    #[test]
    fn long_syllables_avoid_overflow() {
        let letters = LetterSet::new(&pair(), Kind::Semigroup).unwrap();
        let w = letters.syllable_product(&[(0, 1 << 12), (1, 1 << 12)]).unwrap();
        assert!(w.lambda().unwrap().coords()[0] > 4096.0 * 2.0 * 10f64.ln() - 10.0);
        assert!(w.element().is_err());
    }
}
