//! Sampled limit sets and facet pairs of a Schottky group in SL(2, R).
//!
//! cargo run --example limit_set

use std::f64::consts::FRAC_PI_4;

use limitcone::limits::{
    density_witness, estimate_facets, invariance_defect, sample_distance, DEFAULT_FILTER,
};
use limitcone::{estimate_limit_set, GroupElement, Kind, LetterSet, Result, Side, WordSampler};

fn main() -> Result<()> {
    let g1 = GroupElement::diagonal(&[10.0, 0.1])?;
    let r = GroupElement::rotation(FRAC_PI_4);
    let g2 = r.mul(&g1)?.mul(&r.inverse()?)?;
    let letters = LetterSet::new(&[g1, g2], Kind::Group)?;

    let samples = (2..=7)
        .map(|l| estimate_limit_set(&WordSampler::exhaustive(letters.clone(), l), Side::Forward, DEFAULT_FILTER))
        .collect::<Result<Vec<_>>>()?;
    for pair in samples.windows(2) {
        println!(
            "depth {} → {}: {} → {} points, Hausdorff {:.3e}",
            pair[0].depth,
            pair[1].depth,
            pair[0].degree(1).len(),
            pair[1].degree(1).len(),
            sample_distance(&pair[0], &pair[1])?
        );
    }
    println!("invariance defect {:.3e}", invariance_defect(&letters, &samples[4], &samples[5])?);

    let backward = estimate_limit_set(&WordSampler::exhaustive(letters.clone(), 4), Side::Backward, DEFAULT_FILTER)?;
    println!("backward sample: {} points", backward.degree(1).len());

    let facets = estimate_facets(&WordSampler::exhaustive(letters.clone(), 3), DEFAULT_FILTER)?;
    let transverse = facets.iter().filter(|f| f.general_position).count();
    println!("{} facet pairs, {transverse} in general position", facets.len());

    if let Some(w) = density_witness(&letters, &[0, 1], &[3, 0], 8, 0.1, DEFAULT_FILTER)? {
        println!("witness r = {}, h = {}, distance {:.3e}", w.power, w.letter, w.distance);
    }
    Ok(())
}
