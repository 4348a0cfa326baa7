//! ‖μ − λ‖∞ by word length: bounded for a Schottky pair, unbounded for a
//! unipotent generator.
//!
//! cargo run --example mu_lambda

use std::f64::consts::FRAC_PI_4;

use limitcone::{compare_mu_lambda, GroupElement, Kind, LetterSet, Result, WordSampler};

fn main() -> Result<()> {
    let g1 = GroupElement::diagonal(&[10.0, 0.1])?;
    let r = GroupElement::rotation(FRAC_PI_4);
    let g2 = r.mul(&g1)?.mul(&r.inverse()?)?;
    let pair = LetterSet::new(&[g1, g2], Kind::Semigroup)?;
    for (l, gap) in compare_mu_lambda(&WordSampler::exhaustive(pair, 8))? {
        println!("schottky  l = {l:<3} max gap {gap:.5}");
    }

    let u = GroupElement::from_rows(&[&[1.0, 1.0], &[0.0, 1.0]])?;
    let control = LetterSet::new(&[u], Kind::Semigroup)?;
    for (l, gap) in compare_mu_lambda(&WordSampler::exhaustive(control, 256))? {
        if l.is_power_of_two() {
            println!("unipotent l = {l:<3} max gap {gap:.5}  log l = {:.5}", (l as f64).ln());
        }
    }
    Ok(())
}
