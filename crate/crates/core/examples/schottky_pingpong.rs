//! Ping-pong certification of a pair in SL(2, R) and the word estimate.
//!
//! cargo run --example schottky_pingpong

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use limitcone::proximality::CheckOptions;
use limitcone::schottky::separation_matrix;
use limitcone::{verify_schottky, word_lyapunov_estimate, GroupElement, Kind, LetterSet, Result};

fn conjugate(g: &GroupElement, theta: f64) -> Result<GroupElement> {
    let r = GroupElement::rotation(theta);
    r.mul(g)?.mul(&r.inverse()?)
}

fn main() -> Result<()> {
    let g1 = GroupElement::diagonal(&[100.0, 0.01])?;
    let pair = vec![g1.clone(), conjugate(&g1, FRAC_PI_4)?];
    let system = verify_schottky(&pair, Kind::Group, &[0.1, 0.1], &CheckOptions::default())?;
    println!("certified group with {} letters", system.letters().len());
    println!("separation:\n{:.4}", system.separation().by_degree[0]);

    for word in [vec![(0, 1), (1, 1)], vec![(0, 3), (3, 2), (0, 1)], vec![(1, 5), (0, 5)]] {
        let est = word_lyapunov_estimate(&system, &word)?;
        println!(
            "{word:?}: λ1 = {:.4}, deviation {:.4}, per letter {:.4}",
            est.lambda.coords()[0],
            est.sup_discrepancy(),
            est.per_letter()
        );
    }

    let g1 = GroupElement::diagonal(&[10.0, 0.1])?;
    let aligned = vec![g1.clone(), conjugate(&g1, FRAC_PI_2)?];
    let letters = LetterSet::new(&aligned, Kind::Semigroup)?;
    println!("aligned separation:\n{:.4}", separation_matrix(&letters)?.by_degree[0]);
    if let Err(e) = verify_schottky(&aligned, Kind::Semigroup, &[0.1, 0.1], &CheckOptions::default()) {
        println!("aligned pair: {e}");
    }
    Ok(())
}
