//! Forge a Schottky semigroup in SL(3, R) on two rays and recover its cone.
//!
//! cargo run --example forge_cone

use limitcone::schottky::ForgeOptions;
use limitcone::{check_convexity, estimate_cone, forge_group, forge_semigroup, Result, TargetCone, WordSampler};

fn main() -> Result<()> {
    let cone = TargetCone::new(vec![vec![2.0, -0.5, -1.5], vec![1.5, 0.5, -2.0]], 0.0)?;
    let report = forge_semigroup(3, &cone, &ForgeOptions::new(0.05, 7))?;
    println!("powers {:?}, proxies {:?}", report.powers, report.proxies);
    for j in 0..report.system.letters().generator_count() {
        println!("λ(γ{}) = {:?}", j + 1, report.system.letters().lambda(j).coords());
    }

    let sampler = WordSampler::exhaustive(report.system.letters().clone(), 6);
    let estimate = estimate_cone(&sampler)?;
    println!("{} directions, hull_dim {}", estimate.directions.len(), estimate.hull_dim);
    for r in &estimate.hull_rays {
        println!("hull ray {:?}", r.coords());
    }
    let convexity = check_convexity(&estimate, &sampler, 20, 3)?;
    println!(
        "midpoint errors monotone {}, final {:.4}°, hull slack {:.2e}°",
        convexity.monotone, convexity.max_final_error_deg, convexity.max_hull_slack_deg
    );

    // ι swaps the two rays, so the same cone also carries a group.
    let group = forge_group(3, &cone, &ForgeOptions::new(0.05, 7))?;
    println!("group: {} letters, direction slack {:.3}°", group.system.letters().len(), group.direction_slack_deg);
    Ok(())
}
