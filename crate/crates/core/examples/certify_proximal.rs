//! ε-proximality certificates, analytic and sampled, and a refutation.
//!
//! cargo run --example certify_proximal

use limitcone::{certify_eps_proximal, certify_theta_proximal, CheckOptions, Error, GroupElement, Result};

fn main() -> Result<()> {
    let g = GroupElement::diagonal(&[1e4, 1.0, 1e-4])?;
    for opts in [CheckOptions::default(), CheckOptions::sampled(20_000, 1)] {
        let certs = certify_theta_proximal(&g, &[1, 2], 0.1, &opts)?;
        for c in &certs {
            println!(
                "degree {} mode {}: |λ1| = {:.3e}, gap {:.3}, Lipschitz ≤ {:.3e}, image radius {:.3e}",
                c.rep.k,
                c.mode,
                c.top_modulus(),
                c.gap_value,
                c.lipschitz_bound,
                c.image_radius
            );
        }
    }

    let weak = GroupElement::diagonal(&[100.0, 1.0, 0.01])?;
    match certify_eps_proximal(&weak, 1, 0.1, &CheckOptions::default()) {
        Err(e @ Error::ContractionViolated { .. }) => println!("diag(100, 1, 0.01): {e}"),
        other => println!("diag(100, 1, 0.01): unexpected {other:?}"),
    }

    let rotation = GroupElement::rotation(0.7);
    if let Err(e) = certify_eps_proximal(&rotation, 1, 0.1, &CheckOptions::default()) {
        println!("rotation: {e} (exit code {})", e.exit_code());
    }
    Ok(())
}
