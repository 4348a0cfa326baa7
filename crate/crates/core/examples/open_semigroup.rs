//! Membership in the open semigroups attached to a facet frame.
//!
//! cargo run --example open_semigroup

use limitcone::proximality::CheckOptions;
use limitcone::{in_cone_semigroup, in_open_semigroup, FacetFrame, GroupElement, Result, TargetCone};

fn main() -> Result<()> {
    let frame = FacetFrame::identity(3);
    let opts = CheckOptions::default();
    println!("ε_f = {}", frame.epsilon_limit());

    let g = GroupElement::diagonal(&[10f64.exp(), 1.0, (-10f64).exp()])?;
    let h = GroupElement::diagonal(&[20f64.exp(), 10f64.exp(), (-30f64).exp()])?;
    let rotation = GroupElement::from_rows(&[&[0.0, -1.0, 0.0], &[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]])?;
    for (name, x) in [("g", &g), ("h", &h), ("gh", &g.mul(&h)?), ("rotation", &rotation)] {
        let membership = in_open_semigroup(x, &frame, 0.05, &opts)?;
        println!("{name:<8} in G^ε_f: {}", membership.accepted);
    }

    let cone = TargetCone::new(vec![vec![2.0, -0.5, -1.5], vec![1.5, 0.5, -2.0]], 0.05)?;
    println!("g in cone semigroup: {}", in_cone_semigroup(&g, &frame, 0.05, &cone, &opts)?);
    println!("h in cone semigroup: {}", in_cone_semigroup(&h, &frame, 0.05, &cone, &opts)?);

    if let Err(e) = in_open_semigroup(&g, &frame, 0.2, &opts) {
        println!("ε = 0.2: {e}");
    }
    Ok(())
}
