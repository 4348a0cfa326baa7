//! Cartan and Jordan projections of a few elements of SL(n, R).
//!
//! cargo run --example projections

use limitcone::{cartan_projection, iterated_cartan, jordan_projection, opposition_involution, GroupElement, Result};

fn main() -> Result<()> {
    let g = GroupElement::from_rows(&[&[2.0, 1.0], &[0.0, 0.5]])?;
    let mu = cartan_projection(&g)?;
    let lambda = jordan_projection(&g)?;
    println!("g = {g}");
    println!("mu          {:?}", mu.coords());
    println!("lambda      {:?}", lambda.coords());
    println!("iota lambda {:?}", opposition_involution(&lambda).coords());
    println!("mu(g^-1)    {:?}", cartan_projection(&g.inverse()?)?.coords());

    let m = nalgebra::DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 1.5]);
    let det: f64 = m.determinant();
    let h = GroupElement::new(m / det.cbrt())?;
    let target = jordan_projection(&h)?;
    for steps in [1u64, 4, 16, 64, 256] {
        let approx = iterated_cartan(&h, steps)?;
        println!("mu(h^{steps:<3})/{steps:<3} error {:.3e}", approx.sup_distance(&target));
    }
    Ok(())
}
