//! The identity ∇u = 1 at random points, for a Koszul complex and for a padded product.

use arlab::complexes::{diamond_product, koszul_complex, pad_to_odd};
use arlab::homotopy::{check_product_identity, koszul_truncation_defect, sample_points_away_from, PointFrame};
use arlab::poly::{MonomialOrder, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Ring::new(&["x", "y"], MonomialOrder::grevlex());
    let a = vec![ring.parse("x")?, ring.parse("y^2 - x")?, ring.parse("x*y + 1")?];
    let b = vec![ring.parse("x - y")?, ring.parse("y")?];
    let factors = pad_to_odd(vec![koszul_complex(&ring, &a)?, koszul_complex(&ring, &b)?]);
    let d = diamond_product(&factors)?;

    let mut all = a.clone();
    all.extend(b.iter().cloned());
    for p in sample_points_away_from(&all, 2, 5, 7, 0.1) {
        let fa = PointFrame::koszul(&ring, &a, &p)?;
        let fb = PointFrame::koszul(&ring, &b, &p)?;
        let ft = PointFrame::general(&factors[2], &p)?;
        let single = fa.nabla_residual();
        let trunc = koszul_truncation_defect(&fa, a.len(), 2);
        let prod = check_product_identity(&d, &[fa, fb, ft], &p)?;
        println!(
            "z = ({:.3}, {:.3}): |f u - dbar u - 1| = {single:.1e}, truncation {trunc:.1e}, product {:.1e} / {:.1e}",
            p[0], p[1], prod.h1_residual, prod.tilde_residual
        );
    }
    Ok(())
}
