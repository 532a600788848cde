//! Koszul complexes and their diamond product, with the structural checks.

use arlab::complexes::{diamond_product, emit_complex, koszul_complex, pad_to_odd};
use arlab::groebner::{ideal_power, Engine, SubmoduleSpec};
use arlab::poly::{MonomialOrder, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Ring::new(&["x", "y"], MonomialOrder::grevlex());
    let gens = vec![ring.var(0), ring.var(1)];
    let k = koszul_complex(&ring, &gens)?;
    print!("{}", emit_complex(&k));

    let d = diamond_product(&[k.clone(), k.clone()])?;
    let h = d.complex();
    println!("H ranks {:?}, h o h = 0: {}", h.ranks(), h.is_complex());
    for lv in 0..h.ranks().len() {
        println!("  rank H_{lv} = {} (formula {})", h.rank(lv), d.expected_rank(lv));
    }

    // image(h_1) is the product ideal (x, y)^2
    let image = SubmoduleSpec::new(&ring, 1, h.map(1).columns())?;
    let square = ideal_power(&SubmoduleSpec::ideal(&ring, gens)?, 2)?;
    let engine = Engine::new(MonomialOrder::grevlex());
    println!("image(h_1) = (x, y)^2: {}", engine.same_submodule(&image, &square)?);

    let padded = pad_to_odd(vec![k.clone(), k]);
    let p = diamond_product(&padded)?;
    println!("padded to {} factors, H ranks {:?}", padded.len(), p.complex().ranks());
    Ok(())
}
