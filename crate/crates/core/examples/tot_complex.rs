//! The complex (K(I) ◇ ... ◇ K(I)) ◇ E^N whose h_1 has image I^r N.

use arlab::artin_rees::{build_tot_complex, ArtinReesInstance};
use arlab::groebner::{Engine, SubmoduleSpec};
use arlab::poly::{MonomialOrder, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Ring::new(&["x", "y"], MonomialOrder::grevlex());
    let i = SubmoduleSpec::ideal(&ring, vec![ring.parse("x")?, ring.parse("y")?])?;
    let n = SubmoduleSpec::ideal(&ring, vec![ring.parse("x^2")?, ring.parse("x*y")?])?;
    let inst = ArtinReesInstance::new("I=(x,y), N=(x^2,xy)", i, n, 3, 8)?;
    let engine = Engine::new(MonomialOrder::grevlex());
    for r in 1..=3 {
        let t = build_tot_complex(&engine, &inst, r, 4)?;
        println!(
            "r = {r}: resolution ranks {:?}, tot ranks {:?}, complex {}, image = I^r N {}",
            t.resolution.ranks(),
            t.tot.complex().ranks(),
            t.tot.complex().is_complex(),
            t.image_matches
        );
    }
    Ok(())
}
