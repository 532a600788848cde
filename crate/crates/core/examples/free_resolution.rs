//! Free resolutions by iterated syzygies.

use arlab::groebner::{Engine, SubmoduleSpec};
use arlab::poly::{MonomialOrder, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Ring::new(&["x", "y", "z"], MonomialOrder::grevlex());
    let engine = Engine::new(MonomialOrder::grevlex());
    for gens in [vec!["x", "y", "z"], vec!["x*y", "x*z", "y*z"], vec!["x^2 - y*z", "y^2"]] {
        let polys = gens.iter().map(|g| ring.parse(g)).collect::<Result<Vec<_>, _>>()?;
        let spec = SubmoduleSpec::ideal(&ring, polys)?;
        let res = engine.free_resolution(&spec, 4)?;
        println!(
            "({}): ranks {:?}, complex {}, truncated {}",
            gens.join(", "),
            res.complex.ranks(),
            res.complex.is_complex(),
            res.truncated
        );
    }
    Ok(())
}
