//! Smallest Artin–Rees exponents for the family I = (x^k), N = (x^2), and a witness.

use arlab::artin_rees::{containment_check, uniform_sweep, ArtinReesInstance};
use arlab::groebner::{Engine, SubmoduleSpec};
use arlab::poly::{MonomialOrder, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Ring::new(&["x"], MonomialOrder::grevlex());
    let n = SubmoduleSpec::ideal(&ring, vec![ring.parse("x^2")?])?;
    let family = (1..=6)
        .map(|k| {
            let i = SubmoduleSpec::ideal(&ring, vec![ring.parse(&format!("x^{k}"))?])?;
            Ok(ArtinReesInstance::new(format!("k={k}"), i, n.clone(), 4, 8)?)
        })
        .collect::<Result<Vec<_>, Box<dyn std::error::Error>>>()?;
    let engine = Engine::new(MonomialOrder::grevlex());
    let report = uniform_sweep(&engine, &family)?;
    for row in &report.rows {
        println!("{}: mu = {:?}, per r {:?}", row.instance, row.mu, row.per_r);
    }
    println!("family max {:?}, stabilized {}", report.family_max, report.stabilized);

    if let Some(w) = containment_check(&engine, &family[0], 1, 1)? {
        println!("mu = 1 fails for k = 1 at r = {}: {} is not in I N", w.r, w.element);
    }
    Ok(())
}
