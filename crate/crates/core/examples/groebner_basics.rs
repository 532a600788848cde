//! Reduced Gröbner bases, membership, intersections and syzygies.

use arlab::groebner::{Engine, SubmoduleSpec};
use arlab::poly::{FreeModuleElement, MonomialOrder, Ring};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ring = Ring::new(&["x", "y", "z"], MonomialOrder::lex());
    let cubic = SubmoduleSpec::ideal(
        &ring,
        vec![ring.parse("x^2 - y")?, ring.parse("x^3 - z")?],
    )?;
    let engine = Engine::new(MonomialOrder::lex());
    let gb = engine.basis(&cubic)?;
    println!("lex basis of the twisted cubic:");
    for g in gb.elements() {
        println!("  {}", g.component(0));
    }

    let probe = FreeModuleElement::scalar(ring.parse("x*z - y^2")?);
    println!("x*z - y^2 in the ideal: {}", gb.contains(&probe)?);

    let a = SubmoduleSpec::ideal(&ring, vec![ring.parse("x")?])?;
    let b = SubmoduleSpec::ideal(&ring, vec![ring.parse("y")?])?;
    let meet = engine.intersect(&a, &b)?;
    let shown: Vec<String> = meet.generators().iter().map(|g| g.to_string()).collect();
    println!("(x) cap (y) = <{}>", shown.join(", "));

    let pair = SubmoduleSpec::ideal(&ring, vec![ring.parse("x")?, ring.parse("y")?])?;
    let syz = engine.syzygies(&pair)?;
    for s in syz.generators() {
        println!("syzygy of (x, y): {s}");
    }
    Ok(())
}
