//! Residue and principal value actions in one variable and the order of a product.

use num_complex::Complex64;

use arlab::residue::{
    ordered_product_action, pv_action, regularization_independence_probe, residue_action, ActionKind,
    CutoffProfile, EpsilonSchedule, ProductOrder, TestForm,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let phi = TestForm::new(
        0.9,
        vec![(Complex64::new(1.0, 0.0), 0, 0), (Complex64::new(0.5, -0.2), 1, 0), (Complex64::new(0.3, 0.0), 1, 1)],
    )?;
    let sched = EpsilonSchedule::default();
    let chi = CutoffProfile::Smoothstep;

    let r1 = residue_action(1, &phi, chi, &sched)?;
    let closed = phi.value_at_zero() * Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    println!("<dbar[1/z], phi dz>   = {:.10} (2 pi i phi(0) = {:.10})", r1.value, closed);
    let pv = pv_action(1, &TestForm::bump_monomial(0.9, 1, 0), chi, &sched)?;
    println!("<[1/z], z bump dz>    = {:.10}", pv.value);

    let rp = ordered_product_action(ProductOrder::ResidueThenPv, 1, 1, &phi, chi, &sched)?;
    let pr = ordered_product_action(ProductOrder::PvThenResidue, 1, 1, &phi, chi, &sched)?;
    let r2 = residue_action(2, &phi, chi, &sched)?;
    println!("dbar(1/z) ^ (1/z)     = {:.10}", rp.value);
    println!("(1/z) ^ dbar(1/z)     = {:.10}", pr.value);
    println!("dbar[1/z^2]           = {:.10}", r2.value);

    let probe = regularization_independence_probe(
        ActionKind::Residue,
        2,
        &phi,
        &CutoffProfile::ALL,
        &[sched, EpsilonSchedule::geometric(0.3, 0.6, 6)?],
    )?;
    println!("profile/schedule spread for dbar[1/z^2]: {:.2e}", probe.max_relative_deviation);
    Ok(())
}
