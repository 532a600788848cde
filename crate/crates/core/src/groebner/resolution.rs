use crate::complexes::{GradedFreeComplex, PolyMatrix};

use super::{Engine, GbError, SubmoduleSpec};

/// Free resolution `R^{rank} <- F_1 <- F_2 <- ...` of the quotient by a submodule.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub complex: GradedFreeComplex,
    /// Set when syzygies remained after `max_length` maps.
    pub truncated: bool,
}

/// Iterated syzygies; each step drops generators that are redundant by a membership test.
pub(super) fn free_resolution(
    engine: &Engine,
    spec: &SubmoduleSpec,
    max_length: usize,
) -> Result<Resolution, GbError> {
    let ring = spec.ring().clone();
    let mut ranks = vec![spec.rank()];
    let mut maps = Vec::new();
    let mut current = engine.minimize_generators(spec)?;
    let mut truncated = false;
    while !current.generators().is_empty() {
        if maps.len() == max_length {
            truncated = true;
            break;
        }
        let rows = *ranks.last().unwrap();
        maps.push(PolyMatrix::from_columns(&ring, rows, current.generators()));
        ranks.push(current.generators().len());
        let syz = engine.syzygies(&current)?;
        current = engine.minimize_generators(&syz)?;
    }
    Ok(Resolution {
        complex: GradedFreeComplex::new(&ring, ranks, maps)?,
        truncated,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, Ring};

    #[test]
    fn resolution_of_maximal_ideal() {
        let r = Ring::new(&["x", "y"], MonomialOrder::grevlex());
        let i = SubmoduleSpec::ideal(&r, vec![r.var(0), r.var(1)]).unwrap();
        let res = Engine::new(MonomialOrder::grevlex()).free_resolution(&i, 5).unwrap();
        assert_eq!(res.complex.ranks(), &[1, 2, 1]);
        assert!(!res.truncated);
        assert!(res.complex.is_complex());
        let short = Engine::new(MonomialOrder::grevlex()).free_resolution(&i, 1).unwrap();
        assert_eq!(short.complex.ranks(), &[1, 2]);
        assert!(short.truncated);
    }

    #[test]
    fn three_variables() {
        let r = Ring::new(&["x", "y", "z"], MonomialOrder::grevlex());
        let i = SubmoduleSpec::ideal(&r, vec![r.var(0), r.var(1), r.var(2)]).unwrap();
        let res = Engine::new(MonomialOrder::grevlex()).free_resolution(&i, 5).unwrap();
        assert_eq!(res.complex.ranks(), &[1, 3, 3, 1]);
        assert!(res.complex.is_complex());
    }
}
