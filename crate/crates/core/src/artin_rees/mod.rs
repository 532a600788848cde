//! Artin–Rees exponents by Gröbner arithmetic: the smallest `μ` with
//! `I^{μ+r} M ∩ N ⊆ I^r N` for `M = R^{m_0}` and all `r <= r_max`.

use rayon::prelude::*;

use crate::complexes::{diamond_product, koszul_complex, DiamondComplex, GradedFreeComplex};
use crate::groebner::{ideal_power, module_product, Engine, GbError, SubmoduleSpec};
use crate::poly::{FreeModuleElement, RingRef};

/// Ideal `I`, submodule `N ⊆ R^{m_0}` and search limits.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArtinReesInstance {
    pub name: String,
    ideal: SubmoduleSpec,
    module: SubmoduleSpec,
    pub r_max: u32,
    pub mu_cap: u32,
}

impl ArtinReesInstance {
    pub fn new(
        name: impl Into<String>,
        ideal: SubmoduleSpec,
        module: SubmoduleSpec,
        r_max: u32,
        mu_cap: u32,
    ) -> Result<Self, GbError> {
        if ideal.rank() != 1 {
            return Err(GbError::Invalid("I must be an ideal (rank 1)".into()));
        }
        if ideal.ring().vars() != module.ring().vars() {
            return Err(GbError::Invalid("I and N live in different rings".into()));
        }
        if mu_cap == 0 {
            return Err(GbError::Invalid("mu_cap must be at least 1".into()));
        }
        let ideal = SubmoduleSpec::new(module.ring(), 1, ideal.generators().to_vec())?;
        Ok(ArtinReesInstance {
            name: name.into(),
            ideal,
            module,
            r_max,
            mu_cap,
        })
    }

    pub fn ring(&self) -> &RingRef {
        self.module.ring()
    }

    pub fn ideal(&self) -> &SubmoduleSpec {
        &self.ideal
    }

    pub fn module(&self) -> &SubmoduleSpec {
        &self.module
    }

    pub fn ambient_rank(&self) -> usize {
        self.module.rank()
    }

    /// `I^p M`: generators of `I^p` times each basis vector of `R^{m_0}`.
    pub fn power_times_ambient(&self, p: u32) -> Result<SubmoduleSpec, GbError> {
        let power = ideal_power(&self.ideal, p)?;
        let m = self.ambient_rank();
        let gens = power
            .ideal_generators()
            .into_iter()
            .flat_map(|g| (0..m).map(move |i| FreeModuleElement::basis(g.clone(), m, i)))
            .collect();
        SubmoduleSpec::new(self.ring(), m, gens)
    }
}

/// A generator of `I^{μ+r}M ∩ N` outside `I^r N`, with its normal form modulo `I^r N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub mu: u32,
    pub r: u32,
    pub element: FreeModuleElement,
    pub normal_form: FreeModuleElement,
}

/// Tests `I^{μ+r} M ∩ N ⊆ I^r N`; on failure returns a witness.
pub fn containment_check(
    engine: &Engine,
    inst: &ArtinReesInstance,
    mu: u32,
    r: u32,
) -> Result<Option<Witness>, GbError> {
    let big = inst.power_times_ambient(mu + r)?;
    let meet = engine.intersect(&big, &inst.module)?;
    let target = module_product(&ideal_power(&inst.ideal, r)?, &inst.module)?;
    Ok(engine
        .first_outside(&meet, &target)?
        .map(|(element, normal_form)| Witness {
            mu,
            r,
            element,
            normal_form,
        }))
}

/// Outcome of the search for one instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinMuRow {
    pub instance: String,
    /// Smallest μ valid for all `r <= r_max`; `None` when the cap was reached or the budget ran out.
    pub mu: Option<u32>,
    /// `per_r[r]` is the smallest μ valid for all `r' <= r`.
    pub per_r: Vec<u32>,
    /// One failure per rejected candidate `μ`.
    pub witnesses: Vec<Witness>,
    pub capped: bool,
    pub budget_error: Option<String>,
}

/// Single pass over `r = 0..=r_max`, raising μ while the containment fails. Valid because
/// a containment that holds at μ also holds at μ + 1.
pub fn min_mu(engine: &Engine, inst: &ArtinReesInstance) -> Result<MinMuRow, GbError> {
    let mut mu = 0u32;
    let mut per_r = Vec::new();
    let mut witnesses = Vec::new();
    for r in 0..=inst.r_max {
        while let Some(w) = containment_check(engine, inst, mu, r)? {
            witnesses.push(w);
            if mu == inst.mu_cap {
                return Ok(MinMuRow {
                    instance: inst.name.clone(),
                    mu: None,
                    per_r,
                    witnesses,
                    capped: true,
                    budget_error: None,
                });
            }
            mu += 1;
        }
        per_r.push(mu);
    }
    Ok(MinMuRow {
        instance: inst.name.clone(),
        mu: Some(mu),
        per_r,
        witnesses,
        capped: false,
        budget_error: None,
    })
}

/// Results of a sweep over a family of ideals sharing `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepReport {
    pub rows: Vec<MinMuRow>,
    /// Largest μ among completed instances.
    pub family_max: Option<u32>,
    /// Every instance completed and the running maximum did not grow over the second half of the family.
    pub stabilized: bool,
}

impl SweepReport {
    pub fn any_capped(&self) -> bool {
        self.rows.iter().any(|r| r.capped)
    }

    pub fn any_budget_error(&self) -> bool {
        self.rows.iter().any(|r| r.budget_error.is_some())
    }
}

/// Runs [`min_mu`] on every instance in parallel; budget failures are recorded per row.
pub fn uniform_sweep(engine: &Engine, family: &[ArtinReesInstance]) -> Result<SweepReport, GbError> {
    if let Some(first) = family.first() {
        for inst in &family[1..] {
            if inst.ring().vars() != first.ring().vars()
                || inst.module != first.module
                || inst.ambient_rank() != first.ambient_rank()
            {
                return Err(GbError::Invalid(format!(
                    "instance `{}` does not share the ring and N of `{}`",
                    inst.name, first.name
                )));
            }
        }
    }
    let rows: Vec<MinMuRow> = family
        .par_iter()
        .map(|inst| match min_mu(engine, inst) {
            Ok(row) => Ok(row),
            Err(GbError::BudgetExhausted(msg)) => Ok(MinMuRow {
                instance: inst.name.clone(),
                mu: None,
                per_r: Vec::new(),
                witnesses: Vec::new(),
                capped: false,
                budget_error: Some(msg),
            }),
            Err(e) => Err(e),
        })
        .collect::<Result<_, _>>()?;
    let family_max = rows.iter().filter_map(|r| r.mu).max();
    let complete = rows.iter().all(|r| r.mu.is_some());
    let mut running = Vec::with_capacity(rows.len());
    let mut best = 0;
    for r in &rows {
        best = best.max(r.mu.unwrap_or(0));
        running.push(best);
    }
    let half = rows.len() / 2;
    let stabilized = complete && running.last().is_none_or(|&last| running[half.min(running.len() - 1)] == last);
    Ok(SweepReport {
        rows,
        family_max,
        stabilized,
    })
}

/// `E^{tot} = (K(I) ◇ ... ◇ K(I)) ◇ E^N` with `E^N` a free resolution of `N`.
#[derive(Clone, Debug)]
pub struct TotComplex {
    pub power: DiamondComplex,
    pub tot: DiamondComplex,
    pub resolution: GradedFreeComplex,
    pub resolution_truncated: bool,
    /// `image(h_1^{tot}) = I^r N`, checked by mutual containment.
    pub image_matches: bool,
}

pub fn build_tot_complex(
    engine: &Engine,
    inst: &ArtinReesInstance,
    r: u32,
    max_resolution_length: usize,
) -> Result<TotComplex, GbError> {
    if r == 0 {
        return Err(GbError::Invalid("the tot complex needs r >= 1".into()));
    }
    let ring = inst.ring();
    let koszul = koszul_complex(ring, &inst.ideal.ideal_generators())?;
    let power = diamond_product(&vec![koszul; r as usize])?;
    let res = engine.free_resolution(&inst.module, max_resolution_length.max(1))?;
    if res.complex.length() == 0 {
        return Err(GbError::Invalid("N has no nonzero generators".into()));
    }
    let tot = diamond_product(&[power.complex().clone(), res.complex.clone()])?;
    let image = SubmoduleSpec::new(ring, inst.ambient_rank(), tot.complex().map(1).columns())?;
    let expected = module_product(&ideal_power(&inst.ideal, r)?, &inst.module)?;
    let image_matches = engine.same_submodule(&image, &expected)?;
    Ok(TotComplex {
        power,
        tot,
        resolution: res.complex,
        resolution_truncated: res.truncated,
        image_matches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, Ring};

    fn instance(vars: &[&str], ideal: &[&str], module: &[&str]) -> ArtinReesInstance {
        let r = Ring::new(vars, MonomialOrder::grevlex());
        let i = SubmoduleSpec::ideal(&r, ideal.iter().map(|g| r.parse(g).unwrap()).collect()).unwrap();
        let n = SubmoduleSpec::ideal(&r, module.iter().map(|g| r.parse(g).unwrap()).collect()).unwrap();
        ArtinReesInstance::new("t", i, n, 4, 8).unwrap()
    }

    #[test]
    fn univariate_examples() {
        let e = Engine::new(MonomialOrder::grevlex());
        let inst = instance(&["x"], &["x"], &["x^2"]);
        for r in 0..=5 {
            assert!(containment_check(&e, &inst, 2, r).unwrap().is_none());
        }
        let w = containment_check(&e, &inst, 1, 1).unwrap().unwrap();
        assert_eq!(w.element.to_string(), "[x^2]");
        assert_eq!(min_mu(&e, &inst).unwrap().mu, Some(2));
    }

    #[test]
    fn two_variables_and_unit_ideal() {
        let e = Engine::new(MonomialOrder::grevlex());
        assert_eq!(min_mu(&e, &instance(&["x", "y"], &["x", "y"], &["x"])).unwrap().mu, Some(1));
        assert_eq!(min_mu(&e, &instance(&["x", "y"], &["1"], &["x*y"])).unwrap().mu, Some(0));
        assert_eq!(min_mu(&e, &instance(&["x", "y"], &["x", "y"], &["1"])).unwrap().mu, Some(0));
    }

    #[test]
    fn tot_complex_image() {
        let e = Engine::new(MonomialOrder::grevlex());
        let inst = instance(&["x", "y"], &["x", "y"], &["x"]);
        let t = build_tot_complex(&e, &inst, 1, 4).unwrap();
        assert!(t.image_matches);
        assert!(t.tot.complex().is_complex());
        let inst = instance(&["x"], &["x"], &["x^2"]);
        let t = build_tot_complex(&e, &inst, 2, 4).unwrap();
        assert!(t.image_matches);
        assert_eq!(t.tot.complex().map(1).get(0, 0).to_string(), "x^4");
    }
}
