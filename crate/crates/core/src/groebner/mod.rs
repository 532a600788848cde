//! Gröbner bases of submodules of free modules, and the operations built on them:
//! membership, ideal powers and products, intersections, syzygies and free resolutions.

mod engine;
mod resolution;

use thiserror::Error;

use crate::complexes::ComplexError;
use crate::poly::{
    FreeModuleElement, ModuleExtension, MonomialOrder, PolyError, Polynomial, PositionPreference, RingRef,
};

use engine::{groebner, reduce, s_vector, ModVec};

pub use engine::{Budget, GbOptions, PairStrategy};
pub use resolution::Resolution;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GbError {
    #[error("budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("{0}")]
    Invalid(String),
}

/// A submodule of `R^rank` given by generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubmoduleSpec {
    ring: RingRef,
    rank: usize,
    generators: Vec<FreeModuleElement>,
}

impl SubmoduleSpec {
    pub fn new(ring: &RingRef, rank: usize, generators: Vec<FreeModuleElement>) -> Result<Self, GbError> {
        if rank == 0 {
            return Err(GbError::Invalid("free module rank must be positive".into()));
        }
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.rank() != rank {
                return Err(PolyError::RankMismatch {
                    left: rank,
                    right: g.rank(),
                }
                .into());
            }
            let comps = g
                .components()
                .iter()
                .map(|p| p.reorder(ring))
                .collect::<Result<Vec<_>, _>>()?;
            gens.push(FreeModuleElement::new(comps));
        }
        Ok(SubmoduleSpec {
            ring: ring.clone(),
            rank,
            generators: gens,
        })
    }

    /// The ideal generated by `generators`, as a submodule of `R^1`.
    pub fn ideal(ring: &RingRef, generators: Vec<Polynomial>) -> Result<Self, GbError> {
        Self::new(ring, 1, generators.into_iter().map(FreeModuleElement::scalar).collect())
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn generators(&self) -> &[FreeModuleElement] {
        &self.generators
    }

    /// Generators of an ideal (`rank == 1`) as polynomials.
    pub fn ideal_generators(&self) -> Vec<Polynomial> {
        self.generators.iter().map(|g| g.component(0).clone()).collect()
    }

    pub fn max_degree(&self) -> u32 {
        self.generators
            .iter()
            .filter_map(FreeModuleElement::total_degree)
            .max()
            .unwrap_or(0)
    }
}

/// Gröbner basis of a submodule with respect to a fixed module order.
#[derive(Clone, Debug)]
pub struct GroebnerBasis {
    spec: SubmoduleSpec,
    order: MonomialOrder,
    elements: Vec<FreeModuleElement>,
    internal: Vec<ModVec>,
}

impl GroebnerBasis {
    pub fn spec(&self) -> &SubmoduleSpec {
        &self.spec
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Reduced basis, monic, sorted by decreasing leading term.
    pub fn elements(&self) -> &[FreeModuleElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check(&self, v: &FreeModuleElement) -> Result<(), GbError> {
        if v.rank() != self.spec.rank {
            return Err(PolyError::RankMismatch {
                left: self.spec.rank,
                right: v.rank(),
            }
            .into());
        }
        if v.ring().vars() != self.spec.ring.vars() {
            return Err(PolyError::RingMismatch.into());
        }
        Ok(())
    }

    /// Remainder of `v` on division by the basis.
    pub fn normal_form(&self, v: &FreeModuleElement) -> Result<FreeModuleElement, GbError> {
        self.check(v)?;
        let h = ModVec::from_element(&self.order, v);
        let r = reduce(&self.order, &h, &self.internal, None, true);
        Ok(r.to_element(&self.spec.ring, self.spec.rank))
    }

    pub fn contains(&self, v: &FreeModuleElement) -> Result<bool, GbError> {
        self.check(v)?;
        let h = ModVec::from_element(&self.order, v);
        Ok(reduce(&self.order, &h, &self.internal, None, false).is_zero())
    }

    /// Buchberger's criterion: every S-vector reduces to zero.
    pub fn s_pairs_reduce_to_zero(&self) -> bool {
        let b = &self.internal;
        (0..b.len()).all(|j| {
            (0..j).all(|i| {
                b[i].lead().pos != b[j].lead().pos
                    || reduce(&self.order, &s_vector(&self.order, &b[i], &b[j]), b, None, true).is_zero()
            })
        })
    }

    /// No term of any element is divisible by the leading term of another.
    pub fn is_reduced(&self) -> bool {
        let b = &self.internal;
        b.iter().enumerate().all(|(k, g)| {
            g.lead().coeff == num_traits::One::one()
                && g.terms.iter().all(|t| {
                    b.iter().enumerate().all(|(l, h)| {
                        l == k || h.lead().pos != t.pos || !h.lead().mono.divides(&t.mono)
                    })
                })
        })
    }
}

/// Gröbner computations for a fixed module order and budget.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Engine {
    pub order: MonomialOrder,
    pub options: GbOptions,
}

impl Engine {
    pub fn new(order: MonomialOrder) -> Self {
        Engine {
            order,
            options: GbOptions::default(),
        }
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.options.budget = budget;
        self
    }

    pub fn with_strategy(mut self, strategy: PairStrategy) -> Self {
        self.options.strategy = strategy;
        self
    }

    pub fn basis(&self, spec: &SubmoduleSpec) -> Result<GroebnerBasis, GbError> {
        let gens = spec
            .generators
            .iter()
            .map(|g| ModVec::from_element(&self.order, g))
            .collect();
        let internal = groebner(&self.order, gens, spec.rank == 1, &self.options)?;
        let elements = internal
            .iter()
            .map(|g| g.to_element(&spec.ring, spec.rank))
            .collect();
        Ok(GroebnerBasis {
            spec: spec.clone(),
            order: self.order,
            elements,
            internal,
        })
    }

    /// Whether the submodule `a` lies in `b`.
    pub fn is_contained(&self, a: &SubmoduleSpec, b: &SubmoduleSpec) -> Result<bool, GbError> {
        Ok(self.first_outside(a, b)?.is_none())
    }

    /// First generator of `a` that is not in `b`, with its normal form modulo `b`.
    pub fn first_outside(
        &self,
        a: &SubmoduleSpec,
        b: &SubmoduleSpec,
    ) -> Result<Option<(FreeModuleElement, FreeModuleElement)>, GbError> {
        let gb = self.basis(b)?;
        for g in &a.generators {
            let nf = gb.normal_form(g)?;
            if !nf.is_zero() {
                return Ok(Some((g.clone(), nf)));
            }
        }
        Ok(None)
    }

    pub fn same_submodule(&self, a: &SubmoduleSpec, b: &SubmoduleSpec) -> Result<bool, GbError> {
        Ok(self.is_contained(a, b)? && self.is_contained(b, a)?)
    }

    /// `a ∩ b` by eliminating an auxiliary variable `t` from `t·a + (1 - t)·b`.
    pub fn intersect(&self, a: &SubmoduleSpec, b: &SubmoduleSpec) -> Result<SubmoduleSpec, GbError> {
        if a.rank != b.rank {
            return Err(PolyError::RankMismatch {
                left: a.rank,
                right: b.rank,
            }
            .into());
        }
        if a.ring.vars() != b.ring.vars() {
            return Err(PolyError::RingMismatch.into());
        }
        let order = self
            .order
            .with_elimination_block(1)
            .with_module_extension(ModuleExtension::TermOverPosition);
        let ext = a.ring.extend_front(&["__t"], order);
        let t = ext.var(0);
        let one_minus_t = &ext.one() - &t;
        let lift = |g: &FreeModuleElement, m: &Polynomial| {
            FreeModuleElement::new(
                g.components()
                    .iter()
                    .map(|p| &p.extend_front(&ext, 1) * m)
                    .collect(),
            )
        };
        let mut gens: Vec<FreeModuleElement> = a.generators.iter().map(|g| lift(g, &t)).collect();
        gens.extend(b.generators.iter().map(|g| lift(g, &one_minus_t)));
        let spec = SubmoduleSpec::new(&ext, a.rank, gens)?;
        let engine = Engine {
            order,
            options: self.options,
        };
        let gb = engine.basis(&spec)?;
        let kept = gb
            .elements
            .iter()
            .filter_map(|g| {
                g.components()
                    .iter()
                    .map(|p| p.strip_front(&a.ring, 1))
                    .collect::<Option<Vec<_>>>()
                    .map(FreeModuleElement::new)
            })
            .collect();
        SubmoduleSpec::new(&a.ring, a.rank, kept)
    }

    /// Generators of the syzygy module of `spec.generators()`, a submodule of `R^k`.
    pub fn syzygies(&self, spec: &SubmoduleSpec) -> Result<SubmoduleSpec, GbError> {
        let k = spec.generators.len();
        if k == 0 {
            return Err(GbError::Invalid("syzygies of an empty generator list".into()));
        }
        let m = spec.rank;
        // e_i + g_i in R^(k+m); with the g-block ranked above the e-block, basis elements
        // whose leading position lies in the e-block have vanishing g-part.
        let order = self
            .order
            .with_module_extension(ModuleExtension::PositionOverTerm)
            .with_position_preference(PositionPreference::Ascending);
        let gens: Vec<FreeModuleElement> = spec
            .generators
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let mut comps = vec![spec.ring.zero(); k + m];
                comps[i] = spec.ring.one();
                for (j, p) in g.components().iter().enumerate() {
                    comps[k + j] = p.clone();
                }
                FreeModuleElement::new(comps)
            })
            .collect();
        let lifted = SubmoduleSpec::new(&spec.ring, k + m, gens)?;
        let engine = Engine {
            order,
            options: self.options,
        };
        let gb = engine.basis(&lifted)?;
        let syz = gb
            .internal
            .iter()
            .filter(|g| g.lead().pos < k)
            .map(|g| {
                let full = g.to_element(&spec.ring, k + m);
                debug_assert!(full.components()[k..].iter().all(Polynomial::is_zero));
                FreeModuleElement::new(full.components()[..k].to_vec())
            })
            .collect();
        SubmoduleSpec::new(&spec.ring, k, syz)
    }

    /// Drops generators that lie in the submodule spanned by the remaining ones.
    pub fn minimize_generators(&self, spec: &SubmoduleSpec) -> Result<SubmoduleSpec, GbError> {
        let mut kept: Vec<FreeModuleElement> = Vec::new();
        for g in &spec.generators {
            if !g.is_zero() && !kept.contains(g) {
                kept.push(g.clone());
            }
        }
        let mut i = kept.len();
        while i > 0 {
            i -= 1;
            let mut others = kept.clone();
            let g = others.remove(i);
            if others.is_empty() {
                continue;
            }
            let gb = self.basis(&SubmoduleSpec::new(&spec.ring, spec.rank, others.clone())?)?;
            if gb.contains(&g)? {
                kept = others;
            }
        }
        SubmoduleSpec::new(&spec.ring, spec.rank, kept)
    }

    pub fn free_resolution(&self, spec: &SubmoduleSpec, max_length: usize) -> Result<Resolution, GbError> {
        resolution::free_resolution(self, spec, max_length)
    }
}

/// `I^r`: all products of `r` generators of the ideal `ideal`.
pub fn ideal_power(ideal: &SubmoduleSpec, r: u32) -> Result<SubmoduleSpec, GbError> {
    if ideal.rank != 1 {
        return Err(GbError::Invalid("ideal_power expects an ideal".into()));
    }
    let gens = ideal.ideal_generators();
    let mut current: Vec<(usize, Polynomial)> = vec![(0, ideal.ring.one())];
    for _ in 0..r {
        let mut next = Vec::new();
        for (start, p) in &current {
            for (i, g) in gens.iter().enumerate().skip(*start) {
                next.push((i, p * g));
            }
        }
        current = next;
    }
    let mut out: Vec<Polynomial> = Vec::new();
    for (_, p) in current {
        if !p.is_zero() && !out.contains(&p) {
            out.push(p);
        }
    }
    SubmoduleSpec::ideal(&ideal.ring, out)
}

/// `I·N`: products of ideal generators with module generators.
pub fn module_product(ideal: &SubmoduleSpec, module: &SubmoduleSpec) -> Result<SubmoduleSpec, GbError> {
    if ideal.rank != 1 {
        return Err(GbError::Invalid("module_product expects an ideal as first argument".into()));
    }
    let mut out: Vec<FreeModuleElement> = Vec::new();
    for a in ideal.ideal_generators() {
        for n in &module.generators {
            let v = n.mul_poly(&a.reorder(module.ring())?)?;
            if !v.is_zero() && !out.contains(&v) {
                out.push(v);
            }
        }
    }
    SubmoduleSpec::new(&module.ring, module.rank, out)
}

pub fn buchberger(spec: &SubmoduleSpec, order: &MonomialOrder) -> Result<GroebnerBasis, GbError> {
    Engine::new(*order).basis(spec)
}

pub fn normal_form(
    v: &FreeModuleElement,
    basis: &GroebnerBasis,
) -> Result<FreeModuleElement, GbError> {
    basis.normal_form(v)
}

pub fn is_contained(a: &SubmoduleSpec, b: &SubmoduleSpec, order: &MonomialOrder) -> Result<bool, GbError> {
    Engine::new(*order).is_contained(a, b)
}

pub fn intersect(a: &SubmoduleSpec, b: &SubmoduleSpec) -> Result<SubmoduleSpec, GbError> {
    Engine::new(*a.ring.order()).intersect(a, b)
}

pub fn syzygies(spec: &SubmoduleSpec, order: &MonomialOrder) -> Result<SubmoduleSpec, GbError> {
    Engine::new(*order).syzygies(spec)
}

pub fn free_resolution(spec: &SubmoduleSpec, max_length: usize) -> Result<Resolution, GbError> {
    Engine::new(*spec.ring.order()).free_resolution(spec, max_length)
}
