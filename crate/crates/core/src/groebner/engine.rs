//! Buchberger's algorithm on sparse module vectors.

use std::cmp::Ordering;
use std::collections::HashSet;

use num_traits::{One, Zero};

use crate::poly::{Coeff, FreeModuleElement, Monomial, MonomialOrder, Polynomial, RingRef};

use super::GbError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModTerm {
    pub mono: Monomial,
    pub pos: usize,
    pub coeff: Coeff,
}

/// Module vector as a list of terms sorted strictly descending under the module order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct ModVec {
    pub terms: Vec<ModTerm>,
}

fn cmp_terms(ord: &MonomialOrder, a: &ModTerm, b: &ModTerm) -> Ordering {
    ord.cmp_module((a.mono.exponents(), a.pos), (b.mono.exponents(), b.pos))
}

impl ModVec {
    pub fn from_terms(ord: &MonomialOrder, mut terms: Vec<ModTerm>) -> Self {
        terms.sort_by(|a, b| cmp_terms(ord, b, a));
        let mut out: Vec<ModTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.mono == t.mono && last.pos == t.pos => last.coeff += t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        ModVec { terms: out }
    }

    pub fn from_element(ord: &MonomialOrder, v: &FreeModuleElement) -> Self {
        let terms = v
            .components()
            .iter()
            .enumerate()
            .flat_map(|(pos, p)| {
                p.terms().iter().map(move |(m, c)| ModTerm {
                    mono: m.clone(),
                    pos,
                    coeff: c.clone(),
                })
            })
            .collect();
        Self::from_terms(ord, terms)
    }

    pub fn to_element(&self, ring: &RingRef, rank: usize) -> FreeModuleElement {
        let mut comps: Vec<Vec<(Monomial, Coeff)>> = vec![Vec::new(); rank];
        for t in &self.terms {
            comps[t.pos].push((t.mono.clone(), t.coeff.clone()));
        }
        FreeModuleElement::new(
            comps
                .into_iter()
                .map(|terms| Polynomial::from_terms(ring, terms))
                .collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> &ModTerm {
        &self.terms[0]
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.mono.degree()).max().unwrap_or(0)
    }

    pub fn monic(mut self) -> Self {
        if let Some(first) = self.terms.first() {
            if !first.coeff.is_one() {
                let inv = first.coeff.recip();
                for t in &mut self.terms {
                    t.coeff *= &inv;
                }
            }
        }
        self
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        ModVec {
            terms: self
                .terms
                .iter()
                .map(|t| ModTerm {
                    mono: t.mono.mul(m),
                    pos: t.pos,
                    coeff: t.coeff.clone(),
                })
                .collect(),
        }
    }
}

/// `a - c * m * b` for descending term slices.
fn sub_scaled(
    ord: &MonomialOrder,
    a: &[ModTerm],
    c: &Coeff,
    m: &Monomial,
    b: &[ModTerm],
) -> Vec<ModTerm> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let shifted = |t: &ModTerm| ModTerm {
        mono: t.mono.mul(m),
        pos: t.pos,
        coeff: -(c * &t.coeff),
    };
    while i < a.len() || j < b.len() {
        if j == b.len() {
            out.extend_from_slice(&a[i..]);
            break;
        }
        let bt = shifted(&b[j]);
        if i == a.len() {
            out.push(bt);
            j += 1;
            continue;
        }
        match cmp_terms(ord, &a[i], &bt) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                out.push(bt);
                j += 1;
            }
            Ordering::Equal => {
                let s = &a[i].coeff + &bt.coeff;
                if !s.is_zero() {
                    out.push(ModTerm {
                        mono: bt.mono,
                        pos: bt.pos,
                        coeff: s,
                    });
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn find_divisor<'a>(basis: &'a [ModVec], t: &ModTerm, skip: Option<usize>) -> Option<&'a ModVec> {
    basis.iter().enumerate().find_map(|(k, g)| {
        if Some(k) == skip || g.is_zero() {
            return None;
        }
        let lt = g.lead();
        (lt.pos == t.pos && lt.mono.divides(&t.mono)).then_some(g)
    })
}

/// Multivariate division remainder. With `full == false` only the leading term is reduced.
pub(crate) fn reduce(
    ord: &MonomialOrder,
    h: &ModVec,
    basis: &[ModVec],
    skip: Option<usize>,
    full: bool,
) -> ModVec {
    let mut rem: Vec<ModTerm> = Vec::new();
    let mut work = h.terms.clone();
    let mut start = 0;
    while start < work.len() {
        let t = &work[start];
        match find_divisor(basis, t, skip) {
            Some(g) => {
                let lg = g.lead();
                let q = lg.mono.quotient_of(&t.mono).expect("divisor divides");
                let c = &t.coeff / &lg.coeff;
                work = sub_scaled(ord, &work[start..], &c, &q, &g.terms);
                start = 0;
            }
            None => {
                if !full {
                    rem.extend_from_slice(&work[start..]);
                    return ModVec { terms: rem };
                }
                rem.push(work[start].clone());
                start += 1;
            }
        }
    }
    ModVec { terms: rem }
}

/// S-vector of two basis elements with the same leading position.
pub(crate) fn s_vector(ord: &MonomialOrder, f: &ModVec, g: &ModVec) -> ModVec {
    let (lf, lg) = (f.lead(), g.lead());
    debug_assert_eq!(lf.pos, lg.pos);
    let l = lf.mono.lcm(&lg.mono);
    let mf = lf.mono.quotient_of(&l).unwrap();
    let mg = lg.mono.quotient_of(&l).unwrap();
    let left = f.mul_monomial(&mf);
    let c = &lf.coeff / &lg.coeff;
    ModVec {
        terms: sub_scaled(ord, &left.terms, &c, &mg, &g.terms),
    }
}

/// Resource limits; exceeding any of them aborts with [`GbError::BudgetExhausted`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_degree: u32,
    pub max_basis: usize,
    pub max_pairs: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_degree: 64,
            max_basis: 5_000,
            max_pairs: 500_000,
        }
    }
}

impl Budget {
    /// Default budget with `ARLAB_MAX_DEGREE`, `ARLAB_MAX_BASIS` and `ARLAB_MAX_PAIRS` overrides.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        let read = |key: &str| std::env::var(key).ok().and_then(|v| v.trim().parse::<usize>().ok());
        if let Some(v) = read("ARLAB_MAX_DEGREE") {
            b.max_degree = v as u32;
        }
        if let Some(v) = read("ARLAB_MAX_BASIS") {
            b.max_basis = v;
        }
        if let Some(v) = read("ARLAB_MAX_PAIRS") {
            b.max_pairs = v;
        }
        b
    }
}

/// Order in which critical pairs are treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum PairStrategy {
    /// Smallest lcm degree first, ties by generator indices.
    #[default]
    Normal,
    /// First created, first treated.
    Fifo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct GbOptions {
    pub budget: Budget,
    pub strategy: PairStrategy,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    pos: usize,
    serial: usize,
}

/// Reduced Gröbner basis of the module generated by `gens`.
pub(crate) fn groebner(
    ord: &MonomialOrder,
    gens: Vec<ModVec>,
    ideal_case: bool,
    opts: &GbOptions,
) -> Result<Vec<ModVec>, GbError> {
    let budget = opts.budget;
    let mut basis: Vec<ModVec> = Vec::new();
    for g in gens {
        if g.is_zero() {
            continue;
        }
        let g = g.monic();
        if g.degree() > budget.max_degree {
            return Err(GbError::BudgetExhausted(format!(
                "input degree {} exceeds max degree {}",
                g.degree(),
                budget.max_degree
            )));
        }
        if !basis.contains(&g) {
            basis.push(g);
        }
    }

    let mut pending: Vec<Pair> = Vec::new();
    let mut pending_set: HashSet<(usize, usize)> = HashSet::new();
    let mut serial = 0usize;
    let mut push_pair = |i: usize, j: usize, basis: &[ModVec], pending: &mut Vec<Pair>, set: &mut HashSet<(usize, usize)>| {
        let (a, b) = (basis[i].lead(), basis[j].lead());
        if a.pos != b.pos {
            return;
        }
        pending.push(Pair {
            i,
            j,
            lcm: a.mono.lcm(&b.mono),
            pos: a.pos,
            serial,
        });
        serial += 1;
        set.insert((i, j));
    };
    for j in 0..basis.len() {
        for i in 0..j {
            push_pair(i, j, &basis, &mut pending, &mut pending_set);
        }
    }

    let mut treated = 0usize;
    while !pending.is_empty() {
        let pick = match opts.strategy {
            PairStrategy::Fifo => pending
                .iter()
                .enumerate()
                .min_by_key(|(_, p)| p.serial)
                .map(|(k, _)| k)
                .unwrap(),
            PairStrategy::Normal => pending
                .iter()
                .enumerate()
                .min_by(|(_, p), (_, q)| {
                    p.lcm
                        .degree()
                        .cmp(&q.lcm.degree())
                        .then(p.i.cmp(&q.i))
                        .then(p.j.cmp(&q.j))
                })
                .map(|(k, _)| k)
                .unwrap(),
        };
        let pair = pending.swap_remove(pick);
        pending_set.remove(&(pair.i, pair.j));
        treated += 1;
        if treated > budget.max_pairs {
            return Err(GbError::BudgetExhausted(format!(
                "more than {} critical pairs",
                budget.max_pairs
            )));
        }

        let (li, lj) = (&basis[pair.i].lead().mono, &basis[pair.j].lead().mono);
        if ideal_case && li.is_coprime(lj) {
            continue;
        }
        let chain = (0..basis.len()).any(|k| {
            if k == pair.i || k == pair.j {
                return false;
            }
            let lk = basis[k].lead();
            lk.pos == pair.pos
                && lk.mono.divides(&pair.lcm)
                && !pending_set.contains(&(pair.i.min(k), pair.i.max(k)))
                && !pending_set.contains(&(pair.j.min(k), pair.j.max(k)))
        });
        if chain {
            continue;
        }

        let s = s_vector(ord, &basis[pair.i], &basis[pair.j]);
        let h = reduce(ord, &s, &basis, None, true);
        if h.is_zero() {
            continue;
        }
        let h = h.monic();
        if h.degree() > budget.max_degree {
            return Err(GbError::BudgetExhausted(format!(
                "basis element of degree {} exceeds max degree {}",
                h.degree(),
                budget.max_degree
            )));
        }
        basis.push(h);
        if basis.len() > budget.max_basis {
            return Err(GbError::BudgetExhausted(format!(
                "basis larger than {} elements",
                budget.max_basis
            )));
        }
        let t = basis.len() - 1;
        for i in 0..t {
            push_pair(i, t, &basis, &mut pending, &mut pending_set);
        }
    }

    Ok(reduce_basis(ord, basis))
}

/// Minimizes, tail-reduces, normalizes and sorts a Gröbner basis.
pub(crate) fn reduce_basis(ord: &MonomialOrder, basis: Vec<ModVec>) -> Vec<ModVec> {
    let mut keep: Vec<ModVec> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let lg = g.lead();
        let redundant = basis.iter().enumerate().any(|(l, h)| {
            if l == k {
                return false;
            }
            let lh = h.lead();
            lh.pos == lg.pos
                && lh.mono.divides(&lg.mono)
                && (lh.mono != lg.mono || l < k)
        });
        if !redundant {
            keep.push(g.clone());
        }
    }
    for k in 0..keep.len() {
        let r = reduce(ord, &keep[k], &keep, Some(k), true);
        keep[k] = r.monic();
    }
    keep.sort_by(|a, b| cmp_terms(ord, b.lead(), a.lead()));
    keep
}
