use crate::poly::RingRef;

use super::{ComplexError, GradedFreeComplex, PolyMatrix};

/// One direct summand `E^1_{l_1} ⊗ ... ⊗ E^r_{l_r}` of a diamond level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockInfo {
    /// Level `l_s` taken from each factor.
    pub levels: Vec<usize>,
    /// First basis index of the block inside its level.
    pub offset: usize,
    pub size: usize,
}

/// Diamond product `H = E^1 ◇ ... ◇ E^r` together with its block layout.
///
/// `H_0 = ⊗ E^s_0` and, for `k >= 1`, `H_k = ⊕_{|α| = k-1} ⊗ E^s_{1+α_s}`, blocks ordered
/// lexicographically in `α`. Inside a block the tensor basis is row-major with the first
/// factor most significant.
#[derive(Clone, Debug)]
pub struct DiamondComplex {
    factors: Vec<GradedFreeComplex>,
    result: GradedFreeComplex,
    blocks: Vec<Vec<BlockInfo>>,
}

impl DiamondComplex {
    pub fn factors(&self) -> &[GradedFreeComplex] {
        &self.factors
    }

    pub fn complex(&self) -> &GradedFreeComplex {
        &self.result
    }

    pub fn into_complex(self) -> GradedFreeComplex {
        self.result
    }

    /// Blocks of level `k` in basis order.
    pub fn blocks(&self, k: usize) -> &[BlockInfo] {
        &self.blocks[k]
    }

    /// Locates the block of `levels` inside level `k`.
    pub fn find_block(&self, levels: &[usize]) -> Option<(usize, &BlockInfo)> {
        let k = if levels.iter().all(|&l| l == 0) {
            0
        } else {
            1 + levels.iter().map(|&l| l.checked_sub(1)).sum::<Option<usize>>()?
        };
        self.blocks.get(k)?.iter().find(|b| b.levels == levels).map(|b| (k, b))
    }

    /// Rank of `H_k` predicted from the factor ranks.
    pub fn expected_rank(&self, k: usize) -> usize {
        expected_rank(&self.factors, k)
    }
}

fn expected_rank(factors: &[GradedFreeComplex], k: usize) -> usize {
    if k == 0 {
        return factors.iter().map(|f| f.rank(0)).product();
    }
    alphas(factors, k - 1)
        .iter()
        .map(|a| {
            factors
                .iter()
                .zip(a)
                .map(|(f, &ai)| f.rank(1 + ai))
                .product::<usize>()
        })
        .sum()
}

/// Tuples `α` with `|α| = total` and `0 <= α_s < length(E^s)`, in lexicographic order.
fn alphas(factors: &[GradedFreeComplex], total: usize) -> Vec<Vec<usize>> {
    fn rec(bounds: &[usize], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == bounds.len() {
            if left == 0 {
                out.push(cur.clone());
            }
            return;
        }
        let rest: usize = bounds[cur.len() + 1..].iter().sum();
        let b = bounds[cur.len()];
        for a in 0..=b.min(left) {
            if left - a > rest {
                continue;
            }
            cur.push(a);
            rec(bounds, left - a, cur, out);
            cur.pop();
        }
    }
    let bounds: Vec<usize> = factors.iter().map(|f| f.length().saturating_sub(1)).collect();
    let mut out = Vec::new();
    rec(&bounds, total, &mut Vec::new(), &mut out);
    out
}

/// `I ⊗ ... ⊗ m ⊗ ... ⊗ I` with `m` in slot `slot`; `dims` are the ranks of the other slots.
pub fn slot_operator(ring: &RingRef, dims: &[usize], slot: usize, m: &PolyMatrix) -> PolyMatrix {
    let mut out = PolyMatrix::identity(ring, 1);
    for (s, &d) in dims.iter().enumerate() {
        let factor = if s == slot {
            m.clone()
        } else {
            PolyMatrix::identity(ring, d)
        };
        out = out.kron(&factor);
    }
    out
}

/// The complex `0 <- R <- R <- 0` with identity map.
pub fn trivial_complex(ring: &RingRef) -> GradedFreeComplex {
    GradedFreeComplex::new(ring, vec![1, 1], vec![PolyMatrix::identity(ring, 1)])
        .expect("trivial complex is well formed")
}

/// Appends a trivial factor when the number of factors is even.
pub fn pad_to_odd(mut factors: Vec<GradedFreeComplex>) -> Vec<GradedFreeComplex> {
    if factors.len().is_multiple_of(2) {
        if let Some(ring) = factors.first().map(|f| f.ring().clone()) {
            factors.push(trivial_complex(&ring));
        }
    }
    factors
}

pub fn diamond_product(factors: &[GradedFreeComplex]) -> Result<DiamondComplex, ComplexError> {
    let Some(first) = factors.first() else {
        return Err(ComplexError::Invalid("diamond product of no complexes".into()));
    };
    let ring = first.ring().clone();
    let mut own = Vec::with_capacity(factors.len());
    for f in factors {
        if f.length() == 0 {
            return Err(ComplexError::Invalid("diamond factors need length at least 1".into()));
        }
        let maps = f
            .maps()
            .iter()
            .map(|m| m.reorder(&ring))
            .collect::<Result<Vec<_>, _>>()?;
        own.push(GradedFreeComplex::new(&ring, f.ranks().to_vec(), maps)?);
    }
    let factors = own;
    let top = 1 + factors.iter().map(|f| f.length() - 1).sum::<usize>();

    let mut blocks: Vec<Vec<BlockInfo>> = Vec::with_capacity(top + 1);
    blocks.push(vec![BlockInfo {
        levels: vec![0; factors.len()],
        offset: 0,
        size: expected_rank(&factors, 0),
    }]);
    for k in 1..=top {
        let mut offset = 0;
        let mut level = Vec::new();
        for a in alphas(&factors, k - 1) {
            let levels: Vec<usize> = a.iter().map(|x| x + 1).collect();
            let size = factors.iter().zip(&levels).map(|(f, &l)| f.rank(l)).product();
            level.push(BlockInfo { levels, offset, size });
            offset += size;
        }
        blocks.push(level);
    }
    let ranks: Vec<usize> = blocks.iter().map(|l| l.iter().map(|b| b.size).sum()).collect();

    let mut maps = Vec::with_capacity(top);
    let mut h1 = PolyMatrix::identity(&ring, 1);
    for f in &factors {
        h1 = h1.kron(f.map(1));
    }
    maps.push(h1);
    for k in 2..=top {
        let mut h = PolyMatrix::zeros(&ring, ranks[k - 1], ranks[k]);
        for src in &blocks[k] {
            let dims: Vec<usize> = factors.iter().zip(&src.levels).map(|(f, &l)| f.rank(l)).collect();
            for s in 0..factors.len() {
                let l = src.levels[s];
                if l < 2 {
                    continue;
                }
                let mut target_levels = src.levels.clone();
                target_levels[s] -= 1;
                let dst = blocks[k - 1]
                    .iter()
                    .find(|b| b.levels == target_levels)
                    .expect("target block exists");
                let op = slot_operator(&ring, &dims, s, factors[s].map(l));
                let odd = src.levels[..s].iter().sum::<usize>() % 2 == 1;
                for (i, j, p) in op.nonzero() {
                    let v = if odd { -p } else { p.clone() };
                    h.set(dst.offset + i, src.offset + j, v);
                }
            }
        }
        maps.push(h);
    }
    let result = GradedFreeComplex::new(&ring, ranks, maps)?;
    Ok(DiamondComplex {
        factors,
        result,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::koszul_complex;
    use crate::poly::{MonomialOrder, Ring};

    #[test]
    fn product_of_two_koszul_complexes() {
        let r = Ring::new(&["x", "y"], MonomialOrder::grevlex());
        let k = koszul_complex(&r, &[r.var(0), r.var(1)]).unwrap();
        let d = diamond_product(&[k.clone(), k]).unwrap();
        assert_eq!(d.complex().ranks(), &[1, 4, 4, 1]);
        assert!(d.complex().is_complex());
        for lvl in 0..=3 {
            assert_eq!(d.expected_rank(lvl), d.complex().rank(lvl));
        }
        assert_eq!(d.blocks(2)[0].levels, vec![1, 2]);
        assert_eq!(d.find_block(&[2, 1]).unwrap().1.offset, 2);
    }

    #[test]
    fn padding_adds_trivial_factor() {
        let r = Ring::new(&["x"], MonomialOrder::grevlex());
        let k = koszul_complex(&r, &[r.var(0)]).unwrap();
        let padded = pad_to_odd(vec![k.clone(), k]);
        assert_eq!(padded.len(), 3);
        let d = diamond_product(&padded).unwrap();
        assert_eq!(d.complex().ranks(), &[1, 1]);
        assert_eq!(d.complex().map(1).get(0, 0), r.parse("x^2").unwrap());
    }
}
