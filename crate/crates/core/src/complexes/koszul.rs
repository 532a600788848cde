use crate::poly::{Polynomial, RingRef};

use super::{ComplexError, GradedFreeComplex, PolyMatrix};

/// Increasing `k`-subsets of `0..m` in lexicographic order.
pub fn subsets_of_size(m: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            if m - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, m, k, &mut Vec::new(), &mut out);
    out
}

/// Koszul complex of `a_1, ..., a_m`: `E_k = Λ^k R^m` with
/// `f(e_S) = Σ_p (-1)^p a_{S_p} e_{S \ S_p}`.
pub fn koszul_complex(ring: &RingRef, generators: &[Polynomial]) -> Result<GradedFreeComplex, ComplexError> {
    let m = generators.len();
    if m == 0 {
        return Err(ComplexError::Invalid("Koszul complex needs at least one generator".into()));
    }
    let bases: Vec<Vec<Vec<usize>>> = (0..=m).map(|k| subsets_of_size(m, k)).collect();
    let mut maps = Vec::with_capacity(m);
    for k in 1..=m {
        let mut f = PolyMatrix::zeros(ring, bases[k - 1].len(), bases[k].len());
        for (col, s) in bases[k].iter().enumerate() {
            for p in 0..s.len() {
                let mut rest = s.clone();
                let i = rest.remove(p);
                let row = bases[k - 1].binary_search(&rest).expect("subset present");
                let a = generators[i].reorder(ring)?;
                f.set(row, col, if p % 2 == 0 { a } else { -a });
            }
        }
        maps.push(f);
    }
    GradedFreeComplex::new(ring, bases.iter().map(Vec::len).collect(), maps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, Ring};

    #[test]
    fn two_generators() {
        let r = Ring::new(&["x", "y"], MonomialOrder::grevlex());
        let k = koszul_complex(&r, &[r.var(0), r.var(1)]).unwrap();
        assert_eq!(k.ranks(), &[1, 2, 1]);
        assert_eq!(k.map(1).get(0, 0), r.var(0));
        assert_eq!(k.map(1).get(0, 1), r.var(1));
        assert_eq!(k.map(2).get(0, 0), -r.var(1));
        assert_eq!(k.map(2).get(1, 0), r.var(0));
        assert!(k.is_complex());
    }

    #[test]
    fn ranks_are_binomial() {
        let r = Ring::indexed(4, MonomialOrder::grevlex());
        let gens: Vec<_> = (0..4).map(|i| r.var(i)).collect();
        let k = koszul_complex(&r, &gens).unwrap();
        assert_eq!(k.ranks(), &[1, 4, 6, 4, 1]);
        assert!(k.is_complex());
        assert_eq!(subsets_of_size(4, 2)[1], vec![0, 2]);
    }
}
