use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Sign of `dz̄_J ∧ dz̄_K` relative to `dz̄_{J ∪ K}` (indices increasing); zero if they meet.
pub fn wedge_sign(j: u32, k: u32) -> i32 {
    if j & k != 0 {
        return 0;
    }
    let mut swaps = 0;
    let mut rest = k;
    while rest != 0 {
        let b = rest.trailing_zeros();
        swaps += (j >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Pointwise value of a `(0, *)`-form with values in `End(E)`.
///
/// Entry `(dst, src, mask)` holds the matrix `E_src -> E_dst` multiplying `dz̄_mask`, the
/// form written to the left. Products follow the super sign rule
/// `(ω_J ⊗ A)(ω_K ⊗ B) = (-1)^{deg A · |K|} ω_J ∧ ω_K ⊗ AB`, `deg A = dst - src mod 2`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct GradedForm {
    blocks: BTreeMap<(usize, usize, u32), DMatrix<Complex64>>,
}

impl GradedForm {
    pub fn new() -> Self {
        Self::default()
    }

    /// Identity on the levels with the given ranks.
    pub fn identity(ranks: &[usize]) -> Self {
        let mut f = Self::new();
        for (k, &r) in ranks.iter().enumerate() {
            f.add(k, k, 0, DMatrix::identity(r, r));
        }
        f
    }

    pub fn add(&mut self, dst: usize, src: usize, mask: u32, m: DMatrix<Complex64>) {
        match self.blocks.get_mut(&(dst, src, mask)) {
            Some(existing) => *existing += m,
            None => {
                self.blocks.insert((dst, src, mask), m);
            }
        }
    }

    pub fn get(&self, dst: usize, src: usize, mask: u32) -> Option<&DMatrix<Complex64>> {
        self.blocks.get(&(dst, src, mask))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(usize, usize, u32), &DMatrix<Complex64>)> {
        self.blocks.iter()
    }

    pub fn mul(&self, other: &GradedForm) -> GradedForm {
        let mut out = GradedForm::new();
        for (&(d, m, j), a) in &self.blocks {
            let odd = (d + m) % 2 == 1;
            for (&(m2, s, k), b) in other.blocks.range((m, 0, 0)..(m + 1, 0, 0)) {
                debug_assert_eq!(m2, m);
                let w = wedge_sign(j, k);
                if w == 0 {
                    continue;
                }
                let flip = odd && k.count_ones() % 2 == 1;
                let sign = if flip { -w } else { w };
                out.add(d, s, j | k, a * b * Complex64::new(sign as f64, 0.0));
            }
        }
        out
    }

    pub fn sub(&self, other: &GradedForm) -> GradedForm {
        let mut out = self.clone();
        for (&(d, s, m), b) in &other.blocks {
            out.add(d, s, m, -b);
        }
        out
    }

    /// Keeps the components with source level `src`.
    pub fn restrict_source(&self, src: usize) -> GradedForm {
        GradedForm {
            blocks: self
                .blocks
                .iter()
                .filter(|((_, s, _), _)| *s == src)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Keeps the components of form degree `q`.
    pub fn form_degree(&self, q: u32) -> GradedForm {
        GradedForm {
            blocks: self
                .blocks
                .iter()
                .filter(|((_, _, m), _)| m.count_ones() == q)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .values()
            .flat_map(|m| m.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.blocks
            .values()
            .flat_map(|m| m.iter())
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}
