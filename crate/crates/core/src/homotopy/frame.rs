use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::complexes::{koszul_complex, DiamondComplex, GradedFreeComplex};
use crate::poly::{Polynomial, RingRef};

use super::form::wedge_sign;
use super::sigma::{dbar_sigma_fd, dbar_sigma_koszul, sigma_at, sigma_koszul, FD_STEP};
use super::{GradedForm, HomotopyError};

/// A complex frozen at one point: `f`, its minimal inverse `σ` and `∂̄σ`.
#[derive(Clone, Debug)]
pub struct PointFrame {
    ranks: Vec<usize>,
    f: GradedForm,
    sigma: GradedForm,
    dbar_sigma: GradedForm,
}

impl PointFrame {
    pub fn from_parts(ranks: Vec<usize>, f: GradedForm, sigma: GradedForm, dbar_sigma: GradedForm) -> Self {
        PointFrame {
            ranks,
            f,
            sigma,
            dbar_sigma,
        }
    }

    fn f_form(complex: &GradedFreeComplex, point: &[Complex64]) -> GradedForm {
        let mut f = GradedForm::new();
        for (k, m) in complex.eval_complex(point).into_iter().enumerate() {
            f.add(k, k + 1, 0, m);
        }
        f
    }

    /// Koszul complex of `gens` with the closed-form σ and exact `∂̄σ`.
    pub fn koszul(ring: &RingRef, gens: &[Polynomial], point: &[Complex64]) -> Result<Self, HomotopyError> {
        let complex = koszul_complex(ring, gens)?;
        Ok(PointFrame {
            ranks: complex.ranks().to_vec(),
            f: Self::f_form(&complex, point),
            sigma: sigma_koszul(gens, point)?,
            dbar_sigma: dbar_sigma_koszul(gens, point)?,
        })
    }

    /// Any complex, pointwise exact at `point`; σ by pseudoinverses, `∂̄σ` by finite differences.
    pub fn general(complex: &GradedFreeComplex, point: &[Complex64]) -> Result<Self, HomotopyError> {
        if complex.ring().nvars() != point.len() {
            return Err(HomotopyError::Dimension(format!(
                "point has {} coordinates, ring has {} variables",
                point.len(),
                complex.ring().nvars()
            )));
        }
        Ok(PointFrame {
            ranks: complex.ranks().to_vec(),
            f: Self::f_form(complex, point),
            sigma: sigma_at(complex, point)?,
            dbar_sigma: dbar_sigma_fd(complex, point, FD_STEP)?,
        })
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn f(&self) -> &GradedForm {
        &self.f
    }

    pub fn sigma(&self) -> &GradedForm {
        &self.sigma
    }

    pub fn dbar_sigma(&self) -> &GradedForm {
        &self.dbar_sigma
    }

    fn unit_e0(&self) -> GradedForm {
        let mut e = GradedForm::new();
        e.add(0, 0, 0, DMatrix::identity(self.ranks[0], self.ranks[0]));
        e
    }

    /// `u = Σ_j u_j` on `E_0`, with `u_1 = σ_1` and `u_{j+1} = ∂̄σ u_j`.
    pub fn u(&self) -> GradedForm {
        let mut term = self.sigma.mul(&self.unit_e0());
        let mut total = GradedForm::new();
        for _ in 1..self.ranks.len() {
            for (&(d, s, m), b) in term.blocks() {
                total.add(d, s, m, b.clone());
            }
            term = self.dbar_sigma.mul(&term);
        }
        total
    }

    /// `∂̄u = Σ_j (∂̄σ)^j` on `E_0`, using `∂̄∂̄σ = 0`.
    pub fn dbar_u(&self) -> GradedForm {
        let mut term = self.unit_e0();
        let mut total = GradedForm::new();
        for _ in 1..self.ranks.len() {
            term = self.dbar_sigma.mul(&term);
            for (&(d, s, m), b) in term.blocks() {
                total.add(d, s, m, b.clone());
            }
        }
        total
    }

    /// `(∂̄σ)^j` on all of `E`.
    pub fn dbar_sigma_power(&self, j: usize) -> GradedForm {
        let mut term = GradedForm::identity(&self.ranks);
        for _ in 0..j {
            term = self.dbar_sigma.mul(&term);
        }
        term
    }

    /// Largest entry of `f u - ∂̄u - 1` on `E_0`.
    pub fn nabla_residual(&self) -> f64 {
        self.f
            .mul(&self.u())
            .sub(&self.dbar_u())
            .sub(&self.unit_e0())
            .max_abs()
    }
}

/// Key of a basis vector of `W = Λ(dz̄) ⊗ E^1 ⊗ ... ⊗ E^r`: form mask and `(level, index)` per slot.
pub type WKey = (u32, Vec<(usize, usize)>);

/// Element of `W` at a point.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WVector {
    terms: BTreeMap<WKey, Complex64>,
}

impl WVector {
    pub fn basis(key: WKey) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(key, Complex64::new(1.0, 0.0));
        WVector { terms }
    }

    pub fn terms(&self) -> &BTreeMap<WKey, Complex64> {
        &self.terms
    }

    pub fn add_term(&mut self, key: WKey, c: Complex64) {
        if c == Complex64::new(0.0, 0.0) {
            return;
        }
        *self.terms.entry(key).or_insert(Complex64::new(0.0, 0.0)) += c;
    }

    pub fn add_assign(&mut self, other: &WVector, scale: f64) {
        for (k, &c) in &other.terms {
            self.add_term(k.clone(), c * scale);
        }
    }

    /// Applies the operator `op`, acting on slot `slot`, with the super sign rule.
    pub fn apply_slot(&self, slot: usize, op: &GradedForm) -> WVector {
        let mut out = WVector::default();
        for ((mask, b), &c) in &self.terms {
            let (lvl, idx) = b[slot];
            let before: usize = b[..slot].iter().map(|x| x.0).sum();
            for (&(dst, src, j), m) in op.blocks() {
                if src != lvl {
                    continue;
                }
                let w = wedge_sign(j, *mask);
                if w == 0 {
                    continue;
                }
                let odd_op = (dst + src) % 2 == 1;
                let flip = odd_op && (mask.count_ones() as usize + before) % 2 == 1;
                let sign = if flip { -w } else { w } as f64;
                for row in 0..m.nrows() {
                    let v = m[(row, idx)];
                    if v == Complex64::new(0.0, 0.0) {
                        continue;
                    }
                    let mut nb = b.clone();
                    nb[slot] = (dst, row);
                    out.add_term((j | mask, nb), v * c * sign);
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// `u^H φ = ũ^1 ũ^2 ... ũ^r φ` for `φ` in `E^1_0 ⊗ ... ⊗ E^r_0`.
pub fn apply_uh(frames: &[PointFrame], phi: &WVector) -> WVector {
    let us: Vec<GradedForm> = frames.iter().map(PointFrame::u).collect();
    let mut v = phi.clone();
    for s in (0..frames.len()).rev() {
        v = v.apply_slot(s, &us[s]);
    }
    v
}

/// `∂̄(u^H φ) = Σ_s (-1)^{s-1} ũ^1 ... (∂̄u^s)~ ... ũ^r φ`.
pub fn apply_dbar_uh(frames: &[PointFrame], phi: &WVector) -> WVector {
    let us: Vec<GradedForm> = frames.iter().map(PointFrame::u).collect();
    let dus: Vec<GradedForm> = frames.iter().map(PointFrame::dbar_u).collect();
    let mut total = WVector::default();
    for s in 0..frames.len() {
        let mut v = phi.clone();
        for t in (0..frames.len()).rev() {
            v = v.apply_slot(t, if t == s { &dus[t] } else { &us[t] });
        }
        total.add_assign(&v, if s % 2 == 0 { 1.0 } else { -1.0 });
    }
    total
}

/// Maps between a diamond product evaluated at a point and the slot model of `W`.
struct DiamondAtPoint<'a> {
    diamond: &'a DiamondComplex,
    maps: Vec<DMatrix<Complex64>>,
}

impl DiamondAtPoint<'_> {
    fn dims(&self, levels: &[usize]) -> Vec<usize> {
        self.diamond
            .factors()
            .iter()
            .zip(levels)
            .map(|(f, &l)| f.rank(l))
            .collect()
    }

    fn global_index(&self, b: &[(usize, usize)]) -> Option<(usize, usize)> {
        let levels: Vec<usize> = b.iter().map(|x| x.0).collect();
        let (k, block) = self.diamond.find_block(&levels)?;
        let dims = self.dims(&levels);
        let local = b.iter().zip(&dims).fold(0, |acc, (x, d)| acc * d + x.1);
        Some((k, block.offset + local))
    }

    fn slot_key(&self, k: usize, global: usize) -> Vec<(usize, usize)> {
        let block = self
            .diamond
            .blocks(k)
            .iter()
            .find(|b| global >= b.offset && global < b.offset + b.size)
            .expect("index inside some block");
        let dims = self.dims(&block.levels);
        let mut local = global - block.offset;
        let mut idx = vec![0; dims.len()];
        for s in (0..dims.len()).rev() {
            idx[s] = local % dims[s];
            local /= dims[s];
        }
        block.levels.iter().copied().zip(idx).collect()
    }

    /// `h` acting on `W` through the block identification; forms pick up `(-1)^{|I|}`.
    fn apply_h(&self, v: &WVector) -> WVector {
        let mut out = WVector::default();
        for ((mask, b), &c) in v.terms() {
            let Some((k, col)) = self.global_index(b) else {
                continue;
            };
            if k == 0 {
                continue;
            }
            let h = &self.maps[k - 1];
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            for row in 0..h.nrows() {
                let e = h[(row, col)];
                if e != Complex64::new(0.0, 0.0) {
                    out.add_term((*mask, self.slot_key(k - 1, row)), e * c * sign);
                }
            }
        }
        out
    }
}

/// Residuals of `∇_H(u^H φ) = φ`, split into the `h_1` part landing in `H_0` and the rest.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProductCheck {
    pub h1_residual: f64,
    pub tilde_residual: f64,
}

impl ProductCheck {
    pub fn max(&self) -> f64 {
        self.h1_residual.max(self.tilde_residual)
    }
}

/// Checks `h(u^H φ) - ∂̄(u^H φ) = φ` for every basis vector `φ` of `H_0`.
///
/// `frames[s]` must be the `s`-th factor of `diamond` frozen at `point`; the number of
/// factors has to be odd.
pub fn check_product_identity(
    diamond: &DiamondComplex,
    frames: &[PointFrame],
    point: &[Complex64],
) -> Result<ProductCheck, HomotopyError> {
    let r = diamond.factors().len();
    if r.is_multiple_of(2) {
        return Err(HomotopyError::EvenFactorCount(r));
    }
    if frames.len() != r {
        return Err(HomotopyError::Dimension(format!("{} frames for {} factors", frames.len(), r)));
    }
    for (f, c) in frames.iter().zip(diamond.factors()) {
        if f.ranks() != c.ranks() {
            return Err(HomotopyError::Dimension("frame ranks differ from factor ranks".into()));
        }
    }
    let at = DiamondAtPoint {
        diamond,
        maps: diamond.complex().eval_complex(point),
    };
    let mut check = ProductCheck {
        h1_residual: 0.0,
        tilde_residual: 0.0,
    };
    let dims0 = at.dims(&vec![0; r]);
    let h0: usize = dims0.iter().product();
    for g in 0..h0 {
        let key0 = at.slot_key(0, g);
        let phi = WVector::basis((0, key0.clone()));
        let v = apply_uh(frames, &phi);
        let mut res = at.apply_h(&v);
        res.add_assign(&apply_dbar_uh(frames, &phi), -1.0);
        res.add_assign(&phi, -1.0);
        for ((mask, b), z) in res.terms() {
            if *mask == 0 && b.iter().all(|x| x.0 == 0) {
                check.h1_residual = check.h1_residual.max(z.norm());
            } else {
                check.tilde_residual = check.tilde_residual.max(z.norm());
            }
        }
    }
    Ok(check)
}
