use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::complexes::{subsets_of_size, GradedFreeComplex};
use crate::poly::Polynomial;

use super::{GradedForm, HomotopyError};

/// Singular values below `DEGENERACY_TOL * max` count as zero.
pub const DEGENERACY_TOL: f64 = 1e-8;

/// Step of the central differences used for `∂̄σ` of general complexes.
pub const FD_STEP: f64 = 1e-5;

/// Ranks of `f_1, ..., f_N` for a complex that is exact away from its zero set:
/// `rank f_1 = rank E_0`, `rank f_{k+1} = rank E_k - rank f_k`.
pub fn expected_map_ranks(ranks: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(ranks.len().saturating_sub(1));
    let mut prev = 0usize;
    for k in 1..ranks.len() {
        let r = ranks[k - 1].saturating_sub(prev);
        out.push(r);
        prev = r;
    }
    out
}

/// Moore–Penrose inverse of `m`, keeping the `rank` largest singular values.
///
/// Fails when the kept spectrum is ill separated (`s_rank < tol * s_max`) or not finite.
pub fn pinv_truncated(
    m: &DMatrix<Complex64>,
    rank: usize,
    level: usize,
) -> Result<DMatrix<Complex64>, HomotopyError> {
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(HomotopyError::NonFinite);
    }
    let (rows, cols) = m.shape();
    let mut out = DMatrix::zeros(cols, rows);
    if rank == 0 {
        return Ok(out);
    }
    let svd = m.clone().svd(true, true);
    let u = svd.u.as_ref().expect("left vectors requested");
    let v_t = svd.v_t.as_ref().expect("right vectors requested");
    let mut idx: Vec<usize> = (0..svd.singular_values.len()).collect();
    idx.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    if rank > idx.len() {
        return Err(HomotopyError::Degenerate { level, ratio: 0.0 });
    }
    let smax = svd.singular_values[idx[0]];
    let smin = svd.singular_values[idx[rank - 1]];
    let ratio = if smax > 0.0 { smin / smax } else { 0.0 };
    if ratio.is_nan() || ratio < DEGENERACY_TOL {
        return Err(HomotopyError::Degenerate { level, ratio });
    }
    for &i in &idx[..rank] {
        let s = svd.singular_values[i];
        let ui = u.column(i);
        let vi = v_t.row(i);
        // v_i s^-1 u_i^*
        out += vi.adjoint() * ui.adjoint() * Complex64::new(1.0 / s, 0.0);
    }
    Ok(out)
}

/// Minimal inverses `σ_k = f_k^+` of a complex at a point, as a form of degree zero.
pub fn sigma_at(complex: &GradedFreeComplex, point: &[Complex64]) -> Result<GradedForm, HomotopyError> {
    let ranks = expected_map_ranks(complex.ranks());
    let mut s = GradedForm::new();
    for (k, m) in complex.eval_complex(point).into_iter().enumerate() {
        s.add(k + 1, k, 0, pinv_truncated(&m, ranks[k], k + 1)?);
    }
    Ok(s)
}

/// `∂̄σ` by central differences in the real and imaginary directions.
pub fn dbar_sigma_fd(
    complex: &GradedFreeComplex,
    point: &[Complex64],
    step: f64,
) -> Result<GradedForm, HomotopyError> {
    let n = point.len();
    let mut out = GradedForm::new();
    for i in 0..n {
        let shifted = |delta: Complex64| -> Result<GradedForm, HomotopyError> {
            let mut p = point.to_vec();
            p[i] += delta;
            sigma_at(complex, &p)
        };
        let h = Complex64::new(step, 0.0);
        let ih = Complex64::new(0.0, step);
        let dx = shifted(h)?.sub(&shifted(-h)?);
        let dy = shifted(ih)?.sub(&shifted(-ih)?);
        // ∂/∂z̄ = (∂/∂x + i ∂/∂y) / 2
        let scale = Complex64::new(1.0 / (4.0 * step), 0.0);
        let i_unit = Complex64::new(0.0, 1.0);
        for (&(d, s, _), mx) in dx.blocks() {
            let my = dy.get(d, s, 0).cloned().unwrap_or_else(|| DMatrix::zeros(mx.nrows(), mx.ncols()));
            out.add(d, s, 1 << i, (mx + my * i_unit) * scale);
        }
    }
    if !out.is_finite() {
        return Err(HomotopyError::NonFinite);
    }
    Ok(out)
}

/// Matrix of `v ∧ · : Λ^{k-1} C^m -> Λ^k C^m` with `e_i ∧ e_I = (-1)^{#{t in I : t < i}} e_{I+i}`.
pub fn wedge_matrix(m: usize, k: usize, v: &[Complex64]) -> DMatrix<Complex64> {
    let src = subsets_of_size(m, k - 1);
    let dst = subsets_of_size(m, k);
    let mut out = DMatrix::zeros(dst.len(), src.len());
    for (col, s) in src.iter().enumerate() {
        for (i, &vi) in v.iter().enumerate() {
            if s.contains(&i) {
                continue;
            }
            let before = s.iter().filter(|&&t| t < i).count();
            let mut target = s.clone();
            target.push(i);
            target.sort_unstable();
            let row = dst.binary_search(&target).expect("subset present");
            out[(row, col)] += if before % 2 == 0 { vi } else { -vi };
        }
    }
    out
}

fn koszul_values(gens: &[Polynomial], point: &[Complex64]) -> Result<(Vec<Complex64>, f64), HomotopyError> {
    let a: Vec<Complex64> = gens.iter().map(|g| g.eval_complex(point)).collect();
    let norm2: f64 = a.iter().map(|z| z.norm_sqr()).sum();
    if !norm2.is_finite() {
        return Err(HomotopyError::NonFinite);
    }
    if norm2 == 0.0 {
        return Err(HomotopyError::Degenerate { level: 1, ratio: 0.0 });
    }
    Ok((a, norm2))
}

/// Closed form of σ for the Koszul complex of `gens`: wedge with `s = ā / |a|^2`.
pub fn sigma_koszul(gens: &[Polynomial], point: &[Complex64]) -> Result<GradedForm, HomotopyError> {
    let (a, norm2) = koszul_values(gens, point)?;
    let s: Vec<Complex64> = a.iter().map(|z| z.conj() / norm2).collect();
    let m = gens.len();
    let mut out = GradedForm::new();
    for k in 1..=m {
        out.add(k, k - 1, 0, wedge_matrix(m, k, &s));
    }
    Ok(out)
}

/// Exact `∂̄σ` for the Koszul complex:
/// `∂s_j/∂z̄_i = conj(∂_i a_j)/|a|^2 - ā_j Σ_k a_k conj(∂_i a_k) / |a|^4`.
pub fn dbar_sigma_koszul(gens: &[Polynomial], point: &[Complex64]) -> Result<GradedForm, HomotopyError> {
    let (a, norm2) = koszul_values(gens, point)?;
    let m = gens.len();
    let mut out = GradedForm::new();
    for i in 0..point.len() {
        let da: Vec<Complex64> = gens.iter().map(|g| g.derivative(i).eval_complex(point)).collect();
        let mix: Complex64 = a.iter().zip(&da).map(|(ak, dk)| ak * dk.conj()).sum();
        let ds: Vec<Complex64> = (0..m)
            .map(|j| da[j].conj() / norm2 - a[j].conj() * mix / (norm2 * norm2))
            .collect();
        for k in 1..=m {
            out.add(k, k - 1, 1 << i, wedge_matrix(m, k, &ds));
        }
    }
    if !out.is_finite() {
        return Err(HomotopyError::NonFinite);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactness_ranks() {
        assert_eq!(expected_map_ranks(&[1, 3, 3, 1]), vec![1, 2, 1]);
        assert_eq!(expected_map_ranks(&[1, 1]), vec![1]);
    }

    #[test]
    fn pinv_of_row_vector() {
        let m = DMatrix::from_row_slice(1, 2, &[Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)]);
        let p = pinv_truncated(&m, 1, 1).unwrap();
        let id = &m * &p;
        assert!((id[(0, 0)] - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!((p[(1, 0)] - Complex64::new(0.0, -4.0 / 25.0)).norm() < 1e-14);
        let zero = DMatrix::<Complex64>::zeros(1, 2);
        assert!(matches!(pinv_truncated(&zero, 1, 1), Err(HomotopyError::Degenerate { .. })));
    }
}
