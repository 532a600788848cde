//! Pointwise homotopy forms `u` of generically exact complexes and their diamond products.
//!
//! Everything here is evaluated at a single point of `C^n`: forms are stored as matrices
//! multiplying `dz̄_I`, and identities such as `∇u = 1` become finite matrix identities.

mod form;
mod frame;
mod sigma;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::complexes::ComplexError;
use crate::poly::Polynomial;

pub use form::{wedge_sign, GradedForm};
pub use frame::{apply_dbar_uh, apply_uh, check_product_identity, PointFrame, ProductCheck, WKey, WVector};
pub use sigma::{
    dbar_sigma_fd, dbar_sigma_koszul, expected_map_ranks, pinv_truncated, sigma_at, sigma_koszul, wedge_matrix,
    DEGENERACY_TOL, FD_STEP,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomotopyError {
    #[error("complex is not pointwise exact at level {level} (singular value ratio {ratio:e})")]
    Degenerate { level: usize, ratio: f64 },
    #[error("non-finite value encountered")]
    NonFinite,
    #[error("u^H needs an odd number of factors, got {0}")]
    EvenFactorCount(usize),
    #[error("{0}")]
    Dimension(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// Seeded points of `C^n` with coordinates in the unit square, keeping those accepted by `keep`.
pub fn sample_points(
    nvars: usize,
    count: usize,
    seed: u64,
    mut keep: impl FnMut(&[Complex64]) -> bool,
) -> Vec<Vec<Complex64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0usize;
    while out.len() < count && attempts < 1000 * count.max(1) {
        attempts += 1;
        let p: Vec<Complex64> = (0..nvars)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        if keep(&p) {
            out.push(p);
        }
    }
    out
}

/// Points where `|a(z)| >= min_norm` for the tuple `a = gens`.
pub fn sample_points_away_from(
    gens: &[Polynomial],
    nvars: usize,
    count: usize,
    seed: u64,
    min_norm: f64,
) -> Vec<Vec<Complex64>> {
    sample_points(nvars, count, seed, |p| {
        gens.iter().map(|g| g.eval_complex(p).norm_sqr()).sum::<f64>().sqrt() >= min_norm
    })
}

/// Largest entry of `(∂̄σ)^j` for the Koszul complex of `gens`, where `j = min(m - 1, n) + 1`.
pub fn koszul_truncation_defect(
    frame: &PointFrame,
    ngens: usize,
    nvars: usize,
) -> f64 {
    let j = (ngens.saturating_sub(1)).min(nvars) + 1;
    frame.dbar_sigma_power(j).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{diamond_product, koszul_complex, pad_to_odd};
    use crate::poly::{MonomialOrder, Ring};

    #[test]
    fn koszul_identity_at_a_point() {
        let r = Ring::new(&["x", "y"], MonomialOrder::grevlex());
        let gens = vec![r.parse("x^2 + y").unwrap(), r.parse("x*y - 1").unwrap(), r.var(1)];
        let p = [Complex64::new(0.3, -0.2), Complex64::new(0.7, 0.1)];
        let frame = PointFrame::koszul(&r, &gens, &p).unwrap();
        assert!(frame.nabla_residual() < 1e-12, "{}", frame.nabla_residual());
        assert!(koszul_truncation_defect(&frame, 3, 2) < 1e-12);
        let general = PointFrame::general(&koszul_complex(&r, &gens).unwrap(), &p).unwrap();
        assert!(general.sigma().sub(frame.sigma()).max_abs() < 1e-12);
        assert!(general.dbar_sigma().sub(frame.dbar_sigma()).max_abs() < 1e-7);
        assert!(general.nabla_residual() < 1e-7);
    }

    #[test]
    fn padded_product_identity() {
        let r = Ring::new(&["x", "y"], MonomialOrder::grevlex());
        let a = vec![r.var(0), r.var(1)];
        let b = vec![r.parse("x - y^2").unwrap(), r.parse("y + 1").unwrap()];
        let factors = pad_to_odd(vec![koszul_complex(&r, &a).unwrap(), koszul_complex(&r, &b).unwrap()]);
        let d = diamond_product(&factors).unwrap();
        let p = [Complex64::new(0.4, 0.3), Complex64::new(-0.5, 0.2)];
        let frames: Vec<PointFrame> = factors.iter().map(|c| PointFrame::general(c, &p).unwrap()).collect();
        let check = check_product_identity(&d, &frames, &p).unwrap();
        assert!(check.max() < 1e-6, "{check:?}");
        let even = diamond_product(&factors[..2]).unwrap();
        assert!(matches!(
            check_product_identity(&even, &frames[..2], &p),
            Err(HomotopyError::EvenFactorCount(2))
        ));
    }

    #[test]
    fn three_koszul_factors() {
        let r = Ring::new(&["x", "y", "z"], MonomialOrder::grevlex());
        let a = vec![r.var(0), r.var(1), r.var(2)];
        let b = vec![r.parse("x + z").unwrap(), r.parse("y^2").unwrap()];
        let c = vec![r.parse("x*y + 1").unwrap()];
        let gens = [a, b, c];
        let factors: Vec<_> = gens.iter().map(|g| koszul_complex(&r, g).unwrap()).collect();
        let d = diamond_product(&factors).unwrap();
        let p = [Complex64::new(0.2, 0.3), Complex64::new(-0.6, 0.1), Complex64::new(0.5, -0.4)];
        let frames: Vec<PointFrame> = gens.iter().map(|g| PointFrame::koszul(&r, g, &p).unwrap()).collect();
        let check = check_product_identity(&d, &frames, &p).unwrap();
        assert!(check.max() < 1e-10, "{check:?}");
    }
}
