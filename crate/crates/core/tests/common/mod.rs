//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;

use arlab::complexes::GradedFreeComplex;
use arlab::residue::TestForm;

// ---------- monomial Artin–Rees oracle ----------

/// A monomial ideal as a list of exponent vectors.
pub type MonoIdeal = Vec<Vec<u32>>;

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Drops generators divisible by another one.
pub fn minimize(mut gens: MonoIdeal) -> MonoIdeal {
    gens.sort();
    gens.dedup();
    let keep: Vec<bool> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| !gens.iter().enumerate().any(|(j, h)| j != i && divides(h, g) && h != g))
        .collect();
    gens.into_iter().zip(keep).filter(|(_, k)| *k).map(|(g, _)| g).collect()
}

pub fn mono_product(a: &MonoIdeal, b: &MonoIdeal) -> MonoIdeal {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            out.push(x.iter().zip(y).map(|(p, q)| p + q).collect());
        }
    }
    minimize(out)
}

pub fn mono_power(a: &MonoIdeal, p: u32, nvars: usize) -> MonoIdeal {
    let mut out = vec![vec![0; nvars]];
    for _ in 0..p {
        out = mono_product(&out, a);
    }
    out
}

pub fn mono_intersect(a: &MonoIdeal, b: &MonoIdeal) -> MonoIdeal {
    let mut out = Vec::new();
    for x in a {
        for y in b {
            out.push(x.iter().zip(y).map(|(p, q)| *p.max(q)).collect());
        }
    }
    minimize(out)
}

pub fn mono_contained(a: &MonoIdeal, b: &MonoIdeal) -> bool {
    a.iter().all(|x| b.iter().any(|y| divides(y, x)))
}

/// Smallest `μ <= cap` with `I^{μ+r} ∩ N ⊆ I^r N` for every `r <= r_max`, searched directly.
pub fn mono_min_mu(i: &MonoIdeal, n: &MonoIdeal, nvars: usize, r_max: u32, cap: u32) -> Option<u32> {
    (0..=cap).find(|&mu| {
        (0..=r_max).all(|r| {
            let lhs = mono_intersect(&mono_power(i, mu + r, nvars), n);
            let rhs = mono_product(&mono_power(i, r, nvars), n);
            mono_contained(&lhs, &rhs)
        })
    })
}

pub fn mono_to_string(e: &[u32], vars: &[&str]) -> String {
    let parts: Vec<String> = e
        .iter()
        .zip(vars)
        .filter(|(p, _)| **p > 0)
        .map(|(p, v)| if *p == 1 { v.to_string() } else { format!("{v}^{p}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

// ---------- analytic derivative of the pseudoinverse ----------

/// `∂̄_j (F^+)` for holomorphic `F`: `F^+ F^{+*} (∂_j F)^* (1 - F F^+) + (1 - F^+ F)(∂_j F)^* F^{+*} F^+`.
pub fn dbar_pinv(f: &DMatrix<Complex64>, df: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let p = f.clone().pseudo_inverse(1e-12).expect("pseudoinverse");
    let ps = p.adjoint();
    let dfs = df.adjoint();
    let left = DMatrix::<Complex64>::identity(f.nrows(), f.nrows()) - f * &p;
    let right = DMatrix::<Complex64>::identity(f.ncols(), f.ncols()) - &p * f;
    &p * &ps * &dfs * left + right * dfs * ps * p
}

/// `(σ_k, [∂̄_j σ_k]_j)` for every map of `c` at `point`, from closed formulas.
pub fn analytic_sigma(
    c: &GradedFreeComplex,
    point: &[Complex64],
) -> Vec<(DMatrix<Complex64>, Vec<DMatrix<Complex64>>)> {
    (1..=c.length())
        .map(|k| {
            let f = c.map(k).eval_complex(point);
            let sigma = f.clone().pseudo_inverse(1e-12).expect("pseudoinverse");
            let ds = (0..point.len())
                .map(|j| dbar_pinv(&f, &c.map(k).derivative(j).eval_complex(point)))
                .collect();
            (sigma, ds)
        })
        .collect()
}

// ---------- quadrature oracles for one-variable currents ----------

/// `exp(1 - 1/(1 - t))` written out again, `t = |z|^2 / R^2`.
fn oracle_bump(t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t)).exp()
    }
}

/// `φ(z)` of a test form, from its coefficient list.
pub fn oracle_phi(phi: &TestForm, z: Complex64) -> Complex64 {
    let r2 = phi.radius() * phi.radius();
    let b = oracle_bump(z.norm_sqr() / r2);
    phi.terms()
        .iter()
        .map(|&(c, a, bb)| c * z.powu(a) * z.conj().powu(bb))
        .sum::<Complex64>()
        * b
}

/// `∂φ/∂z̄` from the product rule.
pub fn oracle_dbar_phi(phi: &TestForm, z: Complex64) -> Complex64 {
    let r2 = phi.radius() * phi.radius();
    let t = z.norm_sqr() / r2;
    if t >= 1.0 {
        return Complex64::new(0.0, 0.0);
    }
    let b = oracle_bump(t);
    let db = -b / ((1.0 - t) * (1.0 - t)) * z / r2;
    let zb = z.conj();
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &(c, a, bb) in phi.terms() {
        p += c * z.powu(a) * zb.powu(bb);
        if bb > 0 {
            dp += c * bb as f64 * z.powu(a) * zb.powu(bb - 1);
        }
    }
    p * db + dp * b
}

/// `∫_{ρ_0 < |z| < R} g dm` with tensor Gauss–Legendre in polar coordinates.
pub fn gl_polar(g: impl Fn(Complex64) -> Complex64, rho0: f64, radius: f64, n_rho: usize, n_theta: usize) -> Complex64 {
    let gr = GaussLegendre::new(NonZeroUsize::new(n_rho).unwrap());
    let gt = GaussLegendre::new(NonZeroUsize::new(n_theta).unwrap());
    let (hr, cr) = (0.5 * (radius - rho0), 0.5 * (radius + rho0));
    let mut total = Complex64::new(0.0, 0.0);
    for &(x, w) in gr.as_node_weight_pairs() {
        let rho = cr + hr * x;
        let mut ang = Complex64::new(0.0, 0.0);
        for &(y, v) in gt.as_node_weight_pairs() {
            let theta = PI * (y + 1.0);
            ang += g(Complex64::from_polar(rho, theta)) * (v * PI);
        }
        total += ang * (w * hr * rho);
    }
    total
}

/// Principal value `lim ∫_{|z|>ε} z^{-k} φ dm` with sharp excision.
pub fn oracle_pv(k: u32, phi: &TestForm) -> Complex64 {
    gl_polar(|z| oracle_phi(phi, z) * z.powi(-(k as i32)), 1e-9, phi.radius(), 400, 96)
}

/// `⟨∂̄[1/z^k], φ dz⟩ = -2i ∫ z^{-k} ∂φ/∂z̄ dm`, by integration by parts.
pub fn oracle_residue(k: u32, phi: &TestForm) -> Complex64 {
    let v = gl_polar(|z| oracle_dbar_phi(phi, z) * z.powi(-(k as i32)), 1e-9, phi.radius(), 400, 96);
    v * Complex64::new(0.0, -2.0)
}

pub fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}
