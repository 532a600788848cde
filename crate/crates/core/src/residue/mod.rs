//! Principal values `[1/z^k]`, residues `∂̄[1/z^k]` and their ordered products in one
//! complex variable, evaluated by cutoff regularization and extrapolation in `ε`.
//!
//! Conventions: test forms `φ dz` are paired bilinearly (no conjugation), `dm` is Lebesgue
//! measure and `dz̄ ∧ dz = 2i dm`. With these, `⟨∂̄[1/z], φ dz⟩ = 2πi φ(0)` and
//! `⟨∂̄[1/z^2], φ dz⟩ = 2πi ∂φ/∂z(0)`.

mod quad;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

pub use quad::{integrate, neville_at_zero, Quadrature};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ResidueError {
    #[error("quadrature did not converge (error estimate {estimate:e})")]
    NoConvergence { estimate: f64 },
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("invalid argument: {0}")]
    Invalid(String),
}

/// Smooth cutoff `χ` with `χ = 0` on `(-∞, 1]` and `χ = 1` on `[2, ∞)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutoffProfile {
    /// `6s^5 - 15s^4 + 10s^3` with `s = t - 1`; twice continuously differentiable.
    Smoothstep,
    /// `g(t - 1) / (g(t - 1) + g(2 - t))` with `g(s) = exp(-1/s)`; smooth.
    ExpSplice,
}

impl CutoffProfile {
    pub const ALL: [CutoffProfile; 2] = [CutoffProfile::Smoothstep, CutoffProfile::ExpSplice];

    pub fn name(self) -> &'static str {
        match self {
            CutoffProfile::Smoothstep => "smoothstep",
            CutoffProfile::ExpSplice => "exp-splice",
        }
    }

    pub fn parse(text: &str) -> Option<Self> {
        match text.trim() {
            "smoothstep" => Some(CutoffProfile::Smoothstep),
            "exp-splice" | "exp" => Some(CutoffProfile::ExpSplice),
            _ => None,
        }
    }

    pub fn eval(self, t: f64) -> f64 {
        if t <= 1.0 {
            return 0.0;
        }
        if t >= 2.0 {
            return 1.0;
        }
        match self {
            CutoffProfile::Smoothstep => {
                let s = t - 1.0;
                s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
            }
            CutoffProfile::ExpSplice => {
                let a = (-1.0 / (t - 1.0)).exp();
                let b = (-1.0 / (2.0 - t)).exp();
                a / (a + b)
            }
        }
    }

    pub fn derivative(self, t: f64) -> f64 {
        if t <= 1.0 || t >= 2.0 {
            return 0.0;
        }
        match self {
            CutoffProfile::Smoothstep => {
                let s = t - 1.0;
                30.0 * s * s * (1.0 - s) * (1.0 - s)
            }
            CutoffProfile::ExpSplice => {
                let (u, v) = (t - 1.0, 2.0 - t);
                let a = (-1.0 / u).exp();
                let b = (-1.0 / v).exp();
                a * b * (1.0 / (u * u) + 1.0 / (v * v)) / ((a + b) * (a + b))
            }
        }
    }
}

impl fmt::Display for CutoffProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `exp(1 - 1/(1 - t))` for `t < 1`, else `0`; equals 1 at the origin.
pub fn bump(t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - t)).exp()
    }
}

fn bump_derivative(t: f64) -> f64 {
    if t >= 1.0 {
        0.0
    } else {
        -bump(t) / ((1.0 - t) * (1.0 - t))
    }
}

/// `φ(z) = bump(|z|^2 / R^2) · Σ c_{ab} z^a z̄^b`, supported in `|z| < R`.
#[derive(Clone, Debug, PartialEq)]
pub struct TestForm {
    radius: f64,
    terms: Vec<(Complex64, u32, u32)>,
}

impl TestForm {
    /// `terms` lists `(c, a, b)` for `c z^a z̄^b`.
    pub fn new(radius: f64, terms: Vec<(Complex64, u32, u32)>) -> Result<Self, ResidueError> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(ResidueError::Invalid(format!("support radius {radius} must be positive")));
        }
        Ok(TestForm { radius, terms })
    }

    /// The plain bump of radius `radius`.
    pub fn bump(radius: f64) -> Self {
        TestForm {
            radius,
            terms: vec![(Complex64::new(1.0, 0.0), 0, 0)],
        }
    }

    /// `bump · z^a z̄^b`.
    pub fn bump_monomial(radius: f64, a: u32, b: u32) -> Self {
        TestForm {
            radius,
            terms: vec![(Complex64::new(1.0, 0.0), a, b)],
        }
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn terms(&self) -> &[(Complex64, u32, u32)] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1 + t.2).max().unwrap_or(0)
    }

    /// `α φ + β ψ` for forms of the same radius.
    pub fn combine(&self, alpha: Complex64, other: &TestForm, beta: Complex64) -> Result<TestForm, ResidueError> {
        if self.radius != other.radius {
            return Err(ResidueError::Invalid("combined test forms need equal radii".into()));
        }
        let mut terms: Vec<(Complex64, u32, u32)> =
            self.terms.iter().map(|&(c, a, b)| (c * alpha, a, b)).collect();
        terms.extend(other.terms.iter().map(|&(c, a, b)| (c * beta, a, b)));
        Ok(TestForm {
            radius: self.radius,
            terms,
        })
    }

    fn poly(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .map(|&(c, a, b)| c * z.powu(a) * zb.powu(b))
            .sum()
    }

    fn poly_dbar(&self, z: Complex64) -> Complex64 {
        let zb = z.conj();
        self.terms
            .iter()
            .filter(|t| t.2 > 0)
            .map(|&(c, a, b)| c * (b as f64) * z.powu(a) * zb.powu(b - 1))
            .sum()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let t = z.norm_sqr() / (self.radius * self.radius);
        if t >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.poly(z) * bump(t)
    }

    /// `∂φ/∂z̄`.
    pub fn dbar(&self, z: Complex64) -> Complex64 {
        let r2 = self.radius * self.radius;
        let t = z.norm_sqr() / r2;
        if t >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        self.poly(z) * bump_derivative(t) * z / r2 + self.poly_dbar(z) * bump(t)
    }

    pub fn value_at_zero(&self) -> Complex64 {
        self.terms.iter().filter(|t| t.1 == 0 && t.2 == 0).map(|t| t.0).sum()
    }

    /// `∂φ/∂z` at the origin.
    pub fn dz_at_zero(&self) -> Complex64 {
        self.terms.iter().filter(|t| t.1 == 1 && t.2 == 0).map(|t| t.0).sum()
    }
}

/// Strictly decreasing regularization parameters; the last `fit` values feed the extrapolation.
#[derive(Clone, Debug, PartialEq)]
pub struct EpsilonSchedule {
    values: Vec<f64>,
    fit: usize,
}

impl EpsilonSchedule {
    pub fn new(values: Vec<f64>) -> Result<Self, ResidueError> {
        if values.len() < 4 {
            return Err(ResidueError::Schedule("need at least 4 values".into()));
        }
        if values.iter().any(|&e| !(e > 0.0 && e.is_finite())) {
            return Err(ResidueError::Schedule("values must be positive".into()));
        }
        if values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(ResidueError::Schedule("values must strictly decrease".into()));
        }
        Ok(EpsilonSchedule { values, fit: 4 })
    }

    /// `start, start·ratio, ..., start·ratio^(n-1)`.
    pub fn geometric(start: f64, ratio: f64, n: usize) -> Result<Self, ResidueError> {
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(ResidueError::Schedule(format!("ratio {ratio} not in (0, 1)")));
        }
        Self::new((0..n).map(|i| start * ratio.powi(i as i32)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn scaled(&self, factor: f64) -> Self {
        EpsilonSchedule {
            values: self.values.iter().map(|e| e * factor).collect(),
            fit: self.fit,
        }
    }

    pub fn describe(&self) -> String {
        let v: Vec<String> = self.values.iter().map(|e| format!("{e:.6}")).collect();
        v.join(" ")
    }

    /// Richardson extrapolation in `t = ε^2`; the error is the change from `fit - 1` to `fit` points.
    fn extrapolate(&self, samples: &[Complex64]) -> (Complex64, f64) {
        let n = self.values.len();
        let ts: Vec<f64> = self.values[n - self.fit..].iter().map(|e| e * e).collect();
        let vs = &samples[n - self.fit..];
        let full = neville_at_zero(&ts, vs);
        let fewer = neville_at_zero(&ts[1..], &vs[1..]);
        (full, (full - fewer).norm())
    }
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        Self::geometric(0.2, 0.5, 6).expect("valid default schedule")
    }
}

/// Extrapolated value with its error estimate and the raw per-ε samples.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
    pub samples: Vec<Complex64>,
}

const ABS_TOL: f64 = 1e-13;
const REL_TOL: f64 = 1e-11;

/// `∫ w(|z|) h(z) dm` in polar coordinates: trapezoid in the angle (exact for the
/// trigonometric polynomials arising here) and adaptive Gauss–Kronrod in the radius.
fn polar_integral(
    radial: impl Fn(f64) -> f64,
    angular: impl Fn(Complex64) -> Complex64,
    freq: u32,
    r_min: f64,
    r_max: f64,
    breaks: &[f64],
) -> Result<Complex64, ResidueError> {
    let m = 2 * freq as usize + 16;
    let nodes: Vec<Complex64> = (0..m)
        .map(|j| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / m as f64))
        .collect();
    let f = |rho: f64| {
        let w = radial(rho);
        if w == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        let s: Complex64 = nodes.iter().map(|u| angular(u * rho)).sum();
        s * (w * rho * 2.0 * PI / m as f64)
    };
    let q = integrate(f, r_min, r_max, breaks, ABS_TOL, REL_TOL);
    if !q.converged {
        return Err(ResidueError::NoConvergence { estimate: q.error });
    }
    Ok(q.value)
}

fn check_k(k: u32) -> Result<(), ResidueError> {
    if k == 0 {
        return Err(ResidueError::Invalid("k must be at least 1".into()));
    }
    Ok(())
}

/// `∫ χ(|z|^2/ε^2) z^{-k} φ dm` at a single `ε`.
pub fn pv_regularized(k: u32, phi: &TestForm, chi: CutoffProfile, eps: f64) -> Result<Complex64, ResidueError> {
    check_k(k)?;
    let r = phi.radius();
    if eps >= r {
        return Ok(Complex64::new(0.0, 0.0));
    }
    polar_integral(
        |rho| chi.eval(rho * rho / (eps * eps)),
        |z| z.powi(-(k as i32)) * phi.eval(z),
        phi.degree() + k,
        eps,
        r,
        &[eps * 2f64.sqrt()],
    )
}

/// `2i ∫ χ'(|z|^2/ε^2) (z/ε^2) z^{-k} φ dm`, the regularized `∂̄[1/z^k]` at a single `ε`.
pub fn residue_regularized(k: u32, phi: &TestForm, chi: CutoffProfile, eps: f64) -> Result<Complex64, ResidueError> {
    check_k(k)?;
    let e2 = eps * eps;
    let lo = eps;
    let hi = (eps * 2f64.sqrt()).min(phi.radius());
    if lo >= hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let v = polar_integral(
        |rho| chi.derivative(rho * rho / e2) / e2,
        |z| z.powi(1 - k as i32) * phi.eval(z),
        phi.degree() + k,
        lo,
        hi,
        &[],
    )?;
    Ok(v * Complex64::new(0.0, 2.0))
}

fn extrapolated(
    sched: &EpsilonSchedule,
    f: impl Fn(f64) -> Result<Complex64, ResidueError>,
) -> Result<Estimate, ResidueError> {
    let samples = sched
        .values()
        .iter()
        .map(|&e| f(e))
        .collect::<Result<Vec<_>, _>>()?;
    let (value, error) = sched.extrapolate(&samples);
    Ok(Estimate { value, error, samples })
}

/// Principal value `⟨[1/z^k], φ dz⟩`.
pub fn pv_action(k: u32, phi: &TestForm, chi: CutoffProfile, sched: &EpsilonSchedule) -> Result<Estimate, ResidueError> {
    extrapolated(sched, |e| pv_regularized(k, phi, chi, e))
}

/// Residue `⟨∂̄[1/z^k], φ dz⟩`.
pub fn residue_action(
    k: u32,
    phi: &TestForm,
    chi: CutoffProfile,
    sched: &EpsilonSchedule,
) -> Result<Estimate, ResidueError> {
    extrapolated(sched, |e| residue_regularized(k, phi, chi, e))
}

/// Order of the iterated limits in a product of a residue and a principal value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProductOrder {
    /// `∂̄[1/z^{k_res}] ∧ [1/z^{k_pv}]`: the principal-value limit is taken first.
    ResidueThenPv,
    /// `[1/z^{k_pv}] ∧ ∂̄[1/z^{k_res}]`: the residue limit is taken first.
    PvThenResidue,
}

impl ProductOrder {
    pub fn name(self) -> &'static str {
        match self {
            ProductOrder::ResidueThenPv => "residue-then-pv",
            ProductOrder::PvThenResidue => "pv-then-residue",
        }
    }
}

/// `2i ∫ χ'(|z|^2/ε_r^2)(z/ε_r^2) χ(|z|^2/ε_p^2) z^{-k_r-k_p} φ dm`.
pub fn product_regularized(
    k_res: u32,
    k_pv: u32,
    phi: &TestForm,
    chi: CutoffProfile,
    eps_res: f64,
    eps_pv: f64,
) -> Result<Complex64, ResidueError> {
    check_k(k_res)?;
    check_k(k_pv)?;
    let e2 = eps_res * eps_res;
    let p2 = eps_pv * eps_pv;
    let lo = eps_res.max(eps_pv);
    let hi = (eps_res * 2f64.sqrt()).min(phi.radius());
    if lo >= hi {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let k = (k_res + k_pv) as i32;
    let v = polar_integral(
        |rho| chi.derivative(rho * rho / e2) / e2 * chi.eval(rho * rho / p2),
        |z| z.powi(1 - k) * phi.eval(z),
        phi.degree() + k as u32,
        lo,
        hi,
        &[eps_pv * 2f64.sqrt()],
    )?;
    Ok(v * Complex64::new(0.0, 2.0))
}

/// Iterated limit of the regularized product; the inner schedule is `sched` rescaled so
/// that it starts at a quarter of the current outer `ε`.
pub fn ordered_product_action(
    order: ProductOrder,
    k_res: u32,
    k_pv: u32,
    phi: &TestForm,
    chi: CutoffProfile,
    sched: &EpsilonSchedule,
) -> Result<Estimate, ResidueError> {
    let first = sched.values()[0];
    extrapolated(sched, |outer| {
        let inner = sched.scaled(outer / (4.0 * first));
        let est = extrapolated(&inner, |e| match order {
            ProductOrder::ResidueThenPv => product_regularized(k_res, k_pv, phi, chi, outer, e),
            ProductOrder::PvThenResidue => product_regularized(k_res, k_pv, phi, chi, e, outer),
        })?;
        Ok(est.value)
    })
}

/// Which action a probe evaluates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ActionKind {
    PrincipalValue,
    Residue,
}

impl ActionKind {
    pub fn name(self) -> &'static str {
        match self {
            ActionKind::PrincipalValue => "pv",
            ActionKind::Residue => "residue",
        }
    }
}

/// Values of one action across cutoff profiles and schedules.
#[derive(Clone, Debug, PartialEq)]
pub struct ProbeReport {
    pub kind: ActionKind,
    pub k: u32,
    /// `values[p][s]` for `profiles[p]` and `schedules[s]`.
    pub values: Vec<Vec<Estimate>>,
    pub profiles: Vec<CutoffProfile>,
    pub schedules: Vec<EpsilonSchedule>,
    /// Largest `|v_a - v_b| / max(|v_a|, |v_b|)` over all pairs.
    pub max_relative_deviation: f64,
}

pub fn regularization_independence_probe(
    kind: ActionKind,
    k: u32,
    phi: &TestForm,
    profiles: &[CutoffProfile],
    schedules: &[EpsilonSchedule],
) -> Result<ProbeReport, ResidueError> {
    if profiles.len() < 2 {
        return Err(ResidueError::Invalid("the probe needs at least two profiles".into()));
    }
    if schedules.is_empty() {
        return Err(ResidueError::Invalid("the probe needs a schedule".into()));
    }
    let mut values = Vec::with_capacity(profiles.len());
    for &chi in profiles {
        let row = schedules
            .iter()
            .map(|s| match kind {
                ActionKind::PrincipalValue => pv_action(k, phi, chi, s),
                ActionKind::Residue => residue_action(k, phi, chi, s),
            })
            .collect::<Result<Vec<_>, _>>()?;
        values.push(row);
    }
    let flat: Vec<Complex64> = values.iter().flatten().map(|e| e.value).collect();
    let mut dev: f64 = 0.0;
    for (i, a) in flat.iter().enumerate() {
        for b in &flat[i + 1..] {
            let scale = a.norm().max(b.norm());
            if scale > 0.0 {
                dev = dev.max((a - b).norm() / scale);
            }
        }
    }
    Ok(ProbeReport {
        kind,
        k,
        values,
        profiles: profiles.to_vec(),
        schedules: schedules.to_vec(),
        max_relative_deviation: dev,
    })
}

/// One tabulated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidueRecord {
    pub operation: String,
    pub ks: Vec<u32>,
    pub profile: CutoffProfile,
    pub schedule: String,
    pub value: Complex64,
    pub error: f64,
}

impl fmt::Display for ResidueRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ks: Vec<String> = self.ks.iter().map(u32::to_string).collect();
        write!(
            f,
            "{:<16} k={:<5} profile={:<11} value={:+.10e}{:+.10e}i err={:.2e} eps=[{}]",
            self.operation,
            ks.join(","),
            self.profile.name(),
            self.value.re,
            self.value.im,
            self.error,
            self.schedule
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
        (a - b).norm() <= rel * b.norm().max(1e-300)
    }

    #[test]
    fn profiles_are_cutoffs() {
        for chi in CutoffProfile::ALL {
            assert_eq!(chi.eval(0.5), 0.0);
            assert_eq!(chi.eval(1.0), 0.0);
            assert_eq!(chi.eval(2.0), 1.0);
            assert!((chi.eval(1.5) - 0.5).abs() < 1e-12);
            let mut prev = 0.0;
            for i in 1..100 {
                let t = 1.0 + i as f64 / 100.0;
                let v = chi.eval(t);
                assert!(v >= prev);
                prev = v;
                let h = 1e-6;
                let fd = (chi.eval(t + h) - chi.eval(t - h)) / (2.0 * h);
                assert!((fd - chi.derivative(t)).abs() < 1e-6, "{chi} at {t}");
            }
        }
    }

    #[test]
    fn residue_sees_point_value() {
        let phi = TestForm::new(1.0, vec![(Complex64::new(1.5, -0.5), 0, 0), (Complex64::new(0.3, 0.0), 1, 1)]).unwrap();
        let est = residue_action(1, &phi, CutoffProfile::Smoothstep, &EpsilonSchedule::default()).unwrap();
        let expected = Complex64::new(0.0, 2.0 * PI) * phi.value_at_zero();
        assert!(close(est.value, expected, 1e-6), "{:?} vs {expected}", est.value);
    }

    #[test]
    fn derivative_functional_for_k2() {
        let phi = TestForm::bump_monomial(0.8, 1, 0);
        let est = residue_action(2, &phi, CutoffProfile::ExpSplice, &EpsilonSchedule::default()).unwrap();
        assert!(close(est.value, Complex64::new(0.0, 2.0 * PI), 1e-6), "{:?}", est.value);
    }

    #[test]
    fn ordered_products() {
        let phi = TestForm::new(1.0, vec![(Complex64::new(1.0, 0.0), 0, 0), (Complex64::new(0.5, 0.25), 1, 0)]).unwrap();
        let sched = EpsilonSchedule::default();
        let chi = CutoffProfile::Smoothstep;
        let rp = ordered_product_action(ProductOrder::ResidueThenPv, 1, 1, &phi, chi, &sched).unwrap();
        let pr = ordered_product_action(ProductOrder::PvThenResidue, 1, 1, &phi, chi, &sched).unwrap();
        let r2 = residue_action(2, &phi, chi, &sched).unwrap();
        assert!(close(rp.value, r2.value, 1e-6));
        assert!(pr.value.norm() <= 1e-3 * rp.value.norm());
    }

    #[test]
    fn schedules_are_validated() {
        assert!(EpsilonSchedule::new(vec![0.1, 0.05, 0.02]).is_err());
        assert!(EpsilonSchedule::new(vec![0.1, 0.05, 0.05, 0.01]).is_err());
        assert!(EpsilonSchedule::geometric(0.1, 1.5, 5).is_err());
    }
}
