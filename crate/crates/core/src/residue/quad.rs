//! Adaptive Gauss–Kronrod (7/15) quadrature and Neville extrapolation.

use num_complex::Complex64;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15(f: &impl Fn(f64) -> Complex64, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let pair = f(c - x) + f(c + x);
        kron += pair * WGK[i];
        if i % 2 == 1 {
            gauss += pair * WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Result of an adaptive integration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub error: f64,
    pub converged: bool,
}

/// Integrates `f` over `[a, b]`, splitting at `breaks` first and bisecting until the
/// Kronrod/Gauss difference is below `max(abs_tol, rel_tol * |I|)` on every piece.
pub fn integrate(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Quadrature {
    let mut points = vec![a];
    let mut inner: Vec<f64> = breaks.iter().copied().filter(|&x| x > a && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    points.extend(inner);
    points.push(b);

    let mut pieces: Vec<(f64, f64, Complex64, f64, u32)> = points
        .windows(2)
        .map(|w| {
            let (v, e) = gk15(&f, w[0], w[1]);
            (w[0], w[1], v, e, 0)
        })
        .collect();
    let max_depth = 40;
    let mut converged = true;
    loop {
        let total: Complex64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            break;
        }
        // bisect the piece with the largest error
        let (idx, worst) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, p)| (i, *p))
            .expect("at least one piece");
        if worst.4 >= max_depth || pieces.len() > 20_000 {
            converged = false;
            break;
        }
        let mid = 0.5 * (worst.0 + worst.1);
        let (v1, e1) = gk15(&f, worst.0, mid);
        let (v2, e2) = gk15(&f, mid, worst.1);
        pieces[idx] = (worst.0, mid, v1, e1, worst.4 + 1);
        pieces.push((mid, worst.1, v2, e2, worst.4 + 1));
    }
    // fixed summation order for reproducibility
    pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
    Quadrature {
        value: pieces.iter().map(|p| p.2).sum(),
        error: pieces.iter().map(|p| p.3).sum(),
        converged,
    }
}

/// Value at `t = 0` of the polynomial interpolating `(ts[i], vs[i])` (Neville's scheme).
pub fn neville_at_zero(ts: &[f64], vs: &[Complex64]) -> Complex64 {
    assert_eq!(ts.len(), vs.len());
    let mut p = vs.to_vec();
    let n = ts.len();
    for m in 1..n {
        for i in 0..n - m {
            let (ti, tj) = (ts[i], ts[i + m]);
            p[i] = (p[i + 1] * ti - p[i] * tj) / (ti - tj);
        }
    }
    p[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_and_kinked_functions() {
        let q = integrate(|x| Complex64::new(x.exp(), 0.0), 0.0, 1.0, &[], 1e-14, 1e-13);
        assert!((q.value.re - (1f64.exp() - 1.0)).abs() < 1e-13);
        let q = integrate(|x| Complex64::new((x - 0.3).abs(), 0.0), 0.0, 1.0, &[0.3], 1e-14, 1e-13);
        assert!((q.value.re - 0.29).abs() < 1e-13);
        assert!(q.converged);
    }

    #[test]
    fn neville_recovers_polynomials() {
        let ts = [0.4, 0.2, 0.1, 0.05];
        let vs: Vec<Complex64> = ts
            .iter()
            .map(|t| Complex64::new(2.0 - 3.0 * t + 0.5 * t * t * t, t * t))
            .collect();
        let v = neville_at_zero(&ts, &vs);
        assert!((v - Complex64::new(2.0, 0.0)).norm() < 1e-12);
    }
}
