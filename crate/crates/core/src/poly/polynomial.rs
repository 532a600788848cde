use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::monomial::Monomial;
use super::order::MonomialOrder;
use super::PolyError;

pub type Coeff = BigRational;

/// Variables and the active monomial order of a polynomial ring over Q.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ring {
    vars: Vec<String>,
    order: MonomialOrder,
}

pub type RingRef = Arc<Ring>;

impl Ring {
    pub fn new<S: AsRef<str>>(vars: &[S], order: MonomialOrder) -> RingRef {
        Arc::new(Ring {
            vars: vars.iter().map(|s| s.as_ref().to_string()).collect(),
            order,
        })
    }

    /// Ring in `x1, ..., xn`.
    pub fn indexed(n: usize, order: MonomialOrder) -> RingRef {
        let vars: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
        Self::new(&vars, order)
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Same variables under another order.
    pub fn with_order(&self, order: MonomialOrder) -> RingRef {
        Arc::new(Ring {
            vars: self.vars.clone(),
            order,
        })
    }

    /// Adds variables in front of the existing ones.
    pub fn extend_front<S: AsRef<str>>(&self, names: &[S], order: MonomialOrder) -> RingRef {
        let mut vars: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        vars.extend(self.vars.iter().cloned());
        Arc::new(Ring { vars, order })
    }

    pub fn zero(self: &Arc<Self>) -> Polynomial {
        Polynomial::zero(self)
    }

    pub fn one(self: &Arc<Self>) -> Polynomial {
        Polynomial::constant(self, Coeff::one())
    }

    pub fn var(self: &Arc<Self>, index: usize) -> Polynomial {
        Polynomial::monomial(self, Monomial::var(self.nvars(), index), Coeff::one())
    }

    pub fn parse(self: &Arc<Self>, text: &str) -> Result<Polynomial, PolyError> {
        super::parse::parse_polynomial(self, text)
    }
}

pub(crate) fn same_ring(a: &RingRef, b: &RingRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Sparse polynomial with exact rational coefficients.
///
/// Terms are kept sorted strictly descending under the ring's order, without zero
/// coefficients; the zero polynomial has no terms.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: RingRef,
    terms: Vec<(Monomial, Coeff)>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.vars == other.ring.vars && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &RingRef) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn constant(ring: &RingRef, c: Coeff) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_int(ring: &RingRef, c: i64) -> Self {
        Self::constant(ring, Coeff::from_integer(BigInt::from(c)))
    }

    pub fn monomial(ring: &RingRef, m: Monomial, c: Coeff) -> Self {
        assert_eq!(m.nvars(), ring.nvars(), "monomial length does not match ring");
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Builds a polynomial from arbitrary terms: sorts, merges duplicates, drops zeros.
    pub fn from_terms(ring: &RingRef, mut terms: Vec<(Monomial, Coeff)>) -> Self {
        let ord = *ring.order();
        terms.sort_by(|a, b| ord.cmp_exponents(b.0.exponents(), a.0.exponents()));
        let mut out: Vec<(Monomial, Coeff)> = Vec::with_capacity(terms.len());
        for (m, c) in terms {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => *lc += c,
                _ => {
                    if let Some((_, lc)) = out.last() {
                        if lc.is_zero() {
                            out.pop();
                        }
                    }
                    out.push((m, c));
                }
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Polynomial { ring: ring.clone(), terms: out }
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn terms(&self) -> &[(Monomial, Coeff)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, Coeff)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|(m, _)| m.is_one())
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Coeff)> {
        self.terms.first().map(|(m, c)| (m, c))
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|(m, _)| m.degree()).max()
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms
            .iter()
            .find(|(m, _)| m.is_one())
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Coeff::zero)
    }

    fn check_ring(&self, other: &Polynomial) -> Result<(), PolyError> {
        if same_ring(&self.ring, &other.ring) {
            Ok(())
        } else {
            Err(PolyError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        Ok(self.merge(other, true))
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        self.check_ring(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                terms.push((ma.mul(mb), ca * cb));
            }
        }
        Ok(Polynomial::from_terms(&self.ring, terms))
    }

    fn merge(&self, other: &Polynomial, subtract: bool) -> Polynomial {
        let ord = *self.ring.order();
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let take = if i == self.terms.len() {
                Ordering::Less
            } else if j == other.terms.len() {
                Ordering::Greater
            } else {
                ord.cmp_exponents(self.terms[i].0.exponents(), other.terms[j].0.exponents())
            };
            match take {
                Ordering::Greater => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    let (m, c) = &other.terms[j];
                    out.push((m.clone(), if subtract { -c } else { c.clone() }));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = if subtract {
                        &self.terms[i].1 - &other.terms[j].1
                    } else {
                        &self.terms[i].1 + &other.terms[j].1
                    };
                    if !c.is_zero() {
                        out.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: out,
        }
    }

    pub fn scale(&self, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    /// Multiplication by `c * m`; order is preserved since monomial orders are multiplicative.
    pub fn mul_term(&self, m: &Monomial, c: &Coeff) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(a, b)| (a.mul(m), b * c)).collect(),
        }
    }

    /// Exact division by a monomial; `None` if some term is not divisible.
    pub fn div_monomial(&self, m: &Monomial) -> Option<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(a, c)| m.quotient_of(a).map(|q| (q, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::constant(&self.ring, Coeff::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative in variable `var`.
    pub fn derivative(&self, var: usize) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exponents()[var] > 0)
            .map(|(m, c)| {
                let mut e = m.exponents().to_vec();
                let k = e[var];
                e[var] -= 1;
                (Monomial::new(e), c * Coeff::from_integer(BigInt::from(k)))
            })
            .collect();
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Re-sorts the terms for a ring with the same variables; fails if they differ.
    pub fn reorder(&self, ring: &RingRef) -> Result<Polynomial, PolyError> {
        if ring.vars != self.ring.vars {
            return Err(PolyError::RingMismatch);
        }
        Ok(Polynomial::from_terms(ring, self.terms.clone()))
    }

    /// Moves the polynomial into a ring with `k` extra leading variables.
    pub fn extend_front(&self, ring: &RingRef, k: usize) -> Polynomial {
        debug_assert_eq!(ring.nvars(), self.ring.nvars() + k);
        Polynomial::from_terms(
            ring,
            self.terms.iter().map(|(m, c)| (m.extend_front(k), c.clone())).collect(),
        )
    }

    /// Inverse of `extend_front`; `None` if a leading variable occurs.
    pub fn strip_front(&self, ring: &RingRef, k: usize) -> Option<Polynomial> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| m.strip_front(k).map(|m| (m, c.clone())))
            .collect::<Option<Vec<_>>>()?;
        Some(Polynomial::from_terms(ring, terms))
    }

    pub fn eval(&self, point: &[Coeff]) -> Coeff {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = Complex64::new(coeff_to_f64(c), 0.0);
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t *= x.powu(e);
                }
            }
            acc += t;
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Polynomial {
        match self.leading_term() {
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
            None => self.clone(),
        }
    }
}

pub fn coeff_to_f64(c: &Coeff) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::NAN);
        let d = c.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn coeff_from_i64(c: i64) -> Coeff {
    Coeff::from_integer(BigInt::from(c))
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomials from different rings")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomials from different rings")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomials from different rings")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -&self
    }
}

fn write_coeff_abs(f: &mut fmt::Formatter<'_>, c: &Coeff) -> fmt::Result {
    let a = c.abs();
    if a.is_integer() {
        write!(f, "{}", a.numer())
    } else {
        write!(f, "{}/{}", a.numer(), a.denom())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let unit = c.abs().is_one();
            let mut wrote = false;
            if !unit || m.is_one() {
                write_coeff_abs(f, c)?;
                wrote = true;
            }
            for (v, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.ring.vars[v])?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> RingRef {
        Ring::new(&["x", "y"], MonomialOrder::grevlex())
    }

    #[test]
    fn cancellation_and_identity() {
        let r = ring();
        let x = r.var(0);
        let y = r.var(1);
        let s = &(&x + &y) + &(&x - &y);
        assert_eq!(s, x.scale(&coeff_from_i64(2)));
        assert_eq!(&x + &r.zero(), x);
        let x2 = x.pow(2);
        assert!((&x2 + &(-&x2)).is_zero());
    }

    #[test]
    fn products() {
        let r = ring();
        let x = r.var(0);
        let y = r.var(1);
        assert_eq!(&(&x + &y) * &(&x - &y), &x.pow(2) - &y.pow(2));
        assert_eq!(&x * &r.one(), x);
        let one = r.one();
        assert_eq!((&x + &one).pow(2), r.parse("x^2 + 2*x + 1").unwrap());
    }

    #[test]
    fn ring_mismatch() {
        let a = ring().var(0);
        let b = Ring::new(&["u", "v"], MonomialOrder::grevlex()).var(0);
        assert!(matches!(a.checked_add(&b), Err(PolyError::RingMismatch)));
        assert!(a.checked_mul(&b).is_err());
    }

    #[test]
    fn display_round_trip() {
        let r = Ring::indexed(3, MonomialOrder::grevlex());
        let p = r.parse("3/2*x1^2*x2 - x3 + 1").unwrap();
        assert_eq!(p.to_string(), "3/2*x1^2*x2 - x3 + 1");
        assert_eq!(r.parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn derivative_and_eval() {
        let r = ring();
        let p = r.parse("x^3*y - 2*y + 5").unwrap();
        assert_eq!(p.derivative(0), r.parse("3*x^2*y").unwrap());
        let v = p.eval(&[coeff_from_i64(2), coeff_from_i64(1)]);
        assert_eq!(v, coeff_from_i64(11));
        let z = p.eval_complex(&[Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!((z - Complex64::new(11.0, 0.0)).norm() < 1e-12);
    }
}
