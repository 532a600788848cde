//! Exact multivariate polynomials over Q and elements of free modules over them.

mod monomial;
mod order;
mod parse;
mod polynomial;

use std::fmt;

use thiserror::Error;

pub use monomial::Monomial;
pub use order::{ModuleExtension, MonomialOrder, OrderKind, PositionPreference};
pub use parse::parse_rational;
pub use polynomial::{coeff_from_i64, coeff_to_f64, Coeff, Polynomial, Ring, RingRef};

pub(crate) use polynomial::same_ring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("monomial lengths differ ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("free module ranks differ ({left} vs {right})")]
    RankMismatch { left: usize, right: usize },
    #[error("column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// An element of the free module R^rank, stored as its coordinate polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeModuleElement {
    components: Vec<Polynomial>,
}

impl FreeModuleElement {
    /// Panics on an empty component list or components from different rings.
    pub fn new(components: Vec<Polynomial>) -> Self {
        assert!(!components.is_empty(), "free module elements need rank >= 1");
        let ring = components[0].ring().clone();
        assert!(
            components.iter().all(|c| same_ring(c.ring(), &ring)),
            "components from different rings"
        );
        FreeModuleElement { components }
    }

    pub fn zero(ring: &RingRef, rank: usize) -> Self {
        Self::new(vec![ring.zero(); rank])
    }

    /// The standard basis vector e_index scaled by `p`.
    pub fn basis(p: Polynomial, rank: usize, index: usize) -> Self {
        let mut comps = vec![Polynomial::zero(p.ring()); rank];
        comps[index] = p;
        Self::new(comps)
    }

    pub fn scalar(p: Polynomial) -> Self {
        Self::new(vec![p])
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn ring(&self) -> &RingRef {
        self.components[0].ring()
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &Polynomial {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Polynomial::is_zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.components.iter().filter_map(Polynomial::total_degree).max()
    }

    fn check(&self, other: &Self) -> Result<(), PolyError> {
        if self.rank() != other.rank() {
            return Err(PolyError::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        if !same_ring(self.ring(), other.ring()) {
            return Err(PolyError::RingMismatch);
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check(other)?;
        Ok(Self::new(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        ))
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<Self, PolyError> {
        Ok(Self::new(
            self.components
                .iter()
                .map(|c| c.checked_mul(p))
                .collect::<Result<_, _>>()?,
        ))
    }

    /// Parses `[p1, p2, ...]`, or a bare polynomial for rank one.
    pub fn parse(ring: &RingRef, text: &str) -> Result<Self, PolyError> {
        let trimmed = text.trim();
        let lead = text.len() - text.trim_start().len();
        if let Some(inner) = trimmed.strip_prefix('[') {
            let inner = inner.strip_suffix(']').ok_or_else(|| PolyError::Parse {
                column: lead + trimmed.len(),
                message: "expected `]`".into(),
            })?;
            let mut comps = Vec::new();
            let mut offset = lead + 1;
            for piece in inner.split(',') {
                let p = ring.parse(piece).map_err(|e| match e {
                    PolyError::Parse { column, message } => PolyError::Parse {
                        column: column + offset,
                        message,
                    },
                    other => other,
                })?;
                comps.push(p);
                offset += piece.chars().count() + 1;
            }
            Ok(Self::new(comps))
        } else {
            Ok(Self::scalar(ring.parse(text)?))
        }
    }
}

impl fmt::Display for FreeModuleElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_parse_and_display() {
        let r = Ring::new(&["x", "y"], MonomialOrder::grevlex());
        let v = FreeModuleElement::parse(&r, "[x + y, 0, -y^2]").unwrap();
        assert_eq!(v.rank(), 3);
        assert_eq!(v.to_string(), "[x + y, 0, -y^2]");
        assert_eq!(FreeModuleElement::parse(&r, "x").unwrap().rank(), 1);
        match FreeModuleElement::parse(&r, "[x, q]") {
            Err(PolyError::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rank_mismatch() {
        let r = Ring::new(&["x"], MonomialOrder::grevlex());
        let a = FreeModuleElement::zero(&r, 2);
        let b = FreeModuleElement::zero(&r, 3);
        assert!(matches!(a.checked_add(&b), Err(PolyError::RankMismatch { .. })));
    }
}
