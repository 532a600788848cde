//! Finite complexes of free modules: Koszul complexes, diamond products and a text format.

mod diamond;
mod koszul;
mod matrix;
pub(crate) mod text;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::poly::{PolyError, RingRef};

pub use diamond::{diamond_product, pad_to_odd, slot_operator, trivial_complex, BlockInfo, DiamondComplex};
pub use koszul::{koszul_complex, subsets_of_size};
pub use matrix::PolyMatrix;
pub use text::{emit_complex, parse_complex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Invalid(String),
}

/// `0 <- E_0 <- E_1 <- ... <- E_N` with `f_k : E_k -> E_{k-1}` stored as `rank E_{k-1} x rank E_k` matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedFreeComplex {
    ring: RingRef,
    ranks: Vec<usize>,
    maps: Vec<PolyMatrix>,
}

/// First place where `f_{k-1} f_k` fails to vanish.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexDefect {
    pub level: usize,
    pub row: usize,
    pub col: usize,
    pub entry: String,
}

impl GradedFreeComplex {
    pub fn new(ring: &RingRef, ranks: Vec<usize>, maps: Vec<PolyMatrix>) -> Result<Self, ComplexError> {
        if ranks.is_empty() || ranks.len() != maps.len() + 1 {
            return Err(ComplexError::Dimension(format!(
                "{} ranks need {} maps, got {}",
                ranks.len(),
                ranks.len().saturating_sub(1),
                maps.len()
            )));
        }
        for (k, m) in maps.iter().enumerate() {
            if m.rows() != ranks[k] || m.cols() != ranks[k + 1] {
                return Err(ComplexError::Dimension(format!(
                    "map {} is {}x{}, expected {}x{}",
                    k + 1,
                    m.rows(),
                    m.cols(),
                    ranks[k],
                    ranks[k + 1]
                )));
            }
            if m.ring().vars() != ring.vars() {
                return Err(ComplexError::Poly(PolyError::RingMismatch));
            }
        }
        Ok(GradedFreeComplex {
            ring: ring.clone(),
            ranks,
            maps,
        })
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, level: usize) -> usize {
        self.ranks.get(level).copied().unwrap_or(0)
    }

    /// Index of the last level.
    pub fn length(&self) -> usize {
        self.maps.len()
    }

    /// `f_level : E_level -> E_{level-1}` for `1 <= level <= length()`.
    pub fn map(&self, level: usize) -> &PolyMatrix {
        &self.maps[level - 1]
    }

    pub fn maps(&self) -> &[PolyMatrix] {
        &self.maps
    }

    /// Checks `f_{k-1} f_k = 0` for every `k`, reporting the first nonzero entry.
    pub fn verify(&self) -> Result<(), ComplexDefect> {
        for k in 2..=self.length() {
            let prod = self
                .map(k - 1)
                .checked_mul(self.map(k))
                .expect("dimensions checked at construction");
            let defect = prod.nonzero().next().map(|(row, col, p)| ComplexDefect {
                level: k,
                row,
                col,
                entry: p.to_string(),
            });
            if let Some(d) = defect {
                return Err(d);
            }
        }
        Ok(())
    }

    pub fn is_complex(&self) -> bool {
        self.verify().is_ok()
    }

    /// All maps evaluated at a complex point.
    pub fn eval_complex(&self, point: &[Complex64]) -> Vec<DMatrix<Complex64>> {
        self.maps.iter().map(|m| m.eval_complex(point)).collect()
    }
}
