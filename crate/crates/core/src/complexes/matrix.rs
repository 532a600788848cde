use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::poly::{same_ring, FreeModuleElement, Polynomial, RingRef};

use super::ComplexError;

/// Sparse matrix of polynomials; absent entries are zero.
#[derive(Clone, Debug)]
pub struct PolyMatrix {
    ring: RingRef,
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), Polynomial>,
}

impl PartialEq for PolyMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.ring.vars() == other.ring.vars()
            && self.entries == other.entries
    }
}

impl Eq for PolyMatrix {}

impl PolyMatrix {
    pub fn zeros(ring: &RingRef, rows: usize, cols: usize) -> Self {
        PolyMatrix {
            ring: ring.clone(),
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(ring: &RingRef, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds a matrix from dense rows; all rows must have equal length.
    pub fn from_rows(ring: &RingRef, rows: Vec<Vec<Polynomial>>) -> Result<Self, ComplexError> {
        let ncols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(ring, rows.len(), ncols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != ncols {
                return Err(ComplexError::Dimension(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    ncols
                )));
            }
            for (j, p) in row.into_iter().enumerate() {
                m.set(i, j, p);
            }
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(ring: &RingRef, rows: usize, columns: &[FreeModuleElement]) -> Self {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, v) in columns.iter().enumerate() {
            assert_eq!(v.rank(), rows, "column length mismatch");
            for (i, p) in v.components().iter().enumerate() {
                m.set(i, j, p.clone());
            }
        }
        m
    }

    pub fn ring(&self) -> &RingRef {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn set(&mut self, row: usize, col: usize, p: Polynomial) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        if p.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), p);
        }
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<&Polynomial> {
        self.entries.get(&(row, col))
    }

    pub fn get(&self, row: usize, col: usize) -> Polynomial {
        self.entry(row, col)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    /// Nonzero entries in row-major order.
    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, &Polynomial)> {
        self.entries.iter().map(|(&(i, j), p)| (i, j, p))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn column(&self, j: usize) -> FreeModuleElement {
        FreeModuleElement::new((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn columns(&self) -> Vec<FreeModuleElement> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn checked_mul(&self, other: &PolyMatrix) -> Result<PolyMatrix, ComplexError> {
        if self.cols != other.rows {
            return Err(ComplexError::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if !same_ring(&self.ring, &other.ring) {
            return Err(ComplexError::Poly(crate::poly::PolyError::RingMismatch));
        }
        let mut acc: BTreeMap<(usize, usize), Polynomial> = BTreeMap::new();
        for (&(i, k), a) in &self.entries {
            for (&(_, j), b) in other.entries.range((k, 0)..(k + 1, 0)) {
                let prod = a * b;
                acc.entry((i, j))
                    .and_modify(|e| *e = &*e + &prod)
                    .or_insert(prod);
            }
        }
        acc.retain(|_, p| !p.is_zero());
        Ok(PolyMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: other.cols,
            entries: acc,
        })
    }

    pub fn neg(&self) -> PolyMatrix {
        let mut out = self.clone();
        for p in out.entries.values_mut() {
            *p = -&*p;
        }
        out
    }

    /// Kronecker product: block (i, j) is `self[i, j] * other`.
    pub fn kron(&self, other: &PolyMatrix) -> PolyMatrix {
        let mut out = Self::zeros(&self.ring, self.rows * other.rows, self.cols * other.cols);
        for (&(i, j), a) in &self.entries {
            for (&(k, l), b) in &other.entries {
                out.set(i * other.rows + k, j * other.cols + l, a * b);
            }
        }
        out
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = Self::zeros(&self.ring, self.cols, self.rows);
        for (&(i, j), p) in &self.entries {
            out.set(j, i, p.clone());
        }
        out
    }

    /// Moves every entry into another ring with the same variables.
    pub fn reorder(&self, ring: &RingRef) -> Result<PolyMatrix, ComplexError> {
        let mut out = Self::zeros(ring, self.rows, self.cols);
        for (&(i, j), p) in &self.entries {
            out.set(i, j, p.reorder(ring)?);
        }
        Ok(out)
    }

    pub fn derivative(&self, var: usize) -> PolyMatrix {
        let mut out = Self::zeros(&self.ring, self.rows, self.cols);
        for (&(i, j), p) in &self.entries {
            out.set(i, j, p.derivative(var));
        }
        out
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(self.rows, self.cols);
        for (&(i, j), p) in &self.entries {
            m[(i, j)] = p.eval_complex(point);
        }
        m
    }

    pub fn max_degree(&self) -> u32 {
        self.entries
            .values()
            .filter_map(Polynomial::total_degree)
            .max()
            .unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{MonomialOrder, Ring};

    #[test]
    fn multiply_and_kron() {
        let r = Ring::new(&["x", "y"], MonomialOrder::grevlex());
        let p = |s: &str| r.parse(s).unwrap();
        let a = PolyMatrix::from_rows(&r, vec![vec![p("x"), p("y")]]).unwrap();
        let b = PolyMatrix::from_rows(&r, vec![vec![-p("y")], vec![p("x")]]).unwrap();
        assert!(a.checked_mul(&b).unwrap().is_zero());
        assert!(b.checked_mul(&b).is_err());
        let k = a.kron(&b);
        assert_eq!((k.rows(), k.cols()), (2, 2));
        assert_eq!(k.get(0, 0), p("-x*y"));
        assert_eq!(k.get(1, 1), p("x*y"));
    }
}
