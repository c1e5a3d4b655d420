//! Exhaustive enumeration of M_n(GF(q)).
//!
//! Matrices are numbered row-major lexicographically on entry indices: the
//! (0,0) entry is the most significant digit, the (n−1,n−1) entry the least.

use crate::error::AlgebraError;
use crate::field::{Field, FieldElem};
use crate::matrix::Matrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixSpace {
    field: Field,
    n: usize,
    q: u64,
    count: u64,
}

impl MatrixSpace {
    pub fn new(field: Field, n: usize) -> Result<Self, AlgebraError> {
        let q = field
            .order()
            .ok_or_else(|| AlgebraError::InvalidField("cannot enumerate matrices over Q".into()))?;
        let count = q
            .checked_pow((n * n) as u32)
            .ok_or_else(|| AlgebraError::InvalidField(format!("M_{n}({field}) is too large")))?;
        Ok(Self { field, n, q, count })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> u64 {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn matrix(&self, mut index: u64) -> Matrix {
        assert!(index < self.count, "matrix index out of range");
        let cells = self.n * self.n;
        let mut entries = vec![FieldElem::zero(self.field); cells];
        for slot in entries.iter_mut().rev() {
            *slot = self.field.element(index % self.q);
            index /= self.q;
        }
        Matrix::from_entries(self.field, self.n, self.n, entries).expect("well-formed")
    }

    pub fn index_of(&self, m: &Matrix) -> u64 {
        assert_eq!(m.field(), self.field);
        m.entries()
            .iter()
            .fold(0, |acc, e| acc * self.q + e.index().expect("finite field entry"))
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, Matrix)> + '_ {
        (0..self.count).map(move |i| (i, self.matrix(i)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_order() {
        let s = MatrixSpace::new(Field::Prime(2), 2).unwrap();
        assert_eq!(s.len(), 16);
        assert!(s.matrix(0).is_zero());
        assert_eq!(s.matrix(1), Matrix::unit(Field::Prime(2), 2, 1, 1));
        assert_eq!(s.matrix(8), Matrix::unit(Field::Prime(2), 2, 0, 0));
        for (i, m) in s.iter() {
            assert_eq!(s.index_of(&m), i);
        }
        assert_eq!(MatrixSpace::new(Field::Prime(3), 3).unwrap().len(), 19683);
        assert!(MatrixSpace::new(Field::Rational, 2).is_err());
    }
}
