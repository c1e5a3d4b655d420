use crate::field::{Field, FieldElem};
use crate::matrix::{Matrix, Vector};

/// A linear subspace of F^n held by a canonical basis: the nonzero rows of
/// the reduced row echelon form of any spanning set. Two subspaces are equal
/// exactly when their canonical bases are.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    field: Field,
    ambient_dim: usize,
    basis: Vec<Vector>,
}

impl Subspace {
    pub fn zero(field: Field, ambient_dim: usize) -> Self {
        Self {
            field,
            ambient_dim,
            basis: Vec::new(),
        }
    }

    pub fn from_spanning(field: Field, ambient_dim: usize, vectors: Vec<Vector>) -> Self {
        if vectors.is_empty() {
            return Self::zero(field, ambient_dim);
        }
        let rows = Matrix::from_rows(field, vectors).expect("spanning vectors share a field and length");
        let (r, pivots) = rows.rref();
        Self {
            field,
            ambient_dim,
            basis: (0..pivots.len()).map(|i| r.row(i)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn contains(&self, v: &[FieldElem]) -> bool {
        let mut vs = self.basis.clone();
        vs.push(v.to_vec());
        Subspace::from_spanning(self.field, self.ambient_dim, vs).dim() == self.dim()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_basis_ignores_spanning_order() {
        let f = Field::Rational;
        let v = |xs: &[i64]| xs.iter().map(|&x| FieldElem::from_i64(f, x)).collect::<Vector>();
        let a = Subspace::from_spanning(f, 3, vec![v(&[1, 2, 0]), v(&[0, 1, 1])]);
        let b = Subspace::from_spanning(f, 3, vec![v(&[1, 3, 1]), v(&[2, 4, 0]), v(&[0, 0, 0])]);
        assert_eq!(a, b);
        assert!(a.contains(&v(&[1, 1, -1])));
        assert!(!a.contains(&v(&[0, 0, 1])));
    }
}
