//! Dense matrices over a single exact field.

use std::fmt;

use crate::error::AlgebraError;
use crate::field::{Field, FieldElem};
use crate::subspace::Subspace;

/// Column vector.
pub type Vector = Vec<FieldElem>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    entries: Vec<FieldElem>, // row-major
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            field,
            entries: vec![FieldElem::zero(field); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        Self::scalar(&FieldElem::one(field), n)
    }

    pub fn scalar(c: &FieldElem, n: usize) -> Self {
        let mut m = Self::zeros(c.field(), n, n);
        for i in 0..n {
            m.entries[i * n + i] = c.clone();
        }
        m
    }

    pub fn from_fn(
        field: Field,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> FieldElem,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let e = f(i, j);
                assert_eq!(e.field(), field, "entry field differs from matrix field");
                entries.push(e);
            }
        }
        Self { rows, cols, field, entries }
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<FieldElem>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(r * c);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != c {
                return Err(AlgebraError::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {c}",
                    row.len()
                )));
            }
            for e in row {
                if e.field() != field {
                    return Err(AlgebraError::FieldMismatch {
                        left: field,
                        right: e.field(),
                    });
                }
                entries.push(e);
            }
        }
        Ok(Self { rows: r, cols: c, field, entries })
    }

    /// Integer literal matrix, mapped into `field`.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Self {
        let c = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == c), "ragged integer matrix");
        Self::from_fn(field, rows.len(), c, |i, j| FieldElem::from_i64(field, rows[i][j]))
    }

    pub fn from_entries(
        field: Field,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElem>,
    ) -> Result<Self, AlgebraError> {
        if entries.len() != rows * cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if let Some(e) = entries.iter().find(|e| e.field() != field) {
            return Err(AlgebraError::FieldMismatch {
                left: field,
                right: e.field(),
            });
        }
        Ok(Self { rows, cols, field, entries })
    }

    /// Standard matrix unit E_ij (0-based indices).
    pub fn unit(field: Field, n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        m.entries[i * n + j] = FieldElem::one(field);
        m
    }

    pub fn diag(entries: &[FieldElem]) -> Self {
        let field = entries.first().expect("empty diagonal").field();
        let n = entries.len();
        Self::from_fn(field, n, n, |i, j| {
            if i == j {
                entries[i].clone()
            } else {
                FieldElem::zero(field)
            }
        })
    }

    /// The rank-one operator x⊗f : y ↦ f(y)·x.
    pub fn outer(x: &[FieldElem], f: &[FieldElem]) -> Self {
        let field = x.first().expect("empty vector").field();
        Self::from_fn(field, x.len(), f.len(), |i, j| &x[i] * &f[j])
    }

    pub fn from_columns(field: Field, rows: usize, columns: &[Vector]) -> Self {
        Self::from_fn(field, rows, columns.len(), |i, j| columns[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElem {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElem) {
        assert_eq!(v.field(), self.field, "entry field differs from matrix field");
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vector {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn require_square(&self) -> Result<usize, AlgebraError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(AlgebraError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    fn require_field(&self, other: &Matrix) -> Result<(), AlgebraError> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: other.field,
            })
        }
    }

    fn require_same_shape(&self, other: &Matrix) -> Result<(), AlgebraError> {
        self.require_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.require_field(other)?;
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let zero = FieldElem::zero(self.field);
        let mut out = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = zero.clone();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = &acc + &(a * b);
                }
                out.push(acc);
            }
        }
        Ok(Matrix {
            rows: self.rows,
            cols: other.cols,
            field: self.field,
            entries: out,
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.require_same_shape(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&FieldElem, &FieldElem) -> FieldElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Result<Matrix, AlgebraError> {
        if c.field() != self.field {
            return Err(AlgebraError::FieldMismatch {
                left: self.field,
                right: c.field(),
            });
        }
        Ok(self.map(|e| e * c))
    }

    /// Entrywise map; `f` must stay inside the field.
    pub fn map(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// c·I + self
    pub fn shift(&self, c: &FieldElem) -> Result<Matrix, AlgebraError> {
        let n = self.require_square()?;
        self.add(&Matrix::scalar(c, n))
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn pow(&self, k: u32) -> Result<Matrix, AlgebraError> {
        let n = self.require_square()?;
        let mut acc = Matrix::identity(self.field, n);
        for _ in 0..k {
            acc = acc.mat_mul(self)?;
        }
        Ok(acc)
    }

    pub fn trace(&self) -> Result<FieldElem, AlgebraError> {
        let n = self.require_square()?;
        Ok((0..n).fold(FieldElem::zero(self.field), |acc, i| &acc + self.get(i, i)))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElem::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.as_scalar().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the matrix equals c·I.
    pub fn as_scalar(&self) -> Option<FieldElem> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let c = self.get(0, 0).clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let e = self.get(i, j);
                let ok = if i == j { *e == c } else { e.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn apply(&self, v: &[FieldElem]) -> Result<Vector, AlgebraError> {
        if v.len() != self.cols {
            return Err(AlgebraError::DimensionMismatch(format!(
                "vector of length {} for a {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| dot(&self.entries[i * self.cols..(i + 1) * self.cols], v))
            .collect())
    }

    /// Block diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        self.require_field(other)?;
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        Ok(Matrix::from_fn(self.field, r, c, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.get(i - self.rows, j - self.cols).clone()
            } else {
                FieldElem::zero(self.field)
            }
        }))
    }

    /// `self ⊕ 0` padded to n×n.
    pub fn pad_to(&self, n: usize) -> Result<Matrix, AlgebraError> {
        let sq = self.require_square()?;
        if sq > n {
            return Err(AlgebraError::DimensionMismatch(format!(
                "cannot pad a {sq}x{sq} block into {n}x{n}"
            )));
        }
        self.direct_sum(&Matrix::zeros(self.field, n - sq, n - sq))
    }

    /// Flattened row-major entries as one long column vector.
    pub fn vectorize(&self) -> Vector {
        self.entries.clone()
    }

    /// Reduced row echelon form and pivot columns. Pivoting takes the first
    /// nonzero entry of each column; there are no tolerances.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inverse().expect("pivot is nonzero");
            for j in col..m.cols {
                let v = m.get(row, j) * &inv;
                m.entries[row * m.cols + j] = v;
            }
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for j in col..m.cols {
                    let v = m.get(r, j) - &(&factor * m.get(row, j));
                    m.entries[r * m.cols + j] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Null space in canonical form; its dimension is `cols − rank`.
    pub fn kernel(&self) -> Subspace {
        Subspace::from_spanning(self.field, self.cols, self.kernel_basis())
    }

    /// One basis vector per free column of the RREF, with that free
    /// variable set to 1 and the other free variables to 0.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let zero = FieldElem::zero(self.field);
        let one = FieldElem::one(self.field);
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![zero.clone(); self.cols];
            v[free] = one.clone();
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.get(i, free);
            }
            basis.push(v);
        }
        basis
    }

    /// Column space in canonical form.
    pub fn image(&self) -> Subspace {
        Subspace::from_spanning(
            self.field,
            self.rows,
            (0..self.cols).map(|j| self.column(j)).collect(),
        )
    }

    pub fn inverse(&self) -> Result<Matrix, AlgebraError> {
        let n = self.require_square()?;
        let mut wide = Matrix::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                wide.entries[i * 2 * n + j] = self.get(i, j).clone();
            }
            wide.entries[i * 2 * n + n + i] = FieldElem::one(self.field);
        }
        let (r, pivots) = wide.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(AlgebraError::NotInvertible);
        }
        Ok(Matrix::from_fn(self.field, n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// A solution of `self · x = rhs`, with every free variable set to 0;
    /// `None` if the system is inconsistent.
    pub fn solve(&self, rhs: &[FieldElem]) -> Result<Option<Vector>, AlgebraError> {
        if rhs.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch(format!(
                "right-hand side of length {} for {} equations",
                rhs.len(),
                self.rows
            )));
        }
        let mut aug = Matrix::zeros(self.field, self.rows, self.cols + 1);
        for (i, b) in rhs.iter().enumerate() {
            for j in 0..self.cols {
                aug.entries[i * (self.cols + 1) + j] = self.get(i, j).clone();
            }
            aug.entries[i * (self.cols + 1) + self.cols] = b.clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![FieldElem::zero(self.field); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// `s · self · s⁻¹`, given both `s` and its inverse.
    pub fn conjugate(&self, s: &Matrix, s_inv: &Matrix) -> Result<Matrix, AlgebraError> {
        s.mat_mul(self)?.mat_mul(s_inv)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[FieldElem], b: &[FieldElem]) -> FieldElem {
    let field = a.first().or(b.first()).expect("empty dot product").field();
    a.iter()
        .zip(b)
        .fold(FieldElem::zero(field), |acc, (x, y)| &acc + &(x * y))
}

/// Standard basis vector e_i of length n.
pub fn basis_vector(field: Field, n: usize, i: usize) -> Vector {
    (0..n)
        .map(|k| {
            if k == i {
                FieldElem::one(field)
            } else {
                FieldElem::zero(field)
            }
        })
        .collect()
}

pub fn scale_vector(v: &[FieldElem], c: &FieldElem) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn add_vectors(a: &[FieldElem], b: &[FieldElem]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Rank of the matrix whose columns are `vectors`.
pub fn span_dim(field: Field, n: usize, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    Matrix::from_columns(field, n, vectors).rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(n: i64) -> FieldElem {
        FieldElem::from_i64(Q, n)
    }

    #[test]
    fn identity_is_neutral() {
        let m = Matrix::from_i64(Q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(Matrix::identity(Q, 3).mat_mul(&m).unwrap(), m);
        assert_eq!(m.mat_mul(&Matrix::identity(Q, 3)).unwrap(), m);
    }

    #[test]
    fn square_zero_unit() {
        let e21 = Matrix::unit(Q, 3, 1, 0);
        assert!(e21.mat_mul(&e21).unwrap().is_zero());
    }

    #[test]
    fn shape_and_field_errors() {
        let a = Matrix::zeros(Q, 2, 3);
        assert!(matches!(
            a.mat_mul(&a),
            Err(AlgebraError::DimensionMismatch(_))
        ));
        let b = Matrix::zeros(Field::Prime(2), 3, 2);
        assert!(matches!(
            a.mat_mul(&b),
            Err(AlgebraError::FieldMismatch { .. })
        ));
        assert!(matches!(
            a.inverse(),
            Err(AlgebraError::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn rank_kernel_image() {
        assert_eq!(Matrix::zeros(Q, 3, 3).rank(), 0);
        assert_eq!(Matrix::zeros(Q, 3, 3).kernel().dim(), 3);
        assert_eq!(Matrix::identity(Q, 3).kernel().dim(), 0);
        assert_eq!(Matrix::identity(Q, 3).image().dim(), 3);
        let x = vec![q(1), q(-2), q(3)];
        let f = vec![q(2), q(0), q(5)];
        let r1 = Matrix::outer(&x, &f);
        assert_eq!(r1.rank(), 1);
        assert_eq!(r1.image(), Subspace::from_spanning(Q, 3, vec![x]));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(Q, &[&[2, 1, 0], &[1, 1, 0], &[0, 3, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mat_mul(&inv).unwrap().is_identity());
        let singular = Matrix::from_i64(Q, &[&[1, 2], &[2, 4]]);
        assert_eq!(singular.inverse(), Err(AlgebraError::NotInvertible));
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let m = Matrix::from_i64(Q, &[&[1, 1, 1]]);
        assert_eq!(m.solve(&[q(5)]).unwrap(), Some(vec![q(5), q(0), q(0)]));
        let m = Matrix::from_i64(Q, &[&[1, 0], &[1, 0]]);
        assert_eq!(m.solve(&[q(1), q(2)]).unwrap(), None);
    }

    #[test]
    fn direct_sum_and_padding() {
        let a = Matrix::from_i64(Q, &[&[1, 2], &[3, 4]]);
        let p = a.pad_to(4).unwrap();
        assert_eq!(p.rows(), 4);
        assert_eq!(p.rank(), 2);
        assert_eq!(p.get(1, 0), &q(3));
        assert!(p.get(3, 3).is_zero());
    }

    #[test]
    fn gf2_arithmetic() {
        let f = Field::Prime(2);
        let m = Matrix::from_i64(f, &[&[1, 1], &[0, 1]]);
        assert!(m.mat_mul(&m).unwrap().is_identity());
        assert_eq!(m.inverse().unwrap(), m);
    }
}
