//! Jordan triple products and the rank-one predicates built on them.

mod quantified;

pub use quantified::*;

use thiserror::Error;

use crate::error::AlgebraError;
use crate::field::{Field, FieldElem};
use crate::matrix::{dot, Matrix, Vector};
use crate::witness::WitnessError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{kind} over {field} in dimension {dim} is outside the enumeration envelope")]
    OutsideEnvelope { kind: CheckKind, field: Field, dim: usize },
    #[error(transparent)]
    Witness(#[from] WitnessError),
}

/// a·b·a
pub fn jordan_triple(a: &Matrix, b: &Matrix) -> Result<Matrix, AlgebraError> {
    let n = a.require_square()?;
    if b.require_square()? != n {
        return Err(AlgebraError::DimensionMismatch(format!(
            "triple product of {n}x{n} and {}x{} matrices",
            b.rows(),
            b.cols()
        )));
    }
    a.mat_mul(b)?.mat_mul(a)
}

/// x⊗f, the map y ↦ f(y)·x. As a matrix this is the outer product x·fᵀ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankOneForm {
    pub x: Vector,
    pub f: Vector,
}

impl RankOneForm {
    pub fn matrix(&self) -> Matrix {
        Matrix::outer(&self.x, &self.f)
    }

    /// f(x), which is also the trace.
    pub fn pairing(&self) -> FieldElem {
        dot(&self.f, &self.x)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pairing().is_zero()
    }

    pub fn is_idempotent(&self) -> bool {
        self.pairing().is_one()
    }
}

/// x is the first nonzero column and f holds each column's multiple of it.
pub fn factor_rank_one(a: &Matrix) -> Option<RankOneForm> {
    if a.rank() != 1 {
        return None;
    }
    let c = (0..a.cols()).find(|&j| (0..a.rows()).any(|i| !a.get(i, j).is_zero()))?;
    let x = a.column(c);
    let r = x.iter().position(|v| !v.is_zero())?;
    let pivot = x[r].inverse().ok()?;
    let f = (0..a.cols()).map(|j| a.get(r, j) * &pivot).collect();
    Some(RankOneForm { x, f })
}

pub fn is_rank_one_nilpotent(a: &Matrix) -> bool {
    a.is_square() && a.rank() == 1 && a.trace().is_ok_and(|t| t.is_zero())
}

/// Membership in 𝔽*P₁: rank one with nonzero trace. The zero matrix is
/// excluded here and handled by the zero test.
pub fn is_scalar_multiple_of_rank_one_idempotent(a: &Matrix) -> bool {
    a.is_square() && a.rank() == 1 && a.trace().is_ok_and(|t| !t.is_zero())
}

/// The (u, v) with b = uI + v·a, if any. `a` must not be scalar, which makes
/// the pair unique.
pub fn pencil_coefficients(
    a: &Matrix,
    b: &Matrix,
) -> Result<Option<(FieldElem, FieldElem)>, CheckError> {
    let n = a.require_square()?;
    if b.require_square()? != n || a.field() != b.field() {
        return Err(CheckError::Precondition("a and b must share size and field".into()));
    }
    if a.as_scalar().is_some() {
        return Err(CheckError::Precondition("a must not be scalar".into()));
    }
    let field = a.field();
    let system = Matrix::from_columns(
        field,
        n * n,
        &[Matrix::identity(field, n).vectorize(), a.vectorize()],
    );
    Ok(system
        .solve(&b.vectorize())?
        .map(|uv| (uv[0].clone(), uv[1].clone())))
}

/// b ∈ {uI + v·a : v ≠ 0}
pub fn check_pencil_membership(a: &Matrix, b: &Matrix) -> Result<bool, CheckError> {
    Ok(pencil_coefficients(a, b)?.is_some_and(|(_, v)| !v.is_zero()))
}

/// k = c·m for some c ≠ 0, for rank-one nilpotents m and k.
pub fn check_linear_dependence_nilpotents(m: &Matrix, k: &Matrix) -> Result<bool, CheckError> {
    if !is_rank_one_nilpotent(m) || !is_rank_one_nilpotent(k) {
        return Err(CheckError::Precondition(
            "both matrices must be rank-one nilpotents".into(),
        ));
    }
    if m.rows() != k.rows() || m.field() != k.field() {
        return Err(CheckError::Precondition("m and k must share size and field".into()));
    }
    let pair = Matrix::from_columns(m.field(), m.rows() * m.rows(), &[m.vectorize(), k.vectorize()]);
    Ok(pair.rank() == 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::indices::ascent;

    const Q: Field = Field::Rational;

    fn e(i: usize, j: usize) -> Matrix {
        Matrix::unit(Q, 3, i, j)
    }

    #[test]
    fn factorization_reconstructs() {
        let a = Matrix::from_i64(Q, &[&[0, 2, 4], &[0, 1, 2], &[0, -3, -6]]);
        let r = factor_rank_one(&a).unwrap();
        assert_eq!(r.matrix(), a);
        assert_eq!(r.pairing(), FieldElem::from_i64(Q, -5));
        let e12 = factor_rank_one(&e(0, 1)).unwrap();
        assert_eq!(e12.x, crate::matrix::basis_vector(Q, 3, 0));
        assert_eq!(e12.f, crate::matrix::basis_vector(Q, 3, 1));
        assert!(factor_rank_one(&Matrix::zeros(Q, 3, 3)).is_none());
        assert!(factor_rank_one(&Matrix::identity(Q, 3)).is_none());
    }

    #[test]
    fn rank_one_predicates() {
        assert!(is_rank_one_nilpotent(&e(1, 0)));
        assert!(!is_rank_one_nilpotent(&e(0, 0)));
        assert!(is_scalar_multiple_of_rank_one_idempotent(
            &e(0, 0).scale(&FieldElem::from_i64(Q, 5)).unwrap()
        ));
        assert!(!is_scalar_multiple_of_rank_one_idempotent(&e(0, 1)));
        assert!(!is_scalar_multiple_of_rank_one_idempotent(&Matrix::zeros(Q, 3, 3)));
        let d = Matrix::diag(&[FieldElem::one(Q), FieldElem::one(Q), FieldElem::zero(Q)]);
        assert!(!is_scalar_multiple_of_rank_one_idempotent(&d));
    }

    #[test]
    fn triple_with_rank_one_nilpotent_scales() {
        let x = vec![FieldElem::from_i64(Q, 1), FieldElem::from_i64(Q, 2), FieldElem::zero(Q)];
        let g = vec![FieldElem::from_i64(Q, 2), FieldElem::from_i64(Q, -1), FieldElem::from_i64(Q, 3)];
        let n = Matrix::outer(&x, &g);
        let a = Matrix::from_i64(Q, &[&[1, 2, 0], &[0, 1, 5], &[3, 0, 1]]);
        let gax = dot(&g, &a.apply(&x).unwrap());
        assert_eq!(jordan_triple(&n, &a).unwrap(), n.scale(&gax).unwrap());
        assert_eq!(ascent(&jordan_triple(&n, &a).unwrap()).unwrap(), 2);
    }

    #[test]
    fn pencil() {
        let a = Matrix::from_i64(Q, &[&[1, 2, 0], &[0, 1, 5], &[3, 0, 1]]);
        let b = a
            .scale(&FieldElem::from_i64(Q, 2))
            .unwrap()
            .shift(&FieldElem::from_i64(Q, 3))
            .unwrap();
        assert!(check_pencil_membership(&a, &b).unwrap());
        assert!(!check_pencil_membership(&a, &Matrix::identity(Q, 3)).unwrap());
        assert!(!check_pencil_membership(&e(0, 1), &e(0, 2)).unwrap());
        assert!(check_pencil_membership(&Matrix::identity(Q, 3), &a).is_err());
    }

    #[test]
    fn dependence() {
        let m = e(0, 1);
        let two = FieldElem::from_i64(Q, 2);
        assert!(check_linear_dependence_nilpotents(&m, &m.scale(&two).unwrap()).unwrap());
        assert!(!check_linear_dependence_nilpotents(&m, &e(0, 2)).unwrap());
        assert!(check_linear_dependence_nilpotents(&m, &e(0, 0)).is_err());
    }
}
