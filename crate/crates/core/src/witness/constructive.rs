//! Witnesses T refuting the quantified index conditions for a given A.

use serde::Serialize;

use super::lemmas::{m_unipotent, n_t, t_a, t_uv, three_by_three_triple};
use super::{candidate_vectors, extend_to_basis, functional_with_values, operator_from_images, require_rational};
use super::{Side, WitnessError};
use crate::classify::factor_rank_one;
use crate::field::{Field, FieldElem};
use crate::indices::ascent;
use crate::matrix::{span_dim, Matrix, Vector};
use crate::polynomial::minimal_polynomial;

const Q: Field = Field::Rational;

fn q(n: i64) -> FieldElem {
    FieldElem::from_i64(Q, n)
}

/// A matrix T together with the verified index of the product it acts through.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleWitness {
    pub t: Matrix,
    pub side: Side,
    pub index: usize,
    pub case: String,
}

fn failed(case: &str, detail: impl Into<String>) -> WitnessError {
    WitnessError::VerificationFailed {
        case: case.to_string(),
        detail: detail.into(),
    }
}

/// x with x, ax, a²x independent.
fn cyclic_triple(a: &Matrix) -> Result<Option<[Vector; 3]>, WitnessError> {
    let n = a.rows();
    for x in candidate_vectors(Q, n) {
        let ax = a.apply(&x)?;
        let a2x = a.apply(&ax)?;
        let triple = [x, ax, a2x];
        if span_dim(Q, n, &triple) == 3 {
            return Ok(Some(triple));
        }
    }
    Ok(None)
}

fn degree(a: &Matrix) -> Result<usize, WitnessError> {
    Ok(minimal_polynomial(a)?.degree().expect("minimal polynomials are nonzero"))
}

/// T with α(ATA) ≠ 1 or α(TAT) ≠ 1, for A ≠ 0 over ℚ in dimension ≥ 3.
pub fn witness_nonzero(a: &Matrix) -> Result<TripleWitness, WitnessError> {
    let n = require_rational(a)?;
    if a.is_zero() {
        return Err(WitnessError::Precondition("A must be nonzero".into()));
    }
    if n < 3 {
        return Err(WitnessError::Precondition("needs dimension at least 3".into()));
    }
    let (t, side, case) = if degree(a)? >= 3 {
        let [x, ax, a2x] = cyclic_triple(a)?.ok_or_else(|| failed("cyclic", "no cyclic vector among candidates"))?;
        let f = functional_with_values(Q, n, &[ax, a2x], &[q(1), q(0)])?
            .ok_or_else(|| failed("cyclic", "no functional with f(Ax) = 1, f(A²x) = 0"))?;
        (Matrix::outer(&x, &f), Side::Inner, "cyclic".to_string())
    } else if a.as_scalar().is_some() {
        (Matrix::unit(Q, n, 0, 1), Side::Inner, "scalar".to_string())
    } else if let Some(form) = factor_rank_one(a) {
        if form.is_nilpotent() {
            (Matrix::identity(Q, n), Side::Outer, "rank-one nilpotent".to_string())
        } else {
            let y = Matrix::from_rows(Q, vec![form.f.clone()])?.kernel_basis().swap_remove(0);
            let g = Matrix::from_rows(Q, vec![form.x.clone(), y.clone()])?
                .kernel_basis()
                .swap_remove(0);
            let t = Matrix::outer(&form.x, &g).add(&Matrix::outer(&y, &form.f))?;
            (t, Side::Outer, "rank-one".to_string())
        }
    } else {
        let w = witness_degree2(a, None)?;
        (w.n, w.side, format!("degree two: {}", w.case.label()))
    };
    let index = ascent(&side.product(a, &t)?)?;
    if index == 1 {
        return Err(failed(&case, "index of the product is 1"));
    }
    Ok(TripleWitness { t, side, index, case })
}

/// T with α(ATA) ∉ {1, 2} or α(TAT) ∉ {1, 2}, for A ≠ 0 of rank other than
/// one over ℚ.
pub fn witness_rank_gt1(a: &Matrix) -> Result<TripleWitness, WitnessError> {
    let n = require_rational(a)?;
    if a.is_zero() || a.rank() == 1 {
        return Err(WitnessError::Precondition("A must be nonzero with rank other than 1".into()));
    }
    let (t, side, case) = if a.as_scalar().is_some() {
        (a.clone(), Side::Outer, "scalar".to_string())
    } else if degree(a)? >= 3 {
        let [x, ax, a2x] = cyclic_triple(a)?.ok_or_else(|| failed("cyclic", "no cyclic vector among candidates"))?;
        let zero = vec![q(0); n];
        let t = operator_from_images(Q, n, &[x.clone(), ax.clone(), a2x], &[zero, x, ax])?;
        (t, Side::Outer, "cyclic".to_string())
    } else {
        let w = witness_degree2(a, None)?;
        (w.n, w.side, format!("degree two: {}", w.case.label()))
    };
    let index = ascent(&side.product(a, &t)?)?;
    if index == 1 || index == 2 {
        return Err(failed(&case, format!("index of the product is {index}")));
    }
    Ok(TripleWitness { t, side, index, case })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Degree2Case {
    /// A = αP, P idempotent.
    Idempotent,
    /// A = αP and w = −α.
    IdempotentOpposite,
    /// A² = 0.
    SquareZero,
    /// A invertible with a four-dimensional span{x, Ax, y, Ay}.
    FourDimensional,
    /// (λ − λ₀)² minimal polynomial.
    JordanBlock,
    /// (λ − λ₀)² minimal polynomial and w = −λ₀.
    JordanSquareZero,
    /// Two distinct nonzero eigenvalues.
    SplitSpectrum,
    /// Two distinct eigenvalues and w = −λ₁.
    SplitOpposite,
}

impl Degree2Case {
    pub fn label(self) -> &'static str {
        match self {
            Degree2Case::Idempotent => "idempotent",
            Degree2Case::IdempotentOpposite => "idempotent-opposite",
            Degree2Case::SquareZero => "square-zero",
            Degree2Case::FourDimensional => "four-dimensional",
            Degree2Case::JordanBlock => "jordan-block",
            Degree2Case::JordanSquareZero => "jordan-square-zero",
            Degree2Case::SplitSpectrum => "split-spectrum",
            Degree2Case::SplitOpposite => "split-opposite",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Degree2Witness {
    pub n: Matrix,
    pub side: Side,
    pub case: Degree2Case,
    /// Index of the product built from A.
    pub index_a: usize,
    /// Index of the same product built from B = wI + A, when w was given.
    pub index_b: Option<usize>,
}

fn e(i: usize, j: usize) -> Matrix {
    Matrix::unit(Q, 3, i, j)
}

/// For A of algebraic degree two and rank at least two over ℚ.
///
/// Without `w`: N with α(NAN) ∉ {1, 2} or α(ANA) ∉ {1, 2}. With `w`: N of
/// algebraic degree at least three separating A from B = wI + A through the
/// same product. The block witnesses are placed in a basis adapted to A and
/// padded with zeros.
pub fn witness_degree2(a: &Matrix, w: Option<&FieldElem>) -> Result<Degree2Witness, WitnessError> {
    let n = require_rational(a)?;
    let mp = minimal_polynomial(a)?;
    if mp.degree() != Some(2) {
        return Err(WitnessError::Precondition("A must have algebraic degree two".into()));
    }
    if a.rank() < 2 {
        return Err(WitnessError::Precondition("A must have rank at least two".into()));
    }
    if w.is_some_and(|w| w.is_zero() || w.field() != Q) {
        return Err(WitnessError::Precondition("w must be a nonzero rational".into()));
    }
    // A² = αA + βI
    let alpha = -&mp.coefficients()[1];
    let beta = -&mp.coefficients()[0];

    let (basis, block, side, case): (Vec<Vector>, Matrix, Side, Degree2Case) = if beta.is_zero() && !alpha.is_zero() {
        let range = a.image();
        let kernel = a.kernel_basis();
        let mut basis = range.basis()[..2].to_vec();
        basis.push(kernel[0].clone());
        basis.extend_from_slice(&range.basis()[2..]);
        basis.extend_from_slice(&kernel[1..]);
        match w {
            Some(w) if (&alpha + w).is_zero() => {
                (basis, e(0, 1).add(&e(2, 2))?, Side::Inner, Degree2Case::IdempotentOpposite)
            }
            _ => (basis, t_a(&q(0))?, Side::Outer, Degree2Case::Idempotent),
        }
    } else if beta.is_zero() {
        let cands = candidate_vectors(Q, n);
        let x = cands
            .iter()
            .find(|x| a.apply(x).is_ok_and(|v| v.iter().any(|c| !c.is_zero())))
            .cloned()
            .ok_or_else(|| failed("square-zero", "A kills every candidate"))?;
        let ax = a.apply(&x)?;
        let y = cands
            .iter()
            .find(|y| a.apply(y).is_ok_and(|ay| span_dim(Q, n, &[ax.clone(), ay]) == 2))
            .cloned()
            .ok_or_else(|| failed("square-zero", "no second independent image"))?;
        let ay = a.apply(&y)?;
        let basis = extend_to_basis(Q, n, &[x, ax, y, ay]);
        (basis, m_unipotent(Q), Side::Outer, Degree2Case::SquareZero)
    } else {
        let cands = candidate_vectors(Q, n);
        let x = cands
            .iter()
            .find(|x| a.apply(x).is_ok_and(|ax| span_dim(Q, n, &[(*x).clone(), ax]) == 2))
            .cloned()
            .ok_or_else(|| failed("invertible", "every candidate is an eigenvector"))?;
        let ax = a.apply(&x)?;
        let mut best: Option<(usize, Vector)> = None;
        for y in &cands {
            let ay = a.apply(y)?;
            let d = span_dim(Q, n, &[x.clone(), ax.clone(), y.clone(), ay]);
            if best.as_ref().is_none_or(|(bd, _)| d > *bd) {
                best = Some((d, y.clone()));
            }
            if d == 4 {
                break;
            }
        }
        let (dim, y) = best.expect("candidates are nonempty");
        if dim == 4 {
            let ay = a.apply(&y)?;
            let basis = extend_to_basis(Q, n, &[x, ax, y, ay]);
            let w_eff = w.cloned().unwrap_or_else(|| q(1));
            let t0 = (&alpha + &(&q(2) * &w_eff)).neg_ref().checked_div(&(&q(2) * &beta))?;
            (basis, n_t(&t0), Side::Outer, Degree2Case::FourDimensional)
        } else {
            let disc = &(&alpha * &alpha) + &(&q(4) * &beta);
            if disc.is_zero() {
                let l0 = alpha.checked_div(&q(2))?;
                let k = a.shift(&-&l0)?.scale(&l0.inverse()?)?;
                let v = cands
                    .iter()
                    .find(|v| k.apply(v).is_ok_and(|kv| kv.iter().any(|c| !c.is_zero())))
                    .cloned()
                    .ok_or_else(|| failed("jordan-block", "K kills every candidate"))?;
                let kv = k.apply(&v)?;
                let mut basis = vec![kv, v];
                for z in k.kernel_basis() {
                    let mut trial = basis.clone();
                    trial.push(z);
                    if span_dim(Q, n, &trial) == trial.len() {
                        basis = trial;
                    }
                }
                let w_rel = w.map(|w| w.checked_div(&l0)).transpose()?;
                match w_rel {
                    Some(wr) if (&wr + &q(1)).is_zero() => (
                        basis,
                        e(0, 1).add(&e(1, 2))?,
                        Side::Outer,
                        Degree2Case::JordanSquareZero,
                    ),
                    _ => {
                        let v_param = match w_rel {
                            Some(wr) => (&wr + &q(1)).inverse()?,
                            None => q(2),
                        };
                        (basis, t_uv(&q(1), &v_param)?, Side::Inner, Degree2Case::JordanBlock)
                    }
                }
            } else {
                let s = disc
                    .rational_sqrt()
                    .ok_or_else(|| failed("split-spectrum", "eigenvalues are not rational"))?;
                let r1 = (&alpha + &s).checked_div(&q(2))?;
                let r2 = (&alpha - &s).checked_div(&q(2))?;
                let e1 = a.shift(&-&r1)?.kernel_basis();
                let e2 = a.shift(&-&r2)?.kernel_basis();
                let (l1, l2, big, small) = if e1.len() >= 2 { (r1, r2, e1, e2) } else { (r2, r1, e2, e1) };
                if big.len() < 2 || small.is_empty() {
                    return Err(failed("split-spectrum", "eigenspace dimensions"));
                }
                let mut basis = vec![big[0].clone(), big[1].clone(), small[0].clone()];
                basis.extend_from_slice(&big[2..]);
                basis.extend_from_slice(&small[1..]);
                match w {
                    Some(w) if (&l1 + w).is_zero() => {
                        (basis, three_by_three_triple(Q).2, Side::Outer, Degree2Case::SplitOpposite)
                    }
                    _ => (basis, t_a(&l2.checked_div(&l1)?)?, Side::Outer, Degree2Case::SplitSpectrum),
                }
            }
        }
    };

    let label = case.label();
    if basis.len() != n || span_dim(Q, n, &basis) != n {
        return Err(failed(label, "adapted basis is not a basis"));
    }
    let s = Matrix::from_columns(Q, n, &basis);
    let s_inv = s.inverse()?;
    let n_mat = block.pad_to(n)?.conjugate(&s, &s_inv)?;
    let index_a = ascent(&side.product(a, &n_mat)?)?;
    let index_b = match w {
        None => {
            if index_a == 1 || index_a == 2 {
                return Err(failed(label, format!("index {index_a} lies in {{1, 2}}")));
            }
            None
        }
        Some(w) => {
            let b = a.shift(w)?;
            let index_b = ascent(&side.product(&b, &n_mat)?)?;
            if index_a == index_b {
                return Err(failed(label, format!("both products have index {index_a}")));
            }
            if degree(&n_mat)? < 3 {
                return Err(failed(label, "N has algebraic degree below three"));
            }
            Some(index_b)
        }
    };
    Ok(Degree2Witness {
        n: n_mat,
        side,
        case,
        index_a,
        index_b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(xs: &[i64]) -> Matrix {
        Matrix::diag(&xs.iter().map(|&x| q(x)).collect::<Vec<_>>())
    }

    #[test]
    fn nonzero_cases() {
        let w = witness_nonzero(&Matrix::identity(Q, 3)).unwrap();
        assert_eq!((w.index, w.side), (2, Side::Inner));
        let w = witness_nonzero(&Matrix::unit(Q, 3, 0, 1)).unwrap();
        assert_eq!(w.t, Matrix::identity(Q, 3));
        assert_eq!(w.index, 2);
        let w = witness_nonzero(&Matrix::unit(Q, 3, 0, 0)).unwrap();
        assert_eq!((w.index, w.side), (2, Side::Outer));
        let w = witness_nonzero(&Matrix::from_i64(Q, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]])).unwrap();
        assert_eq!(w.case, "cyclic");
        assert!(witness_nonzero(&Matrix::zeros(Q, 3, 3)).is_err());
    }

    #[test]
    fn rank_gt1_cases() {
        let two = Matrix::scalar(&q(2), 3);
        let w = witness_rank_gt1(&two).unwrap();
        assert_eq!((w.index, w.t.clone()), (0, two));
        let shift = Matrix::from_i64(Q, &[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(witness_rank_gt1(&shift).unwrap().index, 3);
        let w = witness_rank_gt1(&diag(&[2, 2, 0])).unwrap();
        assert_eq!(w.index, 3);
        assert!(witness_rank_gt1(&Matrix::unit(Q, 3, 0, 1)).is_err());
    }

    #[test]
    fn degree_two_cases() {
        let w = witness_degree2(&diag(&[3, 3, 0, 0]), None).unwrap();
        assert_eq!((w.case, w.index_a), (Degree2Case::Idempotent, 3));
        let w = witness_degree2(&diag(&[3, 3, 0]), Some(&q(-3))).unwrap();
        assert_eq!(w.case, Degree2Case::IdempotentOpposite);
        assert_eq!((w.index_a, w.index_b), (2, Some(1)));
        let sq0 = Matrix::unit(Q, 4, 1, 0).add(&Matrix::unit(Q, 4, 3, 2)).unwrap();
        let w = witness_degree2(&sq0, Some(&q(1))).unwrap();
        assert_eq!((w.case, w.index_a, w.index_b), (Degree2Case::SquareZero, 3, Some(0)));
        let jordan = Matrix::from_i64(Q, &[&[1, 1, 0], &[0, 1, 0], &[0, 0, 1]]);
        let w = witness_degree2(&jordan, Some(&q(-1))).unwrap();
        assert_eq!((w.case, w.index_a, w.index_b), (Degree2Case::JordanSquareZero, 2, Some(1)));
        let w = witness_degree2(&jordan, Some(&q(2))).unwrap();
        assert_eq!((w.case, w.index_a, w.index_b), (Degree2Case::JordanBlock, 3, Some(2)));
        let w = witness_degree2(&diag(&[1, 1, 2]), Some(&q(-1))).unwrap();
        assert_eq!(w.case, Degree2Case::SplitOpposite);
        let w = witness_degree2(&diag(&[1, 1, 2]), Some(&q(5))).unwrap();
        assert_eq!((w.case, w.index_a, w.index_b), (Degree2Case::SplitSpectrum, 3, Some(2)));
        let w = witness_degree2(&diag(&[1, 1, 2, 2]), None).unwrap();
        assert_eq!((w.case, w.index_a), (Degree2Case::FourDimensional, 3));
    }
}
