//! Separators for the pencil and the relation on rank-one nilpotents.
//!
//! Two rank-one nilpotents are related when they share their range or
//! share their kernel.

use super::{candidate_vectors, functional_with_values, operator_from_images, require_rational, WitnessError};
use crate::classify::{
    check_linear_dependence_nilpotents, factor_rank_one, is_rank_one_nilpotent, jordan_triple, CheckError,
    RankOneForm,
};
use crate::field::{Field, FieldElem};
use crate::matrix::{basis_vector, span_dim, Matrix};
use crate::sample::probe_matrices;

const Q: Field = Field::Rational;

fn nilpotent_form(m: &Matrix, name: &str) -> Result<RankOneForm, WitnessError> {
    if !is_rank_one_nilpotent(m) {
        return Err(WitnessError::Precondition(format!("{name} must be a rank-one nilpotent")));
    }
    Ok(factor_rank_one(m).expect("rank one"))
}

fn dependent(m: &Matrix, k: &Matrix) -> Result<bool, WitnessError> {
    check_linear_dependence_nilpotents(m, k).map_err(|e| match e {
        CheckError::Algebra(a) => WitnessError::Algebra(a),
        other => WitnessError::Precondition(other.to_string()),
    })
}

fn in_n1(outer: &Matrix, inner: &Matrix) -> Result<bool, WitnessError> {
    Ok(is_rank_one_nilpotent(&jordan_triple(outer, inner)?))
}

fn require_independent_pair(m: &Matrix, k: &Matrix) -> Result<(), WitnessError> {
    nilpotent_form(m, "M")?;
    nilpotent_form(k, "K")?;
    if dependent(m, k)? {
        return Err(WitnessError::Precondition("M and K must be linearly independent".into()));
    }
    Ok(())
}

/// Same range or same kernel, for independent rank-one nilpotents.
pub fn sim_check(m: &Matrix, k: &Matrix) -> Result<bool, WitnessError> {
    require_independent_pair(m, k)?;
    Ok(m.image() == k.image() || m.kernel() == k.kernel())
}

/// (MTM ∉ N₁ ∧ KTK ∉ N₁) ⟹ BTB ∉ N₁ at this T.
pub fn sim_implication_holds(m: &Matrix, k: &Matrix, b: &Matrix, t: &Matrix) -> Result<bool, WitnessError> {
    Ok(in_n1(m, t)? || in_n1(k, t)? || !in_n1(b, t)?)
}

/// B = M + K for related M and K, checked against the implication on the
/// structured probe set.
pub fn sim_witness_b(m: &Matrix, k: &Matrix) -> Result<Matrix, WitnessError> {
    if !sim_check(m, k)? {
        return Err(WitnessError::Precondition("M and K are not related".into()));
    }
    let b = m.add(k)?;
    let fail = |detail: &str| WitnessError::VerificationFailed {
        case: "sum".into(),
        detail: detail.into(),
    };
    if !is_rank_one_nilpotent(&b) {
        return Err(fail("M + K is not a rank-one nilpotent"));
    }
    if dependent(&b, m)? || dependent(&b, k)? {
        return Err(fail("M + K is a multiple of M or K"));
    }
    for t in probe_matrices(m.field(), m.rows()) {
        if !sim_implication_holds(m, k, &b, &t)? {
            return Err(fail(&format!("implication fails at T = {t}")));
        }
    }
    Ok(b)
}

/// T with MTM ∉ N₁, KTK ∉ N₁ and BTB ∈ N₁, for unrelated M = x⊗f,
/// K = y⊗g and a rank-one nilpotent B = z⊗h that is a multiple of neither.
pub fn sim_separator_t(m: &Matrix, k: &Matrix, b: &Matrix) -> Result<Matrix, WitnessError> {
    let n = require_rational(m)?;
    if n < 3 {
        return Err(WitnessError::Precondition("needs dimension at least 3".into()));
    }
    require_independent_pair(m, k)?;
    if sim_check(m, k)? {
        return Err(WitnessError::Precondition("M and K are related".into()));
    }
    let RankOneForm { x, f } = nilpotent_form(m, "M")?;
    let RankOneForm { x: y, f: g } = nilpotent_form(k, "K")?;
    let RankOneForm { x: z, f: h } = nilpotent_form(b, "B")?;
    if dependent(b, m)? || dependent(b, k)? {
        return Err(WitnessError::Precondition("B must not be a multiple of M or K".into()));
    }
    let zero = FieldElem::zero(Q);
    let solve = |rows: [&Vec<FieldElem>; 2], values: [FieldElem; 2], case: &str| {
        functional_with_values(Q, n, &[rows[0].clone(), rows[1].clone()], &values)?.ok_or_else(|| {
            WitnessError::VerificationFailed {
                case: case.into(),
                detail: "prescribed values are inconsistent".into(),
            }
        })
    };
    let (case, t) = if span_dim(Q, n, &[x.clone(), y.clone(), z.clone()]) == 3 {
        let x0 = Matrix::from_rows(Q, vec![f.clone(), g.clone()])?
            .kernel_basis()
            .swap_remove(0);
        let j = h.iter().position(|c| !c.is_zero()).expect("h ≠ 0");
        let z0 = basis_vector(Q, n, j);
        ("independent", operator_from_images(Q, n, &[x.clone(), y.clone(), z.clone()], &[x0.clone(), x0, z0])?)
    } else {
        let bg = Matrix::from_columns(Q, n, &[x.clone(), y.clone()])
            .solve(&z)?
            .expect("z lies in span{x, y}");
        let (beta, gamma) = (&bg[0], &bg[1]);
        if span_dim(Q, n, &[f.clone(), g.clone(), h.clone()]) == 3 {
            let x0 = solve([&f, &h], [zero.clone(), beta.clone()], "h outside span{f, g}")?;
            let y0 = solve([&g, &h], [zero.clone(), gamma.clone()], "h outside span{f, g}")?;
            ("h outside span{f, g}", operator_from_images(Q, n, &[x.clone(), y.clone()], &[x0, y0])?)
        } else {
            let mn = Matrix::from_columns(Q, n, &[f.clone(), g.clone()])
                .solve(&h)?
                .expect("h lies in span{f, g}");
            let (mu, nu) = (&mn[0], &mn[1]);
            let x0 = solve([&f, &g], [zero.clone(), beta * nu], "h inside span{f, g}")?;
            let y0 = solve([&g, &f], [zero.clone(), gamma * mu], "h inside span{f, g}")?;
            ("h inside span{f, g}", operator_from_images(Q, n, &[x.clone(), y.clone()], &[x0, y0])?)
        }
    };
    if in_n1(m, &t)? || in_n1(k, &t)? || !in_n1(b, &t)? {
        return Err(WitnessError::VerificationFailed {
            case: case.into(),
            detail: "separator does not separate".into(),
        });
    }
    Ok(t)
}

/// A rank-one nilpotent N = x⊗g with NAN ∉ N₁ and NBN ∈ N₁, found from a
/// vector x with Bx ∉ span{x, Ax}.
pub fn pencil_separator(a: &Matrix, b: &Matrix) -> Result<Matrix, WitnessError> {
    let n = require_rational(a)?;
    if require_rational(b)? != n {
        return Err(WitnessError::Precondition("A and B must have equal size".into()));
    }
    let zero = FieldElem::zero(Q);
    for x in candidate_vectors(Q, n) {
        let ax = a.apply(&x)?;
        let bx = b.apply(&x)?;
        if span_dim(Q, n, &[x.clone(), ax.clone(), bx.clone()]) == span_dim(Q, n, &[x.clone(), ax.clone()]) {
            continue;
        }
        let g = functional_with_values(Q, n, &[x.clone(), ax, bx], &[zero.clone(), zero.clone(), FieldElem::one(Q)])?
            .expect("bx is independent of x and ax");
        let sep = Matrix::outer(&x, &g);
        if !is_rank_one_nilpotent(&sep) || in_n1(&sep, a)? || !in_n1(&sep, b)? {
            return Err(WitnessError::VerificationFailed {
                case: "pencil".into(),
                detail: "separator does not separate".into(),
            });
        }
        return Ok(sep);
    }
    Err(WitnessError::NoSeparator)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> Matrix {
        Matrix::unit(Q, 3, i, j)
    }

    #[test]
    fn relation() {
        assert!(sim_check(&e(0, 1), &e(0, 2)).unwrap());
        assert!(sim_check(&e(0, 2), &e(1, 2)).unwrap());
        assert!(!sim_check(&e(0, 1), &e(1, 0)).unwrap());
        assert!(sim_check(&e(0, 1), &e(0, 1)).is_err());
    }

    #[test]
    fn sum_witness() {
        let b = sim_witness_b(&e(0, 1), &e(0, 2)).unwrap();
        assert_eq!(b, e(0, 1).add(&e(0, 2)).unwrap());
        sim_witness_b(&e(0, 2), &e(1, 2)).unwrap();
        assert!(sim_witness_b(&e(0, 1), &e(1, 0)).is_err());
    }

    #[test]
    fn separators_in_all_three_cases() {
        let (m, k) = (e(0, 1), e(1, 0));
        sim_separator_t(&m, &k, &e(2, 0)).unwrap();
        // z = x + y, h outside span{f, g}
        let b = Matrix::outer(
            &[FieldElem::from_i64(Q, 1), FieldElem::from_i64(Q, 1), FieldElem::from_i64(Q, 0)],
            &[FieldElem::from_i64(Q, 1), FieldElem::from_i64(Q, -1), FieldElem::from_i64(Q, 1)],
        );
        sim_separator_t(&m, &k, &b).unwrap();
        // z = x + y, h = f − g
        let b = Matrix::outer(
            &[FieldElem::from_i64(Q, 1), FieldElem::from_i64(Q, 1), FieldElem::from_i64(Q, 0)],
            &[FieldElem::from_i64(Q, -1), FieldElem::from_i64(Q, 1), FieldElem::from_i64(Q, 0)],
        );
        sim_separator_t(&m, &k, &b).unwrap();
    }

    #[test]
    fn pencil_separators() {
        let n = pencil_separator(&e(0, 1), &e(0, 2)).unwrap();
        assert!(is_rank_one_nilpotent(&n));
        let a = Matrix::diag(&[FieldElem::from_i64(Q, 1), FieldElem::from_i64(Q, 2), FieldElem::from_i64(Q, 3)]);
        pencil_separator(&a, &e(1, 0)).unwrap();
        let b = a.scale(&FieldElem::from_i64(Q, 3)).unwrap().shift(&FieldElem::from_i64(Q, 2)).unwrap();
        assert_eq!(pencil_separator(&a, &b), Err(WitnessError::NoSeparator));
    }
}
