//! Seeded random matrices and fixed probe sets.
//!
//! Dense random rational matrices are almost always cyclic, so the
//! structured sampler mixes in the low-degree families the case analyses
//! branch on, each hidden behind a random change of basis.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::field::{Field, FieldElem};
use crate::matrix::Matrix;

/// 0, I, every E_ij, every E_ij + E_kl with (i, j) < (k, l).
pub fn probe_matrices(field: Field, n: usize) -> Vec<Matrix> {
    let mut out = vec![Matrix::zeros(field, n, n), Matrix::identity(field, n)];
    let units: Vec<Matrix> = (0..n * n).map(|p| Matrix::unit(field, n, p / n, p % n)).collect();
    out.extend(units.iter().cloned());
    for i in 0..units.len() {
        for j in i + 1..units.len() {
            out.push(units[i].add(&units[j]).expect("same shape"));
        }
    }
    out
}

pub fn random_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> FieldElem {
    match field.order() {
        Some(q) => field.element(rng.gen_range(0..q)),
        None => {
            let num = rng.gen_range(-4..=4);
            let den = *[1, 1, 1, 2, 3].choose(rng).expect("nonempty");
            FieldElem::from_ratio(field, num, den).expect("nonzero denominator")
        }
    }
}

pub fn random_nonzero_scalar<R: Rng + ?Sized>(field: Field, rng: &mut R) -> FieldElem {
    loop {
        let c = random_scalar(field, rng);
        if !c.is_zero() {
            return c;
        }
    }
}

/// Independent entries.
pub fn random_dense<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(field, n, n, |_, _| random_scalar(field, rng))
}

/// A product of a permutation, a nonzero diagonal and row additions;
/// invertible by construction.
pub fn random_invertible<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut m = Matrix::from_fn(field, n, n, |i, j| {
        if perm[i] == j {
            FieldElem::one(field)
        } else {
            FieldElem::zero(field)
        }
    });
    for i in 0..n {
        let d = random_nonzero_scalar(field, rng);
        for j in 0..n {
            let v = m.get(i, j) * &d;
            m.set(i, j, v);
        }
    }
    if n > 1 {
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let k = (i + rng.gen_range(1..n)) % n;
            let c = random_scalar(field, rng);
            for j in 0..n {
                let v = m.get(i, j) + &(&c * m.get(k, j));
                m.set(i, j, v);
            }
        }
    }
    m
}

fn conjugated<R: Rng + ?Sized>(m: Matrix, rng: &mut R) -> Matrix {
    let n = m.rows();
    let s = random_invertible(m.field(), n, rng);
    let s_inv = s.inverse().expect("invertible by construction");
    m.conjugate(&s, &s_inv).expect("square")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Dense,
    LowRank,
    Scalar,
    RankOneNilpotent,
    RankOne,
    IdempotentMultiple,
    SquareZero,
    JordanQuadratic,
    SplitQuadratic,
    IrreducibleQuadratic,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::Dense,
        Family::LowRank,
        Family::Scalar,
        Family::RankOneNilpotent,
        Family::RankOne,
        Family::IdempotentMultiple,
        Family::SquareZero,
        Family::JordanQuadratic,
        Family::SplitQuadratic,
        Family::IrreducibleQuadratic,
    ];

    /// Families whose members have algebraic degree two and rank at least
    /// two (given a large enough n).
    pub const DEGREE_TWO: [Family; 5] = [
        Family::IdempotentMultiple,
        Family::SquareZero,
        Family::JordanQuadratic,
        Family::SplitQuadratic,
        Family::IrreducibleQuadratic,
    ];
}

/// A member of `family` in a random basis. Families that do not fit in
/// dimension n fall back to a dense matrix.
pub fn sample_family<R: Rng + ?Sized>(family: Family, field: Field, n: usize, rng: &mut R) -> Matrix {
    let one = FieldElem::one(field);
    let zero = FieldElem::zero(field);
    let nz = |rng: &mut R| random_nonzero_scalar(field, rng);
    let core = match family {
        Family::Dense => return random_dense(field, n, rng),
        Family::LowRank => {
            let r = rng.gen_range(0..n.max(1));
            let left = Matrix::from_fn(field, n, r, |_, _| random_scalar(field, rng));
            let right = Matrix::from_fn(field, r, n, |_, _| random_scalar(field, rng));
            if r == 0 {
                Matrix::zeros(field, n, n)
            } else {
                left.mat_mul(&right).expect("shapes agree")
            }
        }
        Family::Scalar => Matrix::scalar(&nz(rng), n),
        Family::RankOneNilpotent if n >= 2 => Matrix::unit(field, n, 0, 1).scale(&nz(rng)).expect("square"),
        Family::RankOne => Matrix::unit(field, n, 0, 0).scale(&nz(rng)).expect("square"),
        Family::IdempotentMultiple if n >= 3 => {
            let r = rng.gen_range(2..n);
            let alpha = nz(rng);
            Matrix::diag(&(0..n).map(|i| if i < r { alpha.clone() } else { zero.clone() }).collect::<Vec<_>>())
        }
        Family::SquareZero if n >= 4 => {
            let pairs = rng.gen_range(2..=n / 2);
            let mut m = Matrix::zeros(field, n, n);
            for p in 0..pairs {
                m.set(2 * p + 1, 2 * p, nz(rng));
            }
            m
        }
        Family::JordanQuadratic if n >= 3 => {
            let l0 = nz(rng);
            let mut m = Matrix::scalar(&l0, n);
            m.set(0, 1, l0.clone());
            m
        }
        Family::SplitQuadratic if n >= 3 && field.order() != Some(2) => {
            let l1 = nz(rng);
            let l2 = loop {
                let c = nz(rng);
                if c != l1 {
                    break c;
                }
            };
            let cut = rng.gen_range(1..n);
            Matrix::diag(&(0..n).map(|i| if i < cut { l1.clone() } else { l2.clone() }).collect::<Vec<_>>())
        }
        Family::IrreducibleQuadratic if n >= 4 && n.is_multiple_of(2) && field == Field::Rational => {
            // companion blocks of λ² − 2
            let mut m = Matrix::zeros(field, n, n);
            for p in 0..n / 2 {
                m.set(2 * p, 2 * p + 1, FieldElem::from_i64(field, 2));
                m.set(2 * p + 1, 2 * p, one.clone());
            }
            m
        }
        _ => return random_dense(field, n, rng),
    };
    conjugated(core, rng)
}

/// A family drawn uniformly, then a member of it.
pub fn random_structured<R: Rng + ?Sized>(field: Field, n: usize, rng: &mut R) -> Matrix {
    let family = *Family::ALL.choose(rng).expect("nonempty");
    sample_family(family, field, n, rng)
}
