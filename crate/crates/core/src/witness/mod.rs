//! Explicit witness matrices and the constructions that produce them.
//!
//! Every returned witness has had its claimed indices recomputed; a claim
//! that does not hold is an error, never a silent return.

mod constructive;
mod lemmas;
mod similarity;

pub use constructive::*;
pub use lemmas::*;
pub use similarity::*;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::error::AlgebraError;
use crate::field::{Field, FieldElem};
use crate::matrix::{basis_vector, span_dim, Matrix, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{lemma}: claim {claim:?} does not hold")]
    ClaimFailed { lemma: String, claim: String },
    #[error("case {case}: construction did not verify ({detail})")]
    VerificationFailed { case: String, detail: String },
    #[error("no separating vector found")]
    NoSeparator,
}

/// Which triple product a witness T acts through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// T·A·T
    #[serde(rename = "TAT")]
    Outer,
    /// A·T·A
    #[serde(rename = "ATA")]
    Inner,
}

impl Side {
    pub fn product(self, a: &Matrix, t: &Matrix) -> Result<Matrix, AlgebraError> {
        match self {
            Side::Outer => t.mat_mul(a)?.mat_mul(t),
            Side::Inner => a.mat_mul(t)?.mat_mul(a),
        }
    }
}

pub(crate) fn require_rational(m: &Matrix) -> Result<usize, WitnessError> {
    let n = m.require_square()?;
    if m.field() != Field::Rational {
        return Err(WitnessError::Precondition(format!(
            "constructions run over Q, got {}",
            m.field()
        )));
    }
    Ok(n)
}

/// Deterministic probe vectors: the standard basis, sums of pairs of basis
/// vectors, points on the moment curve, then seeded random vectors.
pub fn candidate_vectors(field: Field, n: usize) -> Vec<Vector> {
    let mut out: Vec<Vector> = (0..n).map(|i| basis_vector(field, n, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(
                (0..n)
                    .map(|k| FieldElem::from_i64(field, (k == i || k == j) as i64))
                    .collect(),
            );
        }
    }
    for t in 1..=(n as i64 + 3) {
        out.push((0..n as u32).map(|k| FieldElem::from_i64(field, t.pow(k))).collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..24 {
        out.push((0..n).map(|_| FieldElem::from_i64(field, rng.gen_range(-9..=9))).collect());
    }
    out
}

/// Appends standard basis vectors to an independent list until it spans.
pub fn extend_to_basis(field: Field, n: usize, vectors: &[Vector]) -> Vec<Vector> {
    let mut basis = vectors.to_vec();
    for i in 0..n {
        if basis.len() == n {
            break;
        }
        let e = basis_vector(field, n, i);
        let mut trial = basis.clone();
        trial.push(e);
        if span_dim(field, n, &trial) == trial.len() {
            basis = trial;
        }
    }
    basis
}

/// The operator sending each `sources[i]` to `images[i]` and a standard
/// completion of the sources to zero. Sources must be independent.
pub fn operator_from_images(
    field: Field,
    n: usize,
    sources: &[Vector],
    images: &[Vector],
) -> Result<Matrix, WitnessError> {
    if span_dim(field, n, sources) != sources.len() {
        return Err(WitnessError::Precondition("source vectors are dependent".into()));
    }
    let basis = extend_to_basis(field, n, sources);
    let mut targets = images.to_vec();
    targets.resize(n, vec![FieldElem::zero(field); n]);
    let s = Matrix::from_columns(field, n, &basis);
    let t = Matrix::from_columns(field, n, &targets);
    Ok(t.mat_mul(&s.inverse()?)?)
}

/// A functional g with g(points[i]) = values[i], if one exists.
pub fn functional_with_values(
    field: Field,
    n: usize,
    points: &[Vector],
    values: &[FieldElem],
) -> Result<Option<Vector>, WitnessError> {
    let rows = Matrix::from_rows(field, points.to_vec())?;
    debug_assert_eq!(rows.cols(), n);
    Ok(rows.solve(values)?)
}
