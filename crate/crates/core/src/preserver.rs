//! Canonical preserver maps and checks of the index identities
//! α(XYX) = α(φX·φY·φX) and δ(XYX) = δ(φX·φY·φX).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::classify::{envelope_allows, jordan_triple, SweepScale};
use crate::enumerate::MatrixSpace;
use crate::error::AlgebraError;
use crate::field::{Field, FieldElem};
use crate::indices::{ascent, descent};
use crate::matrix::Matrix;
use crate::sample::{probe_matrices, random_structured};
use crate::witness::{a0, a_ab, c_matrix, m_unipotent, n_t, t_a, t_uv, three_by_three_triple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PreserverError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("exhaustive pair sweep over {field} in dimension {dim} is outside the enumeration envelope")]
    OutsideEnvelope { field: Field, dim: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Form {
    /// T ↦ λ(T)·A·τ(T)·A⁻¹
    Conjugation,
    /// T ↦ λ(T)·A·τ(T)ᵗʳ·A⁻¹
    TransposeConjugation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Automorphism {
    Identity,
    /// x ↦ xᵖ entrywise; only over GF(p²).
    Frobenius,
}

/// λ(T). `Seeded` hashes the seed and the entries of T into a nonzero scalar,
/// so it is an arbitrary but pure function of the matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalarFn {
    Constant(FieldElem),
    Seeded(u64),
}

impl ScalarFn {
    pub fn eval(&self, t: &Matrix) -> FieldElem {
        match self {
            ScalarFn::Constant(c) => c.clone(),
            ScalarFn::Seeded(seed) => {
                let mut h = Sha256::new();
                h.update(seed.to_le_bytes());
                h.update(t.field().to_string().as_bytes());
                h.update((t.rows() as u64).to_le_bytes());
                for e in t.entries() {
                    h.update(e.to_string().as_bytes());
                    h.update(b",");
                }
                let digest = h.finalize();
                let word = u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"));
                nonzero_from_hash(t.field(), word)
            }
        }
    }
}

fn nonzero_from_hash(field: Field, word: u64) -> FieldElem {
    match field.order() {
        Some(q) => field.element(1 + word % (q - 1)),
        None => {
            let num = (word % 9) as i64 + 1;
            let num = if (word >> 8) & 1 == 1 { -num } else { num };
            let den = ((word >> 16) % 4) as i64 + 1;
            FieldElem::from_ratio(field, num, den).expect("nonzero denominator")
        }
    }
}

/// Anything that maps n×n matrices to n×n matrices.
pub trait MatrixMap: Sync {
    fn field(&self) -> Field;
    fn dim(&self) -> usize;
    fn apply(&self, t: &Matrix) -> Result<Matrix, PreserverError>;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapSpec {
    form: Form,
    conjugator: Matrix,
    conjugator_inv: Matrix,
    automorphism: Automorphism,
    scalar_fn: ScalarFn,
}

impl MapSpec {
    pub fn new(
        form: Form,
        conjugator: Matrix,
        automorphism: Automorphism,
        scalar_fn: ScalarFn,
    ) -> Result<Self, PreserverError> {
        let conjugator_inv = conjugator
            .inverse()
            .map_err(|_| PreserverError::InvalidMap("conjugator is not invertible".into()))?;
        let field = conjugator.field();
        if automorphism == Automorphism::Frobenius && !matches!(field, Field::PrimeSquare(_)) {
            return Err(PreserverError::InvalidMap(format!("no Frobenius automorphism over {field}")));
        }
        if let ScalarFn::Constant(c) = &scalar_fn {
            if c.is_zero() || c.field() != field {
                return Err(PreserverError::InvalidMap("λ must be a nonzero scalar of the map's field".into()));
            }
        }
        Ok(Self {
            form,
            conjugator,
            conjugator_inv,
            automorphism,
            scalar_fn,
        })
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn conjugator(&self) -> &Matrix {
        &self.conjugator
    }

    pub fn automorphism(&self) -> Automorphism {
        self.automorphism
    }

    pub fn scalar_fn(&self) -> &ScalarFn {
        &self.scalar_fn
    }

    pub fn lambda(&self, t: &Matrix) -> FieldElem {
        self.scalar_fn.eval(t)
    }

    /// A·τ(T)·A⁻¹ or A·τ(T)ᵗʳ·A⁻¹, without the scalar.
    pub fn apply_unscaled(&self, t: &Matrix) -> Result<Matrix, PreserverError> {
        self.check_input(t)?;
        let tau = match self.automorphism {
            Automorphism::Identity => t.clone(),
            Automorphism::Frobenius => t.map(FieldElem::frobenius),
        };
        let tau = match self.form {
            Form::Conjugation => tau,
            Form::TransposeConjugation => tau.transpose(),
        };
        Ok(tau.conjugate(&self.conjugator, &self.conjugator_inv)?)
    }

    fn check_input(&self, t: &Matrix) -> Result<(), PreserverError> {
        if t.field() != self.field() || t.rows() != self.dim() || t.cols() != self.dim() {
            return Err(PreserverError::InvalidMap(format!(
                "map acts on {n}x{n} matrices over {}, got {}x{} over {}",
                self.field(),
                t.rows(),
                t.cols(),
                t.field(),
                n = self.dim()
            )));
        }
        Ok(())
    }
}

impl MatrixMap for MapSpec {
    fn field(&self) -> Field {
        self.conjugator.field()
    }

    fn dim(&self) -> usize {
        self.conjugator.rows()
    }

    fn apply(&self, t: &Matrix) -> Result<Matrix, PreserverError> {
        Ok(self.apply_unscaled(t)?.scale(&self.lambda(t))?)
    }
}

pub fn apply_map(spec: &MapSpec, t: &Matrix) -> Result<Matrix, PreserverError> {
    spec.apply(t)
}

/// Ways of breaking a canonical map, used as negative controls.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Perturbation {
    /// φ(T) + uI for every T.
    Shift(FieldElem),
    /// λ ≡ 0.
    ZeroScalar,
    /// Exchanges the images of two matrices.
    Swap(Matrix, Matrix),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PerturbedMap {
    pub base: MapSpec,
    pub perturbation: Perturbation,
}

impl MatrixMap for PerturbedMap {
    fn field(&self) -> Field {
        self.base.field()
    }

    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn apply(&self, t: &Matrix) -> Result<Matrix, PreserverError> {
        match &self.perturbation {
            Perturbation::Shift(u) => Ok(self.base.apply(t)?.shift(u)?),
            Perturbation::ZeroScalar => {
                self.base.check_input(t)?;
                Ok(Matrix::zeros(self.field(), self.dim(), self.dim()))
            }
            Perturbation::Swap(p, q) if t == p => self.base.apply(q),
            Perturbation::Swap(p, q) if t == q => self.base.apply(p),
            Perturbation::Swap(..) => self.base.apply(t),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexKind {
    Ascent,
    Descent,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exhaustive,
    Sampled { seed: u64, pairs: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub pair_index: u64,
    pub x: Matrix,
    pub y: Matrix,
    pub which: IndexKind,
    /// Index of X·Y·X.
    pub lhs: usize,
    /// Index of φ(X)·φ(Y)·φ(X).
    pub rhs: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub pairs_tested: u64,
    pub identity: IndexKind,
    pub mode: Mode,
    pub violations: Vec<Violation>,
}

impl PreservationReport {
    pub fn verified(&self) -> bool {
        self.violations.is_empty()
    }
}

fn compare(
    pair_index: u64,
    x: &Matrix,
    y: &Matrix,
    fx: &Matrix,
    fy: &Matrix,
    which: IndexKind,
) -> Result<Option<Violation>, PreserverError> {
    let lhs = jordan_triple(x, y)?;
    let rhs = jordan_triple(fx, fy)?;
    let checks: &[IndexKind] = match which {
        IndexKind::Ascent => &[IndexKind::Ascent],
        IndexKind::Descent => &[IndexKind::Descent],
        IndexKind::Both => &[IndexKind::Ascent, IndexKind::Descent],
    };
    for &kind in checks {
        let f = if kind == IndexKind::Ascent { ascent } else { descent };
        let (l, r) = (f(&lhs)?, f(&rhs)?);
        if l != r {
            return Ok(Some(Violation {
                pair_index,
                x: x.clone(),
                y: y.clone(),
                which: kind,
                lhs: l,
                rhs: r,
            }));
        }
    }
    Ok(None)
}

/// Compares the index of X·Y·X with that of φ(X)·φ(Y)·φ(X) on every pair
/// of M_n (exhaustive) or on seeded structured samples.
pub fn verify_preservation(
    map: &dyn MatrixMap,
    mode: Mode,
    which: IndexKind,
) -> Result<PreservationReport, PreserverError> {
    let (field, n) = (map.field(), map.dim());
    let results: Vec<Result<Option<Violation>, PreserverError>> = match mode {
        Mode::Exhaustive => {
            if !envelope_allows(field, n, SweepScale::Pair) {
                return Err(PreserverError::OutsideEnvelope { field, dim: n });
            }
            let space = MatrixSpace::new(field, n)?;
            let all: Vec<Matrix> = space.iter().map(|(_, m)| m).collect();
            let images = all
                .par_iter()
                .map(|m| map.apply(m))
                .collect::<Result<Vec<_>, _>>()?;
            let count = all.len() as u64;
            (0..count * count)
                .into_par_iter()
                .map(|p| {
                    let (i, j) = ((p / count) as usize, (p % count) as usize);
                    compare(p, &all[i], &all[j], &images[i], &images[j], which)
                })
                .collect()
        }
        Mode::Sampled { seed, pairs } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples: Vec<(Matrix, Matrix)> = (0..pairs)
                .map(|_| (random_structured(field, n, &mut rng), random_structured(field, n, &mut rng)))
                .collect();
            samples
                .par_iter()
                .enumerate()
                .map(|(p, (x, y))| compare(p as u64, x, y, &map.apply(x)?, &map.apply(y)?, which))
                .collect()
        }
    };
    let pairs_tested = results.len() as u64;
    let mut violations = Vec::new();
    for r in results {
        if let Some(v) = r? {
            violations.push(v);
        }
    }
    Ok(PreservationReport {
        pairs_tested,
        identity: which,
        mode,
        violations,
    })
}

/// Zero, identity, matrix units, sums of two units in a row, and the
/// lemma witnesses that fit the dimension.
pub fn violation_probes(field: Field, n: usize) -> Vec<Matrix> {
    let mut probes = vec![Matrix::zeros(field, n, n), Matrix::identity(field, n)];
    for i in 0..n {
        for j in 0..n {
            probes.push(Matrix::unit(field, n, i, j));
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in j + 1..n {
                probes.push(Matrix::unit(field, n, i, j).add(&Matrix::unit(field, n, i, k)).expect("same shape"));
            }
        }
    }
    let c = |k: i64| FieldElem::from_i64(field, k);
    let mut lemma = Vec::new();
    if n == 3 {
        lemma.push(Ok(c_matrix(&c(2))));
        lemma.push(t_a(&c(2)));
        lemma.push(t_a(&c(0)));
        lemma.push(Ok(a0(&c(1))));
        lemma.push(t_uv(&c(1), &c(2)));
        let (a, b, t) = three_by_three_triple(field);
        lemma.extend([Ok(a), Ok(b), Ok(t)]);
    }
    if n == 4 {
        lemma.push(Ok(a_ab(&c(1), &c(1))));
        lemma.push(Ok(n_t(&c(-1))));
        lemma.push(Ok(m_unipotent(field)));
    }
    probes.extend(lemma.into_iter().flatten());
    let mut seen = std::collections::HashSet::new();
    probes.retain(|m| seen.insert(m.clone()));
    probes
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ViolationSearch {
    pub probes_tried: u64,
    pub violation: Option<Violation>,
}

/// Searches probe pairs in order, then seeded random pairs, for a pair whose
/// ascent or descent the map fails to preserve. Stops after `budget` pairs.
pub fn find_violation(map: &dyn MatrixMap, budget: u64, seed: u64) -> Result<ViolationSearch, PreserverError> {
    let (field, n) = (map.field(), map.dim());
    let probes = violation_probes(field, n);
    let images = probes.iter().map(|p| map.apply(p)).collect::<Result<Vec<_>, _>>()?;
    let len = probes.len() as u64;
    let mut tried = 0;
    while tried < budget && tried < len * len {
        let (i, j) = ((tried / len) as usize, (tried % len) as usize);
        let hit = compare(tried, &probes[i], &probes[j], &images[i], &images[j], IndexKind::Both)?;
        tried += 1;
        if hit.is_some() {
            return Ok(ViolationSearch { probes_tried: tried, violation: hit });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    while tried < budget {
        let x = random_structured(field, n, &mut rng);
        let y = random_structured(field, n, &mut rng);
        let hit = compare(tried, &x, &y, &map.apply(&x)?, &map.apply(&y)?, IndexKind::Both)?;
        tried += 1;
        if hit.is_some() {
            return Ok(ViolationSearch { probes_tried: tried, violation: hit });
        }
    }
    Ok(ViolationSearch {
        probes_tried: tried,
        violation: None,
    })
}

/// The default search budget.
pub const DEFAULT_BUDGET: u64 = 10_000;

/// Probe pairs that a canonical map must respect, for quick self-checks.
pub fn standard_probes(field: Field, n: usize) -> Vec<Matrix> {
    probe_matrices(field, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn q(n: i64) -> FieldElem {
        FieldElem::from_i64(Q, n)
    }

    #[test]
    fn identity_and_transpose_maps() {
        let id = MapSpec::new(Form::Conjugation, Matrix::identity(Q, 3), Automorphism::Identity, ScalarFn::Constant(q(1))).unwrap();
        let m = Matrix::from_i64(Q, &[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(apply_map(&id, &m).unwrap(), m);
        let tr = MapSpec::new(Form::TransposeConjugation, Matrix::identity(Q, 3), Automorphism::Identity, ScalarFn::Constant(q(1))).unwrap();
        assert_eq!(apply_map(&tr, &Matrix::unit(Q, 3, 0, 1)).unwrap(), Matrix::unit(Q, 3, 1, 0));
    }

    #[test]
    fn frobenius_over_gf9() {
        let f = Field::PrimeSquare(3);
        let spec = MapSpec::new(Form::Conjugation, Matrix::identity(f, 2), Automorphism::Frobenius, ScalarFn::Constant(FieldElem::one(f))).unwrap();
        let w = FieldElem::omega(f).unwrap();
        let t = Matrix::unit(f, 2, 0, 0).scale(&w).unwrap();
        assert_eq!(apply_map(&spec, &t).unwrap(), Matrix::unit(f, 2, 0, 0).scale(&w.pow(3)).unwrap());
        assert!(MapSpec::new(Form::Conjugation, Matrix::identity(Q, 2), Automorphism::Frobenius, ScalarFn::Seeded(1)).is_err());
    }

    #[test]
    fn invalid_specs() {
        assert!(MapSpec::new(Form::Conjugation, Matrix::zeros(Q, 2, 2), Automorphism::Identity, ScalarFn::Seeded(0)).is_err());
        assert!(MapSpec::new(Form::Conjugation, Matrix::identity(Q, 2), Automorphism::Identity, ScalarFn::Constant(q(0))).is_err());
    }

    #[test]
    fn seeded_lambda_is_pure_and_nonzero() {
        let l = ScalarFn::Seeded(42);
        let mut values = std::collections::HashSet::new();
        for m in probe_matrices(Q, 2) {
            let v = l.eval(&m);
            assert!(!v.is_zero());
            assert_eq!(v, l.eval(&m));
            values.insert(v);
        }
        assert!(values.len() > 1);
    }

    #[test]
    fn exhaustive_gf2() {
        let f = Field::Prime(2);
        let spec = MapSpec::new(Form::Conjugation, Matrix::from_i64(f, &[&[1, 1], &[0, 1]]), Automorphism::Identity, ScalarFn::Seeded(3)).unwrap();
        let r = verify_preservation(&spec, Mode::Exhaustive, IndexKind::Both).unwrap();
        assert_eq!(r.pairs_tested, 256);
        assert!(r.verified());
    }

    #[test]
    fn shift_is_caught_immediately() {
        let spec = MapSpec::new(Form::Conjugation, Matrix::identity(Q, 3), Automorphism::Identity, ScalarFn::Seeded(5)).unwrap();
        let bad = PerturbedMap { base: spec.clone(), perturbation: Perturbation::Shift(q(1)) };
        let s = find_violation(&bad, DEFAULT_BUDGET, 0).unwrap();
        assert_eq!(s.probes_tried, 1);
        let v = s.violation.unwrap();
        assert_eq!((v.lhs, v.rhs), (1, 0));
        let zero = PerturbedMap { base: spec.clone(), perturbation: Perturbation::ZeroScalar };
        assert!(find_violation(&zero, DEFAULT_BUDGET, 0).unwrap().violation.is_some());
        let p = Matrix::unit(Q, 3, 0, 1);
        let swap = PerturbedMap {
            base: spec,
            perturbation: Perturbation::Swap(p.clone(), p.add(&Matrix::unit(Q, 3, 0, 2)).unwrap()),
        };
        assert!(find_violation(&swap, DEFAULT_BUDGET, 0).unwrap().violation.is_some());
    }
}
